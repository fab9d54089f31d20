//! Blind interference alignment for the two-user MIMO Z channel with
//! `M1 < N1 < min(M2, N2)`.
//!
//! Transmitter 1 switches antenna modes across `N1` slots while the cross
//! channel `H12` stays fixed. Receiver 1 applies `Q ⊗ I_{N1}` to the stacked
//! observations and transmitter 2 precodes with `P ⊗ I_{M2'}`, where the rows
//! of `Q` and the columns of `P` are disjoint frequencies of an `N1`-point
//! DFT, so `Q·P = 0` and user 2's signal vanishes after nulling. The scheme
//! delivers `M1·N1` streams to user 1 and `M2'·(N1 − M1)` streams to user 2
//! over the `N1` slots.
//!
//! Formulas are 1-indexed in the docs; storage is 0-indexed.

use serde::{Deserialize, Serialize};

use crate::dofregion::AntennaConfig;
use crate::error::{Error, Result};
use crate::matkernel::{kron, numerical_rank, root_of_unity, singular_values, ComplexMatrix, DEFAULT_RANK_TOL};

/// Coefficient `c` of the nulling tolerance `c·(‖H12‖_F + 1)`.
pub const DEFAULT_NULLING_COEFF: f64 = 1e-9;

/// Disagreement allowed between the two routes to `Ṽ` in [`build_v`].
const V_CONSISTENCY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular-value cutoff for numerical rank.
    pub rank_rel: f64,
    /// Scale factor of the nulling tolerance.
    pub nulling_coeff: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_rel: DEFAULT_RANK_TOL,
            nulling_coeff: DEFAULT_NULLING_COEFF,
        }
    }
}

fn check_dims(m1: usize, n1: usize) -> Result<()> {
    if m1 == 0 || m1 >= n1 {
        return Err(Error::Domain(format!("need 1 <= M1 < N1, got M1 = {m1}, N1 = {n1}")));
    }
    Ok(())
}

/// Receiver-1 nulling matrix, `M1 x N1`: `q_mn = exp(-j2π(m-1)(n-1)/N1)`,
/// the first `M1` rows of the `N1`-point DFT.
pub fn build_q(m1: usize, n1: usize) -> Result<ComplexMatrix> {
    check_dims(m1, n1)?;
    Ok(ComplexMatrix::from_fn(m1, n1, |m, n| root_of_unity((m * n) as i64, n1 as u64)))
}

/// Transmitter-2 beamformer, `N1 x (N1 - M1)`: column `m - M1` holds
/// `exp(+j2π(m-1)(n-1)/N1)` for `m = M1+1..N1`.
pub fn build_p(m1: usize, n1: usize) -> Result<ComplexMatrix> {
    check_dims(m1, n1)?;
    Ok(ComplexMatrix::from_fn(n1, n1 - m1, |n, k| {
        root_of_unity(-((n * (k + m1)) as i64), n1 as u64)
    }))
}

/// Deterministic channel for slot `t` (1-based) under which `Ũ` is a
/// Vandermonde matrix with distinct nodes: entry `(r, c)` is
/// `W^{(r-1)((c-1)N1 + t-1)}` with `W = exp(-j2π/N1²)`.
pub fn special_h11(t: usize, m1: usize, n1: usize) -> Result<ComplexMatrix> {
    check_dims(m1, n1)?;
    if !(1..=n1).contains(&t) {
        return Err(Error::Domain(format!("slot {t} outside 1..={n1}")));
    }
    let order = (n1 * n1) as u64;
    Ok(ComplexMatrix::from_fn(n1, m1, |r, c| {
        root_of_unity((r * (c * n1 + t - 1)) as i64, order)
    }))
}

/// All `N1` special slot channels, in slot order.
pub fn special_realizations(m1: usize, n1: usize) -> Result<Vec<ComplexMatrix>> {
    (1..=n1).map(|t| special_h11(t, m1, n1)).collect()
}

/// The nulling/beamforming pair and its time-expanded forms.
#[derive(Clone, Debug)]
pub struct BiaScheme {
    pub cfg: AntennaConfig,
    /// Number of slots the scheme spans (`N1`).
    pub expansion: usize,
    pub q: ComplexMatrix,
    pub p: ComplexMatrix,
    /// `Q ⊗ I_{N1}`.
    pub q_tilde: ComplexMatrix,
    /// `P ⊗ I_{M2'}`.
    pub p_tilde: ComplexMatrix,
}

impl BiaScheme {
    pub fn new(cfg: AntennaConfig) -> Result<Self> {
        cfg.check_scheme_regime()?;
        let (m1, n1, m2e) = (cfg.m1 as usize, cfg.n1 as usize, cfg.m2_eff() as usize);
        let q = build_q(m1, n1)?;
        let p = build_p(m1, n1)?;
        let q_tilde = kron(&q, &ComplexMatrix::identity(n1))?;
        let p_tilde = kron(&p, &ComplexMatrix::identity(m2e))?;
        Ok(Self {
            cfg,
            expansion: n1,
            q,
            p,
            q_tilde,
            p_tilde,
        })
    }

    /// Streams `(user 1, user 2)` carried over the `N1` slots.
    pub fn streams(&self) -> (usize, usize) {
        let (m1, n1, m2e) = (self.cfg.m1 as usize, self.cfg.n1 as usize, self.cfg.m2_eff() as usize);
        (m1 * n1, m2e * (n1 - m1))
    }
}

/// Channels stacked over the `N1` slots of one scheme block.
#[derive(Clone, Debug)]
pub struct TimeExpandedChannels {
    pub h11_slots: Vec<ComplexMatrix>,
    pub h12: ComplexMatrix,
    pub h22: ComplexMatrix,
    /// Block diagonal of the slot channels, `N1² x N1·M1`.
    pub h11_tilde: ComplexMatrix,
    /// `I_{N1} ⊗ H12`: user 2 does not vary across slots.
    pub h12_tilde: ComplexMatrix,
}

fn check_slots(h11_slots: &[ComplexMatrix], m1: usize, n1: usize) -> Result<()> {
    if h11_slots.len() != n1 {
        return Err(Error::Shape(format!("{} slot channels supplied, expected {n1}", h11_slots.len())));
    }
    for (t, h) in h11_slots.iter().enumerate() {
        if h.shape() != (n1, m1) {
            return Err(Error::Shape(format!(
                "slot {} channel is {}x{}, expected {n1}x{m1}",
                t + 1,
                h.rows(),
                h.cols()
            )));
        }
    }
    Ok(())
}

pub fn time_expand(
    cfg: &AntennaConfig,
    h11_slots: &[ComplexMatrix],
    h12: &ComplexMatrix,
    h22: &ComplexMatrix,
) -> Result<TimeExpandedChannels> {
    let (m1, n1, n2, m2e) = (cfg.m1 as usize, cfg.n1 as usize, cfg.n2 as usize, cfg.m2_eff() as usize);
    check_slots(h11_slots, m1, n1)?;
    if h12.shape() != (n1, m2e) {
        return Err(Error::Shape(format!("H12 is {}x{}, expected {n1}x{m2e}", h12.rows(), h12.cols())));
    }
    if h22.shape() != (n2, m2e) {
        return Err(Error::Shape(format!("H22 is {}x{}, expected {n2}x{m2e}", h22.rows(), h22.cols())));
    }
    Ok(TimeExpandedChannels {
        h11_slots: h11_slots.to_vec(),
        h12: h12.clone(),
        h22: h22.clone(),
        h11_tilde: ComplexMatrix::block_diag(h11_slots),
        h12_tilde: kron(&ComplexMatrix::identity(n1), h12)?,
    })
}

/// Effective user-1 channel after nulling, `Ũ = (Q ⊗ I_{N1})·H̃11`, assembled
/// block by block: block `(m, t)` is `q_mt · H11(t)`.
pub fn build_u(q: &ComplexMatrix, h11_slots: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let (m1, n1) = q.shape();
    check_slots(h11_slots, m1, n1)?;
    Ok(ComplexMatrix::from_fn(m1 * n1, n1 * m1, |row, col| {
        let (m, r) = (row / n1, row % n1);
        let (t, c) = (col / m1, col % m1);
        q.get(m, t) * h11_slots[t].get(r, c)
    }))
}

/// Residual interference `Ṽ = (Q·P) ⊗ H12`, cross-checked against the
/// direct product `Q̃·H̃12·P̃`.
pub fn build_v(q: &ComplexMatrix, p: &ComplexMatrix, h12: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n1 = q.cols();
    if p.rows() != n1 {
        return Err(Error::Shape(format!("Q is {}x{} but P has {} rows", q.rows(), n1, p.rows())));
    }
    if h12.rows() != n1 {
        return Err(Error::Shape(format!("H12 has {} rows, expected {n1}", h12.rows())));
    }
    let v = kron(&q.matmul(p)?, h12)?;

    let q_tilde = kron(q, &ComplexMatrix::identity(n1))?;
    let h12_tilde = kron(&ComplexMatrix::identity(n1), h12)?;
    let p_tilde = kron(p, &ComplexMatrix::identity(h12.cols()))?;
    let direct = q_tilde.matmul(&h12_tilde)?.matmul(&p_tilde)?;
    let gap = v.distance(&direct)?;
    let scale = 1.0 + q.frobenius_norm() * p.frobenius_norm() * h12.frobenius_norm();
    if gap > V_CONSISTENCY_TOL * scale {
        return Err(Error::Invariant(format!("(QP)⊗H12 and Q̃H̃12P̃ differ by {gap:e}")));
    }
    Ok(v)
}

/// Ranks and residuals for the three sufficient conditions of the scheme:
/// `Ũ` full rank, `P̃` full column rank and `Ṽ = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub rank_u: usize,
    pub rank_u_required: usize,
    pub rank_p_tilde: usize,
    pub rank_p_required: usize,
    pub v_frobenius: f64,
    pub min_singular_u: f64,
    pub pass: bool,
    pub rank_tol: f64,
    /// Absolute bound applied to `v_frobenius`.
    pub nulling_tol: f64,
}

pub fn verify(
    cfg: &AntennaConfig,
    q: &ComplexMatrix,
    p: &ComplexMatrix,
    h11_slots: &[ComplexMatrix],
    h12: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    cfg.check_scheme_regime()?;
    let (m1, n1, m2e) = (cfg.m1 as usize, cfg.n1 as usize, cfg.m2_eff() as usize);
    if q.shape() != (m1, n1) {
        return Err(Error::Shape(format!("Q is {}x{}, expected {m1}x{n1}", q.rows(), q.cols())));
    }
    if h12.shape() != (n1, m2e) {
        return Err(Error::Shape(format!("H12 is {}x{}, expected {n1}x{m2e}", h12.rows(), h12.cols())));
    }

    let u = build_u(q, h11_slots)?;
    let s = singular_values(&u)?;
    let rank_u = numerical_rank(&u, tol.rank_rel)?;
    let min_singular_u = s.last().copied().unwrap_or(0.0);

    let p_tilde = kron(p, &ComplexMatrix::identity(m2e))?;
    let rank_p_tilde = numerical_rank(&p_tilde, tol.rank_rel)?;
    let rank_p = numerical_rank(p, tol.rank_rel)?;
    if rank_p_tilde != rank_p * m2e {
        return Err(Error::Invariant(format!(
            "rank(P ⊗ I) = {rank_p_tilde} but rank(P)·M2' = {}",
            rank_p * m2e
        )));
    }

    let v_frobenius = build_v(q, p, h12)?.frobenius_norm();
    let nulling_tol = tol.nulling_coeff * (h12.frobenius_norm() + 1.0);

    let rank_u_required = m1 * n1;
    let rank_p_required = m2e * (n1 - m1);
    let pass = rank_u == rank_u_required && rank_p_tilde == rank_p_required && v_frobenius <= nulling_tol;
    Ok(VerificationReport {
        rank_u,
        rank_u_required,
        rank_p_tilde,
        rank_p_required,
        v_frobenius,
        min_singular_u,
        pass,
        rank_tol: tol.rank_rel,
        nulling_tol,
    })
}

/// Column order that turns the leading `M1·N1` principal minor of the
/// `N1²`-point DFT into `Ũ` under the special realizations:
/// `(0, N1, …, (M1-1)N1), (1, N1+1, …), …`, then the unused columns.
pub fn fft_column_permutation(m1: usize, n1: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n1).flat_map(|t| (0..m1).map(move |c| c * n1 + t)).collect();
    let used: std::collections::BTreeSet<usize> = order.iter().copied().collect();
    order.extend((0..n1 * n1).filter(|c| !used.contains(c)));
    order
}

/// Leading `M1·N1` principal minor of the column-permuted `N1²`-point DFT.
pub fn permuted_fft_minor(m1: usize, n1: usize) -> Result<ComplexMatrix> {
    check_dims(m1, n1)?;
    let f = crate::matkernel::dft_matrix(n1 * n1);
    let side = m1 * n1;
    f.select_columns(&fft_column_permutation(m1, n1))?.leading_submatrix(side, side)
}
