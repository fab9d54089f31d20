//! Monte Carlo achievability: i.i.d. Rayleigh channel draws, log-det rates
//! of the alignment scheme, high-SNR slope estimates, and a zero-forcing
//! feasibility check for the `N1 >= N2` regime.
//!
//! Every random quantity comes from a ChaCha stream selected by
//! `(seed, trial)`, so results do not depend on thread scheduling.

use std::io::{self, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::biascheme::{build_u, verify, BiaScheme, Tolerances};
use crate::dofregion::AntennaConfig;
use crate::error::{Error, Result};
use crate::matkernel::{kron, numerical_rank, shannon_logdet, ComplexMatrix, DEFAULT_RANK_TOL};

/// Lowest power accepted by [`estimate_dof`].
pub const MIN_SLOPE_POWER: f64 = 1e3;

/// Stream reserved for [`zf_feasibility`] draws.
const ZF_STREAM: u64 = u64::MAX;

/// One realisation of every channel the scheme touches.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelDraw {
    /// `N1` per-slot channels (`N1 x M1`), one per antenna mode.
    pub h11_slots: Vec<ComplexMatrix>,
    /// `N1 x M2'`, constant across the slots.
    pub h12: ComplexMatrix,
    /// `N2 x M2'`.
    pub h22: ComplexMatrix,
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Unit-variance circularly-symmetric complex Gaussian matrix.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

pub fn sample_channels(cfg: &AntennaConfig, seed: u64, trial: u64) -> ChannelDraw {
    let (m1, n1, n2, m2e) = (cfg.m1 as usize, cfg.n1 as usize, cfg.n2 as usize, cfg.m2_eff() as usize);
    let mut rng = trial_rng(seed, trial);
    let h11_slots = (0..n1).map(|_| complex_gaussian(&mut rng, n1, m1)).collect();
    let h12 = complex_gaussian(&mut rng, n1, m2e);
    let h22 = complex_gaussian(&mut rng, n2, m2e);
    ChannelDraw { h11_slots, h12, h22 }
}

/// Per-slot rate of user 1 after nulling. The post-nulling noise has
/// covariance `Q̃·Q̃ᴴ` and is whitened inside the log-det.
pub fn rate_user1(scheme: &BiaScheme, draw: &ChannelDraw, power: f64) -> Result<f64> {
    let u = build_u(&scheme.q, &draw.h11_slots)?;
    let noise = scheme.q_tilde.matmul(&scheme.q_tilde.adjoint())?;
    let (streams, _) = scheme.streams();
    Ok(shannon_logdet(&u, &noise, power / streams as f64)? / scheme.expansion as f64)
}

/// Per-slot rate of user 2 through `P ⊗ H22`. Receiver 2 sees no
/// interference in the Z channel.
pub fn rate_user2(scheme: &BiaScheme, draw: &ChannelDraw, power: f64) -> Result<f64> {
    rate_user2_with(&scheme.p, &draw.h22, power, scheme.expansion)
}

fn rate_user2_with(p: &ComplexMatrix, h22: &ComplexMatrix, power: f64, expansion: usize) -> Result<f64> {
    let g = kron(p, h22)?;
    if g.cols() == 0 {
        return Ok(0.0);
    }
    let noise = ComplexMatrix::identity(g.rows());
    Ok(shannon_logdet(&g, &noise, power / g.cols() as f64)? / expansion as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    /// Linear transmit power per transmitter.
    pub power: f64,
    pub r1: f64,
    pub r2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DofEstimate {
    pub d1_hat: f64,
    pub d2_hat: f64,
}

/// Least-squares slope of each user's rate against `log2(power)`.
pub fn estimate_dof(points: &[RatePoint]) -> Result<DofEstimate> {
    if points.len() < 2 {
        return Err(Error::Domain(format!("slope needs at least 2 rate points, got {}", points.len())));
    }
    if let Some(p) = points.iter().find(|p| !p.power.is_finite() || p.power < MIN_SLOPE_POWER) {
        return Err(Error::Domain(format!("power {} below the high-SNR floor {MIN_SLOPE_POWER}", p.power)));
    }
    for (i, a) in points.iter().enumerate() {
        if points[i + 1..].iter().any(|b| b.power == a.power) {
            return Err(Error::Domain(format!("power {} appears more than once", a.power)));
        }
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.power.log2()).collect();
    let x_mean = xs.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    let slope = |ys: &dyn Fn(&RatePoint) -> f64| {
        let y_mean = points.iter().map(ys).sum::<f64>() / n;
        xs.iter().zip(points).map(|(x, p)| (x - x_mean) * (ys(p) - y_mean)).sum::<f64>() / sxx
    };
    Ok(DofEstimate {
        d1_hat: slope(&|p| p.r1),
        d2_hat: slope(&|p| p.r2),
    })
}

/// Fraction of `trials` Gaussian draws on which the DFT scheme verifies.
pub fn monte_carlo_rank(cfg: &AntennaConfig, trials: u64, seed: u64, rel_tol: f64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let scheme = BiaScheme::new(*cfg)?;
    let tol = Tolerances {
        rank_rel: rel_tol,
        ..Tolerances::default()
    };
    let passes = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let draw = sample_channels(cfg, seed, trial);
            verify(cfg, &scheme.q, &scheme.p, &draw.h11_slots, &draw.h12, &tol).map(|r| r.pass as u64)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum::<u64>();
    Ok(passes as f64 / trials as f64)
}

/// One CSV row of a rate sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRate {
    pub power_db: f64,
    pub r1_bits: f64,
    pub r2_bits: f64,
    pub trial: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateSweep {
    /// Trial-major, powers in the order given.
    pub rows: Vec<TrialRate>,
    /// Trial-averaged rates, one per power.
    pub points: Vec<RatePoint>,
    pub estimate: DofEstimate,
    pub seed: u64,
}

/// Runs the scheme on `trials` draws at each power (in dB) and fits the
/// DoF slopes to the trial-averaged rates.
pub fn rate_sweep(cfg: &AntennaConfig, powers_db: &[f64], trials: u64, seed: u64, tol: &Tolerances) -> Result<RateSweep> {
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    if powers_db.len() < 2 {
        return Err(Error::Domain("slope needs at least 2 powers".into()));
    }
    let scheme = BiaScheme::new(*cfg)?;
    let powers: Vec<f64> = powers_db.iter().map(|db| 10f64.powf(db / 10.0)).collect();

    let per_trial: Vec<Vec<TrialRate>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let draw = sample_channels(cfg, seed, trial);
            let report = verify(cfg, &scheme.q, &scheme.p, &draw.h11_slots, &draw.h12, tol)?;
            if !report.pass {
                return Err(Error::Numerical(format!("scheme failed verification on trial {trial}")));
            }
            powers_db
                .iter()
                .zip(&powers)
                .map(|(&power_db, &power)| {
                    Ok(TrialRate {
                        power_db,
                        r1_bits: rate_user1(&scheme, &draw, power)?,
                        r2_bits: rate_user2(&scheme, &draw, power)?,
                        trial,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut points: Vec<RatePoint> = powers.iter().map(|&power| RatePoint { power, r1: 0.0, r2: 0.0 }).collect();
    for rows in &per_trial {
        for (pt, row) in points.iter_mut().zip(rows) {
            pt.r1 += row.r1_bits;
            pt.r2 += row.r2_bits;
        }
    }
    for pt in &mut points {
        pt.r1 /= trials as f64;
        pt.r2 /= trials as f64;
    }
    let estimate = estimate_dof(&points)?;
    Ok(RateSweep {
        rows: per_trial.into_iter().flatten().collect(),
        points,
        estimate,
        seed,
    })
}

pub const RATE_CSV_HEADER: &str = "power_db,r1_bits,r2_bits,trial";

pub fn write_rates_csv<W: Write>(rows: &[TrialRate], mut out: W) -> io::Result<()> {
    writeln!(out, "{RATE_CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.power_db, r.r1_bits, r.r2_bits, r.trial)?;
    }
    Ok(())
}

/// Whether single-slot zero forcing separates `d1` and `d2` streams: with
/// random beamformers, `[H11·W1 | H12·W2]` must have rank `d1 + d2` at
/// receiver 1 and `H22·W2` rank `d2` at receiver 2.
pub fn zf_feasibility(cfg: &AntennaConfig, d1: u32, d2: u32, seed: u64) -> Result<bool> {
    if cfg.n1 < cfg.n2 {
        return Err(Error::Domain(format!("N1 >= N2 violated (N1 = {}, N2 = {})", cfg.n1, cfg.n2)));
    }
    if d1 > cfg.m1.min(cfg.n1) {
        return Err(Error::Domain(format!("d1 = {d1} exceeds min(M1, N1)")));
    }
    if d2 > cfg.m2_eff() {
        return Err(Error::Domain(format!("d2 = {d2} exceeds min(M2, N2)")));
    }
    if d1 + d2 == 0 {
        return Ok(true);
    }
    let (m1, n1, m2, n2) = (cfg.m1 as usize, cfg.n1 as usize, cfg.m2 as usize, cfg.n2 as usize);
    let (d1, d2) = (d1 as usize, d2 as usize);
    let mut rng = trial_rng(seed, ZF_STREAM);
    let h11 = complex_gaussian(&mut rng, n1, m1);
    let h12 = complex_gaussian(&mut rng, n1, m2);
    let h22 = complex_gaussian(&mut rng, n2, m2);
    let w1 = complex_gaussian(&mut rng, m1, d1);
    let w2 = complex_gaussian(&mut rng, m2, d2);
    let rx1 = h11.matmul(&w1)?.hstack(&h12.matmul(&w2)?)?;
    let rx2 = h22.matmul(&w2)?;
    Ok(numerical_rank(&rx1, DEFAULT_RANK_TOL)? == d1 + d2 && numerical_rank(&rx2, DEFAULT_RANK_TOL)? == d2)
}
