//! Dense complex matrices and the few numerical routines the rest of the
//! crate needs: Kronecker products, SVD-based numerical rank, a whitened
//! log-det rate functional and DFT matrices.
//!
//! Storage is row-major. Decompositions are delegated to `nalgebra`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Upper bound on the element count of any matrix produced by [`kron`].
pub const DEFAULT_MAX_ELEMENTS: usize = 1 << 24;

/// Default relative tolerance for [`numerical_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

const SVD_MAX_ITER: usize = 100_000;

/// `exp(-j 2π k / n)`, with `k` reduced modulo `n` before the angle is formed.
pub fn root_of_unity(k: i64, n: u64) -> Complex64 {
    let n_i = n as i64;
    let k = k.rem_euclid(n_i);
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    Complex64::from_polar(1.0, -2.0 * PI * (k as f64) / (n as f64))
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting length mismatches
    /// and non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite entry at ({}, {})",
                i / cols.max(1),
                i % cols.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Shape(format!("row {r} has a different length than row 0")));
        }
        Self::from_vec(rows.len(), cols, rows.concat())
    }

    /// Convenience constructor for real-valued matrices.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Entry `(r, c)` is `f(r, c)`, 0-indexed.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        debug_assert!(data.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Complex64) {
        self.data[r * self.cols + c] = value;
    }

    /// Row-major view of the entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "cannot subtract {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - other`; `Err` on shape mismatch.
    pub fn distance(&self, other: &ComplexMatrix) -> Result<f64> {
        Ok(self.sub(other)?.frobenius_norm())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.rows != other.rows {
            return Err(Error::Shape(format!(
                "cannot place {}x{} beside {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let cols = self.cols + other.cols;
        Ok(ComplexMatrix::from_fn(self.rows, cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                other.get(r, c - self.cols)
            }
        }))
    }

    /// Leading `rows x cols` columns of the first `rows` rows.
    pub fn leading_submatrix(&self, rows: usize, cols: usize) -> Result<ComplexMatrix> {
        if rows > self.rows || cols > self.cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} block requested from a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(ComplexMatrix::from_fn(rows, cols, |r, c| self.get(r, c)))
    }

    /// Keeps the columns named by `order`, in that order.
    pub fn select_columns(&self, order: &[usize]) -> Result<ComplexMatrix> {
        if let Some(&bad) = order.iter().find(|&&c| c >= self.cols) {
            return Err(Error::Shape(format!(
                "column {bad} out of range for {} columns",
                self.cols
            )));
        }
        Ok(ComplexMatrix::from_fn(self.rows, order.len(), |r, c| self.get(r, order[c])))
    }

    /// Block-diagonal matrix with `blocks` along the diagonal.
    pub fn block_diag(blocks: &[ComplexMatrix]) -> ComplexMatrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = ComplexMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let scale = self.frobenius_norm().max(1.0);
        (0..self.rows).all(|r| {
            (r..self.cols).all(|c| (self.get(r, c) - self.get(c, r).conj()).norm() <= tol * scale)
        })
    }

    /// Long-format CSV, one `row,col,re,im` line per entry.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "row,col,re,im")?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let z = self.get(r, c);
                writeln!(out, "{r},{c},{},{}", z.re, z.im)?;
            }
        }
        Ok(())
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:+.4}{:+.4}j", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b` under [`DEFAULT_MAX_ELEMENTS`].
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_with_limit(a, b, DEFAULT_MAX_ELEMENTS)
}

pub fn kron_with_limit(a: &ComplexMatrix, b: &ComplexMatrix, max_elements: usize) -> Result<ComplexMatrix> {
    let rows = a.rows.checked_mul(b.rows);
    let cols = a.cols.checked_mul(b.cols);
    let total = rows.zip(cols).and_then(|(r, c)| r.checked_mul(c));
    match total {
        Some(n) if n <= max_elements => {}
        _ => {
            return Err(Error::Sizing(format!(
                "kron of {}x{} and {}x{} exceeds {max_elements} elements",
                a.rows, a.cols, b.rows, b.cols
            )))
        }
    }
    Ok(ComplexMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |r, c| {
        a.get(r / b.rows, c / b.cols) * b.get(r % b.rows, c % b.cols)
    }))
}

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let svd = a
        .to_nalgebra()
        .try_svd(false, false, f64::EPSILON, SVD_MAX_ITER)
        .ok_or_else(|| Error::Numerical(format!("SVD of {}x{} matrix did not converge", a.rows, a.cols)))?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

/// Number of singular values strictly above `rel_tol` times the largest one.
pub fn numerical_rank(a: &ComplexMatrix, rel_tol: f64) -> Result<usize> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::Domain(format!("rank tolerance {rel_tol} outside (0, 1)")));
    }
    let s = singular_values(a)?;
    let Some(&largest) = s.first() else {
        return Ok(0);
    };
    if largest == 0.0 {
        return Ok(0);
    }
    let cutoff = rel_tol * largest;
    Ok(s.iter().filter(|&&v| v > cutoff).count())
}

/// `log2 det(I + ρ K⁻¹ G Gᴴ)`: the rate of Gaussian signalling with
/// per-stream power `ρ` through `g` in noise of covariance `noise_cov`.
///
/// The noise is whitened with the Cholesky factor of `K`, and the
/// determinant is evaluated in the (smaller) stream space.
pub fn shannon_logdet(g: &ComplexMatrix, noise_cov: &ComplexMatrix, power_per_stream: f64) -> Result<f64> {
    if !(power_per_stream >= 0.0 && power_per_stream.is_finite()) {
        return Err(Error::Domain(format!("power per stream {power_per_stream} must be finite and >= 0")));
    }
    if noise_cov.rows != noise_cov.cols || g.rows != noise_cov.rows {
        return Err(Error::Shape(format!(
            "channel {}x{} with noise covariance {}x{}",
            g.rows, g.cols, noise_cov.rows, noise_cov.cols
        )));
    }
    if !noise_cov.is_hermitian(1e-12) {
        return Err(Error::Domain("noise covariance is not Hermitian".into()));
    }
    if g.cols == 0 || g.rows == 0 || power_per_stream == 0.0 {
        return Ok(0.0);
    }
    let chol = Cholesky::new(noise_cov.to_nalgebra())
        .ok_or_else(|| Error::Domain("noise covariance is not positive definite".into()))?;
    let white = chol
        .l()
        .solve_lower_triangular(&g.to_nalgebra())
        .ok_or_else(|| Error::Numerical("whitening solve failed".into()))?;
    let k = g.cols;
    let gram = DMatrix::<Complex64>::identity(k, k) + white.adjoint() * &white * Complex64::new(power_per_stream, 0.0);
    let chol = Cholesky::new(gram).ok_or_else(|| Error::Numerical("I + ρ GᴴK⁻¹G lost definiteness".into()))?;
    let ln_det: f64 = (0..k).map(|i| 2.0 * chol.l_dirty()[(i, i)].re.ln()).sum();
    Ok((ln_det / std::f64::consts::LN_2).max(0.0))
}

/// `n x n` DFT matrix, entry `(r, c) = exp(-j 2π r c / n)` (0-indexed).
pub fn dft_matrix(n: usize) -> ComplexMatrix {
    let n64 = n as u64;
    ComplexMatrix::from_fn(n, n, |r, c| root_of_unity((r * c) as i64, n64))
}
