//! Dense complex linear algebra for the small Hermitian problems in this crate.
//!
//! Matrices here are at most a few dozen rows (block-Gram matrices of chosen basis
//! vectors), so everything is a straightforward row-major `Vec<Complex64>` with a
//! cyclic Jacobi eigensolver and a shifted power iteration as a second route to λ₁.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Conjugate-symmetry tolerance used by every Hermitian entry point.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Target off-diagonal Frobenius mass for the Jacobi sweeps.
pub const JACOBI_TOL: f64 = 1e-12;
/// Residual target for power iteration.
pub const POWER_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 100;
const POWER_MAX_STEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if let Some(i) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from real entries given row by row.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(Error::DimensionMismatch {
                expected: n_cols,
                found: bad.len(),
            });
        }
        Self::new(n_rows, n_cols, rows.concat())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let n_cols = columns.len();
        let n_rows = columns.first().map_or(0, Vec::len);
        let mut m = Self::zeros(n_rows, n_cols);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n_rows {
                return Err(Error::DimensionMismatch {
                    expected: n_rows,
                    found: col.len(),
                });
            }
            for (i, &z) in col.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        Self::new(n_rows, n_cols, m.entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Checks conjugate symmetry, reporting the worst offending pair.
    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let mut worst = (0, 0, 0.0_f64);
        for i in 0..self.rows {
            for j in i..self.cols {
                let dev = (self[(i, j)] - self[(j, i)].conj()).norm();
                if dev > worst.2 {
                    worst = (i, j, dev);
                }
            }
        }
        if worst.2 > tol {
            return Err(Error::NotHermitian {
                row: worst.0,
                col: worst.1,
                deviation: worst.2,
            });
        }
        Ok(())
    }

    /// Copy of the submatrix at the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// ⟨a|b⟩, antilinear in the first argument.
pub fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigenResult {
    /// Sorted nonincreasing.
    pub eigenvalues: Vec<f64>,
    /// Full Jacobi sweeps performed.
    pub iterations: usize,
}

/// All eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `m[p,q]` with a diagonal
/// unitary and then applies the classical real Jacobi rotation, so the pivot is
/// annihilated exactly. Sweeps continue until the off-diagonal Frobenius mass drops
/// below `tol · max(1, ‖m‖_F)`.
pub fn hermitian_eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<HermitianEigenResult> {
    m.check_hermitian(HERMITIAN_TOL)?;
    let n = m.rows();
    let mut a = m.clone();
    // Symmetrize away the sub-tolerance asymmetry so rotations stay exact.
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let target = tol * m.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        if off_diagonal_mass(&a) <= target {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                method: "Jacobi eigensolver",
                limit: JACOBI_MAX_SWEEPS,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, p, q);
            }
        }
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    Ok(HermitianEigenResult {
        eigenvalues,
        iterations: sweeps,
    })
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn rotate(a: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, conj(phase)) on (p, q) followed by the real rotation.
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = phase.conj() * (-s);
    let g_qq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenMethod {
    /// Full Jacobi diagonalization.
    #[default]
    Exact,
    /// Shifted power iteration with a Rayleigh-quotient readout.
    Power,
}

/// Largest eigenvalue λ₁ of a Hermitian matrix.
pub fn top_eigenvalue(m: &ComplexMatrix, method: EigenMethod, tol: f64) -> Result<f64> {
    match method {
        EigenMethod::Exact => {
            let res = hermitian_eigenvalues(m, tol)?;
            Ok(res.eigenvalues.first().copied().unwrap_or(0.0))
        }
        EigenMethod::Power => power_top_eigenvalue(m, tol),
    }
}

fn power_top_eigenvalue(m: &ComplexMatrix, tol: f64) -> Result<f64> {
    m.check_hermitian(HERMITIAN_TOL)?;
    let n = m.rows();
    if n == 0 {
        return Ok(0.0);
    }
    // Gershgorin: m + shift·I is positive semidefinite, so λ₁ + shift dominates.
    let shift = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    if shift == 0.0 {
        return Ok(0.0);
    }

    let mut v: Vec<Complex64> = (0..n)
        .map(|i| {
            let x = i as f64;
            Complex64::new(1.0 + (x * 0.618_033_988_7).fract(), (x * 0.414_213_562_4).fract())
        })
        .collect();
    let norm = vector_norm(&v);
    v.iter_mut().for_each(|z| *z /= norm);

    for _ in 0..POWER_MAX_STEPS {
        let w: Vec<Complex64> = (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)] * v[j]).sum::<Complex64>() + v[i] * shift)
            .collect();
        let rayleigh = inner_product(&v, &w).re;
        let residual = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - vi * rayleigh).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual <= tol {
            return Ok(rayleigh - shift);
        }
        let wn = vector_norm(&w);
        v = w.into_iter().map(|z| z / wn).collect();
    }
    Err(Error::NoConvergence {
        method: "power iteration",
        limit: POWER_MAX_STEPS,
    })
}

/// σ₁(m), via the smaller of the two Gram matrices.
pub fn top_singular_value(m: &ComplexMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    let adj = m.adjoint();
    let gram = if m.rows() <= m.cols() {
        m.matmul(&adj)
    } else {
        adj.matmul(m)
    }
    .expect("Gram dimensions agree by construction");
    let lambda = top_eigenvalue(&gram, EigenMethod::Exact, JACOBI_TOL)
        .expect("Gram matrices are Hermitian and Jacobi converges on them");
    lambda.max(0.0).sqrt()
}
