//! Measurement bases, density matrices and the distributions they induce.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, inner_product, ComplexMatrix, JACOBI_TOL};
use crate::LogBase;

/// Tolerance for unit norm and pairwise orthogonality of basis vectors.
pub const ORTHONORMAL_TOL: f64 = 1e-10;
/// Tolerance for trace, Hermiticity and positivity of a density matrix.
pub const STATE_TOL: f64 = 1e-10;
/// Probability entries this far below zero are treated as rounding and clamped.
pub const NEGATIVE_SLOP: f64 = 1e-12;
/// Normalization tolerance for probability vectors.
pub const SUM_TOL: f64 = 1e-10;

/// An orthonormal basis of C^d: the eigenvectors of one projective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    label: String,
    vectors: Vec<Vec<Complex64>>,
}

impl MeasurementBasis {
    pub fn new(label: impl Into<String>, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let label = label.into();
        Self::validate(&label, &vectors)?;
        Ok(Self { label, vectors })
    }

    /// Checks that `vectors` are `d` orthonormal vectors of length `d`.
    ///
    /// Failures name the offending pair; a unit-norm failure reports the vector
    /// paired with itself and its squared norm.
    pub fn validate(label: &str, vectors: &[Vec<Complex64>]) -> Result<()> {
        let d = vectors.len();
        if d == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        for v in vectors {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: v.len(),
                });
            }
            if let Some(i) = v.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite(i));
            }
        }
        for i in 0..d {
            let norm = inner_product(&vectors[i], &vectors[i]).re;
            if (norm - 1.0).abs() > ORTHONORMAL_TOL {
                return Err(Error::NotOrthonormal {
                    label: label.to_string(),
                    first: i,
                    second: i,
                    overlap: norm,
                });
            }
            for j in (i + 1)..d {
                let ip = inner_product(&vectors[i], &vectors[j]).norm();
                if ip > ORTHONORMAL_TOL {
                    return Err(Error::NotOrthonormal {
                        label: label.to_string(),
                        first: i,
                        second: j,
                        overlap: ip,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn computational(dim: usize) -> Self {
        let vectors = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect();
        Self {
            label: "computational".to_string(),
            vectors,
        }
    }

    /// Basis from the columns of a unitary matrix.
    pub fn from_unitary(label: impl Into<String>, u: &ComplexMatrix) -> Result<Self> {
        let vectors = (0..u.cols()).map(|j| u.column(j)).collect();
        Self::new(label, vectors)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector(&self, i: usize) -> &[Complex64] {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// A d×d Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::InvalidState(format!(
                "expected a nonempty square matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        matrix.check_hermitian(STATE_TOL)?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let ev = hermitian_eigenvalues(&matrix, JACOBI_TOL)?.eigenvalues;
        if let Some(&min) = ev.last() {
            if min < -STATE_TOL {
                return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(Self { matrix })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let matrix = ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        Self { matrix }
    }

    /// |ψ⟩⟨ψ| for a (not necessarily normalized) nonzero vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = crate::linalg::vector_norm(psi);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        let n = psi.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = psi[i] * psi[j].conj() / (norm * norm);
            }
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix, JACOBI_TOL)
            .expect("validated on construction")
            .eigenvalues
    }

    /// ⟨v|ρ|v⟩ (real part).
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let d = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..d {
                row += self.matrix[(i, j)] * v[j];
            }
            acc += v[i].conj() * row;
        }
        acc.re
    }
}

/// A probability distribution over measurement outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    probs: Vec<f64>,
}

impl ProbVector {
    /// Validates and cleans up a distribution.
    ///
    /// Entries within [`NEGATIVE_SLOP`] below zero are clamped to zero and the
    /// vector is renormalized; anything more negative, or a sum off by more than
    /// [`SUM_TOL`], is rejected.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite(i));
            }
            if p < -NEGATIVE_SLOP {
                return Err(Error::NegativeEntry { index: i, value: p });
            }
            if p > 1.0 + NEGATIVE_SLOP {
                return Err(Error::OutOfRange {
                    name: "probability",
                    value: p,
                });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::NotNormalized { sum });
        }
        let mut clamped = false;
        for p in probs.iter_mut() {
            if *p < 0.0 {
                *p = 0.0;
                clamped = true;
            }
        }
        if clamped {
            let sum: f64 = probs.iter().sum();
            probs.iter_mut().for_each(|p| *p /= sum);
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.probs
    }
}

impl AsRef<[f64]> for ProbVector {
    fn as_ref(&self) -> &[f64] {
        &self.probs
    }
}

/// Overlaps c(a_x, b_y) = |⟨a_x|b_y⟩|² between two bases; doubly stochastic.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl OverlapMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.entries[x * self.dim + y]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.entries[x * self.dim..(x + 1) * self.dim]
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut entries = vec![0.0; d * d];
        for x in 0..d {
            for y in 0..d {
                entries[y * d + x] = self.entries[x * d + y];
            }
        }
        Self { dim: d, entries }
    }

    /// The largest and second-largest entries (multiplicity counted).
    pub fn top_two(&self) -> (f64, f64) {
        let mut sorted = self.entries.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        (sorted[0], sorted.get(1).copied().unwrap_or(sorted[0]))
    }

    /// Largest deviation of any row or column sum from 1.
    pub fn stochastic_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for x in 0..d {
            let row: f64 = self.row(x).iter().sum();
            let col: f64 = (0..d).map(|y| self.get(y, x)).sum();
            worst = worst.max((row - 1.0).abs()).max((col - 1.0).abs());
        }
        worst
    }
}

pub fn born_probabilities(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<ProbVector> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: basis.dim(),
        });
    }
    let raw: Vec<f64> = basis
        .vectors()
        .iter()
        .map(|u| rho.expectation(u).min(1.0))
        .collect();
    ProbVector::new(raw)
}

pub fn overlap_matrix(a: &MeasurementBasis, b: &MeasurementBasis) -> Result<OverlapMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let d = a.dim();
    let mut entries = Vec::with_capacity(d * d);
    for x in 0..d {
        for y in 0..d {
            entries.push(inner_product(a.vector(x), b.vector(y)).norm_sqr().min(1.0));
        }
    }
    Ok(OverlapMatrix { dim: d, entries })
}

/// S(ρ) = −Σ λ log λ over the spectrum, with 0 log 0 = 0.
pub fn von_neumann_entropy(rho: &DensityMatrix, base: LogBase) -> f64 {
    let h: f64 = rho
        .eigenvalues()
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.ln())
        .sum();
    base.from_nats(h.max(0.0))
}
