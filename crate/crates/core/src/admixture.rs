//! The admixture bound `Σ H(M_m) + (1−N) S(ρ) ≥ −(1/N) ω·𝔅`.
//!
//! Averaging the state-dependent bound over the N cyclic measurement orders gives
//! `−(1/N) Σ_i (⊗p)_i log Σ_k (⊗p)_k 𝔄_i[k]`, where for multi-indices `i` and `k`
//!
//! ```text
//! 𝔄_i[k] = Π_m chain_m[k_m, i_{m−1}],   chain_m = C(m,m+1) C(m+1,m+2) ⋯ C(m−2,m−1)
//! ```
//!
//! is the product of the N cyclic multi-overlap chains, each summed over its own
//! middle indices. Replacing ⊗p by the majorization bound ω (rows of 𝔄 sorted
//! nonincreasing) and then the outer weights by ω again (𝔅 sorted nonincreasing)
//! removes the state dependence.

use rayon::prelude::*;

use crate::channel::{chain_product, RealSquare};
use crate::error::{Error, Result};
use crate::majorization::{omega_dot_decreasing, tensor_product, MajVector};
use crate::quantum::{born_probabilities, DensityMatrix, MeasurementBasis};
use crate::LogBase;

/// Default refusal threshold for the `d^{3N}` work estimate.
pub const DEFAULT_WORK_LIMIT: u64 = 1_000_000_000;

/// Flat lexicographic index → multi-index in `[0, d)^n`.
pub fn multi_index(mut flat: usize, n: usize, d: usize) -> Vec<usize> {
    let mut idx = vec![0; n];
    for slot in idx.iter_mut().rev() {
        *slot = flat % d;
        flat /= d;
    }
    idx
}

/// The N cyclic chain matrices, `chain_m[k_m, i_{m−1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainTensor {
    n_meas: usize,
    dim: usize,
    chains: Vec<RealSquare>,
}

impl ChainTensor {
    pub fn new(bases: &[MeasurementBasis]) -> Result<Self> {
        let n = bases.len();
        if n < 2 {
            return Err(Error::TooFewMeasurements { min: 2, found: n });
        }
        let dim = bases[0].dim();
        if let Some(b) = bases.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: b.dim(),
            });
        }
        let chains = (0..n)
            .map(|m| {
                let cyclic: Vec<&MeasurementBasis> = (0..n).map(|t| &bases[(m + t) % n]).collect();
                chain_product(&cyclic)
            })
            .collect::<Result<_>>()?;
        Ok(Self { n_meas: n, dim, chains })
    }

    pub fn n_meas(&self) -> usize {
        self.n_meas
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of multi-indices, `d^N`.
    pub fn len(&self) -> usize {
        self.dim.pow(self.n_meas as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Chain `m` from index `start` of measurement `m` to index `end` of measurement `m−1`.
    pub fn chain(&self, m: usize, start: usize, end: usize) -> f64 {
        self.chains[m].get(start, end)
    }

    pub fn entry(&self, i: &[usize], k: &[usize]) -> f64 {
        let n = self.n_meas;
        (0..n).map(|m| self.chain(m, k[m], i[(m + n - 1) % n])).product()
    }

    /// Row `𝔄_i` in lexicographic `k` order (unsorted).
    pub fn raw_row(&self, i_flat: usize) -> Vec<f64> {
        let n = self.n_meas;
        let i = multi_index(i_flat, n, self.dim);
        // The row is the Kronecker product of one chain column per measurement.
        let mut row = vec![1.0];
        for m in 0..n {
            let end = i[(m + n - 1) % n];
            row = row
                .iter()
                .flat_map(|&acc| (0..self.dim).map(move |start| (acc, start)))
                .map(|(acc, start)| acc * self.chain(m, start, end))
                .collect();
        }
        row
    }

    pub fn sorted_row(&self, i_flat: usize) -> Vec<f64> {
        let mut row = self.raw_row(i_flat);
        // Stable: equal values keep lexicographic k order.
        row.sort_by(|a, b| b.total_cmp(a));
        row
    }
}

fn check_work(n_meas: usize, dim: usize, limit: u64) -> Result<()> {
    let required = (dim as u64)
        .checked_pow(3 * n_meas as u32)
        .unwrap_or(u64::MAX);
    if required > limit {
        return Err(Error::WorkBudgetExceeded { required, limit });
    }
    Ok(())
}

/// The rows `𝔄_i` for every multi-index `i` (lexicographic), each sorted nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmixtureRows {
    pub n_meas: usize,
    pub dim: usize,
    pub rows: Vec<Vec<f64>>,
}

pub fn build_a(bases: &[MeasurementBasis], work_limit: u64) -> Result<AdmixtureRows> {
    let chains = ChainTensor::new(bases)?;
    check_work(chains.n_meas, chains.dim, work_limit)?;
    let rows = (0..chains.len())
        .into_par_iter()
        .map(|i| chains.sorted_row(i))
        .collect();
    Ok(AdmixtureRows {
        n_meas: chains.n_meas,
        dim: chains.dim,
        rows,
    })
}

fn b_entry(row: &[f64], omega: &MajVector, base: LogBase, i_flat: usize, n: usize, d: usize) -> Result<f64> {
    let dot = omega_dot_decreasing(omega, row)?;
    if dot <= 0.0 {
        return Err(Error::LogOfNonpositive {
            index: multi_index(i_flat, n, d),
            value: dot,
        });
    }
    Ok(base.log(dot))
}

/// `𝔅_i = log(ω·𝔄_i)`, sorted nonincreasing.
pub fn build_b(a: &AdmixtureRows, omega: &MajVector, base: LogBase) -> Result<Vec<f64>> {
    let mut b = a
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| b_entry(row, omega, base, i, a.n_meas, a.dim))
        .collect::<Result<Vec<f64>>>()?;
    b.sort_by(|x, y| y.total_cmp(x));
    Ok(b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmixtureTensors {
    pub a: AdmixtureRows,
    /// Sorted `𝔅`.
    pub b: Vec<f64>,
    pub omega: MajVector,
}

pub fn admixture_tensors(
    bases: &[MeasurementBasis],
    omega: &MajVector,
    base: LogBase,
    work_limit: u64,
) -> Result<AdmixtureTensors> {
    let a = build_a(bases, work_limit)?;
    let b = build_b(&a, omega, base)?;
    Ok(AdmixtureTensors {
        a,
        b,
        omega: omega.clone(),
    })
}

/// `−(1/N) ω·𝔅`, state independent.
///
/// `omega` must be a majorization bound for the same bases (normally
/// [`crate::omega::compute_omega`]). Rows are generated on the fly, so only 𝔅
/// is held in memory.
pub fn admixture_bound(bases: &[MeasurementBasis], omega: &MajVector, base: LogBase) -> Result<f64> {
    admixture_bound_with_limit(bases, omega, base, DEFAULT_WORK_LIMIT)
}

pub fn admixture_bound_with_limit(
    bases: &[MeasurementBasis],
    omega: &MajVector,
    base: LogBase,
    work_limit: u64,
) -> Result<f64> {
    let chains = ChainTensor::new(bases)?;
    let (n, d) = (chains.n_meas, chains.dim);
    check_work(n, d, work_limit)?;
    let mut b = (0..chains.len())
        .into_par_iter()
        .map(|i| b_entry(&chains.sorted_row(i), omega, base, i, n, d))
        .collect::<Result<Vec<f64>>>()?;
    b.sort_by(|x, y| y.total_cmp(x));
    Ok(-omega_dot_decreasing(omega, &b)? / n as f64)
}

/// The state-dependent quantity the admixture bound relaxes:
/// `−(1/N) Σ_i (⊗p)_i log Σ_k (⊗p)_k 𝔄_i[k]`, equal to the mean of `I` over the
/// N cyclic orders.
pub fn cyclic_pre_bound(rho: &DensityMatrix, bases: &[MeasurementBasis], base: LogBase) -> Result<f64> {
    let chains = ChainTensor::new(bases)?;
    let probs = bases
        .iter()
        .map(|b| born_probabilities(rho, b))
        .collect::<Result<Vec<_>>>()?;
    let joint = tensor_product(&probs);
    let joint = joint.probs();
    let mut total = 0.0;
    for (i, &w) in joint.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let row = chains.raw_row(i);
        let inner: f64 = row.iter().zip(joint).map(|(a, p)| a * p).sum();
        if inner <= 0.0 {
            return Err(Error::LogOfNonpositive {
                index: multi_index(i, chains.n_meas, chains.dim),
                value: inner,
            });
        }
        total -= w * base.log(inner);
    }
    Ok(total / chains.n_meas as f64)
}
