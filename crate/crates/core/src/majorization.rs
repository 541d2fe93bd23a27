//! The majorization order, tensor products of distributions, and the
//! Shannon / Rényi / Tsallis entropies.

use crate::error::{Error, Result};
use crate::quantum::{ProbVector, NEGATIVE_SLOP, SUM_TOL};
use crate::LogBase;

/// Default slack for majorization comparisons.
pub const MAJORIZATION_SLACK: f64 = 1e-9;
/// Tolerance for the "sorted nonincreasing" precondition.
pub const SORT_TOL: f64 = 1e-12;

/// A majorization bound vector kept in construction order.
///
/// For ω this is `(Ω₁, Ω₂−Ω₁, …, 1−Ω_a)`, so the running sums are exactly the Ω_k.
/// The entries are never re-sorted: consecutive differences need not be monotone
/// and [`omega_dot_decreasing`] relies on the running sums. Only the short form is
/// stored; the zero tail is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct MajVector {
    entries: Vec<f64>,
}

impl MajVector {
    pub fn new(mut entries: Vec<f64>) -> Result<Self> {
        for (i, &e) in entries.iter().enumerate() {
            if !e.is_finite() {
                return Err(Error::NonFinite(i));
            }
            if e < -NEGATIVE_SLOP {
                return Err(Error::NegativeEntry { index: i, value: e });
            }
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::NotNormalized { sum });
        }
        entries.iter_mut().for_each(|e| *e = e.max(0.0));
        Ok(Self { entries })
    }

    /// Builds the vector of consecutive differences of a nondecreasing sequence
    /// of partial sums ending in 1.
    pub fn from_partial_sums(partial: &[f64]) -> Result<Self> {
        let mut prev = 0.0;
        let entries = partial
            .iter()
            .map(|&s| {
                let e = s - prev;
                prev = s;
                e
            })
            .collect();
        Self::new(entries)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Logical length before the implicit zero tail.
    pub fn short_len(&self) -> usize {
        self.entries.len()
    }

    pub fn padded(&self, len: usize) -> Vec<f64> {
        let mut v = self.entries.clone();
        if v.len() < len {
            v.resize(len, 0.0);
        }
        v
    }

    /// Running sums Ω₁, Ω₂, …
    pub fn partial_sums(&self) -> Vec<f64> {
        self.entries
            .iter()
            .scan(0.0, |acc, &e| {
                *acc += e;
                Some(*acc)
            })
            .collect()
    }
}

impl AsRef<[f64]> for MajVector {
    fn as_ref(&self) -> &[f64] {
        &self.entries
    }
}

fn check_normalized(v: &[f64]) -> Result<()> {
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(Error::NotNormalized { sum });
    }
    Ok(())
}

fn sorted_desc(v: &[f64], len: usize) -> Vec<f64> {
    let mut s = v.to_vec();
    s.resize(len, 0.0);
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `x ≺ y`: every top-k partial sum of x↓ is at most that of y↓ plus `slack`.
///
/// Both vectors must be normalized; the shorter one is zero-padded.
pub fn majorizes(y: &[f64], x: &[f64], slack: f64) -> Result<bool> {
    check_normalized(y)?;
    check_normalized(x)?;
    Ok(majorization_gap(y, x) <= slack)
}

/// Largest violation `max_k (Σ_{i≤k} x↓_i − Σ_{i≤k} y↓_i)`; `x ≺ y` iff this is ≤ 0.
pub fn majorization_gap(y: &[f64], x: &[f64]) -> f64 {
    let n = x.len().max(y.len());
    let xs = sorted_desc(x, n);
    let ys = sorted_desc(y, n);
    let (mut sx, mut sy) = (0.0, 0.0);
    let mut worst = f64::NEG_INFINITY;
    for (a, b) in xs.iter().zip(&ys) {
        sx += a;
        sy += b;
        worst = worst.max(sx - sy);
    }
    worst
}

/// Kronecker product of distributions in lexicographic index order.
pub fn tensor_product(ps: &[ProbVector]) -> ProbVector {
    let mut out = vec![1.0];
    for p in ps {
        out = out
            .iter()
            .flat_map(|&a| p.probs().iter().map(move |&b| a * b))
            .collect();
    }
    ProbVector::new(out).expect("products of normalized vectors stay normalized")
}

pub fn shannon_entropy(p: &[f64], base: LogBase) -> f64 {
    let h: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum();
    base.from_nats(h)
}

/// Rényi entropy of order `alpha`; order 1 is the Shannon limit.
pub fn renyi_entropy(p: &[f64], alpha: f64, base: LogBase) -> Result<f64> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::BadOrder(alpha));
    }
    if alpha == 1.0 {
        return Ok(shannon_entropy(p, base));
    }
    let s: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(alpha)).sum();
    Ok(base.from_nats(s.ln() / (1.0 - alpha)))
}

/// Tsallis entropy `(1 − Σ p^q)/(q − 1)`; order 1 is the Shannon limit in nats.
pub fn tsallis_entropy(p: &[f64], q: f64) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::BadOrder(q));
    }
    if q == 1.0 {
        return Ok(shannon_entropy(p, LogBase::E));
    }
    let s: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(q)).sum();
    Ok((1.0 - s) / (q - 1.0))
}

/// `Σ_k ω_k a_k` with ω in construction order and `a` sorted nonincreasing.
///
/// By Abel summation, any `x ≺ ω` (in the partial-sum sense `Σ_{i≤k} x↓_i ≤ Ω_k`)
/// satisfies `Σ_k x↓_k a_k ≤` the returned value, regardless of the sign of `a`.
pub fn omega_dot_decreasing(omega: &MajVector, a: &[f64]) -> Result<f64> {
    if let Some(i) = a.windows(2).position(|w| w[1] > w[0] + SORT_TOL) {
        return Err(Error::NotSorted(i + 1));
    }
    if omega.short_len() > a.len() {
        return Err(Error::DimensionMismatch {
            expected: omega.short_len(),
            found: a.len(),
        });
    }
    Ok(omega.entries().iter().zip(a).map(|(w, x)| w * x).sum())
}
