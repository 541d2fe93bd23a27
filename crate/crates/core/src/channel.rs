//! Channel-type bounds: the multi-measurement overlap bound `b`, its minimum over
//! measurement orders, the state-dependent bound `I(order)` with its averages, and
//! the classic two-measurement bounds.

use std::fmt;

use crate::error::{Error, Result};
use crate::quantum::{born_probabilities, overlap_matrix, DensityMatrix, MeasurementBasis, OverlapMatrix};
use crate::LogBase;

/// Orbit size limit for [`liu_b_min`] (8! orders).
pub const MAX_ORBIT_MEASUREMENTS: usize = 8;
/// Limit for the full-group average in [`average_i`] (6! orders).
pub const MAX_FULL_AVERAGE_MEASUREMENTS: usize = 6;

const INNER_SUM_FLOOR: f64 = 1e-15;
const WEIGHT_FLOOR: f64 = 1e-12;

/// A measurement order, 0-based: position `t` holds measurement `perm[t]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MeasurementOrder {
    perm: Vec<usize>,
}

impl MeasurementOrder {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::InvalidPermutation(perm));
            }
            seen[p] = true;
        }
        Ok(Self { perm })
    }

    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect() }
    }

    /// The order `(s+1, s+2, …, s)` (1-based), i.e. starting at measurement `shift`.
    pub fn cyclic(n: usize, shift: usize) -> Self {
        Self {
            perm: (0..n).map(|t| (t + shift) % n).collect(),
        }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn apply<'a>(&self, bases: &'a [MeasurementBasis]) -> Vec<&'a MeasurementBasis> {
        self.perm.iter().map(|&i| &bases[i]).collect()
    }

    /// All orders of `n` measurements in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = MeasurementOrder> {
        let mut next = Some((0..n).collect::<Vec<_>>());
        std::iter::from_fn(move || {
            let cur = next.take()?;
            next = next_permutation(&cur);
            Some(MeasurementOrder { perm: cur })
        })
    }
}

impl fmt::Display for MeasurementOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.perm.iter().map(|p| (p + 1).to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

fn next_permutation(p: &[usize]) -> Option<Vec<usize>> {
    let mut v = p.to_vec();
    let i = v.windows(2).rposition(|w| w[0] < w[1])?;
    let j = v.iter().rposition(|&x| x > v[i])?;
    v.swap(i, j);
    v[i + 1..].reverse();
    Some(v)
}

/// Deutsch: `−2 log((1 + √c₁)/2)`.
pub fn deutsch_bound(c1: f64, base: LogBase) -> Result<f64> {
    check_overlap("c1", c1)?;
    Ok(-2.0 * base.log((1.0 + c1.sqrt()) / 2.0))
}

/// Maassen–Uffink: `−log c₁`.
pub fn maassen_uffink_bound(c1: f64, base: LogBase) -> Result<f64> {
    check_overlap("c1", c1)?;
    Ok(-base.log(c1))
}

/// Coles–Piani: `−log c₁ + (1 − √c₁)/2 · log(c₁/c₂)`.
pub fn coles_piani_bound(c1: f64, c2: f64, base: LogBase) -> Result<f64> {
    check_overlap("c1", c1)?;
    check_overlap("c2", c2)?;
    if c2 > c1 {
        return Err(Error::OutOfRange { name: "c2", value: c2 });
    }
    Ok(-base.log(c1) + (1.0 - c1.sqrt()) / 2.0 * base.log(c1 / c2))
}

fn check_overlap(name: &'static str, c: f64) -> Result<()> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::OutOfRange { name, value: c });
    }
    Ok(())
}

/// Dense d×d real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RealSquare {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl RealSquare {
    fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Self { dim, data }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    fn mul_overlap(&self, c: &OverlapMatrix) -> Self {
        let d = self.dim;
        let mut data = vec![0.0; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                for j in 0..d {
                    data[i * d + j] += a * c.get(k, j);
                }
            }
        }
        Self { dim: d, data }
    }
}

/// Product `C(b₀,b₁) C(b₁,b₂) ⋯` of consecutive overlap matrices along `bases`.
///
/// Entry `[x, y]` is the multi-overlap chain summed over every middle index.
pub(crate) fn chain_product(bases: &[&MeasurementBasis]) -> Result<RealSquare> {
    let d = bases[0].dim();
    let mut acc = RealSquare::identity(d);
    for w in bases.windows(2) {
        acc = acc.mul_overlap(&overlap_matrix(w[0], w[1])?);
    }
    Ok(acc)
}

fn require_at_least_two(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewMeasurements { min: 2, found: n });
    }
    Ok(())
}

/// `b = max_{i_N} Σ_{i₂…i_{N−1}} max_{i₁} c(u¹_{i₁}, u²_{i₂}) Π_m c(u^m_{i_m}, u^{m+1}_{i_{m+1}})`.
///
/// Evaluated as a chain contraction: the column maxima of the first overlap
/// matrix are pushed through the remaining overlap matrices. For N = 2 this is
/// the largest overlap c₁.
pub fn liu_b(bases: &[MeasurementBasis]) -> Result<f64> {
    let refs: Vec<&MeasurementBasis> = bases.iter().collect();
    liu_b_refs(&refs)
}

fn liu_b_refs(bases: &[&MeasurementBasis]) -> Result<f64> {
    require_at_least_two(bases.len())?;
    let first = overlap_matrix(bases[0], bases[1])?;
    let d = first.dim();
    let mut v: Vec<f64> = (0..d)
        .map(|y| (0..d).map(|x| first.get(x, y)).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    for w in bases[1..].windows(2) {
        let c = overlap_matrix(w[0], w[1])?;
        v = (0..d).map(|y| (0..d).map(|x| v[x] * c.get(x, y)).sum()).collect();
    }
    Ok(v.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// Minimum of `b` over all measurement orders, with the lexicographically
/// smallest order attaining it.
pub fn liu_b_min(bases: &[MeasurementBasis]) -> Result<(f64, MeasurementOrder)> {
    require_at_least_two(bases.len())?;
    if bases.len() > MAX_ORBIT_MEASUREMENTS {
        return Err(Error::TooManyMeasurements {
            max: MAX_ORBIT_MEASUREMENTS,
            found: bases.len(),
        });
    }
    let mut best: Option<(f64, MeasurementOrder)> = None;
    for order in MeasurementOrder::all(bases.len()) {
        let b = liu_b_refs(&order.apply(bases))?;
        if best.as_ref().is_none_or(|(v, _)| b < *v) {
            best = Some((b, order));
        }
    }
    Ok(best.expect("at least one order"))
}

/// `I(1, …, N) = −Σ_{i_N} p^N_{i_N} log Σ_{i₁…i_{N−1}} p¹_{i₁} c^{1…N}_{i₁…i_N}`
/// for the bases in the order given.
pub fn state_dependent_i(rho: &DensityMatrix, bases: &[MeasurementBasis], base: LogBase) -> Result<f64> {
    state_dependent_i_ordered(rho, bases, &MeasurementOrder::identity(bases.len()), base)
}

pub fn state_dependent_i_ordered(
    rho: &DensityMatrix,
    bases: &[MeasurementBasis],
    order: &MeasurementOrder,
    base: LogBase,
) -> Result<f64> {
    require_at_least_two(bases.len())?;
    if order.len() != bases.len() {
        return Err(Error::DimensionMismatch {
            expected: bases.len(),
            found: order.len(),
        });
    }
    let ordered = order.apply(bases);
    let first = born_probabilities(rho, ordered[0])?;
    let last = born_probabilities(rho, ordered[ordered.len() - 1])?;
    let chain = chain_product(&ordered)?;
    let d = chain.dim;

    let mut total = 0.0;
    for y in 0..d {
        let weight = last.probs()[y];
        let inner: f64 = (0..d).map(|x| first.probs()[x] * chain.get(x, y)).sum();
        if inner <= INNER_SUM_FLOOR {
            if weight <= WEIGHT_FLOOR {
                continue;
            }
            return Err(Error::DegenerateChain { index: y, weight });
        }
        if weight > 0.0 {
            total -= weight * base.log(inner);
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AverageMode {
    /// Mean over all N! orders, in lexicographic order.
    Full,
    /// Mean over the N cyclic shifts `(1 2 ⋯ N), (2 3 ⋯ 1), …`.
    #[default]
    Cyclic,
}

pub fn average_i(
    rho: &DensityMatrix,
    bases: &[MeasurementBasis],
    mode: AverageMode,
    base: LogBase,
) -> Result<f64> {
    require_at_least_two(bases.len())?;
    let n = bases.len();
    let orders: Vec<MeasurementOrder> = match mode {
        AverageMode::Cyclic => (0..n).map(|s| MeasurementOrder::cyclic(n, s)).collect(),
        AverageMode::Full => {
            if n > MAX_FULL_AVERAGE_MEASUREMENTS {
                return Err(Error::TooManyMeasurements {
                    max: MAX_FULL_AVERAGE_MEASUREMENTS,
                    found: n,
                });
            }
            MeasurementOrder::all(n).collect()
        }
    };
    let mut sum = 0.0;
    for order in &orders {
        sum += state_dependent_i_ordered(rho, bases, order, base)?;
    }
    Ok(sum / orders.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn hadamard() -> MeasurementBasis {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        MeasurementBasis::new("hadamard", vec![vec![h, h], vec![h, -h]]).unwrap()
    }

    #[test]
    fn deutsch_fixtures() {
        assert_eq!(deutsch_bound(1.0, LogBase::Two).unwrap(), 0.0);
        assert!((deutsch_bound(0.5, LogBase::Two).unwrap() - 0.456_893_393_672_776).abs() < 1e-12);
        assert!((deutsch_bound(1.0 / 3.0, LogBase::Two).unwrap() - 0.684_993_873_768_165).abs() < 1e-12);
        assert!(matches!(deutsch_bound(0.0, LogBase::Two), Err(Error::OutOfRange { .. })));
        assert!(matches!(deutsch_bound(1.5, LogBase::Two), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn maassen_uffink_fixtures() {
        assert_eq!(maassen_uffink_bound(1.0, LogBase::Two).unwrap(), 0.0);
        assert_eq!(maassen_uffink_bound(0.5, LogBase::Two).unwrap(), 1.0);
        assert!((maassen_uffink_bound(1.0 / 3.0, LogBase::Two).unwrap() - 3f64.log2()).abs() < 1e-15);
    }

    #[test]
    fn coles_piani_fixtures() {
        let c = 0.37;
        assert_eq!(
            coles_piani_bound(c, c, LogBase::E).unwrap(),
            maassen_uffink_bound(c, LogBase::E).unwrap()
        );
        assert_eq!(coles_piani_bound(1.0, 0.3, LogBase::Two).unwrap(), 0.0);
        let v = coles_piani_bound(0.5, 0.25, LogBase::Two).unwrap();
        assert!((v - (1.0 + (1.0 - 0.5f64.sqrt()) / 2.0)).abs() < 1e-15);
        assert!((v - 1.1464).abs() < 1e-4);
        assert!(matches!(coles_piani_bound(0.25, 0.5, LogBase::Two), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn liu_b_fixtures() {
        let z = MeasurementBasis::computational(2);
        assert!((liu_b(&[z.clone(), hadamard()]).unwrap() - 0.5).abs() < 1e-15);
        let z3 = MeasurementBasis::computational(3);
        assert_eq!(liu_b(&[z3.clone(), z3.clone(), z3.clone()]).unwrap(), 1.0);
        assert!(matches!(liu_b(&[z3]), Err(Error::TooFewMeasurements { .. })));
    }

    #[test]
    fn liu_b_min_fixtures() {
        let z = MeasurementBasis::computational(2);
        let pair = [z.clone(), hadamard()];
        let (b, order) = liu_b_min(&pair).unwrap();
        assert_eq!(b, liu_b(&pair).unwrap());
        assert_eq!(order, MeasurementOrder::identity(2));
        let z3 = MeasurementBasis::computational(3);
        assert_eq!(liu_b_min(&[z3.clone(), z3.clone(), z3]).unwrap().0, 1.0);
        let many = vec![z; 9];
        assert!(matches!(liu_b_min(&many), Err(Error::TooManyMeasurements { .. })));
    }

    #[test]
    fn orders() {
        let all: Vec<Vec<usize>> = MeasurementOrder::all(3).map(|o| o.perm().to_vec()).collect();
        assert_eq!(all, vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0]
        ]);
        assert_eq!(MeasurementOrder::cyclic(3, 1).perm(), &[1, 2, 0]);
        assert_eq!(MeasurementOrder::cyclic(3, 2).to_string(), "(3 1 2)");
        assert!(MeasurementOrder::new(vec![0, 0]).is_err());
        assert_eq!(MeasurementOrder::all(5).count(), 120);
    }

    #[test]
    fn i_identical_bases_is_shannon() {
        let rho = DensityMatrix::pure(&[Complex64::new(0.8, 0.0), Complex64::new(0.0, 0.6)]).unwrap();
        let z = MeasurementBasis::computational(2);
        let i = state_dependent_i(&rho, &[z.clone(), z.clone()], LogBase::Two).unwrap();
        let p = born_probabilities(&rho, &z).unwrap();
        let h = crate::majorization::shannon_entropy(p.probs(), LogBase::Two);
        assert!((i - h).abs() < 1e-14);
        // Every order agrees, so both averages do too.
        let bases = [z.clone(), z.clone(), z];
        for mode in [AverageMode::Cyclic, AverageMode::Full] {
            assert!((average_i(&rho, &bases, mode, LogBase::Two).unwrap() - h).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_weight_zero_mass_contributes_nothing() {
        // |0⟩ measured in Z twice: outcome 1 has neither chain mass nor weight.
        let rho = DensityMatrix::pure(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        let z = MeasurementBasis::computational(2);
        assert_eq!(state_dependent_i(&rho, &[z.clone(), z], LogBase::Two).unwrap(), 0.0);
    }
}
