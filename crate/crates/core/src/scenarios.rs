//! Measurement families and seeded random fixtures.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{inner_product, vector_norm, ComplexMatrix};
use crate::quantum::{DensityMatrix, MeasurementBasis};
use crate::rng::SplitMix64;

/// Parameters of the three-measurement qutrit family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QutritFamilyParams {
    pub a: f64,
    pub phi: f64,
}

impl QutritFamilyParams {
    pub fn new(a: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::OutOfRange { name: "a", value: a });
        }
        if !phi.is_finite() {
            return Err(Error::OutOfRange { name: "phi", value: phi });
        }
        Ok(Self { a, phi })
    }
}

/// Three qutrit measurements:
///
/// - M₁: the computational basis;
/// - M₂: `(1/√2, 0, −1/√2)`, `(0, 1, 0)`, `(1/√2, 0, 1/√2)`;
/// - M₃: `(√a, e^{iφ}√(1−a), 0)`, `(√(1−a), −e^{iφ}√a, 0)`, `(0, 0, 1)`.
pub fn qutrit_family(params: QutritFamilyParams) -> Result<Vec<MeasurementBasis>> {
    let QutritFamilyParams { a, phi } = QutritFamilyParams::new(params.a, params.phi)?;
    let r = |x: f64| Complex64::new(x, 0.0);
    let zero = r(0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let phase = Complex64::from_polar(1.0, phi);

    let m1 = MeasurementBasis::computational(3).with_label("M1");
    let m2 = MeasurementBasis::new(
        "M2",
        vec![
            vec![r(h), zero, r(-h)],
            vec![zero, r(1.0), zero],
            vec![r(h), zero, r(h)],
        ],
    )?;
    let m3 = MeasurementBasis::new(
        "M3",
        vec![
            vec![r(a.sqrt()), phase * (1.0 - a).sqrt(), zero],
            vec![r((1.0 - a).sqrt()), -phase * a.sqrt(), zero],
            vec![zero, zero, r(1.0)],
        ],
    )?;
    Ok(vec![m1, m2, m3])
}

/// Computational, Hadamard and circular (σ_y eigen-) bases of a qubit.
pub fn mub_qubit() -> Vec<MeasurementBasis> {
    // Each vector carries the global phase e^{iπ/4}, so every amplitude is
    // (±1 ± i)/2 and every squared overlap is exactly 1/2 in binary floating point.
    let p = Complex64::new(0.5, 0.5);
    let q = Complex64::new(-0.5, 0.5);
    vec![
        MeasurementBasis::computational(2).with_label("Z"),
        MeasurementBasis::new("X", vec![vec![p, p], vec![p, -p]]).expect("orthonormal"),
        MeasurementBasis::new("Y", vec![vec![p, q], vec![p, -q]]).expect("orthonormal"),
    ]
}

fn ginibre(rows: usize, cols: usize, rng: &mut SplitMix64) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            g[(i, j)] = rng.next_complex_gaussian();
        }
    }
    g
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::OutOfRange { name: "dim", value: 0.0 });
    }
    Ok(())
}

/// Gram–Schmidt (two passes) on the columns of a Ginibre matrix drawn from `seed`.
pub fn random_basis(dim: usize, seed: u64) -> Result<MeasurementBasis> {
    check_dim(dim)?;
    let mut rng = SplitMix64::new(seed);
    let g = ginibre(dim, dim, &mut rng);
    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &vectors {
                let proj = inner_product(q, &v);
                v.iter_mut().zip(q).for_each(|(x, qi)| *x -= proj * qi);
            }
        }
        let norm = vector_norm(&v);
        v.iter_mut().for_each(|x| *x /= norm);
        vectors.push(v);
    }
    MeasurementBasis::new(format!("random[{seed}]"), vectors)
}

/// `G G† / tr(G G†)` for a `dim × rank` Ginibre matrix `G` drawn from `seed`.
pub fn random_state(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    check_dim(dim)?;
    if rank == 0 || rank > dim {
        return Err(Error::OutOfRange {
            name: "rank",
            value: rank as f64,
        });
    }
    let mut rng = SplitMix64::new(seed);
    let g = ginibre(dim, rank, &mut rng);
    let w = g.matmul(&g.adjoint())?;
    let tr = w.trace().re;
    let mut rho = w.scale(Complex64::new(1.0 / tr, 0.0));
    // Exact Hermitian symmetry.
    for i in 0..dim {
        rho[(i, i)] = Complex64::new(rho[(i, i)].re, 0.0);
        for j in (i + 1)..dim {
            rho[(j, i)] = rho[(i, j)].conj();
        }
    }
    DensityMatrix::new(rho)
}

/// A random set of bases plus a state, all derived from one seed.
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub bases: Vec<MeasurementBasis>,
    pub state: DensityMatrix,
}

/// Sub-seeds are consecutive SplitMix64 outputs of `seed`: one per basis, then
/// one for the state.
pub fn random_instance(dim: usize, n_meas: usize, rank: usize, seed: u64) -> Result<RandomInstance> {
    let mut rng = SplitMix64::new(seed);
    let bases = (0..n_meas)
        .map(|m| random_basis(dim, rng.next_u64()).map(|b| b.with_label(format!("B{}", m + 1))))
        .collect::<Result<Vec<_>>>()?;
    let state = random_state(dim, rank, rng.next_u64())?;
    Ok(RandomInstance { bases, state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{overlap_matrix, von_neumann_entropy};
    use crate::LogBase;

    #[test]
    fn family_endpoints() {
        let at_one = qutrit_family(QutritFamilyParams::new(1.0, 0.3).unwrap()).unwrap();
        let ov = overlap_matrix(&at_one[0], &at_one[2]).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert!((ov.get(x, y) - if x == y { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
        let at_zero = qutrit_family(QutritFamilyParams::new(0.0, 0.3).unwrap()).unwrap();
        let ov = overlap_matrix(&at_zero[0], &at_zero[2]).unwrap();
        // M₃ = (e^{iφ}|1⟩, |0⟩, |2⟩)
        assert!((ov.get(1, 0) - 1.0).abs() < 1e-15);
        assert!((ov.get(0, 1) - 1.0).abs() < 1e-15);
        assert!((ov.get(2, 2) - 1.0).abs() < 1e-15);
        assert!(QutritFamilyParams::new(1.5, 0.0).is_err());
    }

    #[test]
    fn family_first_overlap_is_exact() {
        let bases = qutrit_family(QutritFamilyParams::new(0.5, std::f64::consts::FRAC_PI_2).unwrap())
            .unwrap();
        let ov = overlap_matrix(&bases[0], &bases[1]).unwrap();
        let expected = [0.5, 0.0, 0.5, 0.0, 1.0, 0.0, 0.5, 0.0, 0.5];
        for (a, b) in ov.entries().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn mub_fixture() {
        let bases = mub_qubit();
        assert_eq!(bases[0].dim(), 2);
        for i in 0..3 {
            for j in (i + 1)..3 {
                let ov = overlap_matrix(&bases[i], &bases[j]).unwrap();
                assert!(ov.entries().iter().all(|&c| c == 0.5));
            }
        }
    }

    #[test]
    fn seeds_repeat() {
        assert_eq!(random_basis(3, 11).unwrap(), random_basis(3, 11).unwrap());
        assert_ne!(random_basis(3, 11).unwrap(), random_basis(3, 12).unwrap());
        assert_eq!(random_state(3, 2, 5).unwrap(), random_state(3, 2, 5).unwrap());
    }

    #[test]
    fn rank_controls_purity() {
        let pure = random_state(3, 1, 9).unwrap();
        assert!(von_neumann_entropy(&pure, LogBase::Two).abs() < 1e-9);
        let full = random_state(3, 3, 9).unwrap();
        assert!(von_neumann_entropy(&full, LogBase::Two) > 1e-3);
        assert!(random_state(3, 4, 9).is_err());
    }
}
