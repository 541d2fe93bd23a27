//! Universal majorization bounds on the joint distribution ⊗ₘ Pᵐ.
//!
//! For a target `k`, every choice of nonempty index subsets `S₁, …, S_N` (one per
//! basis) with `Σ|S_m| = k + N − 1` gives a block-Gram matrix `U` whose diagonal
//! blocks are identities and whose off-diagonal blocks hold the inner products of
//! the chosen vectors. `s_k` is the largest λ₁(U) over all sizes and all subsets,
//! `Ω_k = (s_k/N)^N`, and ω is the vector of consecutive differences of the Ω_k.
//!
//! The relaxation ω̂ replaces λ₁(U) by `1 + Σ σ₁(U_mn)` over off-diagonal blocks
//! (Weyl's inequality on `U = I + Σ CU_mn`), and ω₀ keeps only `(Ω₁, 1 − Ω₁)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{top_eigenvalue, top_singular_value, ComplexMatrix, EigenMethod, JACOBI_TOL};
use crate::majorization::MajVector;
use crate::quantum::MeasurementBasis;
use crate::Complex64;

/// Default cap on block-Gram evaluations per bound computation.
pub const DEFAULT_BUDGET: u64 = 2_000_000;
/// Ω values this close to 1 are treated as exactly 1.
pub const OMEGA_CEILING_TOL: f64 = 1e-12;

/// One index subset per measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetChoice {
    subsets: Vec<Vec<usize>>,
}

impl SubsetChoice {
    pub fn new(subsets: Vec<Vec<usize>>) -> Self {
        Self { subsets }
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.subsets.iter().map(Vec::len).collect()
    }

    /// The `k` this choice contributes to: `Σ S_m − N + 1`.
    pub fn target_k(&self) -> usize {
        (self.subsets.iter().map(Vec::len).sum::<usize>() + 1).saturating_sub(self.subsets.len())
    }

    pub fn validate(&self, n_meas: usize, dim: usize) -> Result<()> {
        if self.subsets.len() != n_meas {
            return Err(Error::InvalidChoice(format!(
                "{} subsets for {} measurements",
                self.subsets.len(),
                n_meas
            )));
        }
        for (m, s) in self.subsets.iter().enumerate() {
            if s.is_empty() || s.len() > dim {
                return Err(Error::InvalidChoice(format!(
                    "measurement {m}: size {} outside [1, {dim}]",
                    s.len()
                )));
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidChoice(format!(
                    "measurement {m}: indices {s:?} not strictly increasing"
                )));
            }
            if let Some(&bad) = s.iter().find(|&&i| i >= dim) {
                return Err(Error::InvalidChoice(format!(
                    "measurement {m}: index {bad} out of range"
                )));
            }
        }
        Ok(())
    }
}

/// Which off-diagonal blocks enter the singular-value relaxation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelaxationPairs {
    /// Every block `U_mn`, `m < n`. This is the decomposition `U = I + Σ CU_mn`.
    #[default]
    All,
    /// Only `U_{m,m+1}`. Not an upper bound on λ₁(U) once N ≥ 3.
    Consecutive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmegaResult {
    /// `s_k` (or `ŝ_k` for the relaxation), k = 1..=a+1.
    pub s: Vec<f64>,
    /// Ω_k, nondecreasing, last entry exactly 1.
    pub omega_partial: Vec<f64>,
    pub omega: MajVector,
    /// Number of Ω_k strictly below 1.
    pub a: usize,
    pub enumeration_count: u64,
}

fn check_bases(bases: &[MeasurementBasis]) -> Result<usize> {
    let dim = bases.first().map(MeasurementBasis::dim).ok_or(Error::TooFewMeasurements {
        min: 1,
        found: 0,
    })?;
    if let Some(b) = bases.iter().find(|b| b.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: b.dim(),
        });
    }
    Ok(dim)
}

/// Inner products ⟨u^m_x|u^n_y⟩ of all N·d basis vectors, indexed `m·d + x`.
struct GramTable {
    n_meas: usize,
    dim: usize,
    table: ComplexMatrix,
}

impl GramTable {
    fn new(bases: &[MeasurementBasis]) -> Result<Self> {
        let dim = check_bases(bases)?;
        let columns: Vec<Vec<Complex64>> = bases.iter().flat_map(|b| b.vectors().iter().cloned()).collect();
        let stacked = ComplexMatrix::from_columns(&columns)?;
        let table = stacked.adjoint().matmul(&stacked)?;
        Ok(Self {
            n_meas: bases.len(),
            dim,
            table,
        })
    }

    fn global(&self, choice: &SubsetChoice) -> Vec<usize> {
        choice
            .subsets()
            .iter()
            .enumerate()
            .flat_map(|(m, s)| s.iter().map(move |&x| m * self.dim + x))
            .collect()
    }

    fn block_gram(&self, choice: &SubsetChoice) -> ComplexMatrix {
        let idx = self.global(choice);
        let mut u = self.table.select(&idx, &idx);
        // Diagonal blocks are exactly the identity.
        let mut offset = 0;
        for s in choice.subsets() {
            for a in 0..s.len() {
                for b in 0..s.len() {
                    u[(offset + a, offset + b)] = Complex64::new(if a == b { 1.0 } else { 0.0 }, 0.0);
                }
            }
            offset += s.len();
        }
        u
    }

    fn block(&self, choice: &SubsetChoice, m: usize, n: usize) -> ComplexMatrix {
        let rows: Vec<usize> = choice.subsets()[m].iter().map(|&x| m * self.dim + x).collect();
        let cols: Vec<usize> = choice.subsets()[n].iter().map(|&y| n * self.dim + y).collect();
        self.table.select(&rows, &cols)
    }
}

/// The block matrix `U(S₁, …, S_N)` for one subset choice.
pub fn block_gram(bases: &[MeasurementBasis], choice: &SubsetChoice) -> Result<ComplexMatrix> {
    let gram = GramTable::new(bases)?;
    choice.validate(gram.n_meas, gram.dim)?;
    Ok(gram.block_gram(choice))
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Size compositions `S₁ + … + S_N = total` with each `S_m ∈ [1, dim]`, lexicographic.
fn compositions(n_meas: usize, dim: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, dim: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for s in 1..=dim.min(left) {
            if left - s < parts - 1 || left - s > (parts - 1) * dim {
                continue;
            }
            cur.push(s);
            rec(left - s, parts - 1, dim, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, n_meas, dim, &mut Vec::new(), &mut out);
    out
}

/// Number of subset choices examined for target `k`.
pub fn enumeration_count(n_meas: usize, dim: usize, k: usize) -> u64 {
    compositions(n_meas, dim, k + n_meas - 1)
        .iter()
        .map(|sizes| sizes.iter().map(|&s| binomial(dim, s)).product::<u64>())
        .sum()
}

#[derive(Clone, Copy)]
enum Objective {
    TopEigenvalue,
    SingularSum(RelaxationPairs),
}

impl Objective {
    fn evaluate(self, gram: &GramTable, choice: &SubsetChoice) -> Result<f64> {
        match self {
            Objective::TopEigenvalue => top_eigenvalue(&gram.block_gram(choice), EigenMethod::Exact, JACOBI_TOL),
            Objective::SingularSum(pairs) => {
                let n = gram.n_meas;
                let mut sum = 0.0;
                for m in 0..n {
                    for l in (m + 1)..n {
                        if pairs == RelaxationPairs::Consecutive && l != m + 1 {
                            continue;
                        }
                        sum += top_singular_value(&gram.block(choice, m, l));
                    }
                }
                Ok(sum)
            }
        }
    }
}

/// Exhaustive maximum of `objective` over all choices for target `k`.
fn maximize(gram: &GramTable, k: usize, objective: Objective) -> Result<f64> {
    let n = gram.n_meas;
    let d = gram.dim;
    let combos: Vec<Vec<Vec<usize>>> = (0..=d).map(|s| combinations(d, s)).collect();
    let mut best = f64::NEG_INFINITY;
    for sizes in compositions(n, d, k + n - 1) {
        let radices: Vec<usize> = sizes.iter().map(|&s| combos[s].len()).collect();
        let count: usize = radices.iter().product();
        let local = (0..count)
            .into_par_iter()
            .map(|mut idx| {
                let mut subsets = vec![Vec::new(); n];
                for m in (0..n).rev() {
                    subsets[m] = combos[sizes[m]][idx % radices[m]].clone();
                    idx /= radices[m];
                }
                objective.evaluate(gram, &SubsetChoice::new(subsets))
            })
            .try_reduce(|| f64::NEG_INFINITY, |a, b| Ok(a.max(b)))?;
        best = best.max(local);
    }
    Ok(best)
}

fn check_k(n_meas: usize, dim: usize, k: usize) -> Result<()> {
    if k == 0 || k + n_meas - 1 > n_meas * dim {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as f64,
        });
    }
    Ok(())
}

/// `s_k = max λ₁(U(S₁, …, S_N))` over all sizes summing to `k + N − 1` and all subsets.
pub fn compute_s_k(bases: &[MeasurementBasis], k: usize, budget: u64) -> Result<f64> {
    let gram = GramTable::new(bases)?;
    check_k(gram.n_meas, gram.dim, k)?;
    let required = enumeration_count(gram.n_meas, gram.dim, k);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    maximize(&gram, k, Objective::TopEigenvalue)
}

/// `ŝ_k = max Σ σ₁(U_mn)` over the same choice space as [`compute_s_k`].
pub fn compute_s_hat_k(
    bases: &[MeasurementBasis],
    k: usize,
    budget: u64,
    pairs: RelaxationPairs,
) -> Result<f64> {
    let gram = GramTable::new(bases)?;
    check_k(gram.n_meas, gram.dim, k)?;
    let required = enumeration_count(gram.n_meas, gram.dim, k);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    maximize(&gram, k, Objective::SingularSum(pairs))
}

fn omega_sequence(
    bases: &[MeasurementBasis],
    budget: u64,
    objective: Objective,
    to_omega: impl Fn(f64, usize) -> f64,
) -> Result<OmegaResult> {
    if bases.len() < 2 {
        return Err(Error::TooFewMeasurements {
            min: 2,
            found: bases.len(),
        });
    }
    let gram = GramTable::new(bases)?;
    let (n, d) = (gram.n_meas, gram.dim);

    let mut s = Vec::new();
    let mut omega_partial: Vec<f64> = Vec::new();
    let mut spent = 0u64;
    for k in 1..=(n * (d - 1) + 1) {
        let required = enumeration_count(n, d, k);
        if spent + required > budget {
            return Err(Error::BudgetExceeded {
                required: spent + required,
                budget,
            });
        }
        spent += required;

        let mut sk = maximize(&gram, k, objective)?;
        // The max over a superset of choices cannot decrease.
        if let Some(&prev) = s.last() {
            sk = f64::max(sk, prev);
        }
        s.push(sk);

        let mut om = to_omega(sk, n).min(1.0);
        if let Some(&prev) = omega_partial.last() {
            om = om.max(prev);
        }
        if om >= 1.0 - OMEGA_CEILING_TOL {
            om = 1.0;
        }
        omega_partial.push(om);
        if om == 1.0 {
            break;
        }
    }
    // With every S_m = d, U is the Gram matrix of N orthonormal bases and λ₁ = N.
    if omega_partial.last() != Some(&1.0) {
        omega_partial.push(1.0);
    }

    let a = omega_partial.len() - 1;
    let omega = MajVector::from_partial_sums(&omega_partial)?;
    Ok(OmegaResult {
        s,
        omega_partial,
        omega,
        a,
        enumeration_count: spent,
    })
}

/// ω = (Ω₁, Ω₂ − Ω₁, …, 1 − Ω_a) with `Ω_k = (s_k/N)^N`.
pub fn compute_omega(bases: &[MeasurementBasis], budget: u64) -> Result<OmegaResult> {
    omega_sequence(bases, budget, Objective::TopEigenvalue, |s, n| (s / n as f64).powi(n as i32))
}

/// ω̂ with `Ω̂_k = ((1 + ŝ_k)/N)^N`, summing σ₁ over all off-diagonal blocks.
pub fn compute_omega_hat(bases: &[MeasurementBasis], budget: u64) -> Result<OmegaResult> {
    compute_omega_hat_with(bases, budget, RelaxationPairs::All)
}

pub fn compute_omega_hat_with(
    bases: &[MeasurementBasis],
    budget: u64,
    pairs: RelaxationPairs,
) -> Result<OmegaResult> {
    omega_sequence(bases, budget, Objective::SingularSum(pairs), |s, n| {
        ((1.0 + s) / n as f64).powi(n as i32)
    })
}

/// ω₀ = (Ω₁, 1 − Ω₁), in short form.
pub fn omega_simple(bases: &[MeasurementBasis], budget: u64) -> Result<MajVector> {
    if bases.len() < 2 {
        return Err(Error::TooFewMeasurements {
            min: 2,
            found: bases.len(),
        });
    }
    let n = bases.len();
    let s1 = compute_s_k(bases, 1, budget)?;
    let om = (s1 / n as f64).powi(n as i32).min(1.0);
    if om >= 1.0 - OMEGA_CEILING_TOL {
        MajVector::new(vec![1.0])
    } else {
        MajVector::new(vec![om, 1.0 - om])
    }
}
