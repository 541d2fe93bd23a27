//! Evaluate a named set of bounds for one scenario.

use std::fmt;
use std::str::FromStr;

use crate::admixture::{admixture_bound_with_limit, DEFAULT_WORK_LIMIT};
use crate::channel::{
    average_i, coles_piani_bound, deutsch_bound, liu_b, liu_b_min, maassen_uffink_bound, AverageMode,
};
use crate::error::{Error, Result};
use crate::majorization::{shannon_entropy, MajVector};
use crate::omega::{compute_omega, compute_omega_hat, omega_simple, DEFAULT_BUDGET};
use crate::quantum::{born_probabilities, overlap_matrix, von_neumann_entropy, DensityMatrix, MeasurementBasis};
use crate::LogBase;

/// Every quantity the crate reports, keyed by a stable snake_case name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundId {
    Deutsch,
    MaassenUffink,
    ColesPiani,
    LiuB,
    LiuBMin,
    CyclicAverageI,
    FullAverageI,
    Admixture,
    AdmixtureOmegaHat,
    HOmega,
    HOmegaHat,
    HOmegaSimple,
    /// `Σ_m H(Pᵐ)`.
    EntropySum,
    /// `Σ_m H(Pᵐ) + (1 − N) S(ρ)`.
    EntropySumLhs,
}

/// What a bound is a lower bound of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    EntropySum,
    EntropySumLhs,
    /// Not a bound: the quantity itself.
    Exact,
}

impl BoundId {
    pub const ALL: [BoundId; 14] = [
        BoundId::Deutsch,
        BoundId::MaassenUffink,
        BoundId::ColesPiani,
        BoundId::LiuB,
        BoundId::LiuBMin,
        BoundId::CyclicAverageI,
        BoundId::FullAverageI,
        BoundId::Admixture,
        BoundId::AdmixtureOmegaHat,
        BoundId::HOmega,
        BoundId::HOmegaHat,
        BoundId::HOmegaSimple,
        BoundId::EntropySum,
        BoundId::EntropySumLhs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundId::Deutsch => "deutsch",
            BoundId::MaassenUffink => "maassen_uffink",
            BoundId::ColesPiani => "coles_piani",
            BoundId::LiuB => "liu_b",
            BoundId::LiuBMin => "liu_b_min",
            BoundId::CyclicAverageI => "cyclic_average_I",
            BoundId::FullAverageI => "full_average_I",
            BoundId::Admixture => "admixture",
            BoundId::AdmixtureOmegaHat => "admixture_omega_hat",
            BoundId::HOmega => "H_omega",
            BoundId::HOmegaHat => "H_omega_hat",
            BoundId::HOmegaSimple => "H_omega_simple",
            BoundId::EntropySum => "entropy_sum",
            BoundId::EntropySumLhs => "entropy_sum_lhs",
        }
    }

    pub fn needs_state(self) -> bool {
        matches!(
            self,
            BoundId::CyclicAverageI | BoundId::FullAverageI | BoundId::EntropySum | BoundId::EntropySumLhs
        )
    }

    pub fn target(self) -> Target {
        match self {
            BoundId::Deutsch
            | BoundId::MaassenUffink
            | BoundId::ColesPiani
            | BoundId::HOmega
            | BoundId::HOmegaHat
            | BoundId::HOmegaSimple => Target::EntropySum,
            BoundId::LiuB
            | BoundId::LiuBMin
            | BoundId::CyclicAverageI
            | BoundId::FullAverageI
            | BoundId::Admixture
            | BoundId::AdmixtureOmegaHat => Target::EntropySumLhs,
            BoundId::EntropySum | BoundId::EntropySumLhs => Target::Exact,
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        BoundId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown bound id {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub log_base: LogBase,
    /// Cap on block-Gram evaluations per ω computation.
    pub budget: u64,
    /// Cap on the `d^{3N}` admixture work estimate.
    pub work_limit: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            log_base: LogBase::Two,
            budget: DEFAULT_BUDGET,
            work_limit: DEFAULT_WORK_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub log_base: LogBase,
    /// In request order.
    pub values: Vec<(BoundId, f64)>,
    /// Human-readable provenance notes, one per line.
    pub notes: Vec<String>,
}

/// A bound exceeding the quantity it claims to bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub bound: BoundId,
    pub value: f64,
    pub target: BoundId,
    pub target_value: f64,
}

impl BoundReport {
    pub fn get(&self, id: BoundId) -> Option<f64> {
        self.values.iter().find(|(i, _)| *i == id).map(|&(_, v)| v)
    }

    /// Bounds above their target by more than `slack`. Targets absent from the
    /// report are skipped.
    pub fn violations(&self, slack: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        for &(id, value) in &self.values {
            let target = match id.target() {
                Target::EntropySum => BoundId::EntropySum,
                Target::EntropySumLhs => BoundId::EntropySumLhs,
                Target::Exact => continue,
            };
            if let Some(target_value) = self.get(target) {
                if value > target_value + slack {
                    out.push(Violation {
                        bound: id,
                        value,
                        target,
                        target_value,
                    });
                }
            }
        }
        out
    }
}

fn require_two(id: BoundId, n: usize) -> Result<()> {
    if n != 2 {
        return Err(Error::WrongMeasurementCount {
            bound: id.name(),
            expected: 2,
            found: n,
        });
    }
    Ok(())
}

/// Lazily computed ω-family vectors shared between bounds.
struct OmegaCache<'a> {
    bases: &'a [MeasurementBasis],
    budget: u64,
    omega: Option<MajVector>,
    omega_hat: Option<MajVector>,
}

impl OmegaCache<'_> {
    fn omega(&mut self) -> Result<&MajVector> {
        if self.omega.is_none() {
            self.omega = Some(compute_omega(self.bases, self.budget)?.omega);
        }
        Ok(self.omega.as_ref().expect("filled"))
    }

    fn omega_hat(&mut self) -> Result<&MajVector> {
        if self.omega_hat.is_none() {
            self.omega_hat = Some(compute_omega_hat(self.bases, self.budget)?.omega);
        }
        Ok(self.omega_hat.as_ref().expect("filled"))
    }
}

pub fn evaluate(
    bases: &[MeasurementBasis],
    state: Option<&DensityMatrix>,
    requested: &[BoundId],
    opts: EvalOptions,
) -> Result<BoundReport> {
    let n = bases.len();
    let base = opts.log_base;
    let mut cache = OmegaCache {
        bases,
        budget: opts.budget,
        omega: None,
        omega_hat: None,
    };
    let mut values = Vec::with_capacity(requested.len());
    let mut notes = Vec::new();

    for &id in requested {
        let rho = match (id.needs_state(), state) {
            (true, None) => return Err(Error::MissingState(id.name())),
            (_, s) => s,
        };
        let value = match id {
            BoundId::Deutsch | BoundId::MaassenUffink | BoundId::ColesPiani => {
                require_two(id, n)?;
                let (c1, c2) = overlap_matrix(&bases[0], &bases[1])?.top_two();
                match id {
                    BoundId::Deutsch => deutsch_bound(c1, base)?,
                    BoundId::MaassenUffink => maassen_uffink_bound(c1, base)?,
                    _ => coles_piani_bound(c1, c2, base)?,
                }
            }
            BoundId::LiuB => -base.log(liu_b(bases)?),
            BoundId::LiuBMin => {
                let (b, _) = liu_b_min(bases)?;
                notes.push(format!(
                    "liu_b_min: -log of the channel bound b minimized over all {} measurement orders, \
                     used as the symmetrized channel baseline",
                    (1..=n).product::<usize>()
                ));
                -base.log(b)
            }
            BoundId::CyclicAverageI => average_i(rho.expect("checked"), bases, AverageMode::Cyclic, base)?,
            BoundId::FullAverageI => average_i(rho.expect("checked"), bases, AverageMode::Full, base)?,
            BoundId::Admixture | BoundId::AdmixtureOmegaHat => {
                if n == 2 {
                    notes.push(format!("{id}: N = 2 instance of the cyclic admixture construction (extension)"));
                }
                let omega = if id == BoundId::Admixture {
                    cache.omega()?.clone()
                } else {
                    cache.omega_hat()?.clone()
                };
                admixture_bound_with_limit(bases, &omega, base, opts.work_limit)?
            }
            BoundId::HOmega => shannon_entropy(cache.omega()?.entries(), base),
            BoundId::HOmegaHat => shannon_entropy(cache.omega_hat()?.entries(), base),
            BoundId::HOmegaSimple => shannon_entropy(omega_simple(bases, opts.budget)?.entries(), base),
            BoundId::EntropySum | BoundId::EntropySumLhs => {
                let rho = rho.expect("checked");
                let mut sum = 0.0;
                for b in bases {
                    sum += shannon_entropy(born_probabilities(rho, b)?.probs(), base);
                }
                if id == BoundId::EntropySumLhs {
                    sum -= (n as f64 - 1.0) * von_neumann_entropy(rho, base);
                }
                sum
            }
        };
        // Adding +0 turns −0 (from −log 1 or an empty entropy sum) into +0.
        values.push((id, value + 0.0));
    }

    Ok(BoundReport {
        log_base: base,
        values,
        notes,
    })
}
