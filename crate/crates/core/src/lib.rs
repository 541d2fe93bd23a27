//! Entropic uncertainty bounds for N projective measurements on a qudit.
//!
//! The crate computes universal majorization bounds on the joint outcome
//! distribution ⊗ₘ Pᵐ (the vector ω from block-Gram eigenvalue maximization, its
//! singular-value relaxation ω̂ and the two-entry simplification ω₀), the quantum
//! channel bound `b` with its permutation minimum `b_min`, state-dependent and
//! cyclically averaged channel bounds, and the admixture bound that combines ω
//! with the cyclic averages. Classic two-measurement bounds are included for
//! comparison.
//!
//! Modules, bottom up:
//!
//! - [`linalg`]: dense complex matrices, Jacobi eigenvalues, power iteration.
//! - [`quantum`]: bases, density matrices, Born probabilities, overlaps.
//! - [`majorization`]: the majorization order and the entropy family.
//! - [`omega`]: ω, ω̂ and ω₀.
//! - [`channel`]: `b`, `b_min`, `I(order)` and its averages, two-measurement bounds.
//! - [`admixture`]: the 𝔄 / 𝔅 construction and the admixture bound.
//! - [`report`]: evaluating a named set of bounds for one scenario.
//! - [`scenarios`]: fixtures and seeded random instances.

pub mod admixture;
pub mod channel;
mod error;
pub mod linalg;
pub mod majorization;
pub mod omega;
pub mod quantum;
pub mod report;
pub mod rng;
pub mod scenarios;

use std::fmt;
use std::str::FromStr;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenMethod};
pub use majorization::MajVector;
pub use quantum::{DensityMatrix, MeasurementBasis, OverlapMatrix, ProbVector};

pub use num_complex::Complex64;

/// Logarithm base for every entropy and bound value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum LogBase {
    /// Bits.
    #[default]
    Two,
    /// Nats.
    E,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }

    /// Converts a value measured in nats into this base.
    pub fn from_nats(self, h: f64) -> f64 {
        match self {
            LogBase::Two => h / std::f64::consts::LN_2,
            LogBase::E => h,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            LogBase::Two => "bits",
            LogBase::E => "nats",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Two => "2",
            LogBase::E => "e",
        })
    }
}

impl FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "2" | "two" | "bits" => Ok(LogBase::Two),
            "e" | "E" | "ln" | "nats" => Ok(LogBase::E),
            other => Err(format!("unsupported log base {other:?} (expected \"2\" or \"e\")")),
        }
    }
}
