use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: |m[{row},{col}] - conj(m[{col},{row}])| = {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("{method} did not converge within {limit} iterations")]
    NoConvergence { method: &'static str, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("vector is not normalized (sum = {sum})")]
    NotNormalized { sum: f64 },

    #[error("entry {index} = {value:e} is negative beyond tolerance")]
    NegativeEntry { index: usize, value: f64 },

    #[error("sequence is not sorted nonincreasing at index {0}")]
    NotSorted(usize),

    #[error("invalid entropy order {0}")]
    BadOrder(f64),

    #[error("invalid subset choice: {0}")]
    InvalidChoice(String),

    #[error("enumeration requires {required} evaluations, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },

    #[error("work estimate {required} exceeds limit {limit}")]
    WorkBudgetExceeded { required: u64, limit: u64 },

    #[error("{name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("need at least {min} measurements, got {found}")]
    TooFewMeasurements { min: usize, found: usize },

    #[error("{found} measurements exceed the limit of {max}")]
    TooManyMeasurements { max: usize, found: usize },

    #[error("chain mass vanishes at terminal index {index} with positive weight {weight:e}")]
    DegenerateChain { index: usize, weight: f64 },

    #[error("log of nonpositive value {value:e} at multi-index {index:?}")]
    LogOfNonpositive { index: Vec<usize>, value: f64 },

    #[error("basis {label:?}: vectors {first} and {second} have overlap {overlap:e}")]
    NotOrthonormal {
        label: String,
        first: usize,
        second: usize,
        overlap: f64,
    },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("{0} needs a quantum state")]
    MissingState(&'static str),

    #[error("{bound} is defined for {expected} measurements, got {found}")]
    WrongMeasurementCount {
        bound: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
}
