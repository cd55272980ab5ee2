use thiserror::Error;

use crate::group::Regime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be an odd prime, got {0}")]
    NotOddPrime(u64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("modulus {p}^{e} does not fit the supported integer width")]
    ModulusTooLarge { p: u64, e: u32 },
    #[error("p-adic valuation of zero is undefined")]
    ZeroValuation,
    #[error("{value} is not a unit modulo {modulus}")]
    NotUnit { value: u64, modulus: u64 },
    #[error("enumeration of {what} needs {needed} steps, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
    #[error("operation not supported in regime {0:?}")]
    RegimeUnsupported(Regime),
    #[error("triplet ({a},{b},{d}) is not admissible")]
    NotAdmissible { a: u64, b: u64, d: u64 },
    #[error("triplet ({a},{b},{d}) has s = {s}, so N_Gamma is not isomorphic to G")]
    NotIsomorphic { a: u64, b: u64, d: u64, s: u32 },
    #[error("images do not define an automorphism: {0}")]
    NotAutomorphism(&'static str),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("normal form extraction failed for automorphism x->{x:?}, y->{y:?}")]
    DecompositionFailure { x: (u64, u64), y: (u64, u64) },
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
