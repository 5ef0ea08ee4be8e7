use thiserror::Error;

use crate::dd::Family;

/// Errors raised by series algebra, constructions, density evolution and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("divisor has a zero constant term")]
    ZeroConstantTerm,
    #[error("inner series of a composition must vanish at 0 (constant term {0:e})")]
    NonzeroConstantTerm(f64),
    #[error("series has a zero linear term and cannot be inverted")]
    ZeroLinearTerm,
    #[error("integral over [0, 1] vanishes")]
    ZeroIntegral,
    #[error("derivative at x = 1 vanishes")]
    ZeroDerivativeAtOne,
    #[error("coefficient {0} is not finite")]
    NonFinite(usize),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("function is not strictly increasing on [0, 1] (violation near x = {0})")]
    NotMonotone(f64),
    #[error("b = {b} lies outside [{min}, 1)")]
    InvalidB { b: f64, min: f64 },
    #[error("{op} is not defined for the {family:?} family")]
    UnsupportedFamily { family: Family, op: &'static str },
    #[error("no success/failure transition between p = {lo} and p = {hi}")]
    NoTransition { lo: f64, hi: f64 },
    #[error("degenerate degree distribution: {0}")]
    DegenerateDist(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("block length {n} exceeds the dense-elimination guard {max}")]
    SizeGuard { n: usize, max: usize },
    #[error("random parity matrix is rank deficient")]
    SingularMatrix,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
