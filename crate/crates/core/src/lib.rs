//! Exact-arithmetic engine for Jordan superalgebras of Grassmann Poisson
//! brackets and their bimodules.
//!
//! The crate constructs the Kantor double `Kan(n)` of the Grassmann
//! superalgebra `G_n`, builds the one-parameter family `V(al)` of unital
//! bimodules over it, verifies the defining superidentities exhaustively over
//! exact fields (rationals or odd prime fields, optionally with a formal
//! parameter), and cross-validates the module construction against an
//! independent tensor-product realization.
//!
//! Everything is exact: no floating point, no probabilistic identity testing.
//! Identity checkers enumerate homogeneous basis tuples, which is complete by
//! multilinearity.

pub mod analysis;
pub mod bimodule;
pub mod grassmann;
pub mod kantor;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod superalg;
pub mod tensor;

pub use report::{CheckReport, Violation};
pub use scalar::{FieldContext, FieldKind, Scalar};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by a non-constant polynomial")]
    NonConstantDivisor,
    #[error("the field context has no formal parameter; enable symbolic mode")]
    NotSymbolic,
    #[error("generator count mismatch: {0} vs {1}")]
    GeneratorMismatch(usize, usize),
    #[error("generator index {0} out of range 1..={1}")]
    GeneratorOutOfRange(usize, usize),
    #[error("elements belong to different structure tables")]
    TableMismatch,
    #[error("the algebra has no unit element")]
    NonUnital,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("unit action is not diagonalizable with spectrum in {{0, 1, 1/2}}")]
    BadUnitSpectrum,
    #[error("no special element: the joint annihilator is zero")]
    EmptyKernel,
    #[error("{0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}
