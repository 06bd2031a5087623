use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RieszError {
    #[error("exponent p = {0} is outside [1, 2]")]
    InvalidExponent(f64),

    #[error("weight b = {0} must be positive and finite")]
    InvalidWeight(f64),

    /// A closed form containing sec(pi/p) was requested at p = 2.
    #[error("{0} is singular at p = 2 (degenerate_p2)")]
    DegenerateP2(&'static str),

    #[error("sample count {0} must be a power of two and at least 8")]
    InvalidSampleCount(usize),

    #[error("non-finite value at sample {0}")]
    NonFiniteSample(usize),

    #[error("L^p exponent {0} must be at least 1")]
    InvalidLpExponent(f64),

    #[error("singularity exponent bound {0} is not integrable (must be < 1)")]
    NotIntegrable(f64),

    #[error("point {0} is not in the open unit disk")]
    OutsideDisk(Complex64),

    #[error("boundary value is singular at t = 0")]
    BoundarySingularity,

    #[error("extremal exponent c = {c} must satisfy 0 < c < 1/p with p = {p}")]
    InvalidExtremalExponent { c: f64, p: f64 },

    #[error("mixing weight beta = {0} is outside [0, 1]")]
    InvalidBeta(f64),

    #[error("the fbb0 extremal exists only for p = 2 (got p = {0})")]
    Fbb0RequiresP2(f64),

    #[error("norm ratio denominator vanishes")]
    ZeroDenominator,

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, RieszError>;
