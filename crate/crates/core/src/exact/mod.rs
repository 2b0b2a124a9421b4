//! Exact rationals, integer polynomials, real algebraic numbers, certified
//! interval enclosures, and totally real number fields with a distinguished
//! real place.

mod field;
mod interval;
mod poly;
mod precision;
mod rational;
mod real_algebraic;

pub use field::{charpoly, clear_denominators, invert, solve, FieldElement, NumberField};
pub use interval::{pi, Interval, DEFAULT_PREC};
pub use poly::{cyclotomic, euler_phi, two_cos_minpoly, Irreducibility, IntPolynomial};
pub use precision::{Decision, Precision};
pub use rational::{
    format_rational, format_sig, is_integer, parse_rational, rational_sqrt, serde_rational, Rational,
};
pub(crate) use rational::rat;
pub use real_algebraic::RealAlgebraic;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("interval {0} contains zero")]
    ContainsZero(String),
    #[error("{op} undefined on {interval}")]
    Domain { op: &'static str, interval: String },
    #[error("polynomial {0} is reducible over the rationals")]
    Reducible(String),
    #[error("cannot certify irreducibility of degree-{0} polynomial; mark it trusted")]
    UncertifiedIrreducible(usize),
    #[error("polynomial {0} is not totally real")]
    NotTotallyReal(String),
    #[error("place index {index} out of range for degree {degree}")]
    PlaceIndex { index: usize, degree: usize },
    #[error("field elements belong to different fields")]
    FieldMismatch,
    #[error("expected {expected} coordinates, got {got}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("no root of {0} in the given enclosure")]
    NoRootInEnclosure(String),
    #[error("enclosure does not isolate a single root of {0}")]
    AmbiguousEnclosure(String),
    #[error("precision cap of {0} bits reached")]
    PrecisionCap(u32),
}
