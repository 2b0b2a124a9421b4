//! Small generators of cocompact arithmetic Fuchsian groups.
//!
//! The crate has two halves. [`bounds`] evaluates the closed-form generator
//! bounds (trace window, injectivity radius, spectral decay exponent, and the
//! resulting norm caps) with certified interval enclosures. [`groupgen`] checks
//! the ingredients of those bounds on concrete groups `ρ(O¹)` coming from
//! quaternion orders: it enumerates the norm-one units inside a matrix-norm
//! ball, audits their traces, and certifies that small elements generate
//! larger ones.
//!
//! [`exact`], [`quat`] and [`hyp`] supply the exact and certified arithmetic
//! underneath; [`cli`] wires everything into reproducible JSON/CSV jobs.

pub mod bounds;
pub mod cli;
pub mod exact;
pub mod groupgen;
pub mod hyp;
pub mod quat;

pub use exact::{
    Decision, FieldElement, IntPolynomial, Interval, NumberField, Precision, Rational,
    RealAlgebraic,
};
pub use hyp::{IsometryClass, IsometryKind, Mat2};
pub use quat::{QuatAlgebra, QuatElement, QuatOrder, RamificationSet};
