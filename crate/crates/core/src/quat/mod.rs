//! Quaternion algebras `(a, b / k)` over a totally real field, orders, reduced
//! trace and norm, Hilbert symbols over ℚ, and the real matrix embedding ρ at
//! the distinguished place.

mod algebra;
mod config;
mod hilbert;
mod order;

pub use algebra::{embed_matrix, QuatAlgebra, QuatElement};
pub use config::{AlgebraConfig, BuiltAlgebra, ScalarSpec};
pub use hilbert::{hilbert_symbol, ramification_set, relevant_primes, Place, RamificationSet};
pub use order::QuatOrder;

use thiserror::Error;

use crate::exact::ExactError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuatError {
    #[error("Hilbert symbol arguments must be nonzero")]
    ZeroSymbolArgument,
    #[error("bad place {0:?} (expected a prime or \"inf\")")]
    BadPlace(String),
    #[error("cannot factor {0} by trial division")]
    Factorization(String),
    #[error("algebra parameters a and b must be nonzero")]
    ZeroParameter,
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("a is not positive at the distinguished place; normalize the presentation first")]
    NotSplitPresentation,
    #[error("algebra is ramified at the distinguished place (a < 0 and b < 0 there)")]
    RamifiedAtDistinguishedPlace,
    #[error("order basis is singular")]
    SingularBasis,
    #[error("order basis does not contain 1")]
    MissingIdentity,
    #[error("order basis is not closed under multiplication: e{0}·e{1} is outside the lattice")]
    NotClosed(usize, usize),
    #[error("order basis must have integral coordinates over Z[θ], which needs a monic field polynomial")]
    NonIntegralRing,
    #[error("invalid algebra config: {0}")]
    Config(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
