//! Exact symbolic computation for degenerate Hankel determinantal ideals.
//!
//! The crate builds coordinate sections of Hankel matrices, generates the
//! relation families among their maximal minors (Plücker, Laplace, the
//! staircase relation `f_lap`, Eagon–Northcott syzygies), and verifies
//! special-fiber invariants (dimension, multiplicity, regularity,
//! a-invariant) with a small exact Gröbner/Hilbert engine. All arithmetic
//! is over arbitrary-precision rationals; nothing is numeric-approximate.

pub mod error;
mod fastgb;
pub mod fiber;
pub mod groebner;
pub mod hankel;
pub mod hilbert;
pub mod index_set;
pub mod laplace;
pub mod linalg;
pub mod matrix;
pub mod monomial;
pub mod order;
pub mod parse;
pub mod plucker;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod syzygy;
pub mod vars;

pub use error::Error;
pub use index_set::{IndexSet, PosetRel};
pub use monomial::Monomial;
pub use order::TermOrder;
pub use poly::Polynomial;
pub use scalar::Scalar;
pub use vars::{VarId, VariableRegistry};

/// Convenient result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
