//! Universal algebraic geometry over finite algebras, at desk scale.
//!
//! The crate computes radicals of equation systems relative to a finite
//! algebra, congruence lattices, relative free algebras as algebras of term
//! functions, filter-powers, and the super-product machinery that ties the
//! finite-subsystem radicals of a system back to the radical of the whole
//! system. Everything is exact, deterministic and exhaustively checkable at
//! small sizes; larger inputs hit explicit caps instead of silently
//! degrading.

pub mod algebra;
pub mod caps;
pub mod congruence;
pub mod corpus;
pub mod error;
pub mod filterpower;
pub mod free;
pub mod par;
pub mod radical;
pub mod suite;
pub mod superproduct;
pub mod term;

pub use algebra::{eval_term, FiniteAlgebra, Homomorphism};
pub use caps::Caps;
pub use congruence::Congruence;
pub use error::{Error, Result};
pub use free::FreeAlgebra;
pub use radical::EquationSystem;
pub use term::{format_term, parse_term, Signature, Term};
