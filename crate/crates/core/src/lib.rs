//! Exact solution-space dimension of linear difference equations.
//!
//! The central object is the linear difference equation
//!
//! ```text
//! a_r(n) y(n+r) + ... + a_1(n) y(n+1) + a_0(n) y(n) = 0
//! ```
//!
//! whose coefficients and solutions are two-sided sequences of rationals.
//! For purely periodic coefficients the crate decides the dimension of the
//! solution space exactly, by unfolding the equation into a constant
//! coefficient system and reading the dimension off a Laurent pencil
//! determinant, with an independent Gröbner-basis route for cross-checking.
//! For general computable coefficients (where no algorithm can exist) it
//! provides gadget constructions with prescribed dimensions and a brute-force
//! window oracle that estimates dimensions from finite linear algebra.

pub mod dimension;
pub mod equation;
pub mod error;
pub mod format;
pub mod gadgets;
pub mod groebner;
pub mod matrix;
pub mod oracle;
pub mod pencil;
pub mod poly;
pub mod rat;
pub mod sequence;
pub mod subprocess;
pub mod unfold;

pub use dimension::{solution_space_dimension, Method};
pub use equation::DifferenceEquation;
pub use error::{BuildError, DimensionError, EvalError, FormatError, UnfoldError};
pub use pencil::{Dimension, LaurentPencil};
pub use rat::Rat;
pub use sequence::{OracleSequence, PeriodicSequence, PerturbedSequence, Sequence};
pub use unfold::UnfoldedSystem;
