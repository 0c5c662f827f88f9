//! The exact decision procedure: validate, choose H, unfold, run one or both
//! routes, cross-check.

use crate::equation::DifferenceEquation;
use crate::error::DimensionError;
use crate::groebner::dimension_via_module;
use crate::pencil::{dimension_via_determinant, pencil_from_unfolded, Dimension};
use crate::unfold::{choose_h, unfold};

/// Which exact route(s) to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Determinant of the Laurent pencil (the fast route, the default).
    #[default]
    Pencil,
    /// Buchberger plus standard-monomial counting (the reference route).
    Groebner,
    /// Run both and fail hard on disagreement.
    Both,
}

/// Dimension of the solution space of `e` in the ring of two-sided
/// sequences.
///
/// Requires every coefficient to be purely periodic; anything else lies in
/// the class where no algorithm can exist, and is refused rather than
/// guessed at. With [`Method::Both`] the two routes must agree; a mismatch
/// is reported as an internal error, never as an answer.
pub fn solution_space_dimension(
    e: &DifferenceEquation,
    method: Method,
) -> Result<Dimension, DimensionError> {
    if let Some(index) = e.first_non_periodic() {
        return Err(DimensionError::NonPeriodicCoefficient { index });
    }
    let h = choose_h(e)?;
    let sys = unfold(e, h)?;
    match method {
        Method::Pencil => Ok(dimension_via_determinant(&pencil_from_unfolded(&sys))),
        Method::Groebner => Ok(dimension_via_module(&sys)),
        Method::Both => {
            let pencil = dimension_via_determinant(&pencil_from_unfolded(&sys));
            let groebner = dimension_via_module(&sys);
            if pencil != groebner {
                return Err(DimensionError::RouteMismatch { pencil, groebner });
            }
            Ok(pencil)
        }
    }
}
