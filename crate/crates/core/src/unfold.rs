//! Unfolding a periodic-coefficient equation into a constant-coefficient
//! system.
//!
//! Pick H > r that is a multiple of every coefficient period and decompose a
//! solution into the H subsequences y_i(n) = y(H*n + i). The original
//! equation then becomes the block recurrence
//!
//! ```text
//! A0 * (y_0(n), ..., y_{H-1}(n))^T + A1 * (y_0(n+1), ..., y_{H-1}(n+1))^T = 0
//! ```
//!
//! with H x H rational matrices: row i states the original equation at the
//! residue i, with shifts that stay below H landing in A0 and shifts that
//! wrap past H landing in A1. Periodicity is what makes the row depend on the
//! residue i only: a_k(H*n + i) = a_k(i).

use crate::equation::DifferenceEquation;
use crate::error::UnfoldError;
use crate::matrix::RatMatrix;
use crate::sequence::{lcm_period, PeriodicSequence};

/// The pair (A0, A1) together with the block size H.
#[derive(Debug, Clone, PartialEq)]
pub struct UnfoldedSystem {
    pub h: usize,
    pub a0: RatMatrix,
    pub a1: RatMatrix,
    pub source_order: usize,
}

fn periodic_coeffs(e: &DifferenceEquation) -> Result<Vec<PeriodicSequence>, UnfoldError> {
    e.coeffs()
        .iter()
        .enumerate()
        .map(|(index, c)| {
            c.as_periodic()
                .ok_or(UnfoldError::NonPeriodicCoefficient { index })
        })
        .collect()
}

/// Least common multiple of the coefficient period lengths.
pub fn coefficient_lcm(e: &DifferenceEquation) -> Result<usize, UnfoldError> {
    Ok(lcm_period(&periodic_coeffs(e)?))
}

/// Smallest valid block size: the least multiple of the period lcm L that
/// exceeds the order r, i.e. H = L * ceil((r+1)/L).
pub fn choose_h(e: &DifferenceEquation) -> Result<usize, UnfoldError> {
    let l = coefficient_lcm(e)?;
    let r = e.order();
    let h = l * (r / l + 1);
    debug_assert!(h > r && h.is_multiple_of(l));
    Ok(h)
}

/// Check a user-supplied H: it must exceed the order and be a multiple of
/// every coefficient period length.
pub fn validate_h(e: &DifferenceEquation, h: usize) -> Result<(), UnfoldError> {
    let l = coefficient_lcm(e)?;
    if h <= e.order() {
        return Err(UnfoldError::InvalidH {
            h,
            reason: format!("must exceed the equation order {}", e.order()),
        });
    }
    if !h.is_multiple_of(l) {
        return Err(UnfoldError::InvalidH {
            h,
            reason: format!("must be a multiple of the coefficient period lcm {l}"),
        });
    }
    Ok(())
}

/// Unfold with the given block size (see [`choose_h`] for the default).
pub fn unfold(e: &DifferenceEquation, h: usize) -> Result<UnfoldedSystem, UnfoldError> {
    validate_h(e, h)?;
    let coeffs = periodic_coeffs(e)?;
    let r = e.order();

    let mut a0 = RatMatrix::zero(h, h);
    let mut a1 = RatMatrix::zero(h, h);
    for i in 0..h {
        for (k, coeff) in coeffs.iter().enumerate() {
            let v = coeff.value(i as i64);
            let j = i + k;
            if j < h {
                *a0.at_mut(i, j) = v;
            } else {
                // j - h < h because k <= r < h
                *a1.at_mut(i, j - h) = v;
            }
        }
    }
    debug_assert!(r < h);

    Ok(UnfoldedSystem {
        h,
        a0,
        a1,
        source_order: r,
    })
}

/// Unfold at the smallest valid H.
pub fn unfold_minimal(e: &DifferenceEquation) -> Result<UnfoldedSystem, UnfoldError> {
    unfold(e, choose_h(e)?)
}
