//! The Laurent pencil P(t) = A0 + t*A1 and the determinant route to the
//! solution-space dimension.
//!
//! Over the Laurent polynomials the unfolded system presents a module whose
//! rational dimension is the solution-space dimension of the original
//! equation. For the square pencil produced by unfolding, that dimension is
//! the degree of det P(t) after dividing out the powers of t (the units of
//! the Laurent ring are c*t^k): the sum of normalized invariant-factor
//! degrees equals the normalized determinant degree, so no Smith or Hermite
//! form is needed. A vanishing determinant means the module, and hence the
//! solution space, is infinite-dimensional.

use std::fmt;

use crate::poly::{poly_det, UniPoly};
use crate::unfold::UnfoldedSystem;

/// A nonnegative integer or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Finite(k) => write!(f, "{k}"),
            Dimension::Infinite => write!(f, "infinite"),
        }
    }
}

/// Dimension of a direct sum: addition with infinity absorbing.
impl std::ops::Add for Dimension {
    type Output = Dimension;

    fn add(self, other: Dimension) -> Dimension {
        match (self, other) {
            (Dimension::Finite(a), Dimension::Finite(b)) => Dimension::Finite(a + b),
            _ => Dimension::Infinite,
        }
    }
}

/// H x H matrix of degree <= 1 polynomials, entry (i, j) = A0[i][j] + t*A1[i][j].
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPencil {
    pub h: usize,
    pub entries: Vec<Vec<UniPoly>>,
}

/// Form the pencil of an unfolded system.
pub fn pencil_from_unfolded(sys: &UnfoldedSystem) -> LaurentPencil {
    let h = sys.h;
    let entries = (0..h)
        .map(|i| {
            (0..h)
                .map(|j| UniPoly::linear(sys.a0.at(i, j).clone(), sys.a1.at(i, j).clone()))
                .collect()
        })
        .collect();
    LaurentPencil { h, entries }
}

impl LaurentPencil {
    /// Rows that carry a t term; each contributes at most one to deg(det).
    fn degree_bound(&self) -> usize {
        self.entries
            .iter()
            .filter(|row| row.iter().any(|p| p.degree() == Some(1)))
            .count()
    }

    /// Exact determinant via evaluation and interpolation.
    pub fn det(&self) -> UniPoly {
        poly_det(&self.entries, self.degree_bound())
    }
}

/// Read the dimension off the pencil determinant: infinite when det P(t) is
/// identically zero, otherwise deg(det) minus its t-adic valuation.
pub fn dimension_via_determinant(p: &LaurentPencil) -> Dimension {
    let det = p.det();
    match (det.degree(), det.valuation()) {
        (Some(deg), Some(val)) => Dimension::Finite(deg - val),
        _ => Dimension::Infinite,
    }
}
