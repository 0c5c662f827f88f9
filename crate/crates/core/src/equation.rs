//! Linear difference equations and the interlacing construction.
//!
//! An equation of order r is the constraint
//!
//! ```text
//! a_r(n) y(n+r) + ... + a_1(n) y(n+1) + a_0(n) y(n) = 0   for all n
//! ```
//!
//! given by its r+1 coefficient sequences. The order is exactly as declared:
//! a leading coefficient that happens to vanish identically is not trimmed.

use num_traits::Zero;

use crate::error::{BuildError, EvalError};
use crate::rat::Rat;
use crate::sequence::Sequence;

#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceEquation {
    coeffs: Vec<Sequence>,
}

impl DifferenceEquation {
    /// Build from coefficients a_0, ..., a_r. Panics on an empty list.
    pub fn new(coeffs: Vec<Sequence>) -> Self {
        assert!(!coeffs.is_empty(), "an equation needs at least a_0");
        DifferenceEquation { coeffs }
    }

    /// Order-r equation with constant rational coefficients a_0, ..., a_r.
    pub fn from_constants(coeffs: Vec<Rat>) -> Self {
        DifferenceEquation::new(coeffs.into_iter().map(Sequence::constant).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Sequence] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Sequence {
        &self.coeffs[i]
    }

    /// Index of the first coefficient that is not purely periodic, if any.
    pub fn first_non_periodic(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_purely_periodic())
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.first_non_periodic().is_none()
    }

    /// Left-hand side at n for candidate values given by `y`.
    pub fn lhs(&self, n: i64, y: &dyn Fn(i64) -> Rat) -> Result<Rat, EvalError> {
        let mut acc = Rat::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            let c = a.eval(n)?;
            if !c.is_zero() {
                acc += c * y(n + i as i64);
            }
        }
        Ok(acc)
    }

    /// The same equation padded with identically zero coefficients up to the
    /// given order.
    pub fn padded_to(&self, order: usize) -> DifferenceEquation {
        assert!(order >= self.order(), "cannot pad below the current order");
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Sequence::zero());
        DifferenceEquation { coeffs }
    }

    /// Every coefficient replaced by n -> a_i(n + shift). Solutions shift
    /// correspondingly, so the solution-space dimension is preserved.
    /// Requires purely periodic coefficients.
    pub fn rotated(&self, shift: i64) -> Result<DifferenceEquation, BuildError> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.as_periodic()
                    .map(|p| Sequence::Periodic(p.rotated(shift)))
                    .ok_or_else(|| {
                        BuildError(format!(
                            "rotate requires periodic coefficients; a_{i} is not"
                        ))
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DifferenceEquation { coeffs })
    }
}

/// Interlacing of two equations.
///
/// Both inputs are padded to a common order r; the result has order 2r and
/// its solutions are exactly the sequences whose even-indexed subsequence
/// solves `e1` and whose odd-indexed subsequence solves `e2`. Dimensions add.
pub fn interlace(e1: &DifferenceEquation, e2: &DifferenceEquation) -> DifferenceEquation {
    interlace_many(&[e1.clone(), e2.clone()])
}

/// Interlacing of k >= 1 equations; `interlace` is the k = 2 case.
///
/// All inputs are padded to the common order q and the result has order k*q:
/// only the shifts that are multiples of k carry coefficients, and the
/// coefficient at shift k*i is the round-robin interleaving of the a_i
/// streams of the inputs. The solutions are exactly the sequences y such
/// that n -> y(k*n + j) solves the j-th input for every j.
pub fn interlace_many(parts: &[DifferenceEquation]) -> DifferenceEquation {
    assert!(!parts.is_empty(), "interlacing of an empty list");
    if parts.len() == 1 {
        return parts[0].clone();
    }
    let k = parts.len();
    let q = parts.iter().map(DifferenceEquation::order).max().unwrap();
    let padded: Vec<DifferenceEquation> = parts.iter().map(|e| e.padded_to(q)).collect();

    let mut coeffs = vec![Sequence::zero(); k * q + 1];
    for i in 0..=q {
        let streams: Vec<Sequence> = padded.iter().map(|e| e.coeff(i).clone()).collect();
        coeffs[k * i] = Sequence::interleave(streams);
    }
    DifferenceEquation { coeffs }
}
