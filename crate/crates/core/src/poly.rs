//! Univariate polynomials over the rationals.
//!
//! Coefficients are stored by ascending degree with no trailing zeros; the
//! empty list is the zero polynomial. Determinants of polynomial matrices
//! are computed by evaluation at distinct rational points followed by
//! Lagrange interpolation, so the only elimination code in the crate is the
//! scalar one in [`crate::matrix`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::matrix::RatMatrix;
use crate::rat::{format_rat, rat, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    /// Build from ascending-degree coefficients; trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        UniPoly::new(vec![c])
    }

    /// The monomial c * t^k.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        UniPoly::new(coeffs)
    }

    /// a + b*t, the general pencil entry.
    pub fn linear(a: Rat, b: Rat) -> Self {
        UniPoly::new(vec![a, b])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient (t-adic valuation), or None
    /// for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Unique interpolating polynomial through points with distinct abscissas.
    pub fn interpolate(points: &[(Rat, Rat)]) -> UniPoly {
        // Lagrange form, assembled incrementally.
        let mut result = UniPoly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = UniPoly::constant(Rat::one());
            let mut denom = Rat::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                basis = &basis * &UniPoly::linear(-xj.clone(), Rat::one());
                denom *= xi - xj;
            }
            result = &result + &(&basis * &UniPoly::constant(yi / denom));
        }
        result
    }
}

/// Exact determinant of a square matrix of polynomials.
///
/// `degree_bound` must be at least deg(det). The determinant is recovered
/// from `degree_bound + 1` scalar determinants at the points 0, 1, ...,
/// `degree_bound`, each computed by fraction-free elimination.
pub fn poly_det(m: &[Vec<UniPoly>], degree_bound: usize) -> UniPoly {
    let n = m.len();
    assert!(
        m.iter().all(|row| row.len() == n),
        "polynomial determinant of a non-square matrix"
    );
    if n == 0 {
        return UniPoly::constant(Rat::one());
    }
    let mut points = Vec::with_capacity(degree_bound + 1);
    for k in 0..=degree_bound {
        let x = rat(k as i64);
        let scalar = RatMatrix::from_rows(
            m.iter()
                .map(|row| row.iter().map(|p| p.eval(&x)).collect())
                .collect(),
        );
        points.push((x, scalar.det()));
    }
    UniPoly::interpolate(&points)
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UniPoly::new(coeffs)
    }
}

/// Canonical text form: descending degree, e.g. "t^2 - 4t - 1" and "-t + 6".
impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if k == 0 {
                write!(f, "{}", format_rat(&a))?;
            } else {
                if !a.is_one() {
                    if a.denom().is_one() {
                        write!(f, "{}", format_rat(&a))?;
                    } else {
                        write!(f, "{}*", format_rat(&a))?;
                    }
                }
                if k == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{k}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;

    fn t() -> UniPoly {
        UniPoly::monomial(rat(1), 1)
    }

    fn c(n: i64) -> UniPoly {
        UniPoly::constant(rat(n))
    }

    #[test]
    fn normalization_drops_trailing_zeros() {
        let p = UniPoly::new(vec![rat(1), rat(0), rat(0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(UniPoly::new(vec![rat(0)]).is_zero());
        assert_eq!(UniPoly::zero().degree(), None);
    }

    #[test]
    fn valuation_and_degree() {
        // t^3 - 2t
        let p = UniPoly::new(vec![rat(0), rat(-2), rat(0), rat(1)]);
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.valuation(), Some(1));
    }

    #[test]
    fn det_diag_t() {
        let m = vec![vec![t(), c(0)], vec![c(0), t()]];
        assert_eq!(poly_det(&m, 2), UniPoly::monomial(rat(1), 2));
    }

    #[test]
    fn det_fibonacci_pencil() {
        // hand expansion gives t^2 - 4t - 1
        let m = vec![
            vec![c(-1), c(-1), c(1)],
            vec![t(), c(-1), c(-1)],
            vec![&c(0) - &t(), t(), c(-1)],
        ];
        let d = poly_det(&m, 2);
        assert_eq!(d, UniPoly::new(vec![rat(-1), rat(-4), rat(1)]));
        assert_eq!(d.to_string(), "t^2 - 4t - 1");
    }

    #[test]
    fn det_hand_2x2() {
        // [[-1, 1], [t, 0]] expands to -t
        let m = vec![vec![c(-1), c(1)], vec![t(), c(0)]];
        assert_eq!(poly_det(&m, 1), UniPoly::monomial(rat(-1), 1));
    }

    #[test]
    fn display_canonical_forms() {
        assert_eq!(UniPoly::new(vec![rat(6), rat(-1)]).to_string(), "-t + 6");
        assert_eq!(UniPoly::zero().to_string(), "0");
        assert_eq!(UniPoly::monomial(rat(-1), 1).to_string(), "-t");
        assert_eq!(
            UniPoly::new(vec![ratio(1, 2), rat(0), rat(3)]).to_string(),
            "3t^2 + 1/2"
        );
        assert_eq!(
            UniPoly::new(vec![rat(0), ratio(-2, 3)]).to_string(),
            "-2/3*t"
        );
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = UniPoly::new(vec![ratio(1, 3), rat(-2), rat(0), rat(5)]);
        let pts: Vec<(Rat, Rat)> = (0..4).map(|k| (rat(k), p.eval(&rat(k)))).collect();
        assert_eq!(UniPoly::interpolate(&pts), p);
    }
}
