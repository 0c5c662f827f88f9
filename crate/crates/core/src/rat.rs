//! Exact rational scalars.
//!
//! All arithmetic in this crate happens over the rationals with
//! arbitrary-precision integers; there is no floating point anywhere.
//! Values are kept canonical by construction: reduced, positive denominator,
//! zero represented as 0/1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The scalar type: an arbitrary-precision rational, always reduced with a
/// positive denominator.
pub type Rat = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for p/q. Panics if q == 0.
pub fn ratio(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parse a rational from the textual forms "p" and "p/q".
///
/// Signs are accepted on both parts and the result is normalized (reduced,
/// denominator > 0). A zero denominator is rejected.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational".into());
    }
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p
        .trim()
        .parse()
        .map_err(|_| format!("invalid integer {p:?} in rational {s:?}"))?;
    let q: BigInt = q
        .trim()
        .parse()
        .map_err(|_| format!("invalid integer {q:?} in rational {s:?}"))?;
    if q.is_zero() {
        return Err(format!("zero denominator in rational {s:?}"));
    }
    Ok(Rat::new(p, q))
}

/// Render a rational as "p" or "p/q" with q > 0.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True if the rational is a (possibly negative) integer.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Absolute value.
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}
