//! Equation constructions with prescribed solution-space dimensions.
//!
//! These builders realize, in runnable form, the constructions behind the
//! undecidability results: order-0 equations of any chosen dimension,
//! zero-dimension equations of any order, order-r equations of any dimension,
//! and the reductions that tie a solution-space dimension to whether a
//! black-box sequence ever produces a nonzero (or zero) element. The latter
//! cannot be decided by any algorithm, so the equations built here around an
//! [`OracleSequence`] are meant for window-oracle demonstrations, not for the
//! exact engine.

use num_bigint::BigInt;
use num_traits::One;

use crate::equation::{interlace, interlace_many, DifferenceEquation};
use crate::error::BuildError;
use crate::rat::{rat, Rat};
use crate::sequence::{OracleSequence, Sequence};

/// A requested dimension: finite or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimSpec {
    Finite(usize),
    Infinite,
}

/// w_d: zero on 0 <= n < d, one otherwise.
fn dropout_window(d: usize) -> Sequence {
    Sequence::perturbed(vec![rat(1)], (0..d as i64).map(|n| (n, rat(0))))
}

/// The unit pulse: one at n = 0, zero otherwise.
fn unit_pulse() -> Sequence {
    Sequence::perturbed(vec![rat(0)], [(0, rat(1))])
}

/// Order-0 equation w_d(n) y(n) = 0 with solution-space dimension exactly d:
/// solutions are free precisely on the d indices where the coefficient
/// vanishes.
pub fn build_ed(d: usize) -> DifferenceEquation {
    DifferenceEquation::new(vec![dropout_window(d)])
}

/// The d = infinity analogue: the coefficient is 1 below zero and 0 from
/// zero on, so every sequence supported on the nonnegative half-line is a
/// solution. No finite exception map expresses this, hence the step kind.
pub fn build_einf() -> DifferenceEquation {
    DifferenceEquation::new(vec![Sequence::Step {
        below: rat(1),
        from: rat(0),
    }])
}

/// Order-r equation with only the zero solution: y(n+r) + p(n) y(n) = 0
/// where p is the unit pulse. For n != 0 it forces y(n+r) = 0, so y vanishes
/// away from r; the n = 0 instance y(r) + y(0) = 0 then kills y(r) too.
pub fn build_ecirc(r: usize) -> Result<DifferenceEquation, BuildError> {
    if r == 0 {
        return Err(BuildError("order must be at least 1".into()));
    }
    let mut coeffs = vec![Sequence::zero(); r + 1];
    coeffs[0] = unit_pulse();
    coeffs[r] = Sequence::constant(rat(1));
    Ok(DifferenceEquation::new(coeffs))
}

/// Order-1 equation with solution-space dimension exactly d.
///
/// d = 0 is the pulse equation above; d >= 1 is the chain y(n+1) = y(n)
/// with both coefficients zeroed at the d-1 indices 1, ..., d-1, which cuts
/// the chain into d independent one-dimensional segments. d = infinity cuts
/// it at every odd index instead, which stays purely periodic.
fn first_order_with_dim(d: DimSpec) -> DifferenceEquation {
    match d {
        DimSpec::Finite(0) => build_ecirc(1).unwrap(),
        DimSpec::Finite(d) => {
            let gaps: Vec<i64> = (1..d as i64).collect();
            DifferenceEquation::new(vec![
                Sequence::perturbed(vec![rat(-1)], gaps.iter().map(|&n| (n, rat(0)))),
                Sequence::perturbed(vec![rat(1)], gaps.iter().map(|&n| (n, rat(0)))),
            ])
        }
        DimSpec::Infinite => DifferenceEquation::new(vec![
            Sequence::periodic(vec![rat(-1), rat(0)]),
            Sequence::periodic(vec![rat(1), rat(0)]),
        ]),
    }
}

/// Order-r equation (r >= 1) with a_0 and a_r not identically zero and
/// solution-space dimension exactly d.
///
/// Built as the r-way interlacing of one order-1 dimension-d equation with
/// r-1 order-1 zero-dimension equations; interlacing keeps the order at r
/// and adds the dimensions.
pub fn build_order_r_dim_d(r: usize, d: DimSpec) -> Result<DifferenceEquation, BuildError> {
    if r == 0 {
        return Err(BuildError(
            "order must be at least 1; use build_ed for order 0".into(),
        ));
    }
    let mut parts = vec![first_order_with_dim(d)];
    for _ in 1..r {
        parts.push(first_order_with_dim(DimSpec::Finite(0)));
    }
    Ok(interlace_many(&parts))
}

/// The signal equation of a computable sequence v: a first-order equation
/// whose solution space has dimension 1 if v never takes a nonzero value and
/// dimension 0 otherwise.
///
/// The equation is y(n+1) - w(-n) y(n) = 0 where w is 1 until the scanned
/// prefix of v reveals a nonzero element and 0 afterwards; constants solve it
/// in the all-zero case, and in the other case the vanished coefficient
/// forces every solution to zero.
pub fn build_signal(v: OracleSequence) -> DifferenceEquation {
    DifferenceEquation::new(vec![
        Sequence::SignalCoeff { v },
        Sequence::constant(rat(1)),
    ])
}

/// Constant-coefficient equation with characteristic polynomial (x-1)^a.
///
/// All characteristic roots are nonzero, so the two-sided solution space has
/// dimension exactly a (the polynomial sequences of degree < a). Any
/// constant-coefficient equation of order a with nonzero trailing and leading
/// coefficients would do; this one is fixed for reproducibility.
fn constant_full_rank(a: usize) -> DifferenceEquation {
    let mut coeffs = Vec::with_capacity(a + 1);
    let mut binom = BigInt::one();
    for i in 0..=a {
        let sign = if (a - i).is_multiple_of(2) { 1 } else { -1 };
        coeffs.push(Rat::from_integer(&binom * BigInt::from(sign)));
        // C(a, i+1) = C(a, i) * (a - i) / (i + 1)
        binom = binom * BigInt::from((a - i) as i64) / BigInt::from((i + 1) as i64);
    }
    DifferenceEquation::from_constants(coeffs)
}

/// Equation whose dimension is b if v has no nonzero element and a otherwise
/// (b > a >= 0, both finite): the interlacing of a fixed a-dimensional
/// constant-coefficient equation with b - a copies of the signal equation of
/// v. For a = 0 the constant block is omitted and the result reduces to the
/// interlacing of the signal copies alone.
pub fn build_thm4_finite(
    a: usize,
    b: usize,
    v: OracleSequence,
) -> Result<DifferenceEquation, BuildError> {
    if b <= a {
        return Err(BuildError(format!("need b > a, got a = {a}, b = {b}")));
    }
    let mut parts = Vec::new();
    if a > 0 {
        parts.push(constant_full_rank(a));
    }
    for _ in 0..(b - a) {
        parts.push(build_signal(v.clone()));
    }
    Ok(interlace_many(&parts))
}

/// Equation whose dimension is b if every v(n) is nonzero and infinite if
/// some v(n) is zero: the interlacing of w(n) y(n) = 0, where w flags the
/// all-nonzero prefixes of v, with a fixed b-dimensional constant equation.
/// A zero anywhere in v makes w vanish from that point on, freeing
/// infinitely many values.
pub fn build_thm4_infinite(b: usize, v: OracleSequence) -> DifferenceEquation {
    let flag = DifferenceEquation::new(vec![Sequence::NonzeroPrefixFlag { v }]);
    interlace(&flag, &constant_full_rank(b))
}
