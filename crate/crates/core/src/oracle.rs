//! Brute-force window oracle.
//!
//! Restrict a candidate solution to a window [-W, W] and impose the equation
//! at every index where all referenced values stay inside: the solutions
//! form the kernel of a banded rational matrix. Growing the outer window
//! while projecting onto a fixed inner window [-W0, W0] squeezes out the
//! boundary artifacts; when the projected dimension stops moving for several
//! steps it is taken as the estimate for that inner radius, and when the
//! per-radius estimates stop moving as well the run reports `Stabilized`.
//!
//! The oracle is a test instrument. For purely periodic coefficients it is
//! validated against the exact engine; for oracle-backed coefficients no
//! finite computation can certify the answer (that impossibility is the
//! point of the gadget equations), so a stabilized status is a heuristic
//! observation, never a proof.

use num_traits::Zero;

use crate::equation::DifferenceEquation;
use crate::error::EvalError;
use crate::matrix::RatMatrix;
use crate::rat::Rat;
use crate::unfold::choose_h;

/// A solution restricted to a window of indices.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSolution {
    pub lo: i64,
    pub hi: i64,
    pub values: Vec<Rat>,
}

impl WindowSolution {
    pub fn value(&self, n: i64) -> &Rat {
        assert!((self.lo..=self.hi).contains(&n), "index outside the window");
        &self.values[(n - self.lo) as usize]
    }

    /// Check the defining property: the equation holds exactly at every n
    /// with [n, n+r] inside the window.
    pub fn verify(&self, e: &DifferenceEquation) -> Result<bool, EvalError> {
        let r = e.order() as i64;
        for n in self.lo..=self.hi - r {
            let lhs = e.lhs(n, &|m| self.value(m).clone())?;
            if !lhs.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The (2W+1-r) x (2W+1) constraint matrix on the window [-W, W]: one row
/// per equation instance, columns indexed by y(-W), ..., y(W).
fn constraint_matrix(e: &DifferenceEquation, w: usize) -> Result<RatMatrix, EvalError> {
    let r = e.order();
    let cols = 2 * w + 1;
    let rows = cols.saturating_sub(r);
    let mut m = RatMatrix::zero(rows, cols);
    let w = w as i64;
    for (row, n) in (-w..=w - r as i64).enumerate() {
        for (i, a) in e.coeffs().iter().enumerate() {
            let c = a.eval(n)?;
            if !c.is_zero() {
                *m.at_mut(row, (n + i as i64 + w) as usize) = c;
            }
        }
    }
    Ok(m)
}

/// Dimension of the space of window solutions on [-W, W].
pub fn window_solution_dim(e: &DifferenceEquation, w: usize) -> Result<usize, EvalError> {
    let m = constraint_matrix(e, w)?;
    Ok(m.cols() - m.rank())
}

/// A basis of window solutions on [-W, W]; each satisfies the equation
/// exactly at every interior index.
pub fn window_solutions(
    e: &DifferenceEquation,
    w: usize,
) -> Result<Vec<WindowSolution>, EvalError> {
    let m = constraint_matrix(e, w)?;
    Ok(m.kernel_basis()
        .into_iter()
        .map(|values| WindowSolution {
            lo: -(w as i64),
            hi: w as i64,
            values,
        })
        .collect())
}

/// Dimension of the projection of the [-W, W] window solutions onto the
/// coordinates [-W0, W0]. Nonincreasing in W for fixed W0.
///
/// Computed without materializing a kernel basis: kernel vectors vanishing
/// on the inner coordinates are exactly the kernel of the matrix with those
/// columns removed, so the projection has dimension
/// |C| + rank(M without C) - rank(M).
pub fn projected_dim(e: &DifferenceEquation, w0: usize, w: usize) -> Result<usize, EvalError> {
    assert!(w >= w0, "outer window must contain the inner window");
    let m = constraint_matrix(e, w)?;
    let offset = w - w0;
    let inner = 2 * w0 + 1;
    let deleted = RatMatrix::from_rows(
        (0..m.rows())
            .map(|i| {
                let row = m.row(i);
                row[..offset]
                    .iter()
                    .chain(&row[offset + inner..])
                    .cloned()
                    .collect()
            })
            .collect(),
    );
    Ok(inner + deleted.rank() - m.rank())
}

/// Knobs for [`estimate_dimension`].
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// First inner radius W0.
    pub inner_start: usize,
    /// Increment for both the outer growth and the inner radius schedule.
    pub outer_step: usize,
    /// Number of consecutive unchanged values required to declare a level
    /// stable (the stall threshold S).
    pub stall: usize,
    /// Estimates reaching this value stop the run with `CapReached`.
    pub cap: usize,
    /// Safety bound on the number of inner radii visited; runs that neither
    /// stabilize nor reach the cap within it report `Growing`.
    pub max_rounds: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            inner_start: 4,
            outer_step: 4,
            stall: 3,
            cap: 64,
            // generous: an estimate that climbs by one every other round
            // must still be able to reach the default cap
            max_rounds: 64,
        }
    }
}

impl OracleConfig {
    /// Defaults tuned to the equation: for periodic coefficients the outer
    /// step becomes max(4, H) so each growth step spans a full period block.
    pub fn for_equation(e: &DifferenceEquation) -> OracleConfig {
        let mut cfg = OracleConfig::default();
        if let Ok(h) = choose_h(e) {
            cfg.outer_step = cfg.outer_step.max(h);
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateStatus {
    Stabilized,
    CapReached,
    Growing,
}

impl std::fmt::Display for EstimateStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EstimateStatus::Stabilized => write!(f, "stabilized"),
            EstimateStatus::CapReached => write!(f, "cap_reached"),
            EstimateStatus::Growing => write!(f, "growing"),
        }
    }
}

/// Result of a projection-stabilization run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleEstimate {
    /// Largest stabilized projected dimension observed (clamped to the cap).
    pub value: usize,
    pub status: EstimateStatus,
    /// Last inner radius visited.
    pub inner_radius: usize,
    /// Largest outer radius visited.
    pub outer_radius: usize,
    pub cap: usize,
}

/// Estimate the solution-space dimension by projection stabilization.
///
/// For each inner radius W0 the outer window grows in steps until the
/// projected dimension d(W0, W) is unchanged `stall` times in a row; that
/// stabilized value d*(W0) is recorded. The reported value is the largest
/// d*(W0) observed. The run stops with `Stabilized` once d*(W0) itself is
/// unchanged for `stall` consecutive inner radii, with `CapReached` once the
/// value reaches the cap, and with `Growing` when `max_rounds` inner radii
/// pass without either.
pub fn estimate_dimension(
    e: &DifferenceEquation,
    cfg: &OracleConfig,
) -> Result<OracleEstimate, EvalError> {
    let step = cfg.outer_step.max(1);
    let mut w0 = cfg.inner_start.max(1);
    let mut best = 0usize;
    let mut prev_level: Option<usize> = None;
    let mut streak = 0usize;
    let mut max_w = w0;

    let estimate = |value: usize, status, inner, outer| OracleEstimate {
        value,
        status,
        inner_radius: inner,
        outer_radius: outer,
        cap: cfg.cap,
    };

    for _ in 0..cfg.max_rounds.max(1) {
        // stabilize the projected dimension at this inner radius
        let mut w = w0;
        let mut d = projected_dim(e, w0, w)?;
        let mut unchanged = 0usize;
        while unchanged < cfg.stall {
            w += step;
            let next = projected_dim(e, w0, w)?;
            debug_assert!(next <= d, "projection dimension grew with the outer window");
            if next == d {
                unchanged += 1;
            } else {
                d = next;
                unchanged = 0;
            }
        }
        max_w = max_w.max(w);
        debug_assert!(
            prev_level.is_none_or(|p| d >= p),
            "stabilized level dropped as the inner window grew"
        );
        best = best.max(d);

        if best >= cfg.cap {
            return Ok(estimate(cfg.cap, EstimateStatus::CapReached, w0, max_w));
        }
        if prev_level == Some(d) {
            streak += 1;
            if streak >= cfg.stall {
                return Ok(estimate(best, EstimateStatus::Stabilized, w0, max_w));
            }
        } else {
            prev_level = Some(d);
            streak = 0;
        }
        w0 += step;
    }

    Ok(estimate(best, EstimateStatus::Growing, w0 - step, max_w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{build_ecirc, build_ed, build_einf, build_signal};
    use crate::rat::rat;
    use crate::sequence::{OracleSequence, Sequence};

    fn fibonacci() -> DifferenceEquation {
        DifferenceEquation::from_constants(vec![rat(-1), rat(-1), rat(1)])
    }

    #[test]
    fn fibonacci_window_dimensions() {
        for w in 1..=5 {
            assert_eq!(window_solution_dim(&fibonacci(), w).unwrap(), 2);
        }
        assert_eq!(projected_dim(&fibonacci(), 1, 5).unwrap(), 2);
    }

    #[test]
    fn order_zero_all_ones_has_no_solutions() {
        let e = build_ed(0);
        for w in 1..=4 {
            assert_eq!(window_solution_dim(&e, w).unwrap(), 0);
        }
    }

    #[test]
    fn dropout_window_frees_exactly_d_values() {
        let e = build_ed(3);
        for w in 3..=6 {
            assert_eq!(window_solution_dim(&e, w).unwrap(), 3);
        }
    }

    #[test]
    fn pulse_equation_projection_dies_off() {
        // the free boundary value at -W leaves the inner window as W grows
        let e = build_ecirc(1).unwrap();
        assert_eq!(projected_dim(&e, 2, 10).unwrap(), 0);
        assert_eq!(window_solution_dim(&e, 10).unwrap(), 1);
    }

    #[test]
    fn half_line_projection_counts_inner_free_values() {
        let e = build_einf();
        assert_eq!(projected_dim(&e, 5, 20).unwrap(), 6);
    }

    #[test]
    fn estimate_stabilizes_on_fibonacci() {
        let est = estimate_dimension(&fibonacci(), &OracleConfig::default()).unwrap();
        assert_eq!(est.value, 2);
        assert_eq!(est.status, EstimateStatus::Stabilized);
        assert!(est.value <= est.cap);
    }

    #[test]
    fn estimate_reaches_cap_on_half_line() {
        let cfg = OracleConfig {
            cap: 50,
            ..OracleConfig::default()
        };
        let est = estimate_dimension(&build_einf(), &cfg).unwrap();
        assert_eq!(est.status, EstimateStatus::CapReached);
        assert_eq!(est.value, 50);
    }

    #[test]
    fn estimate_on_signal_equations() {
        let zero = OracleSequence::from_values(|_| rat(0));
        let est = estimate_dimension(&build_signal(zero), &OracleConfig::default()).unwrap();
        assert_eq!(est.value, 1);
        assert_eq!(est.status, EstimateStatus::Stabilized);

        let spike = OracleSequence::from_values(|n| if n == 5 { rat(1) } else { rat(0) });
        let est = estimate_dimension(&build_signal(spike), &OracleConfig::default()).unwrap();
        assert_eq!(est.value, 0);
        assert_eq!(est.status, EstimateStatus::Stabilized);
    }

    #[test]
    fn window_solutions_satisfy_equation_exactly() {
        let e = DifferenceEquation::new(vec![
            Sequence::periodic(vec![rat(-2), rat(-3)]),
            Sequence::constant(rat(1)),
        ]);
        let sols = window_solutions(&e, 6).unwrap();
        assert_eq!(sols.len(), 1);
        for s in &sols {
            assert!(s.verify(&e).unwrap());
        }
    }

    #[test]
    fn projection_monotone_in_outer_window() {
        let e = build_ecirc(2).unwrap();
        let mut prev = usize::MAX;
        for w in 3..10 {
            let d = projected_dim(&e, 3, w).unwrap();
            assert!(d <= prev);
            prev = d;
        }
    }
}
