//! Per-neuron sigmoid relaxation: tangent-line bounds parameterized by
//! their slope, feasible slope ranges with collapse handling, and the
//! sequential-quadratic solver for anchored tangent slopes.
//!
//! A line `alpha*x + beta` with `beta = intercept_of_slope(alpha, role)`
//! is tangent to the sigmoid and bounds it on all of R from below
//! (`Lower`) or above (`Upper`). The feasible slope interval of each role
//! depends on the neuron's pre-activation interval; when the chord
//! through the interval endpoints is itself a valid bound of the role,
//! the interval collapses to the chord slope and the bound becomes that
//! static chord line.

use serde::Serialize;

use crate::error::{Error, Result};

/// Slopes are kept strictly positive; sigmoid gradients underflow for
/// |x| beyond ~740.
pub const ALPHA_MIN: f64 = 1e-12;
/// sup sigma'(x) = sigma'(0) = 1/4.
pub const ALPHA_MAX: f64 = 0.25;

const SQP_TOL: f64 = 1e-10;
const SQP_MAX_ITERS: usize = 50;
const RESIDUAL_TOL: f64 = 1e-9;

/// Numerically stable logistic sigmoid.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Sigmoid with its first two derivatives: sigma' = s(1-s),
/// sigma'' = s(1-s)(1-2s).
pub fn sigmoid_family(x: f64) -> (f64, f64, f64) {
    let s = sigmoid(x);
    let d1 = s * (1.0 - s);
    (s, d1, d1 * (1.0 - 2.0 * s))
}

pub fn sigmoid_prime(x: f64) -> f64 {
    sigmoid_family(x).1
}

/// Which side of the sigmoid a line bounds. The embedded sign `s` is +1
/// for lower bounds and -1 for upper bounds; the tangent point of the
/// line with slope `alpha` sits at `-s * z(alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundRole {
    Lower,
    Upper,
}

impl BoundRole {
    pub fn sign(&self) -> f64 {
        match self {
            BoundRole::Lower => 1.0,
            BoundRole::Upper => -1.0,
        }
    }

    pub fn from_coeff(coeff: f64) -> Self {
        // zero coefficients take the lower role by convention
        if coeff >= 0.0 {
            BoundRole::Lower
        } else {
            BoundRole::Upper
        }
    }
}

fn check_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= ALPHA_MAX) {
        return Err(Error::Domain(format!(
            "slope {alpha} outside (0, 1/4]"
        )));
    }
    Ok(alpha.clamp(ALPHA_MIN, ALPHA_MAX))
}

/// Distance from the inflection point to the tangent point of the line
/// with slope `alpha`: z = acosh(1/(2 alpha) - 1), clamped at z = 0.
fn tangent_offset(alpha: f64) -> f64 {
    (1.0 / (2.0 * alpha) - 1.0).max(1.0).acosh()
}

/// Intercept h(alpha) making `alpha*x + h(alpha)` tangent to the sigmoid
/// and a valid bound of its role on all of R.
pub fn intercept_of_slope(alpha: f64, role: BoundRole) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    let z = tangent_offset(alpha);
    let s = role.sign();
    // 1/(1 + e^{s z}) = sigmoid(-s z), evaluated stably
    Ok(sigmoid(-s * z) + s * alpha * z)
}

/// d h(alpha) / d alpha = s * z(alpha), the negated tangent point.
pub fn intercept_grad(alpha: f64, role: BoundRole) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    Ok(role.sign() * tangent_offset(alpha))
}

/// Slope of the secant through both interval endpoints, in (0, 1/4].
pub fn chord_slope(x_lo: f64, x_hi: f64) -> Result<f64> {
    if !(x_lo < x_hi) {
        return Err(Error::invalid(format!(
            "chord requires x_lo < x_hi, got [{x_lo}, {x_hi}]"
        )));
    }
    Ok((sigmoid(x_hi) - sigmoid(x_lo)) / (x_hi - x_lo))
}

/// Intercept of the chord line through (x_lo, sigma(x_lo)) and
/// (x_hi, sigma(x_hi)).
pub fn chord_intercept(x_lo: f64, x_hi: f64) -> Result<f64> {
    Ok(sigmoid(x_lo) - chord_slope(x_lo, x_hi)? * x_lo)
}

/// Tangent line at a single point, used for degenerate intervals.
pub fn point_tangent(x: f64) -> (f64, f64) {
    let (s, d1, _) = sigmoid_family(x);
    let alpha = d1.clamp(ALPHA_MIN, ALPHA_MAX);
    (alpha, s - alpha * x)
}

/// One quadratic-expansion step of the anchored-tangent solve: expand
/// the sigmoid to second order at `x_prev`, solve the resulting
/// quadratic for the tangency point of the line through `anchor`, and
/// return the selected root. `None` requests the bisection fallback
/// (negative discriminant or no admissible root).
pub fn sqp_iteration(anchor: (f64, f64), x_prev: f64) -> Option<f64> {
    let (x_a, y_a) = anchor;
    let (s0, d1, d2) = sigmoid_family(x_prev);
    let c2 = 0.5 * d2;
    let c1 = d1 - d2 * x_prev;
    let c0 = s0 - d1 * x_prev + 0.5 * d2 * x_prev * x_prev;
    let q2 = c2;
    let q1 = -2.0 * c2 * x_a;
    let q0 = y_a - c1 * x_a - c0;
    if q2.abs() < 1e-12 {
        if q1.abs() < 1e-12 {
            return if q0.abs() < 1e-12 { Some(x_prev) } else { None };
        }
        return Some(-q0 / q1);
    }
    let disc = q1 * q1 - 4.0 * q2 * q0;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let r1 = (-q1 + sq) / (2.0 * q2);
    let r2 = (-q1 - sq) / (2.0 * q2);
    // the valid tangency point lies strictly on the opposite side of 0
    // from the anchor; with both roots there, keep the contraction by
    // taking the one nearest the previous iterate
    let opposite = |r: f64| r * x_a < 0.0;
    match (opposite(r1), opposite(r2)) {
        (true, false) => Some(r1),
        (false, true) => Some(r2),
        (true, true) => Some(if (r1 - x_prev).abs() <= (r2 - x_prev).abs() {
            r1
        } else {
            r2
        }),
        (false, false) => None,
    }
}

/// Outcome of an anchored-tangent solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TangentOutcome {
    /// Tangency found: the line through the anchor with slope `alpha` is
    /// tangent to the sigmoid at `x_hat`.
    Tangent { alpha: f64, x_hat: f64 },
    /// No tangency on the prescribed side; the role's slope interval
    /// collapses to the chord.
    Collapsed,
}

/// Tangency residual of the line through `anchor` touching the curve at
/// `x`: zero exactly at the anchored tangent point.
fn tangency_residual(anchor: (f64, f64), x: f64) -> f64 {
    let (s, d1, _) = sigmoid_family(x);
    s - d1 * (x - anchor.0) - anchor.1
}

/// Steepest slope of a line through `anchor` that still bounds the
/// sigmoid in its role over the interval ending at `x_other`. Iterates
/// `sqp_iteration` to convergence with a bisection fallback.
///
/// For `Upper` the anchor is the interval minimum and the tangent point
/// is sought in (0, x_other]; for `Lower` the anchor is the maximum and
/// the tangent point lives in [x_other, 0).
pub fn anchored_tangent_slope(
    anchor: (f64, f64),
    role: BoundRole,
    x_other: f64,
) -> TangentOutcome {
    let (x_a, y_a) = anchor;
    // anchor already on the role's tangency side: the tangent at the
    // anchor itself is the steepest valid line through it
    match role {
        BoundRole::Upper if x_a >= 0.0 => {
            return TangentOutcome::Tangent {
                alpha: sigmoid_prime(x_a).clamp(ALPHA_MIN, ALPHA_MAX),
                x_hat: x_a,
            }
        }
        BoundRole::Lower if x_a <= 0.0 => {
            return TangentOutcome::Tangent {
                alpha: sigmoid_prime(x_a).clamp(ALPHA_MIN, ALPHA_MAX),
                x_hat: x_a,
            }
        }
        _ => {}
    }
    let (near, far) = match role {
        BoundRole::Upper => (1e-12, x_other),
        BoundRole::Lower => (-1e-12, x_other),
    };
    // empty search interval, or residual does not change sign across it
    let wrong_side = match role {
        BoundRole::Upper => far <= 0.0,
        BoundRole::Lower => far >= 0.0,
    };
    if wrong_side {
        return TangentOutcome::Collapsed;
    }
    let r_near = tangency_residual(anchor, near);
    let r_far = tangency_residual(anchor, far);
    if r_near * r_far > 0.0 {
        return TangentOutcome::Collapsed;
    }
    let clamp = |x: f64| match role {
        BoundRole::Upper => x.clamp(near, far),
        BoundRole::Lower => x.clamp(far, near),
    };
    let mut x = far;
    let mut converged = false;
    for _ in 0..SQP_MAX_ITERS {
        match sqp_iteration((x_a, y_a), x) {
            Some(next) => {
                let next = clamp(next);
                if (next - x).abs() < SQP_TOL {
                    x = next;
                    converged = true;
                    break;
                }
                x = next;
            }
            None => break,
        }
    }
    if !converged || tangency_residual(anchor, x).abs() >= RESIDUAL_TOL {
        x = bisect_tangency(anchor, near, far);
    }
    TangentOutcome::Tangent {
        alpha: sigmoid_prime(x).clamp(ALPHA_MIN, ALPHA_MAX),
        x_hat: x,
    }
}

// The residual is monotone between `near` and `far` (the sign of
// sigma'' * (x_a - x) is constant there), so a sign change brackets a
// unique root.
fn bisect_tangency(anchor: (f64, f64), near: f64, far: f64) -> f64 {
    let (mut a, mut b) = (near, far);
    let mut fa = tangency_residual(anchor, a);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = tangency_residual(anchor, mid);
        if fm == 0.0 {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
        if (b - a).abs() < 1e-12 {
            break;
        }
    }
    0.5 * (a + b)
}

/// Feasible slope intervals of both roles for one neuron's
/// pre-activation interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeRange {
    pub lo_lower: f64,
    pub hi_lower: f64,
    pub lo_upper: f64,
    pub hi_upper: f64,
    pub lower_collapsed: bool,
    pub upper_collapsed: bool,
    pub chord: f64,
}

impl SlopeRange {
    pub fn interval(&self, role: BoundRole) -> (f64, f64) {
        match role {
            BoundRole::Lower => (self.lo_lower, self.hi_lower),
            BoundRole::Upper => (self.lo_upper, self.hi_upper),
        }
    }

    pub fn collapsed(&self, role: BoundRole) -> bool {
        match role {
            BoundRole::Lower => self.lower_collapsed,
            BoundRole::Upper => self.upper_collapsed,
        }
    }
}

/// Feasible slope limits over [x_lo, x_hi]. A role collapses to the
/// static chord exactly when the endpoint tangent of that role fails to
/// clear the curve at the opposite endpoint, i.e. when the chord itself
/// is a valid bound of the role.
pub fn slope_limits(x_lo: f64, x_hi: f64) -> Result<SlopeRange> {
    if !(x_lo < x_hi) || !x_lo.is_finite() || !x_hi.is_finite() {
        return Err(Error::invalid(format!(
            "slope_limits requires finite x_lo < x_hi, got [{x_lo}, {x_hi}]"
        )));
    }
    let dx = x_hi - x_lo;
    let (s_lo, d_lo, _) = sigmoid_family(x_lo);
    let (s_hi, d_hi, _) = sigmoid_family(x_hi);
    let chord = ((s_hi - s_lo) / dx).clamp(ALPHA_MIN, ALPHA_MAX);

    // value-space collapse tests: tangent at the near endpoint clears
    // the far endpoint iff the chord is not a valid bound of the role
    let lower_collapsed = s_lo + d_lo * dx >= s_hi;
    let upper_collapsed = s_hi - d_hi * dx <= s_lo;

    let clamp = |a: f64| a.clamp(ALPHA_MIN, ALPHA_MAX);

    let (lo_lower, hi_lower) = if lower_collapsed {
        (chord, chord)
    } else {
        let lo = clamp(d_lo);
        let hi = match anchored_tangent_slope((x_hi, s_hi), BoundRole::Lower, x_lo) {
            TangentOutcome::Tangent { alpha, .. } => clamp(alpha),
            TangentOutcome::Collapsed => chord,
        };
        (lo, hi.max(lo))
    };
    let (lo_upper, hi_upper) = if upper_collapsed {
        (chord, chord)
    } else {
        let lo = clamp(d_hi);
        let hi = match anchored_tangent_slope((x_lo, s_lo), BoundRole::Upper, x_hi) {
            TangentOutcome::Tangent { alpha, .. } => clamp(alpha),
            TangentOutcome::Collapsed => chord,
        };
        (lo, hi.max(lo))
    };

    Ok(SlopeRange {
        lo_lower,
        hi_lower,
        lo_upper,
        hi_upper,
        lower_collapsed,
        upper_collapsed,
        chord,
    })
}

/// Relaxation data for one neuron: either a tunable slope range or the
/// fixed tangent of a degenerate (point) interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum NeuronRelax {
    Range(SlopeRange),
    Point { alpha: f64, beta: f64 },
}

impl NeuronRelax {
    pub fn for_interval(x_lo: f64, x_hi: f64) -> Result<Self> {
        if x_lo == x_hi {
            let (alpha, beta) = point_tangent(x_lo);
            return Ok(NeuronRelax::Point { alpha, beta });
        }
        Ok(NeuronRelax::Range(slope_limits(x_lo, x_hi)?))
    }

    /// The line actually emitted for a role given the current tunable
    /// slope: the fixed point tangent, the static chord when the role is
    /// collapsed, or the tangent line of the clipped slope otherwise.
    pub fn line(
        &self,
        role: BoundRole,
        alpha: f64,
        x_lo: f64,
        x_hi: f64,
    ) -> Result<(f64, f64)> {
        match self {
            NeuronRelax::Point { alpha, beta } => Ok((*alpha, *beta)),
            NeuronRelax::Range(range) => {
                if range.collapsed(role) {
                    Ok((range.chord, chord_intercept(x_lo, x_hi)?))
                } else {
                    let (lo, hi) = range.interval(role);
                    let a = alpha.clamp(lo, hi);
                    Ok((a, intercept_of_slope(a, role)?))
                }
            }
        }
    }
}

/// Per-neuron relaxation data for a batch of intervals (sequential).
pub fn neuron_relaxations_seq(intervals: &[(f64, f64)]) -> Result<Vec<NeuronRelax>> {
    intervals
        .iter()
        .map(|&(lo, hi)| NeuronRelax::for_interval(lo, hi))
        .collect()
}

/// Per-neuron relaxation data for a batch of intervals (rayon).
#[cfg(feature = "parallel")]
pub fn neuron_relaxations_par(intervals: &[(f64, f64)]) -> Result<Vec<NeuronRelax>> {
    use rayon::prelude::*;
    intervals
        .par_iter()
        .map(|&(lo, hi)| NeuronRelax::for_interval(lo, hi))
        .collect()
}

/// Per-neuron relaxation data for a batch of intervals.
pub fn neuron_relaxations(intervals: &[(f64, f64)]) -> Result<Vec<NeuronRelax>> {
    #[cfg(feature = "parallel")]
    {
        neuron_relaxations_par(intervals)
    }
    #[cfg(not(feature = "parallel"))]
    {
        neuron_relaxations_seq(intervals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const SIG_1: f64 = 0.7310585786300049;
    const DSIG_1: f64 = 0.19661193324148185;
    const DDSIG_1: f64 = -0.09085774767294841;

    #[test]
    fn sigmoid_family_values() {
        let (s, d1, d2) = sigmoid_family(0.0);
        assert_eq!((s, d1, d2), (0.5, 0.25, 0.0));
        let (s, d1, d2) = sigmoid_family(1.0);
        assert_abs_diff_eq!(s, SIG_1, epsilon = 1e-15);
        assert_abs_diff_eq!(d1, DSIG_1, epsilon = 1e-15);
        assert_abs_diff_eq!(d2, DDSIG_1, epsilon = 1e-15);
        let (sm, d1m, d2m) = sigmoid_family(-1.0);
        assert_abs_diff_eq!(sm, 1.0 - SIG_1, epsilon = 1e-15);
        assert_abs_diff_eq!(d1m, d1, epsilon = 1e-15);
        assert_abs_diff_eq!(d2m, -d2, epsilon = 1e-15);
    }

    #[test]
    fn sigmoid_stable_at_extremes() {
        assert_eq!(sigmoid(800.0), 1.0);
        assert_eq!(sigmoid(-800.0), 0.0);
        assert!(sigmoid_prime(-800.0) >= 0.0);
    }

    #[test]
    fn intercept_at_quarter_is_half() {
        assert_abs_diff_eq!(
            intercept_of_slope(0.25, BoundRole::Lower).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            intercept_of_slope(0.25, BoundRole::Upper).unwrap(),
            0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn intercept_matches_direct_tangent() {
        // upper tangent at x=1: beta = sigma(1) - sigma'(1)*1
        let beta = intercept_of_slope(DSIG_1, BoundRole::Upper).unwrap();
        assert_abs_diff_eq!(beta, SIG_1 - DSIG_1, epsilon = 1e-12);
        // lower tangent for alpha=0.2 touches at x = -acosh(1.5)
        let beta = intercept_of_slope(0.2, BoundRole::Lower).unwrap();
        assert_abs_diff_eq!(beta, 0.46887793227386241, epsilon = 1e-12);
        let z = 1.5f64.acosh();
        assert_abs_diff_eq!(0.2 * (-z) + beta, sigmoid(-z), epsilon = 1e-12);
    }

    #[test]
    fn intercept_domain_errors() {
        assert!(intercept_of_slope(0.0, BoundRole::Lower).is_err());
        assert!(intercept_of_slope(0.26, BoundRole::Lower).is_err());
        assert!(intercept_of_slope(-0.1, BoundRole::Upper).is_err());
    }

    #[test]
    fn intercept_grad_values() {
        assert_abs_diff_eq!(
            intercept_grad(0.25, BoundRole::Lower).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        // envelope identity: d beta/d alpha = -tangent point
        assert_abs_diff_eq!(
            intercept_grad(DSIG_1, BoundRole::Upper).unwrap(),
            -1.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            intercept_grad(DSIG_1, BoundRole::Lower).unwrap(),
            1.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn chord_slope_values() {
        assert_abs_diff_eq!(
            chord_slope(-1.0, 1.0).unwrap(),
            0.23105857863000488,
            epsilon = 1e-12
        );
        // limit at a shrinking interval is sigma'(0)
        assert_abs_diff_eq!(chord_slope(-1e-4, 1e-4).unwrap(), 0.25, epsilon = 1e-8);
        assert_abs_diff_eq!(
            chord_slope(0.0, 4.0).unwrap(),
            0.12050344750947711,
            epsilon = 1e-12
        );
        assert!(chord_slope(1.0, 1.0).is_err());
        assert!(chord_slope(2.0, 1.0).is_err());
    }

    #[test]
    fn sqp_inflection_anchor_is_fixed_point() {
        assert_eq!(sqp_iteration((0.0, 0.5), 0.0), Some(0.0));
    }

    #[test]
    fn sqp_step_moves_toward_tangency() {
        let anchor = (-1.0, sigmoid(-1.0));
        let next = sqp_iteration(anchor, 1.0).unwrap();
        // true tangency point is ~0.4881; one step must close the gap
        assert!((next - 0.4881089185).abs() < (1.0f64 - 0.4881089185).abs());
    }

    #[test]
    fn sqp_linear_branch_at_zero_expansion() {
        // sigma''(0) = 0 degenerates the quadratic; off-curve anchor has
        // no admissible solution on the linearized model
        assert_eq!(sqp_iteration((-1.0, sigmoid(-1.0)), 0.0), None);
    }

    #[test]
    fn anchored_tangent_basic() {
        let out = anchored_tangent_slope((-1.0, sigmoid(-1.0)), BoundRole::Upper, 1.0);
        match out {
            TangentOutcome::Tangent { alpha, x_hat } => {
                assert_abs_diff_eq!(x_hat, 0.48810891851158063, epsilon = 1e-8);
                assert_abs_diff_eq!(alpha, 0.23568128317992409, epsilon = 1e-8);
            }
            TangentOutcome::Collapsed => panic!("unexpected collapse"),
        }
        // mirror case by point symmetry
        let out = anchored_tangent_slope((1.0, sigmoid(1.0)), BoundRole::Lower, -1.0);
        match out {
            TangentOutcome::Tangent { alpha, x_hat } => {
                assert_abs_diff_eq!(x_hat, -0.48810891851158063, epsilon = 1e-8);
                assert_abs_diff_eq!(alpha, 0.23568128317992409, epsilon = 1e-8);
            }
            TangentOutcome::Collapsed => panic!("unexpected collapse"),
        }
    }

    #[test]
    fn anchored_tangent_inflection_anchor() {
        let out = anchored_tangent_slope((0.0, 0.5), BoundRole::Upper, 1.0);
        assert_eq!(
            out,
            TangentOutcome::Tangent {
                alpha: 0.25,
                x_hat: 0.0
            }
        );
    }

    #[test]
    fn anchored_tangent_residual_is_tight() {
        let anchor = (-2.5, sigmoid(-2.5));
        if let TangentOutcome::Tangent { alpha, x_hat } =
            anchored_tangent_slope(anchor, BoundRole::Upper, 3.0)
        {
            let beta = anchor.1 - alpha * anchor.0;
            assert!((sigmoid(x_hat) - (alpha * x_hat + beta)).abs() < 1e-9);
        } else {
            panic!("expected tangency");
        }
    }

    #[test]
    fn anchored_tangent_collapse_in_convex_region() {
        let out = anchored_tangent_slope((-5.0, sigmoid(-5.0)), BoundRole::Upper, -1.0);
        assert_eq!(out, TangentOutcome::Collapsed);
    }

    #[test]
    fn slope_limits_symmetric_interval() {
        let r = slope_limits(-1.0, 1.0).unwrap();
        assert!(!r.lower_collapsed && !r.upper_collapsed);
        assert_abs_diff_eq!(r.lo_lower, DSIG_1, epsilon = 1e-12);
        assert_abs_diff_eq!(r.lo_upper, DSIG_1, epsilon = 1e-12);
        assert_abs_diff_eq!(r.hi_lower, 0.23568128317992409, epsilon = 1e-8);
        assert_abs_diff_eq!(r.hi_upper, 0.23568128317992409, epsilon = 1e-8);
    }

    #[test]
    fn slope_limits_convex_interval_collapses_upper() {
        let r = slope_limits(-5.0, -1.0).unwrap();
        assert!(r.upper_collapsed && !r.lower_collapsed);
        assert_abs_diff_eq!(r.chord, 0.065562142611427566, epsilon = 1e-12);
        assert_eq!(r.lo_upper, r.hi_upper);
        assert_eq!(r.lo_upper, r.chord);
    }

    #[test]
    fn slope_limits_concave_interval_collapses_lower() {
        let r = slope_limits(1.0, 5.0).unwrap();
        assert!(r.lower_collapsed && !r.upper_collapsed);
        assert_abs_diff_eq!(r.chord, 0.065562142611427566, epsilon = 1e-12);
        assert_eq!(r.lo_lower, r.chord);
    }

    #[test]
    fn slope_limits_rejects_degenerate() {
        assert!(slope_limits(1.0, 1.0).is_err());
        assert!(slope_limits(2.0, 1.0).is_err());
    }

    #[test]
    fn neuron_relax_point_interval() {
        match NeuronRelax::for_interval(0.7, 0.7).unwrap() {
            NeuronRelax::Point { alpha, beta } => {
                assert_abs_diff_eq!(alpha, sigmoid_prime(0.7), epsilon = 1e-15);
                assert_abs_diff_eq!(
                    alpha * 0.7 + beta,
                    sigmoid(0.7),
                    epsilon = 1e-15
                );
            }
            other => panic!("expected point relaxation, got {other:?}"),
        }
    }

    #[test]
    fn symmetry_identity_lower_plus_upper_is_one() {
        for i in 0..1000 {
            let alpha = 0.01 + (0.25 - 0.01) * (i as f64) / 999.0;
            let bl = intercept_of_slope(alpha, BoundRole::Lower).unwrap();
            let bu = intercept_of_slope(alpha, BoundRole::Upper).unwrap();
            assert_abs_diff_eq!(bl + bu, 1.0, epsilon = 1e-12);
        }
    }
}
