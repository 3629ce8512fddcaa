//! Independent ground truth: sampling and grid minimization of the true
//! network, line-validity scans, a bisection tangency solver, and the
//! static baseline for tau comparisons.
//!
//! Nothing here goes through the sequential-quadratic tangent path; the
//! bisection solver and the scans are the yardsticks that path is
//! measured against.

use ndarray::Array1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{input_box, ActivationBoundSet};
use crate::model::{NormOrder, VerificationProblem};
use crate::relaxation::{
    chord_intercept, intercept_of_slope, sigmoid, sigmoid_family, sigmoid_prime, BoundRole,
    TangentOutcome,
};
use crate::verifier::{run_alpha_sig, RunConfig};

/// Corner enumeration is exact but 2^d; beyond this we sample only.
const CORNER_DIM_CAP: usize = 12;
const SOUNDNESS_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub sampled_min: f64,
    pub argmin: Vec<f64>,
    pub samples: usize,
    pub violations: usize,
    pub max_violation: f64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

fn sample_point(prob: &VerificationProblem, rng: &mut ChaCha8Rng) -> Array1<f64> {
    let d = prob.x0.len();
    match prob.p {
        NormOrder::Infinity => Array1::from_shape_fn(d, |i| {
            prob.x0[i] + prob.epsilon * rng.gen_range(-1.0..=1.0)
        }),
        NormOrder::Two => {
            // gaussian direction scaled to a uniform-in-ball radius
            let mut dir = Array1::from_shape_fn(d, |_| {
                let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                (-2.0 * u1.ln()).sqrt() * u2.cos()
            });
            let norm = dir.dot(&dir).sqrt();
            if norm > 0.0 {
                dir.mapv_inplace(|v| v / norm);
            }
            let r = prob.epsilon * rng.gen_range(0.0f64..=1.0).powf(1.0 / d as f64);
            &prob.x0 + &(dir * r)
        }
    }
}

struct ShardResult {
    min: f64,
    argmin: Array1<f64>,
    violations: usize,
    max_violation: f64,
}

fn run_shard(
    prob: &VerificationProblem,
    bound: Option<f64>,
    seed: u64,
    count: usize,
) -> ShardResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min = f64::INFINITY;
    let mut argmin = prob.x0.clone();
    let mut violations = 0;
    let mut max_violation = f64::NEG_INFINITY;
    for _ in 0..count {
        let x = sample_point(prob, &mut rng);
        let f = prob.objective_eval(&x).expect("sample has valid shape");
        if f < min {
            min = f;
            argmin = x;
        }
        if let Some(b) = bound {
            max_violation = max_violation.max(b - f);
            if f < b - SOUNDNESS_SLACK {
                violations += 1;
            }
        }
    }
    ShardResult {
        min,
        argmin,
        violations,
        max_violation,
    }
}

// per-shard seeds derive deterministically from the master seed, so the
// parallel and sequential paths produce identical reports
fn shard_seeds(seed: u64, n: usize, shard_size: usize) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    let mut remaining = n;
    let mut idx = 0u64;
    while remaining > 0 {
        let count = remaining.min(shard_size);
        out.push((seed.wrapping_add(idx.wrapping_mul(0x9E3779B97F4A7C15)), count));
        remaining -= count;
        idx += 1;
    }
    out
}

fn corners(prob: &VerificationProblem) -> Vec<Array1<f64>> {
    let d = prob.x0.len();
    if prob.p != NormOrder::Infinity || d > CORNER_DIM_CAP {
        return Vec::new();
    }
    let (lo, hi) = input_box(prob);
    (0..1usize << d)
        .map(|mask| {
            Array1::from_shape_fn(d, |i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
        })
        .collect()
}

fn sample_report(
    prob: &VerificationProblem,
    bound: Option<f64>,
    n: usize,
    seed: u64,
    parallel: bool,
) -> OracleReport {
    let shards = shard_seeds(seed, n.max(1), 8192);
    let results = if parallel {
        collect_shards_par(prob, bound, &shards)
    } else {
        collect_shards_seq(prob, bound, &shards)
    };
    let mut min = f64::INFINITY;
    let mut argmin = prob.x0.clone();
    let mut violations = 0;
    let mut max_violation = f64::NEG_INFINITY;
    // fixed-order reduction
    for r in results {
        if r.min < min {
            min = r.min;
            argmin = r.argmin;
        }
        violations += r.violations;
        max_violation = max_violation.max(r.max_violation);
    }
    let mut samples = n.max(1);
    for x in corners(prob) {
        let f = prob.objective_eval(&x).expect("corner has valid shape");
        samples += 1;
        if f < min {
            min = f;
            argmin = x;
        }
        if let Some(b) = bound {
            max_violation = max_violation.max(b - f);
            if f < b - SOUNDNESS_SLACK {
                violations += 1;
            }
        }
    }
    OracleReport {
        sampled_min: min,
        argmin: argmin.to_vec(),
        samples,
        violations,
        max_violation: if bound.is_some() {
            max_violation
        } else {
            f64::NEG_INFINITY
        },
    }
}

#[cfg(feature = "parallel")]
fn collect_shards_par(
    prob: &VerificationProblem,
    bound: Option<f64>,
    shards: &[(u64, usize)],
) -> Vec<ShardResult> {
    use rayon::prelude::*;
    shards
        .par_iter()
        .map(|&(s, count)| run_shard(prob, bound, s, count))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn collect_shards_par(
    prob: &VerificationProblem,
    bound: Option<f64>,
    shards: &[(u64, usize)],
) -> Vec<ShardResult> {
    collect_shards_seq(prob, bound, shards)
}

fn collect_shards_seq(
    prob: &VerificationProblem,
    bound: Option<f64>,
    shards: &[(u64, usize)],
) -> Vec<ShardResult> {
    shards
        .iter()
        .map(|&(s, count)| run_shard(prob, bound, s, count))
        .collect()
}

/// Minimum of f over `n` points sampled uniformly in the input set,
/// plus all box corners for small dimensions.
pub fn sample_min(prob: &VerificationProblem, n: usize, seed: u64) -> OracleReport {
    sample_report(prob, None, n, seed, cfg!(feature = "parallel"))
}

/// Single-threaded [`sample_min`]; produces an identical report.
pub fn sample_min_seq(prob: &VerificationProblem, n: usize, seed: u64) -> OracleReport {
    sample_report(prob, None, n, seed, false)
}

/// Like [`sample_min`], additionally counting samples where f drops
/// below `bound` by more than the soundness slack.
pub fn soundness_check(
    prob: &VerificationProblem,
    bound: f64,
    n: usize,
    seed: u64,
) -> OracleReport {
    sample_report(prob, Some(bound), n, seed, cfg!(feature = "parallel"))
}

/// Dense-grid minimum over the input box; exact-ish desk-scale ground
/// truth for 1- and 2-input networks.
pub fn grid_min(prob: &VerificationProblem, points_per_dim: usize) -> Result<f64> {
    let d = prob.x0.len();
    if d > 2 {
        return Err(Error::Unsupported(format!(
            "grid_min supports input_dim <= 2, got {d}"
        )));
    }
    if points_per_dim < 1 {
        return Err(Error::invalid("points_per_dim must be >= 1"));
    }
    let (lo, hi) = input_box(prob);
    let coord = |i: usize, k: usize| {
        if points_per_dim == 1 {
            0.5 * (lo[i] + hi[i])
        } else {
            lo[i] + (hi[i] - lo[i]) * k as f64 / (points_per_dim - 1) as f64
        }
    };
    let mut min = f64::INFINITY;
    if d == 1 {
        for k in 0..points_per_dim {
            let f = prob.objective_eval(&ndarray::array![coord(0, k)])?;
            min = min.min(f);
        }
    } else {
        for k0 in 0..points_per_dim {
            for k1 in 0..points_per_dim {
                let f = prob.objective_eval(&ndarray::array![coord(0, k0), coord(1, k1)])?;
                min = min.min(f);
            }
        }
    }
    Ok(min)
}

/// Grid-scan the role inequality of the line the engine would emit for
/// `(interval, alpha, role)` over the interval. Returns the worst signed
/// violation: positive means the line fails its role somewhere.
pub fn bound_validity_scan(x_lo: f64, x_hi: f64, alpha: f64, role: BoundRole) -> Result<f64> {
    if !(x_lo < x_hi) {
        return Err(Error::invalid("scan requires x_lo < x_hi"));
    }
    // collapse detection by the value-space endpoint test; the chord is
    // the emitted line exactly when the role collapses
    let dx = x_hi - x_lo;
    let (s_lo, d_lo, _) = sigmoid_family(x_lo);
    let (s_hi, d_hi, _) = sigmoid_family(x_hi);
    let collapsed = match role {
        BoundRole::Lower => s_lo + d_lo * dx >= s_hi,
        BoundRole::Upper => s_hi - d_hi * dx <= s_lo,
    };
    let chord = (s_hi - s_lo) / dx;
    let (a, b) = if collapsed && (alpha - chord).abs() < 1e-9 {
        (chord, chord_intercept(x_lo, x_hi)?)
    } else {
        (alpha, intercept_of_slope(alpha, role)?)
    };
    let points = 1000;
    let mut worst = f64::NEG_INFINITY;
    for k in 0..=points {
        let x = x_lo + dx * k as f64 / points as f64;
        let line = a * x + b;
        let violation = match role {
            BoundRole::Lower => line - sigmoid(x),
            BoundRole::Upper => sigmoid(x) - line,
        };
        worst = worst.max(violation);
    }
    Ok(worst)
}

/// Anchored-tangent solve by bisecting the tangency residual
/// L(x) = sigma(x) - sigma'(x)(x - x_a) - y_a, which is monotone on the
/// search side. The independent check for the sequential-quadratic
/// solver.
pub fn tangency_bisection(anchor: (f64, f64), role: BoundRole, x_other: f64) -> TangentOutcome {
    let (x_a, y_a) = anchor;
    match role {
        BoundRole::Upper if x_a >= 0.0 => {
            return TangentOutcome::Tangent {
                alpha: sigmoid_prime(x_a),
                x_hat: x_a,
            }
        }
        BoundRole::Lower if x_a <= 0.0 => {
            return TangentOutcome::Tangent {
                alpha: sigmoid_prime(x_a),
                x_hat: x_a,
            }
        }
        _ => {}
    }
    let residual = |x: f64| {
        let (s, d1, _) = sigmoid_family(x);
        s - d1 * (x - x_a) - y_a
    };
    let (near, far) = match role {
        BoundRole::Upper => (1e-12, x_other),
        BoundRole::Lower => (-1e-12, x_other),
    };
    let wrong_side = match role {
        BoundRole::Upper => far <= 0.0,
        BoundRole::Lower => far >= 0.0,
    };
    if wrong_side {
        return TangentOutcome::Collapsed;
    }
    let (mut a, mut b) = (near, far);
    let mut fa = residual(a);
    if fa * residual(b) > 0.0 {
        return TangentOutcome::Collapsed;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = residual(mid);
        if fm == 0.0 {
            a = mid;
            b = mid;
            break;
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
    let x_hat = 0.5 * (a + b);
    TangentOutcome::Tangent {
        alpha: sigmoid_prime(x_hat),
        x_hat,
    }
}

/// The 0-step alpha-sig bound: the static-relaxation reference for tau
/// comparisons.
pub fn static_baseline(
    prob: &VerificationProblem,
    bounds: &ActivationBoundSet,
) -> Result<f64> {
    let config = RunConfig {
        steps: 0,
        ..Default::default()
    };
    Ok(run_alpha_sig(prob, bounds, &config)?.bound)
}
