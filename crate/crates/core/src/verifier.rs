//! The alpha-sig ascent loop: backward sign propagation through the
//! layer stack, assembly of the affine under-estimator g1^T x + g2,
//! the dual-norm objective, and projected Adam ascent over the tunable
//! relaxation slopes.
//!
//! Each sigmoid neuron carries two tunable slopes, one per bound role;
//! the backward sign computed each iteration selects which one
//! participates. This keeps every iterate feasible under role flips
//! without re-projection.

use ndarray::Array1;
use serde::Serialize;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::interval::ActivationBoundSet;
use crate::model::{Activation, NormOrder, VerificationProblem};
use crate::relaxation::{
    intercept_grad, neuron_relaxations, sigmoid_prime, BoundRole, NeuronRelax,
};

/// Ascent hyperparameters. The defaults reproduce the single-neuron
/// closed-form optima to 1e-4 within the 300-step budget.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    /// Gradient step budget.
    pub steps: usize,
    pub lr: f64,
    /// Multiplicative learning-rate decay per step.
    pub lr_decay: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub adam_eps: f64,
    /// Early-stop tolerance on the objective change between iterations.
    pub stop_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            steps: 300,
            lr: 0.05,
            lr_decay: 0.98,
            beta1: 0.9,
            beta2: 0.999,
            adam_eps: 1e-8,
            stop_tol: 1e-7,
        }
    }
}

/// Tunable slopes and optimizer moments for one sigmoid layer.
#[derive(Debug, Clone)]
pub struct AlphaLayer {
    pub alpha_lower: Array1<f64>,
    pub alpha_upper: Array1<f64>,
    m_lower: Array1<f64>,
    v_lower: Array1<f64>,
    m_upper: Array1<f64>,
    v_upper: Array1<f64>,
}

/// The decision variables of the dual ascent plus Adam state.
#[derive(Debug, Clone)]
pub struct RelaxationState {
    pub layers: Vec<AlphaLayer>,
    step: u64,
}

/// Objective gradient with respect to every tunable slope, aligned with
/// the state layout.
#[derive(Debug, Clone)]
pub struct AlphaGrad {
    pub lower: Vec<Array1<f64>>,
    pub upper: Vec<Array1<f64>>,
}

/// Per-layer backward sign vectors (+1 selects the lower role, -1 the
/// upper role), in forward sigmoid-layer order.
#[derive(Debug, Clone, PartialEq)]
pub struct SignAssignment {
    pub signs: Vec<Array1<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub objective: f64,
    pub best_so_far: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaSnapshot {
    pub alpha_lower: Vec<Vec<f64>>,
    pub alpha_upper: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyResult {
    /// The certified lower bound (best objective value seen).
    pub bound: f64,
    pub trace: Vec<TracePoint>,
    pub best_iteration: usize,
    pub alphas: AlphaSnapshot,
    pub wall_ms: f64,
    pub iterations_run: usize,
}

struct SigLayer {
    layer_idx: usize,
    lo: Array1<f64>,
    hi: Array1<f64>,
    relax: Vec<NeuronRelax>,
}

/// Caches from one backward sweep, enough to run the adjoint pass.
struct SweepCache {
    g1: Array1<f64>,
    g2: f64,
    /// Per sigmoid layer: coefficient vector entering the layer, the
    /// slope and intercept actually used, and the role signs.
    layers: Vec<LayerCache>,
}

struct LayerCache {
    coeff: Array1<f64>,
    alpha: Array1<f64>,
    role_sign: Array1<f64>,
    beta: Array1<f64>,
    tunable: Vec<bool>,
}

/// g1^T x0 - eps * ||g1||_q + g2, with q dual to p.
pub fn dual_objective(
    g1: &Array1<f64>,
    g2: f64,
    x0: &Array1<f64>,
    epsilon: f64,
    p: NormOrder,
) -> f64 {
    g1.dot(x0) - epsilon * p.dual_norm(g1) + g2
}

/// Percent improvement of `bound_new` over `bound_ref`; positive means
/// tighter.
pub fn tau_compare(bound_new: f64, bound_ref: f64) -> Result<f64> {
    if bound_ref == 0.0 {
        return Err(Error::Domain(
            "tau is undefined for a zero reference bound".into(),
        ));
    }
    Ok(100.0 * (bound_new - bound_ref) / bound_ref.abs())
}

pub struct Verifier<'a> {
    prob: &'a VerificationProblem,
    sig_layers: Vec<SigLayer>,
}

impl<'a> Verifier<'a> {
    pub fn new(prob: &'a VerificationProblem, bounds: &ActivationBoundSet) -> Result<Self> {
        let sig_idx: Vec<usize> = prob
            .net
            .layers()
            .iter()
            .enumerate()
            .filter(|(_, l)| l.activation == Activation::Sigmoid)
            .map(|(i, _)| i)
            .collect();
        if bounds.layers.len() != sig_idx.len() {
            return Err(Error::Validation(format!(
                "bounds cover {} layers, network has {} sigmoid layers",
                bounds.layers.len(),
                sig_idx.len()
            )));
        }
        // flatten all intervals so the batch relaxation precompute can
        // parallelize across the whole network at once
        let mut intervals = Vec::new();
        for (lb, &idx) in bounds.layers.iter().zip(&sig_idx) {
            let width = prob.net.layers()[idx].out_dim();
            if lb.pre_lo.len() != width || lb.pre_hi.len() != width {
                return Err(Error::Validation(format!(
                    "bounds for layer {idx} have wrong width"
                )));
            }
            for j in 0..width {
                if lb.pre_lo[j] > lb.pre_hi[j] {
                    return Err(Error::Validation(format!(
                        "layer {idx} neuron {j}: pre_lo > pre_hi"
                    )));
                }
                intervals.push((lb.pre_lo[j], lb.pre_hi[j]));
            }
        }
        let all_relax = neuron_relaxations(&intervals)?;
        let mut sig_layers = Vec::with_capacity(sig_idx.len());
        let mut offset = 0;
        for (lb, &idx) in bounds.layers.iter().zip(&sig_idx) {
            let width = lb.pre_lo.len();
            sig_layers.push(SigLayer {
                layer_idx: idx,
                lo: lb.pre_lo.clone(),
                hi: lb.pre_hi.clone(),
                relax: all_relax[offset..offset + width].to_vec(),
            });
            offset += width;
        }
        Ok(Verifier { prob, sig_layers })
    }

    /// Initial slopes: the tangent slope at the interval midpoint,
    /// clipped into each role's feasible interval.
    pub fn init_state(&self) -> RelaxationState {
        let layers = self
            .sig_layers
            .iter()
            .map(|sl| {
                let n = sl.lo.len();
                let mut lower = Array1::zeros(n);
                let mut upper = Array1::zeros(n);
                for j in 0..n {
                    let a0 = sigmoid_prime(0.5 * (sl.lo[j] + sl.hi[j]));
                    match &sl.relax[j] {
                        NeuronRelax::Point { alpha, .. } => {
                            lower[j] = *alpha;
                            upper[j] = *alpha;
                        }
                        NeuronRelax::Range(r) => {
                            lower[j] = a0.clamp(r.lo_lower, r.hi_lower);
                            upper[j] = a0.clamp(r.lo_upper, r.hi_upper);
                        }
                    }
                }
                AlphaLayer {
                    m_lower: Array1::zeros(n),
                    v_lower: Array1::zeros(n),
                    m_upper: Array1::zeros(n),
                    v_upper: Array1::zeros(n),
                    alpha_lower: lower,
                    alpha_upper: upper,
                }
            })
            .collect();
        RelaxationState { layers, step: 0 }
    }

    /// One backward substitution pass. `fixed_signs` pins the role
    /// selection; otherwise each neuron's role follows the sign of its
    /// accumulated coefficient.
    fn sweep(&self, state: &RelaxationState, fixed_signs: Option<&SignAssignment>) -> SweepCache {
        let mut v = self.prob.c.clone();
        let mut g2 = 0.0;
        let mut caches: Vec<LayerCache> = Vec::with_capacity(self.sig_layers.len());
        let mut sig_pos = self.sig_layers.len();
        for (i, layer) in self.prob.net.layers().iter().enumerate().rev() {
            match layer.activation {
                Activation::Linear => {
                    g2 += v.dot(&layer.bias);
                    v = layer.weights.t().dot(&v);
                }
                Activation::Sigmoid => {
                    sig_pos -= 1;
                    let sl = &self.sig_layers[sig_pos];
                    debug_assert_eq!(sl.layer_idx, i);
                    let n = v.len();
                    let mut alpha = Array1::zeros(n);
                    let mut beta = Array1::zeros(n);
                    let mut role_sign = Array1::zeros(n);
                    let mut tunable = vec![false; n];
                    for j in 0..n {
                        let s = match fixed_signs {
                            Some(sa) => sa.signs[sig_pos][j],
                            None => BoundRole::from_coeff(v[j]).sign(),
                        };
                        let role = if s >= 0.0 {
                            BoundRole::Lower
                        } else {
                            BoundRole::Upper
                        };
                        let a_state = match role {
                            BoundRole::Lower => state.layers[sig_pos].alpha_lower[j],
                            BoundRole::Upper => state.layers[sig_pos].alpha_upper[j],
                        };
                        let (a, b) = sl.relax[j]
                            .line(role, a_state, sl.lo[j], sl.hi[j])
                            .expect("feasible slope selection cannot fail");
                        alpha[j] = a;
                        beta[j] = b;
                        role_sign[j] = role.sign();
                        tunable[j] = matches!(
                            &sl.relax[j],
                            NeuronRelax::Range(r) if !r.collapsed(role)
                        );
                    }
                    g2 += v.dot(&beta);
                    let u = &v * &alpha;
                    g2 += u.dot(&layer.bias);
                    caches.push(LayerCache {
                        coeff: v,
                        alpha,
                        role_sign,
                        beta,
                        tunable,
                    });
                    v = layer.weights.t().dot(&u);
                }
            }
        }
        caches.reverse(); // forward sigmoid-layer order
        SweepCache {
            g1: v,
            g2,
            layers: caches,
        }
    }

    /// Role signs for every sigmoid neuron under the current slopes.
    pub fn backward_signs(&self, state: &RelaxationState) -> SignAssignment {
        let cache = self.sweep(state, None);
        SignAssignment {
            signs: cache.layers.into_iter().map(|l| l.role_sign).collect(),
        }
    }

    /// Assemble g1, g2 under the given role assignment. The relaxed
    /// affine function g1^T x + g2 under-estimates f(x) for every x
    /// whose pre-activations respect the interval bounds.
    pub fn assemble_linear(
        &self,
        state: &RelaxationState,
        signs: &SignAssignment,
    ) -> (Array1<f64>, f64) {
        let cache = self.sweep(state, Some(signs));
        (cache.g1, cache.g2)
    }

    pub fn objective(&self, g1: &Array1<f64>, g2: f64) -> f64 {
        dual_objective(g1, g2, &self.prob.x0, self.prob.epsilon, self.prob.p)
    }

    /// Objective and its analytic gradient for a fixed role assignment.
    pub fn objective_and_grad(
        &self,
        state: &RelaxationState,
        signs: &SignAssignment,
    ) -> (f64, AlphaGrad) {
        let cache = self.sweep(state, Some(signs));
        let obj = self.objective(&cache.g1, cache.g2);
        let grad = self.adjoint(&cache);
        (obj, grad)
    }

    /// Reverse pass over the sweep. The subgradient of the q-norm at
    /// zero coefficients is taken as zero.
    fn adjoint(&self, cache: &SweepCache) -> AlphaGrad {
        let norm_grad: Array1<f64> = match self.prob.p {
            NormOrder::Infinity => cache.g1.mapv(|v| {
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }),
            NormOrder::Two => {
                let n = self.prob.p.dual_norm(&cache.g1);
                if n == 0.0 {
                    Array1::zeros(cache.g1.len())
                } else {
                    cache.g1.mapv(|v| v / n)
                }
            }
        };
        let mut vbar = &self.prob.x0 - &(norm_grad * self.prob.epsilon);
        let mut lower = Vec::with_capacity(cache.layers.len());
        let mut upper = Vec::with_capacity(cache.layers.len());
        let mut sig_pos = 0;
        for layer in self.prob.net.layers() {
            match layer.activation {
                Activation::Linear => {
                    vbar = layer.weights.dot(&vbar) + &layer.bias;
                }
                Activation::Sigmoid => {
                    let lc = &cache.layers[sig_pos];
                    let ubar = layer.weights.dot(&vbar) + &layer.bias;
                    let n = ubar.len();
                    let mut g_lower = Array1::zeros(n);
                    let mut g_upper = Array1::zeros(n);
                    for j in 0..n {
                        if !lc.tunable[j] {
                            continue;
                        }
                        let role = if lc.role_sign[j] >= 0.0 {
                            BoundRole::Lower
                        } else {
                            BoundRole::Upper
                        };
                        let h_grad = intercept_grad(lc.alpha[j], role)
                            .expect("used slope is in domain");
                        let g = lc.coeff[j] * (ubar[j] + h_grad);
                        match role {
                            BoundRole::Lower => g_lower[j] = g,
                            BoundRole::Upper => g_upper[j] = g,
                        }
                    }
                    vbar = &ubar * &lc.alpha + &lc.beta;
                    lower.push(g_lower);
                    upper.push(g_upper);
                    sig_pos += 1;
                }
            }
        }
        AlphaGrad { lower, upper }
    }

    /// Clamp every slope back into its role's feasible interval.
    pub fn clip_alphas(&self, state: &mut RelaxationState) {
        for (sl, al) in self.sig_layers.iter().zip(state.layers.iter_mut()) {
            for j in 0..sl.lo.len() {
                match &sl.relax[j] {
                    NeuronRelax::Point { alpha, .. } => {
                        al.alpha_lower[j] = *alpha;
                        al.alpha_upper[j] = *alpha;
                    }
                    NeuronRelax::Range(r) => {
                        al.alpha_lower[j] = al.alpha_lower[j].clamp(r.lo_lower, r.hi_lower);
                        al.alpha_upper[j] = al.alpha_upper[j].clamp(r.lo_upper, r.hi_upper);
                    }
                }
            }
        }
    }

    /// Run the full ascent loop.
    pub fn run(&self, config: &RunConfig) -> VerifyResult {
        let start = Instant::now();
        let mut state = self.init_state();
        let mut trace = Vec::with_capacity(config.steps + 1);
        let mut best = f64::NEG_INFINITY;
        let mut best_iteration = 0;
        let mut prev_obj: Option<f64> = None;
        let mut iterations_run = 0;
        for it in 0..=config.steps {
            let signs = self.backward_signs(&state);
            let (obj, grad) = self.objective_and_grad(&state, &signs);
            if obj > best {
                best = obj;
                best_iteration = it;
            }
            trace.push(TracePoint {
                iteration: it,
                objective: obj,
                best_so_far: best,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
            });
            let converged = prev_obj.is_some_and(|p| (obj - p).abs() < config.stop_tol);
            prev_obj = Some(obj);
            if it == config.steps || converged {
                break;
            }
            state.ascend_gradient(&grad, config);
            self.clip_alphas(&mut state);
            iterations_run += 1;
        }
        VerifyResult {
            bound: best,
            trace,
            best_iteration,
            alphas: state.snapshot(),
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
            iterations_run,
        }
    }
}

impl RelaxationState {
    /// One bias-corrected Adam ascent step over all slopes.
    pub fn ascend_gradient(&mut self, grad: &AlphaGrad, config: &RunConfig) {
        self.step += 1;
        let t = self.step as i32;
        let lr = config.lr * config.lr_decay.powi(t - 1);
        let bc1 = 1.0 - config.beta1.powi(t);
        let bc2 = 1.0 - config.beta2.powi(t);
        for (k, layer) in self.layers.iter_mut().enumerate() {
            let update = |alpha: &mut Array1<f64>,
                              m: &mut Array1<f64>,
                              v: &mut Array1<f64>,
                              g: &Array1<f64>| {
                for j in 0..alpha.len() {
                    m[j] = config.beta1 * m[j] + (1.0 - config.beta1) * g[j];
                    v[j] = config.beta2 * v[j] + (1.0 - config.beta2) * g[j] * g[j];
                    let m_hat = m[j] / bc1;
                    let v_hat = v[j] / bc2;
                    alpha[j] += lr * m_hat / (v_hat.sqrt() + config.adam_eps);
                }
            };
            update(
                &mut layer.alpha_lower,
                &mut layer.m_lower,
                &mut layer.v_lower,
                &grad.lower[k],
            );
            update(
                &mut layer.alpha_upper,
                &mut layer.m_upper,
                &mut layer.v_upper,
                &grad.upper[k],
            );
        }
    }

    pub fn snapshot(&self) -> AlphaSnapshot {
        AlphaSnapshot {
            alpha_lower: self.layers.iter().map(|l| l.alpha_lower.to_vec()).collect(),
            alpha_upper: self.layers.iter().map(|l| l.alpha_upper.to_vec()).collect(),
        }
    }
}

/// Run the alpha-sig ascent for a problem with precomputed activation
/// bounds.
pub fn run_alpha_sig(
    prob: &VerificationProblem,
    bounds: &ActivationBoundSet,
    config: &RunConfig,
) -> Result<VerifyResult> {
    Ok(Verifier::new(prob, bounds)?.run(config))
}

/// Write the iteration trace as CSV with columns
/// iteration,objective,best_so_far,wall_ms.
pub fn write_trace_csv(result: &VerifyResult, mut w: impl std::io::Write) -> Result<()> {
    writeln!(w, "iteration,objective,best_so_far,wall_ms")?;
    for p in &result.trace {
        writeln!(
            w,
            "{},{:.17e},{:.17e},{:.3}",
            p.iteration, p.objective, p.best_so_far, p.wall_ms
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::compute_activation_bounds;
    use crate::model::{Layer, NeuralNet};
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    const SIG_M1: f64 = 0.2689414213699951;
    const SIG_1: f64 = 0.7310585786300049;

    fn scalar_sigmoid_prob(c: f64) -> VerificationProblem {
        let net = NeuralNet::new(
            vec![
                Layer::new(array![[1.0]], array![0.0], Activation::Sigmoid).unwrap(),
                Layer::new(array![[1.0]], array![0.0], Activation::Linear).unwrap(),
            ],
            1,
        )
        .unwrap();
        VerificationProblem::new(net, array![c], array![0.0], 1.0, NormOrder::Infinity).unwrap()
    }

    #[test]
    fn backward_signs_last_layer() {
        let net = NeuralNet::new(
            vec![
                Layer::new(
                    array![[1.0, 0.0], [0.0, 1.0]],
                    array![0.0, 0.0],
                    Activation::Sigmoid,
                )
                .unwrap(),
                Layer::new(
                    array![[1.0, 0.0], [0.0, 1.0]],
                    array![0.0, 0.0],
                    Activation::Linear,
                )
                .unwrap(),
            ],
            2,
        )
        .unwrap();
        let mk = |c: Array1<f64>| {
            VerificationProblem::new(
                net.clone(),
                c,
                array![0.0, 0.0],
                1.0,
                NormOrder::Infinity,
            )
            .unwrap()
        };
        let prob = mk(array![1.0, 1.0]);
        let bounds = compute_activation_bounds(&prob).unwrap();
        let verifier = Verifier::new(&prob, &bounds).unwrap();
        let signs = verifier.backward_signs(&verifier.init_state());
        assert_eq!(signs.signs[0], array![1.0, 1.0]);

        let prob = mk(array![1.0, -1.0]);
        let verifier = Verifier::new(&prob, &bounds).unwrap();
        let signs = verifier.backward_signs(&verifier.init_state());
        assert_eq!(signs.signs[0], array![1.0, -1.0]);

        // zero coefficient takes +1 by convention
        let prob = mk(array![0.0, 1.0]);
        let verifier = Verifier::new(&prob, &bounds).unwrap();
        let signs = verifier.backward_signs(&verifier.init_state());
        assert_eq!(signs.signs[0], array![1.0, 1.0]);
    }

    #[test]
    fn assemble_hand_composed_chain() {
        // 1-1-1 net: c^T W2 d(alpha) W1 with alpha_lower forced to 0.2
        let net = NeuralNet::new(
            vec![
                Layer::new(array![[2.0]], array![0.0], Activation::Sigmoid).unwrap(),
                Layer::new(array![[1.0]], array![0.0], Activation::Linear).unwrap(),
            ],
            1,
        )
        .unwrap();
        let prob =
            VerificationProblem::new(net, array![1.0], array![0.0], 1.0, NormOrder::Infinity)
                .unwrap();
        let bounds = compute_activation_bounds(&prob).unwrap();
        let verifier = Verifier::new(&prob, &bounds).unwrap();
        let mut state = verifier.init_state();
        state.layers[0].alpha_lower[0] = 0.2;
        let signs = verifier.backward_signs(&state);
        let (g1, g2) = verifier.assemble_linear(&state, &signs);
        assert_abs_diff_eq!(g1[0], 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(g2, 0.46887793227386241, epsilon = 1e-12);
    }

    #[test]
    fn assemble_zero_cost_vector() {
        let prob = scalar_sigmoid_prob(0.0);
        let bounds = compute_activation_bounds(&prob).unwrap();
        let verifier = Verifier::new(&prob, &bounds).unwrap();
        let state = verifier.init_state();
        let signs = verifier.backward_signs(&state);
        let (g1, g2) = verifier.assemble_linear(&state, &signs);
        assert_eq!(g1[0], 0.0);
        assert_eq!(g2, 0.0);
    }

    #[test]
    fn assemble_purely_linear_net_is_exact() {
        let net = NeuralNet::new(
            vec![Layer::new(array![[2.0, -1.0]], array![0.5], Activation::Linear).unwrap()],
            2,
        )
        .unwrap();
        let prob = VerificationProblem::new(
            net.clone(),
            array![3.0],
            array![0.0, 0.0],
            1.0,
            NormOrder::Infinity,
        )
        .unwrap();
        let bounds = compute_activation_bounds(&prob).unwrap();
        let verifier = Verifier::new(&prob, &bounds).unwrap();
        let state = verifier.init_state();
        let signs = verifier.backward_signs(&state);
        let (g1, g2) = verifier.assemble_linear(&state, &signs);
        for x in [array![0.3, -0.9], array![-1.0, 1.0], array![0.7, 0.2]] {
            let f = prob.objective_eval(&x).unwrap();
            assert_abs_diff_eq!(g1.dot(&x) + g2, f, epsilon = 1e-12);
        }
    }

    #[test]
    fn dual_objective_examples() {
        let g1 = array![3.0, -4.0];
        let x0 = array![0.0, 0.0];
        assert_abs_diff_eq!(
            dual_objective(&g1, 1.0, &x0, 1.0, NormOrder::Infinity),
            -6.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            dual_objective(&g1, 1.0, &x0, 1.0, NormOrder::Two),
            -4.0,
            epsilon = 1e-12
        );
        // corner-enumeration oracle: min over the box of g1.x is
        // 3*0.5 - (|3|+|-4|)*0.5 with the x0 offset folded in
        assert_abs_diff_eq!(
            dual_objective(&g1, 1.0, &array![1.0, 0.0], 0.5, NormOrder::Infinity),
            0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn adam_zero_gradient_keeps_alpha() {
        let prob = scalar_sigmoid_prob(1.0);
        let bounds = compute_activation_bounds(&prob).unwrap();
        let verifier = Verifier::new(&prob, &bounds).unwrap();
        let mut state = verifier.init_state();
        let before = state.layers[0].alpha_lower[0];
        let grad = AlphaGrad {
            lower: vec![array![0.0]],
            upper: vec![array![0.0]],
        };
        state.ascend_gradient(&grad, &RunConfig::default());
        assert_eq!(state.layers[0].alpha_lower[0], before);
    }

    #[test]
    fn adam_positive_gradient_increases_until_clipped() {
        let prob = scalar_sigmoid_prob(1.0);
        let bounds = compute_activation_bounds(&prob).unwrap();
        let verifier = Verifier::new(&prob, &bounds).unwrap();
        let mut state = verifier.init_state();
        let hi = match &verifier.sig_layers[0].relax[0] {
            NeuronRelax::Range(r) => r.hi_lower,
            _ => unreachable!(),
        };
        let grad = AlphaGrad {
            lower: vec![array![1.0]],
            upper: vec![array![0.0]],
        };
        let cfg = RunConfig::default();
        let mut prev = state.layers[0].alpha_lower[0];
        for _ in 0..100 {
            state.ascend_gradient(&grad, &cfg);
            verifier.clip_alphas(&mut state);
            let cur = state.layers[0].alpha_lower[0];
            assert!(cur >= prev - 1e-15);
            prev = cur;
        }
        assert_abs_diff_eq!(prev, hi, epsilon = 1e-12);
    }

    #[test]
    fn single_sigmoid_converges_to_corner_value() {
        let prob = scalar_sigmoid_prob(1.0);
        let bounds = compute_activation_bounds(&prob).unwrap();
        let result = run_alpha_sig(&prob, &bounds, &RunConfig::default()).unwrap();
        assert_abs_diff_eq!(result.bound, SIG_M1, epsilon = 1e-4);
    }

    #[test]
    fn single_sigmoid_mirror_case() {
        let prob = scalar_sigmoid_prob(-1.0);
        let bounds = compute_activation_bounds(&prob).unwrap();
        let result = run_alpha_sig(&prob, &bounds, &RunConfig::default()).unwrap();
        assert_abs_diff_eq!(result.bound, -SIG_1, epsilon = 1e-4);
    }

    #[test]
    fn linear_net_exact_at_iteration_zero() {
        let net = NeuralNet::new(
            vec![Layer::new(array![[2.0, -1.0]], array![0.5], Activation::Linear).unwrap()],
            2,
        )
        .unwrap();
        let prob = VerificationProblem::new(
            net,
            array![1.0],
            array![0.0, 0.0],
            1.0,
            NormOrder::Infinity,
        )
        .unwrap();
        let bounds = compute_activation_bounds(&prob).unwrap();
        let cfg = RunConfig {
            steps: 0,
            ..Default::default()
        };
        let result = run_alpha_sig(&prob, &bounds, &cfg).unwrap();
        // exact corner minimum: 0.5 - (2 + 1) = -2.5
        assert_abs_diff_eq!(result.bound, -2.5, epsilon = 1e-12);
        assert_eq!(result.trace.len(), 1);
    }

    #[test]
    fn best_so_far_trace_is_nondecreasing() {
        let net = NeuralNet::generate_random(&[1, 5, 5, 5, 5, 1], 2.5, 0.25, 3).unwrap();
        let prob = VerificationProblem::new(
            net,
            array![1.0],
            array![0.0],
            1.0,
            NormOrder::Infinity,
        )
        .unwrap();
        let bounds = compute_activation_bounds(&prob).unwrap();
        let cfg = RunConfig {
            steps: 50,
            ..Default::default()
        };
        let result = run_alpha_sig(&prob, &bounds, &cfg).unwrap();
        for w in result.trace.windows(2) {
            assert!(w[1].best_so_far >= w[0].best_so_far);
        }
        let max_obj = result
            .trace
            .iter()
            .map(|p| p.objective)
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(result.bound, max_obj);
    }

    #[test]
    fn tau_examples() {
        assert_abs_diff_eq!(tau_compare(-4.0, -5.0).unwrap(), 20.0, epsilon = 1e-12);
        assert_eq!(tau_compare(-3.5, -3.5).unwrap(), 0.0);
        assert!(tau_compare(1.0, 0.0).is_err());
    }

    #[test]
    fn mismatched_bounds_are_rejected() {
        let prob = scalar_sigmoid_prob(1.0);
        let empty = ActivationBoundSet { layers: vec![] };
        assert!(matches!(
            Verifier::new(&prob, &empty),
            Err(Error::Validation(_))
        ));
    }
}
