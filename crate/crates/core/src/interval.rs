//! Interval bound propagation: forward interval arithmetic through the
//! linear layers and the element-wise monotone sigmoid, producing
//! pre-activation intervals for every sigmoid neuron.

use ndarray::Array1;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Activation, VerificationProblem};
use crate::relaxation::sigmoid;

/// Pre-activation intervals for one sigmoid layer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerBounds {
    /// Index of the layer in the network.
    pub layer: usize,
    pub pre_lo: Array1<f64>,
    pub pre_hi: Array1<f64>,
}

impl LayerBounds {
    /// Post-activation bounds, derived from the pre-activation intervals
    /// by monotonicity.
    pub fn post_lo(&self) -> Array1<f64> {
        self.pre_lo.mapv(sigmoid)
    }

    pub fn post_hi(&self) -> Array1<f64> {
        self.pre_hi.mapv(sigmoid)
    }
}

/// Pre-activation intervals for all sigmoid layers of a network, in
/// layer order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActivationBoundSet {
    pub layers: Vec<LayerBounds>,
}

impl ActivationBoundSet {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bounds serialization cannot fail")
    }
}

/// The input box of the problem: [x0 - eps, x0 + eps] per coordinate.
/// For p = 2 this is the enclosing box of the ball (a sound outer
/// approximation for interval propagation).
pub fn input_box(prob: &VerificationProblem) -> (Array1<f64>, Array1<f64>) {
    let lo = prob.x0.mapv(|v| v - prob.epsilon);
    let hi = prob.x0.mapv(|v| v + prob.epsilon);
    (lo, hi)
}

/// Propagate a box through one affine layer: with mid = (hi+lo)/2 and
/// rad = (hi-lo)/2, the output interval is W*mid + b -/+ |W|*rad.
pub fn ibp_layer(
    weights: &ndarray::Array2<f64>,
    bias: &Array1<f64>,
    lo: &Array1<f64>,
    hi: &Array1<f64>,
) -> Result<(Array1<f64>, Array1<f64>)> {
    if lo.len() != hi.len() || weights.ncols() != lo.len() || weights.nrows() != bias.len() {
        return Err(Error::invalid("ibp_layer dimension mismatch"));
    }
    if lo.iter().zip(hi.iter()).any(|(a, b)| a > b) {
        return Err(Error::invalid("ibp_layer requires lo <= hi"));
    }
    let mid = (hi + lo) * 0.5;
    let rad = (hi - lo) * 0.5;
    let abs_w = weights.mapv(f64::abs);
    let center = weights.dot(&mid) + bias;
    let spread = abs_w.dot(&rad);
    Ok((&center - &spread, center + spread))
}

/// One IBP sweep over the whole network, recording the pre-activation
/// interval of every sigmoid layer.
pub fn compute_activation_bounds(prob: &VerificationProblem) -> Result<ActivationBoundSet> {
    let (mut lo, mut hi) = input_box(prob);
    let mut layers = Vec::new();
    for (i, layer) in prob.net.layers().iter().enumerate() {
        let (pre_lo, pre_hi) = ibp_layer(&layer.weights, &layer.bias, &lo, &hi)?;
        match layer.activation {
            Activation::Sigmoid => {
                lo = pre_lo.mapv(sigmoid);
                hi = pre_hi.mapv(sigmoid);
                layers.push(LayerBounds {
                    layer: i,
                    pre_lo,
                    pre_hi,
                });
            }
            Activation::Linear => {
                lo = pre_lo;
                hi = pre_hi;
            }
        }
    }
    Ok(ActivationBoundSet { layers })
}
