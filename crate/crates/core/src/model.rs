//! Dense feedforward networks with sigmoid hidden layers and a linear
//! output stack, plus the verification objective wrapper.
//!
//! Random generation is reproducible across platforms: weights are drawn
//! from a ChaCha8 stream (`rand_chacha::ChaCha8Rng`) through the ziggurat
//! normal sampler of `rand_distr::Normal`. The same seed yields the same
//! network on every platform.

use ndarray::{Array1, Array2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::relaxation::sigmoid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Sigmoid,
    Linear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: Array2<f64>,
    pub bias: Array1<f64>,
    pub activation: Activation,
}

impl Layer {
    pub fn new(weights: Array2<f64>, bias: Array1<f64>, activation: Activation) -> Result<Self> {
        if weights.nrows() != bias.len() {
            return Err(Error::Validation(format!(
                "weight rows ({}) do not match bias length ({})",
                weights.nrows(),
                bias.len()
            )));
        }
        if weights.iter().chain(bias.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Validation("non-finite layer entry".into()));
        }
        Ok(Layer {
            weights,
            bias,
            activation,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.weights.ncols()
    }

    pub fn out_dim(&self) -> usize {
        self.weights.nrows()
    }
}

/// An ordered stack of dense layers. All sigmoid layers precede the
/// trailing linear block; the last layer is always linear.
#[derive(Debug, Clone, PartialEq)]
pub struct NeuralNet {
    layers: Vec<Layer>,
    input_dim: usize,
}

impl NeuralNet {
    pub fn new(layers: Vec<Layer>, input_dim: usize) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Validation("network has no layers".into()));
        }
        if input_dim == 0 {
            return Err(Error::Validation("input_dim must be positive".into()));
        }
        let mut prev = input_dim;
        for (i, layer) in layers.iter().enumerate() {
            if layer.in_dim() != prev {
                return Err(Error::Validation(format!(
                    "layer {i}: expected input width {prev}, found {}",
                    layer.in_dim()
                )));
            }
            prev = layer.out_dim();
        }
        if layers.last().unwrap().activation != Activation::Linear {
            return Err(Error::Validation("last layer must be linear".into()));
        }
        // suffix-linear: once a linear layer appears, no sigmoid may follow
        let first_linear = layers
            .iter()
            .position(|l| l.activation == Activation::Linear)
            .unwrap();
        if layers[first_linear..]
            .iter()
            .any(|l| l.activation == Activation::Sigmoid)
        {
            return Err(Error::Validation(
                "sigmoid layer after a linear layer is not supported".into(),
            ));
        }
        Ok(NeuralNet { layers, input_dim })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().out_dim()
    }

    pub fn num_sigmoid_neurons(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| l.activation == Activation::Sigmoid)
            .map(|l| l.out_dim())
            .sum()
    }

    /// Draws every weight i.i.d. Normal(0, weight_std^2) and every bias
    /// Normal(0, bias_std^2). Hidden layers are sigmoid, the last linear.
    pub fn generate_random(
        layer_widths: &[usize],
        weight_std: f64,
        bias_std: f64,
        seed: u64,
    ) -> Result<Self> {
        if layer_widths.len() < 2 {
            return Err(Error::invalid("layer_widths needs at least 2 entries"));
        }
        if layer_widths.iter().any(|&w| w == 0) {
            return Err(Error::invalid("layer widths must be positive"));
        }
        if !(weight_std > 0.0) || !(bias_std > 0.0) {
            return Err(Error::invalid("weight_std and bias_std must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w_dist = Normal::new(0.0, weight_std).unwrap();
        let b_dist = Normal::new(0.0, bias_std).unwrap();
        let n_layers = layer_widths.len() - 1;
        let mut layers = Vec::with_capacity(n_layers);
        for i in 0..n_layers {
            let (rows, cols) = (layer_widths[i + 1], layer_widths[i]);
            let weights =
                Array2::from_shape_fn((rows, cols), |_| w_dist.sample(&mut rng));
            let bias = Array1::from_shape_fn(rows, |_| b_dist.sample(&mut rng));
            let activation = if i + 1 == n_layers {
                Activation::Linear
            } else {
                Activation::Sigmoid
            };
            layers.push(Layer::new(weights, bias, activation)?);
        }
        NeuralNet::new(layers, layer_widths[0])
    }

    pub fn forward(&self, x: &Array1<f64>) -> Result<Array1<f64>> {
        if x.len() != self.input_dim {
            return Err(Error::invalid(format!(
                "input length {} does not match input_dim {}",
                x.len(),
                self.input_dim
            )));
        }
        let mut v = x.clone();
        for layer in &self.layers {
            v = layer.weights.dot(&v) + &layer.bias;
            if layer.activation == Activation::Sigmoid {
                v.mapv_inplace(sigmoid);
            }
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormOrder {
    #[serde(rename = "two")]
    Two,
    #[serde(rename = "inf")]
    Infinity,
}

impl NormOrder {
    /// Dual norm of g, with 1/p + 1/q = 1: p=inf -> q=1, p=2 -> q=2.
    pub fn dual_norm(&self, g: &Array1<f64>) -> f64 {
        match self {
            NormOrder::Infinity => g.iter().map(|v| v.abs()).sum(),
            NormOrder::Two => g.iter().map(|v| v * v).sum::<f64>().sqrt(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerificationProblem {
    pub net: NeuralNet,
    pub c: Array1<f64>,
    pub x0: Array1<f64>,
    pub epsilon: f64,
    pub p: NormOrder,
}

impl VerificationProblem {
    pub fn new(
        net: NeuralNet,
        c: Array1<f64>,
        x0: Array1<f64>,
        epsilon: f64,
        p: NormOrder,
    ) -> Result<Self> {
        if c.len() != net.output_dim() {
            return Err(Error::invalid(format!(
                "c has length {}, network output dim is {}",
                c.len(),
                net.output_dim()
            )));
        }
        if x0.len() != net.input_dim() {
            return Err(Error::invalid(format!(
                "x0 has length {}, network input dim is {}",
                x0.len(),
                net.input_dim()
            )));
        }
        if !(epsilon > 0.0) {
            return Err(Error::invalid("epsilon must be positive"));
        }
        Ok(VerificationProblem {
            net,
            c,
            x0,
            epsilon,
            p,
        })
    }

    /// f(x) = c^T NN(x).
    pub fn objective_eval(&self, x: &Array1<f64>) -> Result<f64> {
        Ok(self.c.dot(&self.net.forward(x)?))
    }
}

#[derive(Serialize, Deserialize)]
struct LayerJson {
    weights: Vec<Vec<f64>>,
    bias: Vec<f64>,
    activation: Activation,
}

#[derive(Serialize, Deserialize)]
struct NetJson {
    input_dim: usize,
    layers: Vec<LayerJson>,
}

impl NeuralNet {
    pub fn to_json(&self) -> String {
        let json = NetJson {
            input_dim: self.input_dim,
            layers: self
                .layers
                .iter()
                .map(|l| LayerJson {
                    weights: l.weights.rows().into_iter().map(|r| r.to_vec()).collect(),
                    bias: l.bias.to_vec(),
                    activation: l.activation,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&json).expect("network serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let json: NetJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut layers = Vec::with_capacity(json.layers.len());
        for (i, lj) in json.layers.into_iter().enumerate() {
            let rows = lj.weights.len();
            let cols = lj.weights.first().map_or(0, |r| r.len());
            if lj.weights.iter().any(|r| r.len() != cols) {
                return Err(Error::Validation(format!(
                    "layer {i}: ragged weight rows"
                )));
            }
            let flat: Vec<f64> = lj.weights.into_iter().flatten().collect();
            let weights = Array2::from_shape_vec((rows, cols), flat)
                .map_err(|e| Error::Validation(format!("layer {i}: {e}")))?;
            layers.push(
                Layer::new(weights, Array1::from(lj.bias), lj.activation)
                    .map_err(|e| Error::Validation(format!("layer {i}: {e}")))?,
            );
        }
        NeuralNet::new(layers, json.input_dim)
    }
}

pub fn save_model(net: &NeuralNet, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, net.to_json())?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<NeuralNet> {
    let text = std::fs::read_to_string(path)?;
    NeuralNet::from_json(&text)
}
