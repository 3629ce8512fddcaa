//! Certified lower bounds on linear output functionals of
//! sigmoid-activated feedforward networks over norm-ball input sets.
//!
//! The pipeline: interval bound propagation produces a pre-activation
//! interval per sigmoid neuron ([`interval`]); each sigmoid is replaced
//! by tunable tangent-line bounds with a closed-form slope-to-intercept
//! map ([`relaxation`]); backward substitution collapses the relaxed
//! network into a single affine under-estimator whose dual-norm minimum
//! over the input set is maximized over the slopes by projected Adam
//! ascent ([`verifier`]). The [`oracle`] module supplies independent
//! ground truth for all of it.

pub mod error;
pub mod interval;
pub mod model;
pub mod oracle;
pub mod relaxation;
pub mod verifier;

pub use error::{Error, Result};
pub use interval::{compute_activation_bounds, input_box, ActivationBoundSet};
pub use model::{load_model, save_model, Activation, Layer, NeuralNet, NormOrder, VerificationProblem};
pub use relaxation::{BoundRole, NeuronRelax, SlopeRange};
pub use verifier::{dual_objective, run_alpha_sig, tau_compare, RunConfig, VerifyResult};
