//! Bayesian nonparametric estimation of Simpson's evenness index and of
//! predictive species richness under Gibbs-type priors: the two-parameter
//! Poisson-Dirichlet (Pitman-Yor) family and its Ewens, Stable and Fisher
//! sub-models.
//!
//! * [`model`], [`sample`], [`factorial`]: parameter domains, data and
//!   rising factorials.
//! * [`eppf`], [`richness`], [`fit`]: partition probabilities, predictive
//!   rules, the distribution of new species in a further sample and
//!   likelihood fitting.
//! * [`evenness`]: closed-form prior and posterior moments of `H_S`.
//! * [`sim`]: samplers and Monte Carlo / conjugate oracles.
//! * [`cli`]: CSV ingestion, reports and the command implementations.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod eppf;
pub mod error;
pub mod estimate;
pub mod evenness;
pub mod factorial;
pub mod fit;
pub mod model;
pub mod richness;
pub mod sample;
pub mod sim;

pub use eppf::{eppf, log_eppf, predictive_probs, GibbsWeights, Predictive};
pub use error::{Error, Result};
pub use estimate::{EstimateMethod, EvennessEstimate};
pub use evenness::{
    dirichlet_mixed_moment, plugin_simpson, posterior_evenness, posterior_evenness_mean, posterior_evenness_variance,
    prior_evenness, prior_evenness_mean, prior_evenness_variance, prior_s2_moment,
};
pub use factorial::{gen_rising_factorial, log_rising_factorial, rising_factorial};
pub use fit::{fit_parameters, FitOptions, FitResult};
pub use model::{validate_model, ModelSpec, RawModel, Variant};
pub use richness::{expected_new_species, richness_predictive, RichnessDistribution};
pub use sample::{summarize_sample, SampleSummary};
pub use sim::{McConfig, McEstimate};
