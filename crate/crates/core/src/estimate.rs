use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMethod {
    ClosedForm,
    MonteCarlo,
    ConjugateExact,
}

/// Mean and variance of Simpson's evenness index `H_S`, prior or posterior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvennessEstimate {
    pub mean: f64,
    pub variance: f64,
    pub method: EstimateMethod,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub std_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub draws: Option<u64>,
}

impl EvennessEstimate {
    /// Exact estimate. Rounding noise can push a zero variance or a
    /// boundary mean a few ulps outside its range; those are clamped.
    pub fn exact(mean: f64, variance: f64, method: EstimateMethod) -> Self {
        debug_assert!(method != EstimateMethod::MonteCarlo);
        Self {
            mean: mean.clamp(0.0, 1.0),
            variance: variance.max(0.0),
            method,
            std_error: None,
            draws: None,
        }
    }

    pub fn monte_carlo(mean: f64, variance: f64, std_error: f64, draws: u64) -> Self {
        Self {
            mean,
            variance: variance.max(0.0),
            method: EstimateMethod::MonteCarlo,
            std_error: Some(std_error),
            draws: Some(draws),
        }
    }

    /// `E[S_2] = 1 - E[H_S]`.
    pub fn s2_mean(&self) -> f64 {
        1.0 - self.mean
    }
}
