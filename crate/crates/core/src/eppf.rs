//! Exchangeable partition probability functions of Gibbs type and their
//! one-step predictive rules.

use crate::error::{Error, Result};
use crate::factorial::log_rising_unchecked;
use crate::model::ModelSpec;
use crate::sample::SampleSummary;

/// Partition weights of a Gibbs-type prior, `p(n_1..n_k) = V_{n,k} Π (1-α)_{n_j-1}`.
///
/// Implementors supply `log V_{n,k}` (negative infinity where `V_{n,k} = 0`);
/// predictive probabilities default to ratios of V-coefficients.
pub trait GibbsWeights {
    fn alpha(&self) -> f64;

    fn log_v(&self, n: u64, k: u64) -> f64;

    fn v(&self, n: u64, k: u64) -> f64 {
        self.log_v(n, k).exp()
    }

    /// Probability that observation `n + 1` is a new species given `n`
    /// observations of `k` species.
    fn new_species_prob(&self, n: u64, k: u64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        (self.log_v(n + 1, k + 1) - self.log_v(n, k)).exp()
    }

    /// Factor `c` such that observation `n + 1` joins species `j` with
    /// probability `(n_j - α) c`.
    fn existing_scale(&self, n: u64, k: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        (self.log_v(n + 1, k) - self.log_v(n, k)).exp()
    }
}

impl GibbsWeights for ModelSpec {
    fn alpha(&self) -> f64 {
        ModelSpec::alpha(self)
    }

    /// `log (θ+α)_{k-1↑α} - log (θ+1)_{n-1}`.
    fn log_v(&self, n: u64, k: u64) -> f64 {
        if n == 0 {
            return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
        }
        if k == 0 || k > n {
            return f64::NEG_INFINITY;
        }
        let mut num = 0.0;
        for i in 1..k {
            let w = self.new_species_weight(i);
            if w <= 0.0 {
                return f64::NEG_INFINITY;
            }
            num += w.ln();
        }
        num - log_rising_unchecked(self.theta() + 1.0, n - 1)
    }

    fn new_species_prob(&self, n: u64, k: u64) -> f64 {
        if n == 0 {
            1.0
        } else {
            self.new_species_weight(k) / (self.theta() + n as f64)
        }
    }

    fn existing_scale(&self, n: u64, _k: u64) -> f64 {
        if n == 0 {
            0.0
        } else {
            1.0 / (self.theta() + n as f64)
        }
    }
}

/// Natural log of the EPPF at the observed multiplicities.
pub fn log_eppf<W: GibbsWeights + ?Sized>(weights: &W, summary: &SampleSummary) -> Result<f64> {
    if summary.is_empty() {
        return Err(Error::InvalidSample("the EPPF needs at least one observation".into()));
    }
    let one_minus_alpha = 1.0 - weights.alpha();
    let blocks: f64 = summary
        .multiplicities()
        .iter()
        .map(|&nj| log_rising_unchecked(one_minus_alpha, nj - 1))
        .sum();
    Ok(weights.log_v(summary.n(), summary.k()) + blocks)
}

/// Probability of the observed partition.
pub fn eppf<W: GibbsWeights + ?Sized>(weights: &W, summary: &SampleSummary) -> Result<f64> {
    log_eppf(weights, summary).map(f64::exp)
}

/// One-step predictive distribution: a new species, or one of the `k` seen.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictive {
    pub p_new: f64,
    pub p_old: Vec<f64>,
}

impl Predictive {
    pub fn total(&self) -> f64 {
        self.p_new + self.p_old.iter().sum::<f64>()
    }
}

pub fn predictive_probs<W: GibbsWeights + ?Sized>(weights: &W, summary: &SampleSummary) -> Predictive {
    let (n, k) = (summary.n(), summary.k());
    let p_new = weights.new_species_prob(n, k);
    let scale = weights.existing_scale(n, k);
    let alpha = weights.alpha();
    let p_old = summary
        .multiplicities()
        .iter()
        .map(|&nj| (nj as f64 - alpha) * scale)
        .collect();
    Predictive { p_new, p_old }
}
