use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sticks::{dirichlet_weights, posterior_concentrations, stick_power_sum};
use super::{draw_rng, mean_and_se, pairwise_sum, McConfig, McEstimate, SimRng};
use crate::error::Result;
use crate::estimate::EvennessEstimate;
use crate::model::ModelSpec;
use crate::sample::SampleSummary;

/// Monte Carlo moments of `H_S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEvenness {
    pub mean: McEstimate,
    pub second_moment: McEstimate,
    /// Unbiased sample variance of the per-draw `H_S` values.
    pub variance: f64,
    /// Large-sample standard error of `variance`.
    pub variance_std_error: f64,
}

impl McEvenness {
    pub fn to_estimate(&self) -> EvennessEstimate {
        EvennessEstimate::monte_carlo(self.mean.value, self.variance, self.mean.std_error, self.mean.draws)
    }
}

/// One draw: `(H_S, bound on the tail's contribution to H_S)`.
type Draw = (f64, f64);

fn run<F>(config: &McConfig, draw: F) -> Result<McEvenness>
where
    F: Fn(&mut SimRng) -> Result<Draw> + Sync,
{
    config.validate()?;
    let draws: Vec<Draw> = (0..config.draws)
        .into_par_iter()
        .map(|i| draw(&mut draw_rng(config.seed, i)))
        .collect::<Result<_>>()?;
    Ok(summarize(&draws))
}

fn summarize(draws: &[Draw]) -> McEvenness {
    let n = draws.len() as f64;
    let h: Vec<f64> = draws.iter().map(|d| d.0).collect();
    let h2: Vec<f64> = h.iter().map(|x| x * x).collect();
    let bounds: Vec<f64> = draws.iter().map(|d| d.1).collect();
    let residual = pairwise_sum(&bounds) / n;

    let (mean, mean_se) = mean_and_se(&h);
    let (second, second_se) = mean_and_se(&h2);

    let dev2: Vec<f64> = h.iter().map(|x| (x - mean).powi(2)).collect();
    let dev4: Vec<f64> = dev2.iter().map(|x| x * x).collect();
    let m2 = pairwise_sum(&dev2) / n;
    let m4 = pairwise_sum(&dev4) / n;
    let variance = m2 * n / (n - 1.0);
    let variance_std_error = ((m4 - m2 * m2).max(0.0) / n).sqrt();

    let count = draws.len() as u64;
    McEvenness {
        mean: McEstimate {
            value: mean,
            std_error: mean_se,
            draws: count,
            residual_bound: residual,
        },
        second_moment: McEstimate {
            value: second,
            std_error: second_se,
            draws: count,
            residual_bound: 2.0 * residual,
        },
        variance,
        variance_std_error,
    }
}

fn sum_of_squares(ws: &[f64]) -> f64 {
    ws.iter().map(|w| w * w).sum()
}

/// Prior Monte Carlo for `H_S`: symmetric Dirichlet weights for `α < 0`,
/// stick-breaking otherwise.
pub fn mc_prior_evenness(model: &ModelSpec, config: &McConfig) -> Result<McEvenness> {
    match model.xi() {
        Some(xi) => {
            let conc = vec![model.alpha().abs(); xi as usize];
            run(config, |rng| {
                let w = dirichlet_weights(&conc, rng)?;
                Ok((1.0 - sum_of_squares(&w), 0.0))
            })
        }
        None => run(config, |rng| {
            let (s2, tail) = stick_power_sum(model.alpha(), model.theta(), 1.0, config, rng)?;
            Ok((1.0 - s2, tail))
        }),
    }
}

/// Posterior Monte Carlo for `H_S`. For `α >= 0` the posterior is a Dirichlet
/// front over the observed species and a PD(α, θ + kα) remainder; for
/// `α < 0` it is the conjugate Dirichlet over all ξ species.
pub fn mc_posterior_evenness(model: &ModelSpec, summary: &SampleSummary, config: &McConfig) -> Result<McEvenness> {
    if summary.is_empty() {
        return mc_prior_evenness(model, config);
    }
    match model.xi() {
        Some(xi) => {
            let conc = super::conjugate::conjugate_concentrations(model.alpha(), xi, summary)?;
            run(config, |rng| {
                let w = dirichlet_weights(&conc, rng)?;
                Ok((1.0 - sum_of_squares(&w), 0.0))
            })
        }
        None => {
            let conc = posterior_concentrations(model, summary);
            let tail_theta = model.new_species_weight(summary.k());
            run(config, |rng| {
                let mut front = dirichlet_weights(&conc, rng)?;
                let remainder = front.pop().unwrap_or(0.0);
                let (tail_s2, tail) = stick_power_sum(model.alpha(), tail_theta, remainder, config, rng)?;
                Ok((1.0 - sum_of_squares(&front) - tail_s2, tail))
            })
        }
    }
}
