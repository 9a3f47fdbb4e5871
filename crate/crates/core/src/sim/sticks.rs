use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma};

use super::McConfig;
use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::sample::SampleSummary;

/// One truncated stick-breaking realization.
#[derive(Debug, Clone, PartialEq)]
pub struct StickDraw {
    /// Size-biased atoms `W_i Π_{l<i} (1 - W_l)`.
    pub weights: Vec<f64>,
    /// Unassigned mass `Π (1 - W_i)`.
    pub residual: f64,
}

fn beta(a: f64, b: f64) -> Result<Beta<f64>> {
    Beta::new(a, b).map_err(|e| Error::Domain(format!("Beta({a}, {b}): {e}")))
}

/// Stick `i` (1-based) of PD(α, θ): `Beta(1 - α, θ + iα)`.
pub(crate) fn stick(alpha: f64, theta: f64, i: usize) -> Result<Beta<f64>> {
    beta(1.0 - alpha, theta + i as f64 * alpha)
}

fn require_nonnegative_alpha(model: &ModelSpec) -> Result<()> {
    if model.alpha() < 0.0 {
        return Err(Error::Domain(
            "stick-breaking needs alpha >= 0; finite-species models use Dirichlet weights".into(),
        ));
    }
    Ok(())
}

/// Stick-breaking weights of PD(α, θ) until the unassigned mass `R`
/// satisfies `R⁴ <= truncation_tol`.
pub fn stick_breaking_weights<R: Rng + ?Sized>(model: &ModelSpec, config: &McConfig, rng: &mut R) -> Result<StickDraw> {
    require_nonnegative_alpha(model)?;
    let limit = config.residual_mass_limit();
    let mut weights = Vec::new();
    let mut residual = 1.0;
    while residual > limit {
        if weights.len() >= config.max_sticks {
            return Err(Error::TruncationCap {
                max_sticks: config.max_sticks,
                residual,
            });
        }
        let w: f64 = stick(model.alpha(), model.theta(), weights.len() + 1)?.sample(rng);
        weights.push(residual * w);
        residual *= 1.0 - w;
    }
    Ok(StickDraw { weights, residual })
}

/// Power sum `Σ w_i²` of a PD(α, θ) stick-breaking sequence scaled by
/// `scale`, stopped once `(scale · R)⁴ <= tol`, with the tail `(scale R)² T`
/// replaced by `(scale R)² W'` for one extra independent stick `W'`
/// (`E[W'] = E[T]` by size-biased sampling). Returns the power sum and
/// `(scale · R)²`.
pub(crate) fn stick_power_sum<R: Rng + ?Sized>(
    alpha: f64,
    theta: f64,
    scale: f64,
    config: &McConfig,
    rng: &mut R,
) -> Result<(f64, f64)> {
    let limit = config.residual_mass_limit();
    let mut sum_sq = 0.0;
    let mut mass = scale;
    let mut used = 0;
    while mass > limit {
        if used >= config.max_sticks {
            return Err(Error::TruncationCap {
                max_sticks: config.max_sticks,
                residual: mass,
            });
        }
        used += 1;
        let w: f64 = stick(alpha, theta, used)?.sample(rng);
        sum_sq += (mass * w).powi(2);
        mass *= 1.0 - w;
    }
    let tail: f64 = stick(alpha, theta, used + 1)?.sample(rng);
    let tail_sq = mass * mass;
    Ok((sum_sq + tail_sq * tail, tail_sq))
}

/// `ln G` for `G ~ Gamma(shape, 1)`, stable for small shapes.
fn log_gamma_variate<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> Result<f64> {
    let gamma = |s: f64| Gamma::new(s, 1.0).map_err(|e| Error::Domain(format!("Gamma({s}): {e}")));
    if shape >= 1.0 {
        Ok(gamma(shape)?.sample(rng).ln())
    } else {
        // G(a) = G(a + 1) U^{1/a}
        let g = gamma(shape + 1.0)?.sample(rng).ln();
        let u: f64 = rng.random::<f64>();
        Ok(g + (1.0 - u).ln() / shape)
    }
}

/// A Dirichlet draw by normalizing independent gamma variates.
pub fn dirichlet_weights<R: Rng + ?Sized>(concentrations: &[f64], rng: &mut R) -> Result<Vec<f64>> {
    if let Some(c) = concentrations.iter().find(|&&c| !(c > 0.0 && c.is_finite())) {
        return Err(Error::Domain(format!(
            "Dirichlet concentrations must be positive, got {c}"
        )));
    }
    if concentrations.len() == 1 {
        return Ok(vec![1.0]);
    }
    let logs = concentrations
        .iter()
        .map(|&c| log_gamma_variate(c, rng))
        .collect::<Result<Vec<_>>>()?;
    let hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = logs.iter().map(|l| (l - hi).exp()).collect();
    let total: f64 = scaled.iter().sum();
    Ok(scaled.into_iter().map(|x| x / total).collect())
}

/// One draw from the PD posterior: Dirichlet front weights for the observed
/// species plus a PD(α, θ + kα) stick-breaking remainder.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorWeights {
    /// Weights of the `k` observed species.
    pub front: Vec<f64>,
    /// Mass `R̃_k` handed to the remainder.
    pub remainder_mass: f64,
    /// Unscaled sticks of the remainder; they sum with `residual` to one.
    pub remainder_sticks: Vec<f64>,
    pub residual: f64,
}

impl PosteriorWeights {
    pub fn total(&self) -> f64 {
        self.front.iter().sum::<f64>()
            + self.remainder_mass * (self.remainder_sticks.iter().sum::<f64>() + self.residual)
    }
}

pub(crate) fn posterior_concentrations(model: &ModelSpec, summary: &SampleSummary) -> Vec<f64> {
    let mut conc: Vec<f64> = summary
        .multiplicities()
        .iter()
        .map(|&nj| nj as f64 - model.alpha())
        .collect();
    conc.push(model.new_species_weight(summary.k()));
    conc
}

pub fn posterior_weight_sample<R: Rng + ?Sized>(
    model: &ModelSpec,
    summary: &SampleSummary,
    config: &McConfig,
    rng: &mut R,
) -> Result<PosteriorWeights> {
    require_nonnegative_alpha(model)?;
    if summary.is_empty() {
        return Err(Error::InvalidSample(
            "posterior sampling needs data; use the prior sampler".into(),
        ));
    }
    let mut front = dirichlet_weights(&posterior_concentrations(model, summary), rng)?;
    let remainder_mass = front.pop().unwrap_or(0.0);
    let tail_model = ModelSpec::pitman_yor(model.alpha(), model.new_species_weight(summary.k()))?;
    let tail = stick_breaking_weights(&tail_model, config, rng)?;
    Ok(PosteriorWeights {
        front,
        remainder_mass,
        remainder_sticks: tail.weights,
        residual: tail.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::summarize_sample;
    use crate::sim::draw_rng;

    fn mean_se(xs: &[f64]) -> (f64, f64) {
        crate::sim::mean_and_se(xs)
    }

    const REPS: u64 = 100_000;

    #[test]
    fn sticks_sum_to_one() {
        let model = ModelSpec::pitman_yor(0.3, 1.5).unwrap();
        let cfg = McConfig::default();
        for i in 0..200 {
            let d = stick_breaking_weights(&model, &cfg, &mut draw_rng(1, i)).unwrap();
            let total: f64 = d.weights.iter().sum::<f64>() + d.residual;
            assert!((total - 1.0).abs() < 1e-12);
            assert!(d.residual.powi(4) <= cfg.truncation_tol);
        }
    }

    #[test]
    fn first_ewens_stick_mean() {
        let theta = 2.0;
        let model = ModelSpec::ewens(theta).unwrap();
        let cfg = McConfig::default();
        let firsts: Vec<f64> = (0..REPS)
            .map(|i| {
                stick_breaking_weights(&model, &cfg, &mut draw_rng(11, i))
                    .unwrap()
                    .weights[0]
            })
            .collect();
        let (m, se) = mean_se(&firsts);
        assert!((m - 1.0 / (1.0 + theta)).abs() < 4.0 * se, "{m} ± {se}");
    }

    #[test]
    fn stick_cap_is_reported() {
        let model = ModelSpec::stable(0.9).unwrap();
        let cfg = McConfig {
            max_sticks: 50,
            ..Default::default()
        };
        let err = stick_breaking_weights(&model, &cfg, &mut draw_rng(3, 0)).unwrap_err();
        assert!(matches!(err, Error::TruncationCap { max_sticks: 50, .. }));
        assert!(stick_breaking_weights(&ModelSpec::fisher(-1.0, 3).unwrap(), &cfg, &mut draw_rng(3, 0)).is_err());
    }

    #[test]
    fn dirichlet_moments() {
        let one = dirichlet_weights(&[0.7], &mut draw_rng(0, 0)).unwrap();
        assert_eq!(one, vec![1.0]);
        assert!(dirichlet_weights(&[1.0, 0.0], &mut draw_rng(0, 0)).is_err());

        let sym: Vec<Vec<f64>> = (0..REPS)
            .map(|i| dirichlet_weights(&[1.0, 1.0], &mut draw_rng(5, i)).unwrap())
            .collect();
        for c in 0..2 {
            let xs: Vec<f64> = sym.iter().map(|w| w[c]).collect();
            let (m, se) = mean_se(&xs);
            assert!((m - 0.5).abs() < 4.0 * se);
        }
        let skew: Vec<f64> = (0..REPS)
            .map(|i| dirichlet_weights(&[2.0, 1.0], &mut draw_rng(6, i)).unwrap()[0])
            .collect();
        let (m, se) = mean_se(&skew);
        assert!((m - 2.0 / 3.0).abs() < 4.0 * se);
    }

    #[test]
    fn tiny_concentrations_stay_normalized() {
        for i in 0..1000 {
            let w = dirichlet_weights(&[1e-3, 2e-3, 5e-4], &mut draw_rng(9, i)).unwrap();
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(w.iter().all(|x| x.is_finite() && *x >= 0.0));
        }
    }

    #[test]
    fn posterior_front_means() {
        let (alpha, theta) = (0.5, 0.5);
        let model = ModelSpec::pitman_yor(alpha, theta).unwrap();
        let data = summarize_sample(&[2, 1]).unwrap();
        let cfg = McConfig::default();
        let draws: Vec<PosteriorWeights> = (0..REPS)
            .map(|i| posterior_weight_sample(&model, &data, &cfg, &mut draw_rng(21, i)).unwrap())
            .collect();
        let n = 3.0;
        for (j, &nj) in data.multiplicities().iter().enumerate() {
            let xs: Vec<f64> = draws.iter().map(|d| d.front[j]).collect();
            let (m, se) = mean_se(&xs);
            assert!((m - (nj as f64 - alpha) / (theta + n)).abs() < 4.0 * se);
        }
        let rs: Vec<f64> = draws.iter().map(|d| d.remainder_mass).collect();
        let (m, se) = mean_se(&rs);
        assert!((m - (theta + 2.0 * alpha) / (theta + n)).abs() < 4.0 * se);
        assert!(draws.iter().all(|d| (d.total() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn posterior_needs_data() {
        let model = ModelSpec::ewens(1.0).unwrap();
        let cfg = McConfig::default();
        assert!(posterior_weight_sample(&model, &SampleSummary::empty(), &cfg, &mut draw_rng(0, 0)).is_err());
    }
}
