//! Prior and posterior moments of Simpson's evenness index
//! `H_S = 1 - S_2`, `S_2 = Σ P_j²`.
//!
//! Prior moments hold for any Gibbs weights; posterior moments are for
//! PD(α, θ), whose posterior splits into a Dirichlet front over the observed
//! species and an independent PD(α, θ + kα) remainder.

use serde::{Deserialize, Serialize};

use crate::eppf::GibbsWeights;
use crate::error::{Error, Result};
use crate::estimate::{EstimateMethod, EvennessEstimate};
use crate::factorial::rising_factorial;
use crate::model::ModelSpec;
use crate::sample::SampleSummary;

/// Largest moment order for which compositions are enumerated.
pub const MAX_MOMENT_ORDER: u32 = 12;

/// An ordered composition of an integer into positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionTerm {
    pub parts: Vec<u32>,
}

impl CompositionTerm {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }
}

/// All ordered compositions of `total` into exactly `parts` positive parts.
pub fn compositions(total: u32, parts: u32) -> Vec<CompositionTerm> {
    fn go(rest: u32, slots: u32, acc: &mut Vec<u32>, out: &mut Vec<CompositionTerm>) {
        if slots == 0 {
            if rest == 0 {
                out.push(CompositionTerm { parts: acc.clone() });
            }
            return;
        }
        // leave at least one for each remaining slot
        for first in 1..=rest.saturating_sub(slots - 1) {
            acc.push(first);
            go(rest - first, slots - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if parts >= 1 && parts <= total {
        go(total, parts, &mut Vec::with_capacity(parts as usize), &mut out);
    }
    out
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `E[S_2^ξ]` under a Gibbs prior, from the EPPF moment formula for power
/// sums: `Σ_j V_{2ξ,j}/j! Σ_{compositions} ξ!/(ξ_1!..ξ_j!) Π (1-α)_{2ξ_i-1}`.
pub fn prior_s2_moment<W: GibbsWeights + ?Sized>(weights: &W, order: u32) -> Result<f64> {
    if order == 0 || order > MAX_MOMENT_ORDER {
        return Err(Error::Domain(format!(
            "moment order must be in 1..={MAX_MOMENT_ORDER}, got {order}"
        )));
    }
    let one_minus_alpha = 1.0 - weights.alpha();
    let xi_fact = factorial(order);
    let mut total = 0.0;
    for j in 1..=order {
        let v = weights.v(2 * u64::from(order), u64::from(j));
        if v == 0.0 {
            continue;
        }
        let inner: f64 = compositions(order, j)
            .iter()
            .map(|c| {
                c.parts.iter().fold(xi_fact, |acc, &p| {
                    acc / factorial(p) * rising_factorial(one_minus_alpha, 2 * u64::from(p) - 1)
                })
            })
            .sum();
        total += v / factorial(j) * inner;
    }
    Ok(total)
}

/// Prior mean of `H_S` for any Gibbs weights: `1 - V_{2,1}(1-α)`.
pub fn prior_mean_gibbs<W: GibbsWeights + ?Sized>(weights: &W) -> f64 {
    1.0 - weights.v(2, 1) * (1.0 - weights.alpha())
}

/// Prior variance of `H_S` for any Gibbs weights:
/// `V_{4,1}(1-α)_3 + V_{4,2}(1-α)² - [V_{2,1}(1-α)]²`.
pub fn prior_variance_gibbs<W: GibbsWeights + ?Sized>(weights: &W) -> f64 {
    let b = 1.0 - weights.alpha();
    let first = weights.v(2, 1) * b;
    weights.v(4, 1) * rising_factorial(b, 3) + weights.v(4, 2) * b * b - first * first
}

/// `(θ + α)/(1 + θ)`.
pub fn prior_evenness_mean(model: &ModelSpec) -> f64 {
    model.new_species_weight(1) / (1.0 + model.theta())
}

/// `[(1-α)_3 + (θ+α)(1-α)²]/(θ+1)_3 - (1-α)²/(θ+1)²`.
pub fn prior_evenness_variance(model: &ModelSpec) -> f64 {
    let b = 1.0 - model.alpha();
    let t1 = 1.0 + model.theta();
    let second = (rising_factorial(b, 3) + model.new_species_weight(1) * b * b) / rising_factorial(t1, 3);
    second - (b / t1).powi(2)
}

pub fn prior_evenness(model: &ModelSpec) -> EvennessEstimate {
    EvennessEstimate::exact(
        prior_evenness_mean(model),
        prior_evenness_variance(model),
        EstimateMethod::ClosedForm,
    )
}

/// Mixed moment `E[Π X_i^{c_i}] = Π (a_i)_{c_i} / (Σa)_{Σc}` of a
/// Dirichlet(a) vector.
pub fn dirichlet_mixed_moment(params: &[f64], exponents: &[u64]) -> Result<f64> {
    if params.len() != exponents.len() {
        return Err(Error::Domain(format!(
            "{} parameters but {} exponents",
            params.len(),
            exponents.len()
        )));
    }
    if let Some(a) = params.iter().find(|&&a| !(a > 0.0 && a.is_finite())) {
        return Err(Error::Domain(format!("Dirichlet parameters must be positive, got {a}")));
    }
    let total: f64 = params.iter().sum();
    let order: u64 = exponents.iter().sum();
    let num = params
        .iter()
        .zip(exponents)
        .fold(1.0, |acc, (&a, &c)| acc * rising_factorial(a, c));
    Ok(num / rising_factorial(total, order))
}

/// Sufficient pieces of the PD posterior for the S_2 moments.
struct PosteriorParts {
    /// `Σ_j (n_j - α)_2`
    sum2: f64,
    /// `Σ_j ((n_j - α)_2)²`
    sum2_sq: f64,
    /// `Σ_j (n_j - α)_4`
    sum4: f64,
    /// `θ + kα`
    remainder: f64,
    /// `θ + n`
    total: f64,
    alpha: f64,
    one_minus_alpha: f64,
}

impl PosteriorParts {
    fn new(model: &ModelSpec, summary: &SampleSummary) -> Self {
        let alpha = model.alpha();
        let (mut sum2, mut sum2_sq, mut sum4) = (0.0, 0.0, 0.0);
        for &nj in summary.multiplicities() {
            let a = nj as f64 - alpha;
            let r2 = rising_factorial(a, 2);
            sum2 += r2;
            sum2_sq += r2 * r2;
            sum4 += rising_factorial(a, 4);
        }
        Self {
            sum2,
            sum2_sq,
            sum4,
            remainder: model.new_species_weight(summary.k()),
            total: model.theta() + summary.n() as f64,
            alpha,
            one_minus_alpha: 1.0 - alpha,
        }
    }

    /// `E[S_2 | data] = [Σ(n_j-α)_2 + (θ+kα)(1-α)]/(θ+n)_2`.
    fn s2_mean(&self) -> f64 {
        (self.sum2 + self.remainder * self.one_minus_alpha) / rising_factorial(self.total, 2)
    }

    /// `E[S_2² | data]`: the observed-species fourth moments, the pairwise
    /// cross terms (ordered pairs), the remainder's own second moment and
    /// the front-remainder cross term, all over `(θ+n)_4`.
    fn s2_second_moment(&self) -> f64 {
        let b = self.one_minus_alpha;
        let r = self.remainder;
        let pairs = self.sum2 * self.sum2 - self.sum2_sq;
        let remainder = r * (rising_factorial(b, 3) + (r + self.alpha) * b * b);
        let cross = 2.0 * self.sum2 * r * b;
        (self.sum4 + pairs + remainder + cross) / rising_factorial(self.total, 4)
    }
}

pub fn posterior_evenness_mean(model: &ModelSpec, summary: &SampleSummary) -> f64 {
    if summary.is_empty() {
        return prior_evenness_mean(model);
    }
    1.0 - PosteriorParts::new(model, summary).s2_mean()
}

pub fn posterior_evenness_variance(model: &ModelSpec, summary: &SampleSummary) -> f64 {
    if summary.is_empty() {
        return prior_evenness_variance(model);
    }
    let parts = PosteriorParts::new(model, summary);
    let mean = parts.s2_mean();
    parts.s2_second_moment() - mean * mean
}

pub fn posterior_evenness(model: &ModelSpec, summary: &SampleSummary) -> EvennessEstimate {
    EvennessEstimate::exact(
        posterior_evenness_mean(model, summary),
        posterior_evenness_variance(model, summary),
        EstimateMethod::ClosedForm,
    )
}

/// Frequentist plug-in comparators `(1 - Σ(n_j/n)², 1 - Σ n_j(n_j-1)/(n(n-1)))`.
pub fn plugin_simpson(summary: &SampleSummary) -> Result<(f64, f64)> {
    let n = summary.n();
    if n < 2 {
        return Err(Error::InvalidSample(format!(
            "the unbiased plug-in index needs n >= 2, got n = {n}"
        )));
    }
    let nf = n as f64;
    let (sq, pairs) = summary
        .multiplicities()
        .iter()
        .map(|&c| c as f64)
        .fold((0.0, 0.0), |(sq, pairs), c| (sq + c * c, pairs + c * (c - 1.0)));
    Ok((1.0 - sq / (nf * nf), 1.0 - pairs / (nf * (nf - 1.0))))
}
