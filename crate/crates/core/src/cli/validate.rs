//! Oracle cross-checks run by the `validate` command.

use super::report::Check;
use crate::eppf::{eppf, predictive_probs, GibbsWeights};
use crate::error::Result;
use crate::evenness::{
    posterior_evenness_mean, posterior_evenness_variance, prior_evenness_mean, prior_evenness_variance, prior_s2_moment,
};
use crate::model::ModelSpec;
use crate::richness::richness_predictive;
use crate::sample::{summarize_sample, SampleSummary};
use crate::sim::{fisher_conjugate_posterior, mc_posterior_evenness, McConfig};

pub const EXACT_TOL: f64 = 1e-12;
pub const CONJUGATE_TOL: f64 = 1e-10;
pub const MC_SIGMAS: f64 = 4.0;
const V_RECURSION_MAX_N: u64 = 50;
const RICHNESS_CHECK_M: u64 = 200;

fn relative_gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn v_recursion(model: &ModelSpec) -> Check {
    let alpha = model.alpha();
    let mut worst: f64 = 0.0;
    for n in 1..=V_RECURSION_MAX_N {
        for k in 1..=n {
            let lhs = model.v(n, k);
            let rhs = (n as f64 - k as f64 * alpha) * model.v(n + 1, k) + model.v(n + 1, k + 1);
            worst = worst.max(relative_gap(lhs, rhs));
        }
    }
    check(
        "v-recursion",
        worst <= EXACT_TOL,
        format!("max relative gap {worst:.3e} for n <= {V_RECURSION_MAX_N}"),
    )
}

fn prior_identities(model: &ModelSpec) -> Result<Check> {
    let m1 = prior_s2_moment(model, 1)?;
    let m2 = prior_s2_moment(model, 2)?;
    let mean_gap = (1.0 - m1 - prior_evenness_mean(model)).abs();
    let var_gap = (m2 - m1 * m1 - prior_evenness_variance(model)).abs();
    let worst = mean_gap.max(var_gap);
    Ok(check(
        "prior-moment-identities",
        worst <= EXACT_TOL,
        format!("max abs gap {worst:.3e}"),
    ))
}

fn eppf_addition(model: &ModelSpec, data: &SampleSummary) -> Result<Check> {
    let base = eppf(model, data)?;
    let mut grown = 0.0;
    for j in 0..=data.multiplicities().len() {
        grown += eppf(model, &data.with_observation(j))?;
    }
    let mut reversed = data.multiplicities().to_vec();
    reversed.reverse();
    let sym = eppf(model, &summarize_sample(&reversed)?)?;
    let worst = relative_gap(base, grown).max(relative_gap(base, sym));
    Ok(check(
        "eppf-addition-symmetry",
        worst <= EXACT_TOL,
        format!("max relative gap {worst:.3e}"),
    ))
}

fn single_observation(model: &ModelSpec) -> Result<Check> {
    let one = summarize_sample(&[1])?;
    let gap = (posterior_evenness_mean(model, &one) - prior_evenness_mean(model))
        .abs()
        .max((posterior_evenness_variance(model, &one) - prior_evenness_variance(model)).abs());
    Ok(check(
        "n1-prior-consistency",
        gap <= EXACT_TOL,
        format!("max abs gap {gap:.3e}"),
    ))
}

fn tower(model: &ModelSpec, data: &SampleSummary) -> Check {
    let pred = predictive_probs(model, data);
    let mut expected = pred.p_new * posterior_evenness_mean(model, &data.with_observation(data.multiplicities().len()));
    for (j, p) in pred.p_old.iter().enumerate() {
        expected += p * posterior_evenness_mean(model, &data.with_observation(j));
    }
    let gap = (expected - posterior_evenness_mean(model, data)).abs();
    check("martingale-tower", gap <= EXACT_TOL, format!("abs gap {gap:.3e}"))
}

fn richness(model: &ModelSpec, data: &SampleSummary) -> Check {
    let dist = richness_predictive(model, data, RICHNESS_CHECK_M);
    let mass_gap = (dist.total() - 1.0).abs();
    let negative = dist.probs.iter().any(|&p| p < 0.0);
    let one = richness_predictive(model, data, 1);
    let step_gap = (one.probs[1] - predictive_probs(model, data).p_new).abs();
    check(
        "richness-normalization",
        mass_gap <= EXACT_TOL && step_gap == 0.0 && !negative,
        format!("|sum - 1| = {mass_gap:.3e} at m = {RICHNESS_CHECK_M}, one-step gap {step_gap:.3e}"),
    )
}

fn conjugate(model: &ModelSpec, data: &SampleSummary) -> Result<Option<Check>> {
    let Some(xi) = model.xi() else { return Ok(None) };
    let (mean, var) = fisher_conjugate_posterior(model.alpha(), xi, data)?;
    let gap = (mean - posterior_evenness_mean(model, data))
        .abs()
        .max((var - posterior_evenness_variance(model, data)).abs());
    Ok(Some(check(
        "fisher-conjugate",
        gap <= CONJUGATE_TOL,
        format!("max abs gap {gap:.3e}"),
    )))
}

fn monte_carlo(model: &ModelSpec, data: &SampleSummary, config: &McConfig) -> Result<Check> {
    let mc = mc_posterior_evenness(model, data, config)?;
    let mean = posterior_evenness_mean(model, data);
    let var = posterior_evenness_variance(model, data);
    let z_mean = (mc.mean.value - mean).abs() / mc.mean.std_error.max(f64::MIN_POSITIVE);
    let z_var = (mc.variance - var).abs() / mc.variance_std_error.max(f64::MIN_POSITIVE);
    Ok(check(
        "monte-carlo-concordance",
        z_mean <= MC_SIGMAS && z_var <= MC_SIGMAS,
        format!(
            "mean z = {z_mean:.2}, variance z = {z_var:.2} over {} draws",
            config.draws
        ),
    ))
}

/// Runs every applicable check for `model` and `data` (empty data checks
/// the prior side only).
pub fn run_checks(model: &ModelSpec, data: &SampleSummary, config: &McConfig) -> Result<Vec<Check>> {
    let mut checks = vec![v_recursion(model), prior_identities(model)?, single_observation(model)?];
    if !data.is_empty() {
        checks.push(eppf_addition(model, data)?);
    }
    checks.push(tower(model, data));
    let var = posterior_evenness_variance(model, data);
    checks.push(check(
        "posterior-variance-nonnegative",
        var >= 0.0,
        format!("variance {var:.6e}"),
    ));
    checks.push(richness(model, data));
    if let Some(c) = conjugate(model, data)? {
        checks.push(c);
    }
    checks.push(monte_carlo(model, data, config)?);
    Ok(checks)
}
