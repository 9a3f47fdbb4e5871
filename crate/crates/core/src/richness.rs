//! Posterior predictive distribution of the number of new species `K_m`
//! in an additional sample of size `m`.
//!
//! Gibbs predictives depend on the history only through the current
//! `(n, k)`, so `P(K_m = j)` follows from a forward pass over states
//! (extra observations drawn, new species found). This evaluates the
//! non-central generalized Stirling weights implicitly.

use serde::{Deserialize, Serialize};

use crate::eppf::GibbsWeights;
use crate::sample::SampleSummary;

/// A row whose mass drifts further than this from one is recomputed in
/// log space.
const ROW_DRIFT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RichnessDistribution {
    pub m: u64,
    /// `probs[j] = P(K_m = j | data)` for `j = 0..=m`.
    pub probs: Vec<f64>,
}

impl RichnessDistribution {
    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(j, p)| j as f64 * p).sum()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// `P(new)` and `P(not new)` at state `(n, k)`.
fn step<W: GibbsWeights + ?Sized>(weights: &W, n: u64, k: u64) -> (f64, f64) {
    let p_new = weights.new_species_prob(n, k);
    let p_stay = if n == 0 {
        0.0
    } else {
        (n as f64 - k as f64 * weights.alpha()) * weights.existing_scale(n, k)
    };
    (p_new, p_stay)
}

fn log_add(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + ((a - hi).exp() + (b - hi).exp()).ln()
}

pub fn richness_predictive<W: GibbsWeights + ?Sized>(
    weights: &W,
    summary: &SampleSummary,
    m: u64,
) -> RichnessDistribution {
    let (n0, k0) = (summary.n(), summary.k());
    let mut row = vec![0.0; m as usize + 1];
    row[0] = 1.0;
    let mut next = row.clone();

    for i in 0..m {
        let n = n0 + i;
        let width = i as usize + 1;
        next[..=width].iter_mut().for_each(|x| *x = 0.0);
        for j in 0..width {
            if row[j] == 0.0 {
                continue;
            }
            let (p_new, p_stay) = step(weights, n, k0 + j as u64);
            next[j] += row[j] * p_stay;
            next[j + 1] += row[j] * p_new;
        }
        let total: f64 = next[..=width].iter().sum();
        if (total - 1.0).abs() > ROW_DRIFT_TOL {
            log_space_row(weights, &row[..width], &mut next[..=width], n, k0);
        }
        std::mem::swap(&mut row, &mut next);
    }

    RichnessDistribution { m, probs: row }
}

/// Recomputes one DP row from the previous row in log space, then
/// renormalizes.
fn log_space_row<W: GibbsWeights + ?Sized>(weights: &W, prev: &[f64], out: &mut [f64], n: u64, k0: u64) {
    let mut logs = vec![f64::NEG_INFINITY; out.len()];
    for (j, &p) in prev.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        let (p_new, p_stay) = step(weights, n, k0 + j as u64);
        let lp = p.ln();
        logs[j] = log_add(logs[j], lp + p_stay.ln());
        logs[j + 1] = log_add(logs[j + 1], lp + p_new.ln());
    }
    let hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let norm: f64 = logs.iter().map(|l| (l - hi).exp()).sum();
    for (o, l) in out.iter_mut().zip(&logs) {
        *o = (l - hi).exp() / norm;
    }
}

/// `E[K_m | data]`.
pub fn expected_new_species<W: GibbsWeights + ?Sized>(weights: &W, summary: &SampleSummary, m: u64) -> f64 {
    richness_predictive(weights, summary, m).mean()
}
