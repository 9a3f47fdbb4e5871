use crate::error::{Error, Result};
use crate::evenness::dirichlet_mixed_moment;
use crate::sample::SampleSummary;

/// Posterior Dirichlet concentrations of the finite-species model:
/// `n_j + |α|` for the `k` observed species, `|α|` for the `ξ - k` unseen.
pub(crate) fn conjugate_concentrations(alpha: f64, xi: u64, summary: &SampleSummary) -> Result<Vec<f64>> {
    if !(alpha < 0.0) {
        return Err(Error::Domain(format!(
            "the conjugate posterior needs alpha < 0, got {alpha}"
        )));
    }
    if xi == 0 || summary.k() > xi {
        return Err(Error::InvalidSample(format!(
            "{} species observed but the model has xi = {xi}",
            summary.k()
        )));
    }
    let a = alpha.abs();
    let mut conc: Vec<f64> = summary.multiplicities().iter().map(|&nj| nj as f64 + a).collect();
    conc.resize(xi as usize, a);
    Ok(conc)
}

/// Exact posterior mean and variance of `H_S` under a symmetric
/// Dirichlet(|α|, ..., |α|) prior on ξ species, by conjugacy.
pub fn fisher_conjugate_posterior(alpha: f64, xi: u64, summary: &SampleSummary) -> Result<(f64, f64)> {
    let conc = conjugate_concentrations(alpha, xi, summary)?;
    let r = conc.len();
    let mut exps = vec![0u64; r];

    let mut s2 = 0.0;
    let mut s2_sq = 0.0;
    for i in 0..r {
        exps[i] = 2;
        s2 += dirichlet_mixed_moment(&conc, &exps)?;
        exps[i] = 4;
        s2_sq += dirichlet_mixed_moment(&conc, &exps)?;
        exps[i] = 2;
        for j in 0..r {
            if j != i {
                exps[j] = 2;
                s2_sq += dirichlet_mixed_moment(&conc, &exps)?;
                exps[j] = 0;
            }
        }
        exps[i] = 0;
    }
    Ok((1.0 - s2, s2_sq - s2 * s2))
}
