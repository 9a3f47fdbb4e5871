use rand::Rng;

use crate::model::ModelSpec;
use crate::sample::SampleSummary;

/// Index of the species chosen for the next observation (`k` = new).
fn next_species<R: Rng + ?Sized>(model: &ModelSpec, current: &SampleSummary, rng: &mut R) -> usize {
    let k = current.k();
    if current.is_empty() {
        return 0;
    }
    let new_weight = model.new_species_weight(k);
    let old_total = current.n() as f64 - k as f64 * model.alpha();
    let mut u = rng.random::<f64>() * (new_weight + old_total);
    if u < new_weight {
        return k as usize;
    }
    u -= new_weight;
    let alpha = model.alpha();
    let counts = current.multiplicities();
    for (j, &nj) in counts.iter().enumerate() {
        let w = nj as f64 - alpha;
        if u < w {
            return j;
        }
        u -= w;
    }
    // rounding left u just past the last weight
    counts.len() - 1
}

/// Sequential Chinese-restaurant construction of an `n`-sample.
pub fn crp_sample<R: Rng + ?Sized>(model: &ModelSpec, n: u64, rng: &mut R) -> SampleSummary {
    let mut s = SampleSummary::empty();
    for _ in 0..n {
        let j = next_species(model, &s, rng);
        s.observe(j);
    }
    s
}

/// Continues `summary` by `m` observations and returns the number of new
/// species among them.
pub fn crp_continue<R: Rng + ?Sized>(model: &ModelSpec, summary: &SampleSummary, m: u64, rng: &mut R) -> u64 {
    let mut s = summary.clone();
    for _ in 0..m {
        let j = next_species(model, &s, rng);
        s.observe(j);
    }
    s.k() - summary.k()
}
