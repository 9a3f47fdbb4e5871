//! Maximum-likelihood fitting of PD(α, θ) to an observed partition.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorial::log_rising_unchecked;
use crate::model::ModelSpec;
use crate::sample::SampleSummary;

const GRID_ALPHA: [f64; 5] = [0.05, 0.25, 0.45, 0.65, 0.85];
const GRID_THETA: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];
/// Number of best grid points refined by Nelder-Mead.
const REFINED_STARTS: usize = 3;
const LOGLIK_TOL: f64 = 1e-8;
const MAX_ITER: usize = 4000;
/// `ln(θ + α)` is kept inside this box.
const LOG_SHIFT_BOUNDS: (f64, f64) = (-30.0, 20.0);
const BOUNDARY_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FitOptions {
    /// Restrict to α = 0 and fit θ only.
    pub ewens_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: ModelSpec,
    pub log_likelihood: f64,
    /// Set when the data are degenerate (k = 1 or k = n) or the maximizer
    /// sits on the edge of the parameter domain.
    pub boundary: bool,
    pub evaluations: usize,
}

/// Log-EPPF of PD(α, θ) specialized for repeated evaluation on one sample.
#[derive(Debug, Clone)]
pub struct PdLikelihood {
    n: u64,
    k: u64,
    /// multiplicity -> number of species with that multiplicity
    size_counts: Vec<(u64, f64)>,
}

impl PdLikelihood {
    pub fn new(summary: &SampleSummary) -> Self {
        let mut counts = BTreeMap::new();
        for &nj in summary.multiplicities() {
            *counts.entry(nj).or_insert(0u64) += 1;
        }
        Self {
            n: summary.n(),
            k: summary.k(),
            size_counts: counts.into_iter().map(|(s, c)| (s, c as f64)).collect(),
        }
    }

    /// `log p_{α,θ}(n_1..n_k)` for `0 <= α < 1`, `θ > -α`.
    pub fn eval(&self, alpha: f64, theta: f64) -> f64 {
        let mut ll = 0.0;
        for i in 1..self.k {
            ll += (theta + i as f64 * alpha).ln();
        }
        ll -= log_rising_unchecked(theta + 1.0, self.n - 1);
        for &(size, count) in &self.size_counts {
            ll += count * log_rising_unchecked(1.0 - alpha, size - 1);
        }
        ll
    }
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// Unconstrained coordinates: `α = logistic(a)`, `θ = -α + exp(u)`.
fn to_params(x: &[f64]) -> (f64, f64) {
    let alpha = logistic(x[0]);
    let u = x[1].clamp(LOG_SHIFT_BOUNDS.0, LOG_SHIFT_BOUNDS.1);
    (alpha, -alpha + u.exp())
}

/// Minimizes `f` with the Nelder-Mead simplex method; returns the best
/// point, its value and the number of evaluations.
fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, start: &[f64], step: f64) -> (Vec<f64>, f64, usize) {
    let dim = start.len();
    let mut simplex: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..dim {
        let mut p = start.to_vec();
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();
    let mut evals = values.len();

    for _ in 0..MAX_ITER {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if (values[dim] - values[0]).abs() <= LOGLIK_TOL {
            break;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|d| simplex[..dim].iter().map(|p| p[d]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let reflected = along(-1.0);
        let fr = f(&reflected);
        evals += 1;
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(&expanded);
            evals += 1;
            if fe < fr {
                simplex[dim] = expanded;
                values[dim] = fe;
            } else {
                simplex[dim] = reflected;
                values[dim] = fr;
            }
            continue;
        }
        if fr < values[dim - 1] {
            simplex[dim] = reflected;
            values[dim] = fr;
            continue;
        }
        let contracted = if fr < values[dim] { along(-0.5) } else { along(0.5) };
        let fc = f(&contracted);
        evals += 1;
        if fc < values[dim].min(fr) {
            simplex[dim] = contracted;
            values[dim] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=dim {
            simplex[i] = best.iter().zip(&simplex[i]).map(|(b, p)| b + 0.5 * (p - b)).collect();
            values[i] = f(&simplex[i]);
            evals += 1;
        }
    }

    let best = (0..=dim).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    (simplex[best].clone(), values[best], evals)
}

fn negate_nan(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        -v
    }
}

fn fit_ewens(lik: &PdLikelihood) -> (f64, f64, usize) {
    let mut best = (f64::NEG_INFINITY, 1.0);
    for &t in &GRID_THETA {
        let ll = lik.eval(0.0, t);
        if ll > best.0 {
            best = (ll, t);
        }
    }
    let (x, v, evals) = nelder_mead(
        |x| negate_nan(lik.eval(0.0, x[0].clamp(LOG_SHIFT_BOUNDS.0, LOG_SHIFT_BOUNDS.1).exp())),
        &[best.1.ln()],
        0.5,
    );
    let theta = x[0].clamp(LOG_SHIFT_BOUNDS.0, LOG_SHIFT_BOUNDS.1).exp();
    if -v >= best.0 {
        (theta, -v, evals + GRID_THETA.len())
    } else {
        (best.1, best.0, evals + GRID_THETA.len())
    }
}

/// Fits PD(α, θ) over `0 <= α < 1`, `θ > -α` (or α = 0 when restricted)
/// by multi-start Nelder-Mead from a 5x5 grid.
pub fn fit_parameters(summary: &SampleSummary, options: FitOptions) -> Result<FitResult> {
    if summary.n() < 2 {
        return Err(Error::InvalidSample("fitting needs at least two observations".into()));
    }
    let lik = PdLikelihood::new(summary);
    let degenerate = summary.k() == 1 || summary.k() == summary.n();

    let (ewens_theta, ewens_ll, ewens_evals) = fit_ewens(&lik);
    if options.ewens_only {
        let boundary =
            degenerate || ewens_theta.ln() <= LOG_SHIFT_BOUNDS.0 + 1.0 || ewens_theta.ln() >= LOG_SHIFT_BOUNDS.1 - 1.0;
        return Ok(FitResult {
            model: ModelSpec::ewens(ewens_theta)?,
            log_likelihood: ewens_ll,
            boundary,
            evaluations: ewens_evals,
        });
    }

    let mut grid: Vec<(f64, f64, f64)> = Vec::with_capacity(GRID_ALPHA.len() * GRID_THETA.len());
    for &a in &GRID_ALPHA {
        for &t in &GRID_THETA {
            grid.push((lik.eval(a, t), a, t));
        }
    }
    grid.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut evaluations = grid.len() + ewens_evals;

    let mut best = (grid[0].0, grid[0].1, grid[0].2);
    for &(_, a, t) in grid.iter().take(REFINED_STARTS) {
        let start = [logit(a), (t + a).ln()];
        let (x, v, evals) = nelder_mead(
            |x| {
                let (alpha, theta) = to_params(x);
                negate_nan(lik.eval(alpha, theta))
            },
            &start,
            0.5,
        );
        evaluations += evals;
        let (alpha, theta) = to_params(&x);
        if -v > best.0 && alpha < 1.0 && theta > -alpha {
            best = (-v, alpha, theta);
        }
    }
    if ewens_ll > best.0 {
        best = (ewens_ll, 0.0, ewens_theta);
    }

    let (ll, alpha, theta) = best;
    let boundary = degenerate
        || alpha > 1.0 - BOUNDARY_EPS
        || theta + alpha < BOUNDARY_EPS
        || (theta + alpha).ln() >= LOG_SHIFT_BOUNDS.1 - 1.0;
    let model = if alpha == 0.0 {
        ModelSpec::ewens(theta)?
    } else {
        ModelSpec::pitman_yor(alpha, theta)?
    };
    Ok(FitResult {
        model,
        log_likelihood: ll,
        boundary,
        evaluations,
    })
}
