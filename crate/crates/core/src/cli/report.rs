//! Versioned JSON / plain-text reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::estimate::EvennessEstimate;
use crate::fit::FitResult;
use crate::model::ModelSpec;
use crate::richness::RichnessDistribution;
use crate::sample::SampleSummary;
use crate::sim::McEvenness;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "simpson-gibbs";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PluginEstimates {
    pub biased: f64,
    pub unbiased: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Estimates {
    Prior {
        evenness: EvennessEstimate,
    },
    Posterior {
        evenness: EvennessEstimate,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        plugin: Option<PluginEstimates>,
    },
    Predict {
        richness: RichnessDistribution,
        expected_new_species: f64,
    },
    Fit {
        fit: FitResult,
        ewens: FitResult,
    },
    Simulate {
        evenness: EvennessEstimate,
        monte_carlo: McEvenness,
        closed_form: EvennessEstimate,
    },
    Validate {
        passed: bool,
        checks: Vec<Check>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub model: Option<ModelSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub data: Option<SampleSummary>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub elapsed_ms: f64,
    pub estimates: Estimates,
}

impl Report {
    pub fn new(
        command: &str,
        model: Option<ModelSpec>,
        data: Option<SampleSummary>,
        seed: Option<u64>,
        estimates: Estimates,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            model,
            data,
            seed,
            elapsed_ms: 0.0,
            estimates,
        }
    }

    /// JSON text; fails if any numeric field is not finite (serde_json
    /// would silently write those as `null`).
    pub fn to_json(&self) -> Result<String, String> {
        let value = serde_json::to_value(self).map_err(|e| e.to_string())?;
        if let Some(path) = find_null(&value, String::new()) {
            return Err(format!("non-finite value in report field `{path}`"));
        }
        serde_json::to_string_pretty(self).map_err(|e| e.to_string())
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} ({})", self.tool, self.version, self.command);
        if let Some(m) = &self.model {
            let _ = write!(
                out,
                "model      {} alpha={} theta={}",
                m.variant(),
                m.alpha(),
                m.theta()
            );
            if let Some(xi) = m.xi() {
                let _ = write!(out, " xi={xi}");
            }
            out.push('\n');
        }
        if let Some(d) = &self.data {
            let _ = writeln!(
                out,
                "data       n={} k={} multiplicities={:?}",
                d.n(),
                d.k(),
                d.multiplicities()
            );
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed       {seed}");
        }
        match &self.estimates {
            Estimates::Prior { evenness } => evenness_rows(&mut out, "prior", evenness),
            Estimates::Posterior { evenness, plugin } => {
                evenness_rows(&mut out, "posterior", evenness);
                if let Some(p) = plugin {
                    let _ = writeln!(out, "plug-in    biased={:.10} unbiased={:.10}", p.biased, p.unbiased);
                }
            }
            Estimates::Predict {
                richness,
                expected_new_species,
            } => {
                let _ = writeln!(out, "m          {}", richness.m);
                let _ = writeln!(out, "E[K_m]     {expected_new_species:.10}");
                for (j, p) in richness.probs.iter().enumerate() {
                    let _ = writeln!(out, "P(K_m={j:<3}) {p:.12e}");
                }
            }
            Estimates::Fit { fit, ewens } => {
                let _ = writeln!(
                    out,
                    "fit        alpha={:.8} theta={:.8} loglik={:.8}{}",
                    fit.model.alpha(),
                    fit.model.theta(),
                    fit.log_likelihood,
                    if fit.boundary { " (boundary)" } else { "" }
                );
                let _ = writeln!(
                    out,
                    "ewens      theta={:.8} loglik={:.8}",
                    ewens.model.theta(),
                    ewens.log_likelihood
                );
            }
            Estimates::Simulate {
                evenness,
                monte_carlo,
                closed_form,
            } => {
                evenness_rows(&mut out, "monte-carlo", evenness);
                let _ = writeln!(out, "residual   {:e}", monte_carlo.mean.residual_bound);
                evenness_rows(&mut out, "closed", closed_form);
            }
            Estimates::Validate { passed, checks } => {
                for c in checks {
                    let _ = writeln!(
                        out,
                        "[{}] {:<24} {}",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.detail
                    );
                }
                let _ = writeln!(out, "overall    {}", if *passed { "PASS" } else { "FAIL" });
            }
        }
        out
    }
}

fn evenness_rows(out: &mut String, label: &str, e: &EvennessEstimate) {
    let _ = write!(out, "{label:<10} mean={:.10} variance={:.10}", e.mean, e.variance);
    if let Some(se) = e.std_error {
        let _ = write!(out, " se={se:.3e}");
    }
    out.push('\n');
}

fn find_null(value: &serde_json::Value, path: String) -> Option<String> {
    match value {
        serde_json::Value::Null => Some(path),
        serde_json::Value::Array(items) => items
            .iter()
            .enumerate()
            .find_map(|(i, v)| find_null(v, format!("{path}[{i}]"))),
        serde_json::Value::Object(map) => map.iter().find_map(|(k, v)| {
            find_null(
                v,
                if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                },
            )
        }),
        _ => None,
    }
}
