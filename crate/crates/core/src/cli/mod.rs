//! Command-line front end.

pub mod ingest;
pub mod report;
pub mod validate;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::evenness::{plugin_simpson, posterior_evenness, prior_evenness};
use crate::fit::{fit_parameters, FitOptions};
use crate::model::{validate_model, ModelSpec, RawModel, Variant};
use crate::richness::richness_predictive;
use crate::sample::SampleSummary;
use crate::sim::{
    mc_posterior_evenness, McConfig, DEFAULT_DRAWS, DEFAULT_MAX_STICKS, DEFAULT_SEED, DEFAULT_TRUNCATION_TOL,
};
pub use ingest::ingest;
pub use report::{Estimates, PluginEstimates, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VALIDATION_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "simpson-gibbs",
    version,
    about = "Simpson evenness and species-richness estimates under Gibbs-type priors",
    after_help = "Exit codes: 0 success, 1 usage or data error, 2 validation failure.\n\
                  The default seed can be overridden with DIVERSITY_SEED."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prior mean and variance of Simpson's evenness index.
    Prior {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Posterior mean and variance given observed abundances.
    Posterior {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Distribution of the number of new species in M further observations.
    Predict {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        data: DataArgs,
        /// Size of the additional sample.
        #[arg(long = "m", value_name = "M")]
        m: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Maximum-likelihood PD(alpha, theta) fit to observed abundances.
    Fit {
        #[command(flatten)]
        data: DataArgs,
        /// Fit the Ewens model (alpha = 0) only.
        #[arg(long)]
        ewens_only: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo estimate of the prior (no data) or posterior evenness.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cross-check closed forms against exact and Monte Carlo oracles.
    Validate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Model family: pd, ewens, stable or fisher.
    #[arg(long, default_value = "pd")]
    pub variant: Variant,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Number of species (alpha < 0 only).
    #[arg(long)]
    pub xi: Option<u64>,
}

impl ModelArgs {
    pub fn to_model(&self) -> Result<ModelSpec> {
        validate_model(RawModel {
            variant: Some(self.variant),
            alpha: self.alpha,
            theta: self.theta,
            xi: self.xi,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// CSV with header `species,count`.
    #[arg(long, value_name = "PATH")]
    pub data: Option<PathBuf>,
}

impl DataArgs {
    fn load(&self) -> Result<Option<SampleSummary>> {
        self.data.as_deref().map(ingest).transpose()
    }

    fn require(&self, command: &str) -> Result<SampleSummary> {
        let summary = self
            .load()?
            .ok_or_else(|| Error::InvalidSample(format!("`{command}` needs --data")))?;
        if summary.is_empty() {
            return Err(Error::InvalidSample(format!(
                "`{command}` needs at least one observation"
            )));
        }
        Ok(summary)
    }
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    /// Monte Carlo draws.
    #[arg(long, default_value_t = DEFAULT_DRAWS)]
    pub draws: u64,
    /// Truncation tolerance: stick-breaking stops once the fourth power of
    /// the unassigned mass is below this.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION_TOL)]
    pub tol: f64,
    /// Random seed.
    #[arg(long, env = "DIVERSITY_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Cap on sticks per draw.
    #[arg(long, default_value_t = DEFAULT_MAX_STICKS)]
    pub max_sticks: usize,
}

impl McArgs {
    fn config(&self) -> McConfig {
        McConfig {
            draws: self.draws,
            truncation_tol: self.tol,
            seed: self.seed,
            max_sticks: self.max_sticks,
        }
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct OutputArgs {
    /// Emit a JSON report.
    #[arg(long, conflicts_with = "table")]
    pub json: bool,
    /// Emit a plain-text table (default).
    #[arg(long)]
    pub table: bool,
}

/// Rendered output and process exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

fn render(mut report: Report, output: OutputArgs, started: Instant, exit_code: i32) -> Result<Outcome> {
    report.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    let stdout = if output.json {
        report.to_json().map_err(Error::Domain)?
    } else {
        report.to_table()
    };
    Ok(Outcome { stdout, exit_code })
}

/// Executes a parsed command.
pub fn run(cli: Cli) -> Result<Outcome> {
    let started = Instant::now();
    match cli.command {
        Command::Prior { model, data, output } => {
            let model = model.to_model()?;
            let data = data.load()?;
            let report = Report::new(
                "prior",
                Some(model),
                data,
                None,
                Estimates::Prior {
                    evenness: prior_evenness(&model),
                },
            );
            render(report, output, started, EXIT_OK)
        }
        Command::Posterior { model, data, output } => {
            let model = model.to_model()?;
            let data = data.require("posterior")?;
            let plugin = plugin_simpson(&data)
                .ok()
                .map(|(biased, unbiased)| PluginEstimates { biased, unbiased });
            let evenness = posterior_evenness(&model, &data);
            let report = Report::new(
                "posterior",
                Some(model),
                Some(data),
                None,
                Estimates::Posterior { evenness, plugin },
            );
            render(report, output, started, EXIT_OK)
        }
        Command::Predict { model, data, m, output } => {
            let model = model.to_model()?;
            let data = data.require("predict")?;
            let richness = richness_predictive(&model, &data, m);
            let expected_new_species = richness.mean();
            let report = Report::new(
                "predict",
                Some(model),
                Some(data),
                None,
                Estimates::Predict {
                    richness,
                    expected_new_species,
                },
            );
            render(report, output, started, EXIT_OK)
        }
        Command::Fit {
            data,
            ewens_only,
            output,
        } => {
            let data = data.require("fit")?;
            let ewens = fit_parameters(&data, FitOptions { ewens_only: true })?;
            let fit = if ewens_only {
                ewens
            } else {
                fit_parameters(&data, FitOptions::default())?
            };
            let report = Report::new("fit", Some(fit.model), Some(data), None, Estimates::Fit { fit, ewens });
            render(report, output, started, EXIT_OK)
        }
        Command::Simulate {
            model,
            data,
            mc,
            output,
        } => {
            let model = model.to_model()?;
            let data = data.load()?.unwrap_or_default();
            let config = mc.config();
            let monte_carlo = mc_posterior_evenness(&model, &data, &config)?;
            let closed_form = posterior_evenness(&model, &data);
            let report = Report::new(
                "simulate",
                Some(model),
                Some(data),
                Some(config.seed),
                Estimates::Simulate {
                    evenness: monte_carlo.to_estimate(),
                    monte_carlo,
                    closed_form,
                },
            );
            render(report, output, started, EXIT_OK)
        }
        Command::Validate {
            model,
            data,
            mc,
            output,
        } => {
            let model = model.to_model()?;
            let data = data.load()?.unwrap_or_default();
            let config = mc.config();
            let checks = validate::run_checks(&model, &data, &config)?;
            let passed = checks.iter().all(|c| c.passed);
            let report = Report::new(
                "validate",
                Some(model),
                Some(data),
                Some(config.seed),
                Estimates::Validate { passed, checks },
            );
            render(
                report,
                output,
                started,
                if passed { EXIT_OK } else { EXIT_VALIDATION_FAILED },
            )
        }
    }
}

/// Parses `args`, runs the command and returns what to print and the exit
/// code; usage and data errors map to exit code 1.
pub fn main_with_args<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                (String::new(), text, code)
            } else {
                (text, String::new(), code)
            };
        }
    };
    match run(cli) {
        Ok(outcome) => (outcome.stdout, String::new(), outcome.exit_code),
        Err(e) => (String::new(), format!("error: {e}\n"), EXIT_ERROR),
    }
}
