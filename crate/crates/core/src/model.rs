//! Gibbs prior specifications: the two-parameter Poisson-Dirichlet family
//! and its Ewens, Stable and Fisher sub-models.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used when a user supplies both `theta` and `xi` for
/// an `alpha < 0` model.
const THETA_MATCH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    PoissonDirichlet,
    Ewens,
    Stable,
    Fisher,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::PoissonDirichlet => "poisson-dirichlet",
            Variant::Ewens => "ewens",
            Variant::Stable => "stable",
            Variant::Fisher => "fisher",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pd" | "py" | "pitman-yor" | "poisson-dirichlet" => Ok(Variant::PoissonDirichlet),
            "ewens" | "dirichlet" => Ok(Variant::Ewens),
            "stable" => Ok(Variant::Stable),
            "fisher" => Ok(Variant::Fisher),
            other => Err(Error::InvalidModel(format!("unknown variant `{other}`"))),
        }
    }
}

/// Unvalidated model parameters, as they arrive from a caller or the CLI.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RawModel {
    pub variant: Option<Variant>,
    pub alpha: Option<f64>,
    pub theta: Option<f64>,
    pub xi: Option<u64>,
}

/// A validated PD(α, θ) prior. Every variant is stored in PD coordinates;
/// `xi` is present exactly when `alpha < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    variant: Variant,
    alpha: f64,
    theta: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    xi: Option<u64>,
}

impl ModelSpec {
    pub fn pitman_yor(alpha: f64, theta: f64) -> Result<Self> {
        validate_model(RawModel {
            variant: Some(Variant::PoissonDirichlet),
            alpha: Some(alpha),
            theta: Some(theta),
            xi: None,
        })
    }

    pub fn ewens(theta: f64) -> Result<Self> {
        validate_model(RawModel {
            variant: Some(Variant::Ewens),
            theta: Some(theta),
            ..RawModel::default()
        })
    }

    pub fn stable(alpha: f64) -> Result<Self> {
        validate_model(RawModel {
            variant: Some(Variant::Stable),
            alpha: Some(alpha),
            ..RawModel::default()
        })
    }

    pub fn fisher(alpha: f64, xi: u64) -> Result<Self> {
        validate_model(RawModel {
            variant: Some(Variant::Fisher),
            alpha: Some(alpha),
            xi: Some(xi),
            ..RawModel::default()
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Number of species for `alpha < 0` models.
    pub fn xi(&self) -> Option<u64> {
        self.xi
    }

    /// `θ + kα`, the unnormalized weight of discovering a new species after
    /// `k` species have been seen. For `alpha < 0` this is `(ξ - k)|α|`,
    /// evaluated exactly and floored at zero once all ξ species are seen.
    pub fn new_species_weight(&self, k: u64) -> f64 {
        match self.xi {
            Some(xi) if k >= xi => 0.0,
            Some(xi) => (xi - k) as f64 * self.alpha.abs(),
            None => self.theta + k as f64 * self.alpha,
        }
    }

    pub fn to_raw(&self) -> RawModel {
        RawModel {
            variant: Some(self.variant),
            alpha: Some(self.alpha),
            theta: Some(self.theta),
            xi: self.xi,
        }
    }

    /// Re-runs validation; a valid spec validates to itself.
    pub fn validate(&self) -> Result<Self> {
        validate_model(self.to_raw())
    }
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidModel(format!("{name} must be finite, got {v}")))
    }
}

fn fisher_theta(alpha: f64, xi: u64, theta: Option<f64>) -> Result<f64> {
    if xi == 0 {
        return Err(Error::InvalidModel("xi must be a positive integer".into()));
    }
    let expected = xi as f64 * alpha.abs();
    if let Some(t) = theta {
        if (t - expected).abs() > THETA_MATCH_TOL * expected.max(1.0) {
            return Err(Error::InvalidModel(format!(
                "alpha < 0 requires theta = xi*|alpha| = {expected}, got {t}"
            )));
        }
    }
    Ok(expected)
}

/// Checks raw parameters against the PD parameter domain and returns a
/// normalized [`ModelSpec`].
pub fn validate_model(raw: RawModel) -> Result<ModelSpec> {
    let alpha = raw.alpha.map(|a| finite("alpha", a)).transpose()?;
    let theta = raw.theta.map(|t| finite("theta", t)).transpose()?;
    let variant = raw.variant.unwrap_or(Variant::PoissonDirichlet);

    let spec = match variant {
        Variant::Ewens => {
            if let Some(a) = alpha {
                if a != 0.0 {
                    return Err(Error::InvalidModel(format!("ewens requires alpha = 0, got {a}")));
                }
            }
            if raw.xi.is_some() {
                return Err(Error::InvalidModel("xi is only valid with alpha < 0".into()));
            }
            let t = theta.ok_or_else(|| Error::InvalidModel("ewens requires theta".into()))?;
            if !(t > 0.0) {
                return Err(Error::InvalidModel(format!("ewens requires theta > 0, got {t}")));
            }
            ModelSpec {
                variant,
                alpha: 0.0,
                theta: t,
                xi: None,
            }
        }
        Variant::Stable => {
            if let Some(t) = theta {
                if t != 0.0 {
                    return Err(Error::InvalidModel(format!("stable requires theta = 0, got {t}")));
                }
            }
            if raw.xi.is_some() {
                return Err(Error::InvalidModel("xi is only valid with alpha < 0".into()));
            }
            let a = alpha.ok_or_else(|| Error::InvalidModel("stable requires alpha".into()))?;
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::InvalidModel(format!("stable requires 0 < alpha < 1, got {a}")));
            }
            ModelSpec {
                variant,
                alpha: a,
                theta: 0.0,
                xi: None,
            }
        }
        Variant::Fisher => {
            let a = alpha.ok_or_else(|| Error::InvalidModel("fisher requires alpha".into()))?;
            if !(a < 0.0) {
                return Err(Error::InvalidModel(format!("fisher requires alpha < 0, got {a}")));
            }
            let xi = raw.xi.ok_or_else(|| Error::InvalidModel("fisher requires xi".into()))?;
            let t = fisher_theta(a, xi, theta)?;
            ModelSpec {
                variant,
                alpha: a,
                theta: t,
                xi: Some(xi),
            }
        }
        Variant::PoissonDirichlet => {
            let a = alpha.ok_or_else(|| Error::InvalidModel("alpha is required".into()))?;
            if a >= 1.0 {
                return Err(Error::InvalidModel(format!("alpha must be < 1, got {a}")));
            }
            if a < 0.0 {
                let xi = raw
                    .xi
                    .ok_or_else(|| Error::InvalidModel("alpha < 0 requires xi with theta = xi*|alpha|".into()))?;
                let t = fisher_theta(a, xi, theta)?;
                ModelSpec {
                    variant,
                    alpha: a,
                    theta: t,
                    xi: Some(xi),
                }
            } else {
                if raw.xi.is_some() {
                    return Err(Error::InvalidModel("xi is only valid with alpha < 0".into()));
                }
                let t = theta.ok_or_else(|| Error::InvalidModel("theta is required".into()))?;
                if !(t > -a) {
                    return Err(Error::InvalidModel(format!(
                        "theta must exceed -alpha = {}, got {t}",
                        -a
                    )));
                }
                ModelSpec {
                    variant,
                    alpha: a,
                    theta: t,
                    xi: None,
                }
            }
        }
    };
    Ok(spec)
}
