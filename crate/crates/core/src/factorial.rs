//! Rising factorials and their logarithms.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Above this length the log rising factorial switches from a term-wise sum
/// to a difference of log-gamma values.
const TERMWISE_LIMIT: u64 = 1024;

/// `(x)_m = x (x+1) ... (x+m-1)`, with `(x)_0 = 1`.
pub fn rising_factorial(x: f64, m: u64) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (x + i as f64))
}

/// Natural log of `(x)_m`. Every factor must be positive, i.e. `x > 0`
/// whenever `m > 0`.
pub fn log_rising_factorial(x: f64, m: u64) -> Result<f64> {
    if m == 0 {
        return Ok(0.0);
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "log rising factorial needs a positive base, got ({x})_{m}"
        )));
    }
    Ok(log_rising_unchecked(x, m))
}

/// `log (x)_m` for `x > 0`; callers guarantee the domain.
pub(crate) fn log_rising_unchecked(x: f64, m: u64) -> f64 {
    if m <= TERMWISE_LIMIT {
        (0..m).map(|i| (x + i as f64).ln()).sum()
    } else {
        ln_gamma(x + m as f64) - ln_gamma(x)
    }
}

/// Generalized rising factorial `(x)_{m↑step} = x (x+step) ... (x+(m-1)step)`.
pub fn gen_rising_factorial(x: f64, m: u64, step: f64) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (x + i as f64 * step))
}
