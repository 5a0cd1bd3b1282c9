use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trade-off weights: `alpha` mixes the CTC and decoder training losses;
/// `lambda` and `mu` weight the CTC, decoder and LM terms when decoding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CombineConfig {
    pub alpha: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl Default for CombineConfig {
    fn default() -> Self {
        CombineConfig {
            alpha: 0.3,
            lambda: 0.5,
            mu: 0.3,
        }
    }
}

impl CombineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::invalid(format!(
                "alpha must lie in [0, 1], got {}",
                self.alpha
            )));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::invalid(format!(
                "lambda must lie in [0, 1], got {}",
                self.lambda
            )));
        }
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return Err(Error::invalid(format!(
                "mu must be finite and >= 0, got {}",
                self.mu
            )));
        }
        Ok(())
    }
}

/// `alpha * l_ctc + (1 - alpha) * l_dec`
pub fn combine_losses(l_ctc: f64, l_dec: f64, alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )));
    }
    Ok(alpha * l_ctc + (1.0 - alpha) * l_dec)
}

/// `lambda * s_ctc + (1 - lambda) * s_dec + mu * s_lm`, in the log domain.
pub fn combine_scores(s_ctc: f64, s_dec: f64, s_lm: f64, cfg: &CombineConfig) -> f64 {
    // Zero-weighted terms are skipped so that -inf does not turn into NaN.
    let mut total = 0.0;
    for (w, s) in [
        (cfg.lambda, s_ctc),
        (1.0 - cfg.lambda, s_dec),
        (cfg.mu, s_lm),
    ] {
        if w != 0.0 {
            total += w * s;
        }
    }
    total
}
