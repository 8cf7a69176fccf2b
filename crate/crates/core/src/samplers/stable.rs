use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::RngStream;

/// Index of a positive strictly stable law with Laplace transform
/// `E[exp(−zS)] = exp(−z^α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    alpha: f64,
}

impl StableParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::param("alpha", format!("{alpha} is not in (0, 1)")));
        }
        Ok(Self { alpha })
    }

    /// Frailty of the Gumbel-Hougaard copula, `α = 1/θ`, for `θ > 1`.
    pub fn for_gumbel(theta: f64) -> Result<Self> {
        if !(theta > 1.0) {
            return Err(Error::param(
                "theta",
                format!("{theta} has no stable frailty (needs theta > 1)"),
            ));
        }
        Self::new(1.0 / theta)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Kanter's representation: with `U ~ Uniform(0, π)` and `E ~ Exp(1)`,
    ///
    /// ```text
    /// S = sin(αU) / sin(U)^{1/α} · (sin((1−α)U) / E)^{(1−α)/α}
    /// ```
    ///
    /// is exactly positive stable with transform `exp(−z^α)`.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let a = self.alpha;
        let u = PI * rng.uniform();
        let e = rng.exp1();
        let log_s = (a * u).sin().ln() - u.sin().ln() / a
            + (1.0 - a) / a * (((1.0 - a) * u).sin().ln() - e.ln());
        log_s.exp()
    }
}

/// One draw of a positive stable variate with index `alpha ∈ (0, 1)`.
pub fn sample_positive_stable(alpha: f64, rng: &mut RngStream) -> Result<f64> {
    Ok(StableParams::new(alpha)?.sample(rng))
}
