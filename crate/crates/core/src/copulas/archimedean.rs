use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type Map = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An Archimedean generator `φ: (0, 1] → [0, ∞)` with its inverse.
///
/// `φ(1) = 0`, `φ` strictly decreasing and convex. A strict generator also
/// has `φ(0⁺) = ∞`, so `φ⁻¹` is defined on all of `[0, ∞)`.
#[derive(Clone)]
pub struct Generator {
    name: String,
    phi: Map,
    phi_inv: Map,
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator")
            .field("name", &self.name)
            .finish()
    }
}

impl Generator {
    pub fn new<P, Q>(name: impl Into<String>, phi: P, phi_inv: Q) -> Self
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        Q: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            phi: Arc::new(phi),
            phi_inv: Arc::new(phi_inv),
        }
    }

    /// `φ(u) = (−ln u)^θ`; its inverse `exp(−z^{1/θ})` is the Laplace
    /// transform of a positive stable law with index `1/θ`.
    pub fn gumbel(theta: f64) -> Result<Self> {
        if !(theta >= 1.0 && theta.is_finite()) {
            return Err(Error::param("theta", format!("{theta} < 1")));
        }
        Ok(Self::new(
            format!("gumbel(theta={theta})"),
            move |u: f64| (-u.ln()).powf(theta),
            move |z: f64| (-z.powf(1.0 / theta)).exp(),
        ))
    }

    /// `φ(u) = (u^{−θ} − 1)/θ`, strict for `θ > 0`. Archimedean but not
    /// self-chaining.
    pub fn clayton(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::param("theta", format!("{theta} <= 0")));
        }
        Ok(Self::new(
            format!("clayton(theta={theta})"),
            move |u: f64| (u.powf(-theta) - 1.0) / theta,
            move |z: f64| (1.0 + theta * z).powf(-1.0 / theta),
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn phi(&self, u: f64) -> f64 {
        (self.phi)(u)
    }

    pub fn phi_inv(&self, z: f64) -> f64 {
        (self.phi_inv)(z)
    }
}

/// `φ⁻¹(φ(u₁) + … + φ(uₙ))` for `u ∈ (0, 1]ⁿ`.
pub fn archimedean_cdf(gen: &Generator, u: &[f64]) -> Result<f64> {
    if u.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: 0,
        });
    }
    if let Some(bad) = u.iter().find(|x| !(**x > 0.0 && **x <= 1.0)) {
        return Err(Error::domain(
            "archimedean_cdf",
            format!("coordinate {bad} is outside (0, 1]"),
        ));
    }
    let z: f64 = u.iter().filter(|x| **x < 1.0).map(|x| gen.phi(*x)).sum();
    Ok(gen.phi_inv(z))
}
