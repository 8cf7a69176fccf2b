//! Copula evaluation.
//!
//! Every evaluator implements [`CopulaFn`], so the generic machinery
//! (rectangle volumes, axiom checks, self-chaining residuals) applies equally
//! to the shipped families, to derived evaluators such as the max-stable
//! transform, and to hand-written candidates.

mod archimedean;
mod axioms;
mod model;
mod spec;

pub use archimedean::{archimedean_cdf, Generator};
pub use axioms::{c_volume, check_copula_axioms, AxiomReport};
pub use model::{survival_probability, ArrivalTimeModel};
pub use spec::{copula_cdf, CopulaSpec, CorrelationMatrix, Family};

use crate::error::{Error, Result};

/// A `dim`-variate distribution function on `[0, 1]^dim`.
pub trait CopulaFn {
    fn dim(&self) -> usize;

    fn cdf(&self, u: &[f64]) -> Result<f64>;
}

impl<T: CopulaFn + ?Sized> CopulaFn for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn cdf(&self, u: &[f64]) -> Result<f64> {
        (**self).cdf(u)
    }
}

/// Wraps a plain function as a [`CopulaFn`]. No copula properties are
/// assumed, which makes it the entry point for testing candidate formulas.
pub struct FnCopula<F> {
    dim: usize,
    f: F,
}

impl<F> FnCopula<F>
where
    F: Fn(&[f64]) -> f64,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> CopulaFn for FnCopula<F>
where
    F: Fn(&[f64]) -> f64,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn cdf(&self, u: &[f64]) -> Result<f64> {
        check_unit_point(u, self.dim)?;
        Ok((self.f)(u))
    }
}

pub(crate) fn check_unit_point(u: &[f64], dim: usize) -> Result<()> {
    if u.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: u.len(),
        });
    }
    if let Some(bad) = u.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::domain(
            "copula_cdf",
            format!("coordinate {bad} is outside [0, 1]"),
        ));
    }
    Ok(())
}
