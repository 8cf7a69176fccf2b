use serde::{Deserialize, Serialize};

use super::spec::{copula_cdf, CopulaSpec};
use crate::error::{Error, Result};

/// Exponential margins `P(τᵢ > t) = exp(−λᵢ t)` joined by a survival times
/// copula: `P(τ₁ > t₁,…,τₙ > tₙ) = C(exp(−λ₁t₁),…,exp(−λₙtₙ))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct ArrivalTimeModel {
    lambdas: Vec<f64>,
    copula: CopulaSpec,
}

#[derive(Deserialize)]
struct RawModel {
    lambdas: Vec<f64>,
    copula: CopulaSpec,
}

impl TryFrom<RawModel> for ArrivalTimeModel {
    type Error = Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        ArrivalTimeModel::new(raw.lambdas, raw.copula)
    }
}

impl ArrivalTimeModel {
    pub fn new(lambdas: Vec<f64>, copula: CopulaSpec) -> Result<Self> {
        if lambdas.len() != copula.dim() {
            return Err(Error::DimensionMismatch {
                expected: copula.dim(),
                got: lambdas.len(),
            });
        }
        if let Some(bad) = lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(Error::param(
                "lambdas",
                format!("intensity {bad} is not positive"),
            ));
        }
        Ok(Self { lambdas, copula })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn copula(&self) -> &CopulaSpec {
        &self.copula
    }

    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    /// `Gᵢ(t) = exp(−λᵢ t)` for each margin.
    pub fn marginal_survival(&self, t: &[f64]) -> Result<Vec<f64>> {
        if t.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: t.len(),
            });
        }
        if let Some(bad) = t.iter().find(|x| !(**x >= 0.0)) {
            return Err(Error::domain(
                "survival_probability",
                format!("time {bad} is negative"),
            ));
        }
        Ok(self
            .lambdas
            .iter()
            .zip(t)
            .map(|(l, ti)| (-l * ti).exp())
            .collect())
    }
}

/// `P(τ₁ > t₁,…,τₙ > tₙ)`.
pub fn survival_probability(model: &ArrivalTimeModel, t: &[f64]) -> Result<f64> {
    let u = model.marginal_survival(t)?;
    copula_cdf(&model.copula, &u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(copula: CopulaSpec) -> ArrivalTimeModel {
        ArrivalTimeModel::new(vec![0.02, 0.02], copula).unwrap()
    }

    #[test]
    fn reference_horizons() {
        let ind = model(CopulaSpec::independence(2).unwrap());
        let p = survival_probability(&ind, &[100.0, 100.0]).unwrap();
        assert!((p - (-4.0f64).exp()).abs() < 1e-15);
        let com = model(CopulaSpec::comonotone(2).unwrap());
        let p = survival_probability(&com, &[100.0, 100.0]).unwrap();
        assert!((p - (-2.0f64).exp()).abs() < 1e-15);
        let ga = model(CopulaSpec::gaussian_bivariate(0.9).unwrap());
        let p = survival_probability(&ga, &[100.0, 100.0]).unwrap();
        // 40-digit quadrature: 0.096608796987547837…
        assert!((p - 0.096_608_796_987_547_84).abs() < 1e-12);
        assert!((p - 0.0969).abs() < 5e-4);
    }

    #[test]
    fn margins_are_memoryless() {
        let m = model(CopulaSpec::gumbel_hougaard(3.0, 2).unwrap());
        let g1 = m.marginal_survival(&[7.0, 7.0]).unwrap();
        let g9 = m.marginal_survival(&[63.0, 63.0]).unwrap();
        for (a, b) in g1.iter().zip(&g9) {
            assert!((a.powi(9) - b).abs() < 1e-15);
        }
    }

    #[test]
    fn validation() {
        let g = CopulaSpec::gumbel_hougaard(2.0, 2).unwrap();
        assert!(ArrivalTimeModel::new(vec![0.1], g.clone()).is_err());
        assert!(ArrivalTimeModel::new(vec![0.1, 0.0], g.clone()).is_err());
        assert!(ArrivalTimeModel::new(vec![0.1, f64::INFINITY], g.clone()).is_err());
        let m = model(g);
        assert!(survival_probability(&m, &[1.0, -1.0]).is_err());
        assert_eq!(survival_probability(&m, &[0.0, 0.0]).unwrap(), 1.0);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<ArrivalTimeModel>(&json).unwrap(), m);
        assert!(serde_json::from_str::<ArrivalTimeModel>(
            r#"{"lambdas":[0.1],"copula":{"family":"Independence","dim":2}}"#
        )
        .is_err());
    }
}
