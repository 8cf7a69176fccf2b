use super::stable::StableParams;
use crate::copulas::{CopulaSpec, CorrelationMatrix, Family};
use crate::error::{Error, Result};
use crate::numerics::{std_normal_cdf, RngStream};

/// Below this distance from 1 the Gumbel parameter is sampled as independence.
const THETA_INDEPENDENCE_BAND: f64 = 1e-9;

const OPEN_MAX: f64 = 1.0 - f64::EPSILON / 2.0;

/// Keeps a uniform strictly inside `(0, 1)` after floating-point rounding.
#[inline]
fn open_unit(u: f64) -> f64 {
    u.clamp(f64::MIN_POSITIVE, OPEN_MAX)
}

/// A sampler prepared once per copula (frailty index, shock intensities or
/// correlation factor), then reused for every draw.
#[derive(Debug, Clone)]
pub enum CopulaSampler {
    Independence {
        dim: usize,
    },
    Comonotone {
        dim: usize,
    },
    Gumbel {
        dim: usize,
        inv_theta: f64,
        frailty: StableParams,
    },
    MarshallOlkin {
        idio1: f64,
        idio2: f64,
    },
    Gaussian {
        dim: usize,
        factor: Vec<f64>,
    },
}

impl CopulaSampler {
    pub fn new(spec: &CopulaSpec) -> Self {
        let dim = spec.dim();
        match spec.family() {
            Family::Independence => Self::Independence { dim },
            Family::Comonotone => Self::Comonotone { dim },
            Family::GumbelHougaard => {
                let theta = spec.theta().expect("gumbel has theta");
                if theta <= 1.0 + THETA_INDEPENDENCE_BAND {
                    Self::Independence { dim }
                } else {
                    Self::Gumbel {
                        dim,
                        inv_theta: 1.0 / theta,
                        frailty: StableParams::for_gumbel(theta).expect("theta > 1"),
                    }
                }
            }
            Family::MarshallOlkin => {
                let (a1, a2) = spec.alphas().expect("marshall-olkin has alphas");
                if a1 == 0.0 || a2 == 0.0 {
                    // min(u₁^{1−α₁}u₂, u₁u₂^{1−α₂}) collapses to u₁u₂.
                    Self::Independence { dim: 2 }
                } else {
                    // Common shock intensity fixed to 1; idiosyncratic ones
                    // follow from αᵢ = λ₁₂ / (λᵢ + λ₁₂).
                    Self::MarshallOlkin {
                        idio1: 1.0 / a1 - 1.0,
                        idio2: 1.0 / a2 - 1.0,
                    }
                }
            }
            Family::Gaussian => {
                let corr = spec.corr().expect("gaussian has corr");
                Self::Gaussian {
                    dim,
                    factor: corr.factor().to_vec(),
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Independence { dim }
            | Self::Comonotone { dim }
            | Self::Gumbel { dim, .. }
            | Self::Gaussian { dim, .. } => *dim,
            Self::MarshallOlkin { .. } => 2,
        }
    }

    /// Fills `out` with one draw of the survival uniforms.
    ///
    /// # Panics
    ///
    /// If `out.len()` differs from the sampler dimension.
    pub fn sample_into(&self, rng: &mut RngStream, out: &mut [f64]) {
        assert_eq!(
            out.len(),
            self.dim(),
            "output buffer has the wrong dimension"
        );
        match self {
            Self::Independence { .. } => out.iter_mut().for_each(|u| *u = rng.uniform()),
            Self::Comonotone { .. } => out.fill(rng.uniform()),
            Self::Gumbel {
                inv_theta, frailty, ..
            } => {
                let s = frailty.sample(rng);
                for u in out.iter_mut() {
                    *u = open_unit((-(rng.exp1() / s).powf(*inv_theta)).exp());
                }
            }
            Self::MarshallOlkin { idio1, idio2 } => {
                let shock = rng.exp1();
                let t1 = (rng.exp1() / idio1).min(shock);
                let t2 = (rng.exp1() / idio2).min(shock);
                out[0] = open_unit((-(idio1 + 1.0) * t1).exp());
                out[1] = open_unit((-(idio2 + 1.0) * t2).exp());
            }
            Self::Gaussian { dim, factor } => {
                let n = *dim;
                let z: Vec<f64> = (0..n).map(|_| rng.std_normal()).collect();
                for (i, u) in out.iter_mut().enumerate() {
                    let x: f64 = (0..=i).map(|k| factor[i * n + k] * z[k]).sum();
                    *u = open_unit(std_normal_cdf(x));
                }
            }
        }
    }

    pub fn sample(&self, rng: &mut RngStream) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.sample_into(rng, &mut out);
        out
    }
}

/// `Uᵢ = exp(−(Eᵢ/S)^{1/θ})` with `Eᵢ` unit exponentials and `S` positive
/// stable of index `1/θ`; iid uniforms when `θ = 1`.
pub fn sample_gumbel_copula(theta: f64, n: usize, rng: &mut RngStream) -> Result<Vec<f64>> {
    let spec = CopulaSpec::gumbel_hougaard(theta, n)?;
    Ok(CopulaSampler::new(&spec).sample(rng))
}

/// Common-shock Marshall-Olkin draw.
pub fn sample_mo_copula(alpha1: f64, alpha2: f64, rng: &mut RngStream) -> Result<[f64; 2]> {
    let spec = CopulaSpec::marshall_olkin(alpha1, alpha2)?;
    let mut out = [0.0; 2];
    CopulaSampler::new(&spec).sample_into(rng, &mut out);
    Ok(out)
}

/// `Φ(A·Z)` with `A·Aᵀ = corr` and `Z` iid standard normal.
pub fn sample_gaussian_copula(
    corr: &CorrelationMatrix,
    n: usize,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    if corr.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: corr.dim(),
            got: n,
        });
    }
    Ok(CopulaSampler::new(&CopulaSpec::gaussian(corr.clone())).sample(rng))
}
