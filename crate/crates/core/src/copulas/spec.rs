use std::fmt;

use serde::{Deserialize, Serialize};

use super::{check_unit_point, CopulaFn};
use crate::error::{Error, Result};
use crate::numerics::{bivariate_normal_cdf, std_normal_inv_cdf};

/// Upper end of the accepted Gumbel-Hougaard parameter range.
pub const MAX_THETA: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    GumbelHougaard,
    MarshallOlkin,
    Gaussian,
    Independence,
    Comonotone,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::GumbelHougaard => "GumbelHougaard",
            Family::MarshallOlkin => "MarshallOlkin",
            Family::Gaussian => "Gaussian",
            Family::Independence => "Independence",
            Family::Comonotone => "Comonotone",
        }
    }

    fn parse(s: &str) -> Option<Family> {
        [
            Family::GumbelHougaard,
            Family::MarshallOlkin,
            Family::Gaussian,
            Family::Independence,
            Family::Comonotone,
        ]
        .into_iter()
        .find(|f| f.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated correlation matrix together with its lower-triangular factor.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    n: usize,
    entries: Vec<f64>,
    factor: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::param("corr", "needs at least 2 rows"));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::param(
                    "corr",
                    format!("row {i} has {} entries, expected {n}", row.len()),
                ));
            }
            entries.extend_from_slice(row);
        }
        for i in 0..n {
            if (entries[i * n + i] - 1.0).abs() > 1e-12 {
                return Err(Error::param("corr", format!("diagonal entry {i} is not 1")));
            }
            entries[i * n + i] = 1.0;
            for j in 0..i {
                let (a, b) = (entries[i * n + j], entries[j * n + i]);
                if !a.is_finite() || (a - b).abs() > 1e-12 {
                    return Err(Error::param(
                        "corr",
                        format!("entries ({i},{j}) and ({j},{i}) are not symmetric"),
                    ));
                }
                if a.abs() >= 1.0 {
                    return Err(Error::param(
                        "corr",
                        format!("|corr[{i}][{j}]| = {} must be < 1; use Comonotone for perfect dependence", a.abs()),
                    ));
                }
                entries[j * n + i] = a;
            }
        }
        let factor = cholesky(&entries, n)?;
        Ok(Self { n, entries, factor })
    }

    /// Bivariate matrix with off-diagonal `rho`.
    pub fn bivariate(rho: f64) -> Result<Self> {
        Self::equicorrelated(2, rho)
    }

    pub fn equicorrelated(n: usize, rho: f64) -> Result<Self> {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { rho }).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Row-major lower-triangular `A` with `A·Aᵀ` equal to the matrix.
    pub fn factor(&self) -> &[f64] {
        &self.factor
    }
}

/// Cholesky factorization that tolerates semidefinite input: a vanishing
/// pivot zeroes its column, provided the remaining entries vanish too.
fn cholesky(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let d = a[j * n + j] - (0..j).map(|k| l[j * n + k] * l[j * n + k]).sum::<f64>();
        if d < -1e-10 {
            return Err(Error::NotPositiveSemidefinite { pivot: j, value: d });
        }
        let pivot = d.max(0.0).sqrt();
        l[j * n + j] = pivot;
        for i in j + 1..n {
            let num = a[i * n + j] - (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum::<f64>();
            if pivot > 1e-12 {
                l[i * n + j] = num / pivot;
            } else if num.abs() > 1e-8 {
                return Err(Error::NotPositiveSemidefinite { pivot: j, value: d });
            }
        }
    }
    Ok(l)
}

#[derive(Debug, Clone, PartialEq)]
enum Params {
    Gumbel { theta: f64 },
    MarshallOlkin { alpha1: f64, alpha2: f64 },
    Gaussian(CorrelationMatrix),
    Independence,
    Comonotone,
}

/// A copula family with validated parameters.
///
/// Serializes as
/// `{"family": "...", "theta"?, "alpha1"?, "alpha2"?, "corr"?, "dim"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct CopulaSpec {
    params: Params,
    dim: usize,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::param("dim", format!("{dim} < 2")));
    }
    Ok(())
}

impl CopulaSpec {
    /// Gumbel-Hougaard copula, `θ ∈ [1, 10⁴]`.
    pub fn gumbel_hougaard(theta: f64, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if !(1.0..=MAX_THETA).contains(&theta) {
            return Err(Error::param(
                "theta",
                format!("{theta} is outside [1, {MAX_THETA}]"),
            ));
        }
        Ok(Self {
            params: Params::Gumbel { theta },
            dim,
        })
    }

    /// Bivariate Marshall-Olkin copula `min(u₁^{1−α₁}u₂, u₁u₂^{1−α₂})`.
    pub fn marshall_olkin(alpha1: f64, alpha2: f64) -> Result<Self> {
        for (name, a) in [("alpha1", alpha1), ("alpha2", alpha2)] {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::param(name, format!("{a} is outside [0, 1]")));
            }
        }
        Ok(Self {
            params: Params::MarshallOlkin { alpha1, alpha2 },
            dim: 2,
        })
    }

    pub fn gaussian(corr: CorrelationMatrix) -> Self {
        Self {
            dim: corr.dim(),
            params: Params::Gaussian(corr),
        }
    }

    pub fn gaussian_bivariate(rho: f64) -> Result<Self> {
        Ok(Self::gaussian(CorrelationMatrix::bivariate(rho)?))
    }

    pub fn independence(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            params: Params::Independence,
            dim,
        })
    }

    pub fn comonotone(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            params: Params::Comonotone,
            dim,
        })
    }

    pub fn family(&self) -> Family {
        match self.params {
            Params::Gumbel { .. } => Family::GumbelHougaard,
            Params::MarshallOlkin { .. } => Family::MarshallOlkin,
            Params::Gaussian(_) => Family::Gaussian,
            Params::Independence => Family::Independence,
            Params::Comonotone => Family::Comonotone,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn theta(&self) -> Option<f64> {
        match self.params {
            Params::Gumbel { theta } => Some(theta),
            _ => None,
        }
    }

    pub fn alphas(&self) -> Option<(f64, f64)> {
        match self.params {
            Params::MarshallOlkin { alpha1, alpha2 } => Some((alpha1, alpha2)),
            _ => None,
        }
    }

    pub fn corr(&self) -> Option<&CorrelationMatrix> {
        match &self.params {
            Params::Gaussian(c) => Some(c),
            _ => None,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::param("copula", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("copula spec serializes")
    }

    /// `−log C` from the exponents `xᵢ = −log uᵢ > 0` of the non-unit
    /// coordinates `idx`. `None` for families without a closed form.
    fn neg_log_closed_form(&self, idx: &[usize], x: &[f64]) -> Option<f64> {
        Some(match &self.params {
            Params::Gumbel { theta } => theta_norm(x, *theta),
            Params::MarshallOlkin { alpha1, alpha2 } => {
                let (x1, x2) = pair(idx, x);
                x1 + x2 - (alpha1 * x1).min(alpha2 * x2)
            }
            Params::Independence => x.iter().sum(),
            Params::Comonotone => x.iter().copied().fold(0.0, f64::max),
            Params::Gaussian(_) => return None,
        })
    }

    fn gaussian_interior(&self, corr: &CorrelationMatrix, idx: &[usize], u: &[f64]) -> Result<f64> {
        if idx.len() > 2 {
            return Err(Error::Unsupported(format!(
                "Gaussian copula CDF with {} non-unit coordinates (only bivariate margins are integrated)",
                idx.len()
            )));
        }
        let (i, j) = (idx[0], idx[1]);
        let x = std_normal_inv_cdf(u[0])?;
        let y = std_normal_inv_cdf(u[1])?;
        bivariate_normal_cdf(x, y, corr.get(i, j))
    }

    /// `log C(e^{v₁},…,e^{vₙ})` for `v ≤ 0`, evaluated in log space for the
    /// closed-form families.
    pub fn log_cdf_at_exp(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        if let Some(bad) = v.iter().find(|x| !(**x <= 0.0)) {
            return Err(Error::domain(
                "log_copula",
                format!("argument {bad} is not <= 0"),
            ));
        }
        if v.contains(&f64::NEG_INFINITY) {
            return Err(Error::OutsideLogDomain);
        }
        let (idx, x): (Vec<usize>, Vec<f64>) = v
            .iter()
            .enumerate()
            .filter(|(_, vi)| **vi < 0.0)
            .map(|(i, vi)| (i, -vi))
            .unzip();
        if idx.is_empty() {
            return Ok(0.0);
        }
        if idx.len() == 1 {
            return Ok(-x[0]);
        }
        let log = match self.neg_log_closed_form(&idx, &x) {
            Some(nl) => -nl,
            None => {
                let c = self.cdf(&v.iter().map(|vi| vi.exp()).collect::<Vec<_>>())?;
                if c <= 0.0 {
                    return Err(Error::OutsideLogDomain);
                }
                c.ln()
            }
        };
        Ok(log)
    }
}

fn pair(idx: &[usize], x: &[f64]) -> (f64, f64) {
    match idx {
        [0, 1] => (x[0], x[1]),
        _ => unreachable!("bivariate family evaluated with interior set {idx:?}"),
    }
}

/// `(Σ xᵢ^θ)^{1/θ}`, scaled by the largest term so that large `θ` or large
/// `xᵢ` cannot overflow.
pub(crate) fn theta_norm(x: &[f64], theta: f64) -> f64 {
    let m = x.iter().copied().fold(0.0, f64::max);
    if m == 0.0 || m.is_infinite() {
        return m;
    }
    let s: f64 = x.iter().map(|xi| (xi / m).powf(theta)).sum();
    m * s.powf(1.0 / theta)
}

/// Evaluates `C(u)` for `u ∈ [0, 1]^dim`.
///
/// A zero coordinate returns 0 before any logarithm is taken and unit
/// coordinates are dropped, so groundedness and uniform margins hold
/// exactly for every family.
pub fn copula_cdf(spec: &CopulaSpec, u: &[f64]) -> Result<f64> {
    check_unit_point(u, spec.dim)?;
    if u.contains(&0.0) {
        return Ok(0.0);
    }
    let (idx, vals): (Vec<usize>, Vec<f64>) = u
        .iter()
        .enumerate()
        .filter(|(_, ui)| **ui < 1.0)
        .map(|(i, ui)| (i, *ui))
        .unzip();
    match idx.len() {
        0 => return Ok(1.0),
        1 => return Ok(vals[0]),
        _ => {}
    }
    let value = match &spec.params {
        Params::Independence => vals.iter().product(),
        Params::Comonotone => vals.iter().copied().fold(1.0, f64::min),
        Params::Gaussian(corr) => spec.gaussian_interior(corr, &idx, &vals)?,
        _ => {
            let x: Vec<f64> = vals.iter().map(|ui| -ui.ln()).collect();
            let nl = spec
                .neg_log_closed_form(&idx, &x)
                .expect("closed-form family");
            (-nl).exp()
        }
    };
    Ok(value)
}

impl CopulaFn for CopulaSpec {
    fn dim(&self) -> usize {
        self.dim
    }

    fn cdf(&self, u: &[f64]) -> Result<f64> {
        copula_cdf(self, u)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    corr: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    dim: Option<usize>,
}

impl TryFrom<RawSpec> for CopulaSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let family = Family::parse(&raw.family)
            .ok_or_else(|| Error::param("family", format!("unknown family `{}`", raw.family)))?;
        let forbid = |name: &'static str, present: bool| -> Result<()> {
            if present {
                Err(Error::param(name, format!("not a parameter of {family}")))
            } else {
                Ok(())
            }
        };
        if family != Family::GumbelHougaard {
            forbid("theta", raw.theta.is_some())?;
        }
        if family != Family::MarshallOlkin {
            forbid("alpha1", raw.alpha1.is_some())?;
            forbid("alpha2", raw.alpha2.is_some())?;
        }
        if family != Family::Gaussian {
            forbid("corr", raw.corr.is_some())?;
        }
        let need_dim = || raw.dim.ok_or_else(|| Error::param("dim", "missing"));
        let spec = match family {
            Family::GumbelHougaard => {
                let theta = raw.theta.ok_or_else(|| Error::param("theta", "missing"))?;
                CopulaSpec::gumbel_hougaard(theta, need_dim()?)?
            }
            Family::MarshallOlkin => {
                let a1 = raw
                    .alpha1
                    .ok_or_else(|| Error::param("alpha1", "missing"))?;
                let a2 = raw
                    .alpha2
                    .ok_or_else(|| Error::param("alpha2", "missing"))?;
                CopulaSpec::marshall_olkin(a1, a2)?
            }
            Family::Gaussian => {
                let corr = raw.corr.ok_or_else(|| Error::param("corr", "missing"))?;
                CopulaSpec::gaussian(CorrelationMatrix::from_rows(corr)?)
            }
            Family::Independence => CopulaSpec::independence(need_dim()?)?,
            Family::Comonotone => CopulaSpec::comonotone(need_dim()?)?,
        };
        if let Some(dim) = raw.dim {
            if dim != spec.dim {
                return Err(Error::param(
                    "dim",
                    format!(
                        "{dim} does not match the {family} parameters (dim {})",
                        spec.dim
                    ),
                ));
            }
        }
        Ok(spec)
    }
}

impl From<CopulaSpec> for RawSpec {
    fn from(spec: CopulaSpec) -> Self {
        let mut raw = RawSpec {
            family: spec.family().name().to_string(),
            theta: None,
            alpha1: None,
            alpha2: None,
            corr: None,
            dim: Some(spec.dim),
        };
        match spec.params {
            Params::Gumbel { theta } => raw.theta = Some(theta),
            Params::MarshallOlkin { alpha1, alpha2 } => {
                raw.alpha1 = Some(alpha1);
                raw.alpha2 = Some(alpha2);
            }
            Params::Gaussian(c) => raw.corr = Some(c.rows()),
            Params::Independence | Params::Comonotone => {}
        }
        raw
    }
}
