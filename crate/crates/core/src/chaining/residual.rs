use serde::{Deserialize, Serialize};

use crate::copulas::{CopulaFn, CopulaSpec};
use crate::error::{Error, Result};

/// Exponents swept by default; fractional `k` is included on purpose.
pub const DEFAULT_KS: [f64; 5] = [0.5, 2.0, 3.0, 10.0, 100.0];

/// Central-difference step for [`pde_residual`].
pub const PDE_STEP: f64 = 1e-5;

/// Tensor grid `{0.05, 0.10, …, 0.95}^dim`.
pub fn default_grid(dim: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = (1..=19).map(|i| i as f64 * 0.05).collect();
    let mut grid = vec![Vec::new()];
    for _ in 0..dim {
        grid = grid
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    grid
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::param("k", format!("{k} is not a positive real")));
    }
    Ok(())
}

fn check_interior(op: &'static str, u: &[f64]) -> Result<()> {
    if let Some(bad) = u.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
        return Err(Error::domain(
            op,
            format!("{bad} is not strictly inside (0, 1)"),
        ));
    }
    Ok(())
}

/// `|C(u₁ᵏ,…,uₙᵏ) − C(u₁,…,uₙ)ᵏ|`.
pub fn self_chain_residual(copula: &dyn CopulaFn, u: &[f64], k: f64) -> Result<f64> {
    check_k(k)?;
    check_interior("self_chain_residual", u)?;
    let uk: Vec<f64> = u.iter().map(|x| x.powf(k)).collect();
    Ok((copula.cdf(&uk)? - copula.cdf(u)?.powf(k)).abs())
}

/// Worst residual over a grid sweep, with the point where it occurs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub argmax_point: Vec<f64>,
    pub argmax_k: f64,
    pub grid_size: usize,
    /// Points where the residual is undefined (homogeneity sweeps only).
    pub skipped: usize,
}

impl ResidualReport {
    pub fn csv_header() -> &'static str {
        "max_residual,argmax_point,argmax_k,grid_size,skipped"
    }

    /// One CSV row; the point's coordinates are joined with `;`.
    pub fn csv_row(&self) -> String {
        let point: Vec<String> = self.argmax_point.iter().map(|x| format!("{x:?}")).collect();
        format!(
            "{:?},{},{:?},{},{}",
            self.max_residual,
            point.join(";"),
            self.argmax_k,
            self.grid_size,
            self.skipped
        )
    }
}

fn sweep<F>(grid: &[Vec<f64>], ks: &[f64], mut residual: F) -> Result<ResidualReport>
where
    F: FnMut(&[f64], f64) -> Result<Option<f64>>,
{
    if grid.is_empty() || ks.is_empty() {
        return Err(Error::param(
            "grid",
            "grid and exponent set must be nonempty",
        ));
    }
    let mut report = ResidualReport {
        max_residual: 0.0,
        argmax_point: grid[0].clone(),
        argmax_k: ks[0],
        grid_size: grid.len(),
        skipped: 0,
    };
    for point in grid {
        for &k in ks {
            match residual(point, k)? {
                Some(r) if !(r <= report.max_residual) => {
                    report.max_residual = if r.is_nan() { f64::INFINITY } else { r };
                    report.argmax_point = point.clone();
                    report.argmax_k = k;
                }
                Some(_) => {}
                None => report.skipped += 1,
            }
        }
    }
    Ok(report)
}

/// Maximum of [`self_chain_residual`] over `grid × ks`.
pub fn max_residual_grid(
    copula: &dyn CopulaFn,
    grid: &[Vec<f64>],
    ks: &[f64],
) -> Result<ResidualReport> {
    sweep(grid, ks, |u, k| self_chain_residual(copula, u, k).map(Some))
}

/// `L(v) = log C(e^{v₁},…,e^{vₙ})` for `v ≤ 0`.
pub fn log_copula(spec: &CopulaSpec, v: &[f64]) -> Result<f64> {
    spec.log_cdf_at_exp(v)
}

/// `|L(k·v) − k·L(v)|`.
pub fn homogeneity_residual(spec: &CopulaSpec, v: &[f64], k: f64) -> Result<f64> {
    check_k(k)?;
    let kv: Vec<f64> = v.iter().map(|x| k * x).collect();
    Ok((log_copula(spec, &kv)? - k * log_copula(spec, v)?).abs())
}

/// Maximum of [`homogeneity_residual`] at `v = ln u` for `u` on the grid.
/// Points where `C` underflows to zero are outside the log-copula domain
/// and counted in `skipped`.
pub fn max_homogeneity_grid(
    spec: &CopulaSpec,
    grid: &[Vec<f64>],
    ks: &[f64],
) -> Result<ResidualReport> {
    sweep(grid, ks, |u, k| {
        check_interior("max_homogeneity_grid", u)?;
        let v: Vec<f64> = u.iter().map(|x| x.ln()).collect();
        match homogeneity_residual(spec, &v, k) {
            Ok(r) => Ok(Some(r)),
            Err(Error::OutsideLogDomain) => Ok(None),
            Err(e) => Err(e),
        }
    })
}

/// `C_u·u·ln u + C_v·v·ln v − C·ln C` with central-difference partials.
pub fn pde_residual(copula: &dyn CopulaFn, u: [f64; 2], h: f64) -> Result<f64> {
    if copula.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: copula.dim(),
        });
    }
    if !(h > 0.0) {
        return Err(Error::param("h", format!("{h} is not positive")));
    }
    let [x, y] = u;
    if !(x - h > 0.0 && x + h < 1.0 && y - h > 0.0 && y + h < 1.0) {
        return Err(Error::domain(
            "pde_residual",
            format!("step {h} leaves the open unit square around ({x}, {y})"),
        ));
    }
    let c = copula.cdf(&[x, y])?;
    if c <= 0.0 {
        return Err(Error::OutsideLogDomain);
    }
    let cu = (copula.cdf(&[x + h, y])? - copula.cdf(&[x - h, y])?) / (2.0 * h);
    let cv = (copula.cdf(&[x, y + h])? - copula.cdf(&[x, y - h])?) / (2.0 * h);
    Ok(cu * x * x.ln() + cv * y * y.ln() - c * c.ln())
}

/// Worst PDE residual over a bivariate grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdeReport {
    pub step: f64,
    pub tol: f64,
    pub max_abs_residual: f64,
    /// `max |r| / (1 + |C ln C|)`, compared against `tol`.
    pub max_scaled_residual: f64,
    pub argmax_point: Vec<f64>,
    pub grid_size: usize,
    /// Points too close to the boundary for the step, or where `C = 0`.
    pub skipped: usize,
    pub passed: bool,
}

/// Sweeps [`pde_residual`] over `grid`. A point passes when
/// `|r| ≤ tol·(1 + |C ln C|)`.
pub fn max_pde_grid(
    copula: &dyn CopulaFn,
    grid: &[Vec<f64>],
    h: f64,
    tol: f64,
) -> Result<PdeReport> {
    if grid.is_empty() {
        return Err(Error::param("grid", "grid must be nonempty"));
    }
    if !(tol > 0.0) {
        return Err(Error::param("tol", format!("{tol} is not positive")));
    }
    let mut report = PdeReport {
        step: h,
        tol,
        max_abs_residual: 0.0,
        max_scaled_residual: 0.0,
        argmax_point: grid[0].clone(),
        grid_size: grid.len(),
        skipped: 0,
        passed: true,
    };
    for point in grid {
        if point.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: point.len(),
            });
        }
        let r = match pde_residual(copula, [point[0], point[1]], h) {
            Ok(r) => r.abs(),
            Err(Error::OutsideLogDomain | Error::Domain { .. }) => {
                report.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let c = copula.cdf(point)?;
        let scaled = r / (1.0 + (c * c.ln()).abs());
        if !(r <= report.max_abs_residual) {
            report.max_abs_residual = if r.is_nan() { f64::INFINITY } else { r };
        }
        if !(scaled <= report.max_scaled_residual) {
            report.max_scaled_residual = if scaled.is_nan() {
                f64::INFINITY
            } else {
                scaled
            };
            report.argmax_point = point.clone();
        }
    }
    report.passed = report.max_scaled_residual <= tol;
    Ok(report)
}

/// `u ↦ C(u₁ᵏ,…,uₙᵏ)^{1/k}`. A copula is self-chaining exactly when it is
/// a fixed point of this map for every `k`.
pub struct MaxStable<C> {
    inner: C,
    k: f64,
}

impl<C: CopulaFn> MaxStable<C> {
    pub fn k(&self) -> f64 {
        self.k
    }
}

pub fn max_stable_transform<C: CopulaFn>(copula: C, k: f64) -> Result<MaxStable<C>> {
    check_k(k)?;
    Ok(MaxStable { inner: copula, k })
}

impl<C: CopulaFn> CopulaFn for MaxStable<C> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn cdf(&self, u: &[f64]) -> Result<f64> {
        crate::copulas::check_unit_point(u, self.dim())?;
        let uk: Vec<f64> = u.iter().map(|x| x.powf(self.k)).collect();
        Ok(self.inner.cdf(&uk)?.powf(1.0 / self.k))
    }
}
