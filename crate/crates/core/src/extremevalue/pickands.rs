use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::copulas::{CopulaFn, CopulaSpec, Family};
use crate::error::{Error, Result};

/// A function on `[0, 1]` proposed as a Pickands dependence function.
pub trait Pickands {
    fn value(&self, t: f64) -> f64;
}

impl<F: Fn(f64) -> f64> Pickands for F {
    fn value(&self, t: f64) -> f64 {
        self(t)
    }
}

/// The dependence functions of the shipped extreme-value families, with
/// `t = ln v / ln(uv)` weighting the second coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum PickandsFn {
    /// `(t^θ + (1−t)^θ)^{1/θ}`.
    Gumbel { theta: f64 },
    /// `1 − min(α₁(1−t), α₂t)`.
    MarshallOlkin { alpha1: f64, alpha2: f64 },
    /// Independence.
    Constant1,
}

impl PickandsFn {
    pub fn gumbel(theta: f64) -> Result<Self> {
        if !(theta >= 1.0 && theta.is_finite()) {
            return Err(Error::param("theta", format!("{theta} < 1")));
        }
        Ok(Self::Gumbel { theta })
    }

    pub fn marshall_olkin(alpha1: f64, alpha2: f64) -> Result<Self> {
        for (name, a) in [("alpha1", alpha1), ("alpha2", alpha2)] {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::param(name, format!("{a} is outside [0, 1]")));
            }
        }
        Ok(Self::MarshallOlkin { alpha1, alpha2 })
    }

    /// The dependence function of an extreme-value copula spec. Comonotone
    /// maps to `MarshallOlkin(1, 1)`, i.e. `A(t) = max(t, 1−t)`; the Gaussian
    /// copula has none.
    pub fn from_copula(spec: &CopulaSpec) -> Result<Self> {
        if spec.dim() != 2 {
            return Err(Error::Unsupported(format!(
                "Pickands functions are bivariate; spec has dim {}",
                spec.dim()
            )));
        }
        match spec.family() {
            Family::GumbelHougaard => Self::gumbel(spec.theta().expect("theta")),
            Family::MarshallOlkin => {
                let (a1, a2) = spec.alphas().expect("alphas");
                Self::marshall_olkin(a1, a2)
            }
            Family::Independence => Ok(Self::Constant1),
            Family::Comonotone => Self::marshall_olkin(1.0, 1.0),
            Family::Gaussian => Err(Error::Unsupported(
                "the Gaussian copula is not an extreme-value copula".into(),
            )),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Gumbel { theta } => format!("GumbelPickands(theta={theta})"),
            Self::MarshallOlkin { alpha1, alpha2 } => {
                format!("MOPickands(alpha1={alpha1}, alpha2={alpha2})")
            }
            Self::Constant1 => "Constant1".into(),
        }
    }
}

impl Pickands for PickandsFn {
    fn value(&self, t: f64) -> f64 {
        match *self {
            Self::Gumbel { theta } => {
                let (a, b) = (t, 1.0 - t);
                let m = a.max(b);
                m * ((a / m).powf(theta) + (b / m).powf(theta)).powf(1.0 / theta)
            }
            Self::MarshallOlkin { alpha1, alpha2 } => 1.0 - (alpha1 * (1.0 - t)).min(alpha2 * t),
            Self::Constant1 => 1.0,
        }
    }
}

pub fn pickands_eval(a: &PickandsFn, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(
            "pickands_eval",
            format!("t = {t} is outside [0, 1]"),
        ));
    }
    Ok(a.value(t))
}

/// `exp((ln u + ln v)·A(ln v / (ln u + ln v)))` for interior `u`, `v`.
pub fn copula_from_pickands(a: &dyn Pickands, u: f64, v: f64) -> Result<f64> {
    for x in [u, v] {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::domain(
                "copula_from_pickands",
                format!("{x} is not strictly inside (0, 1)"),
            ));
        }
    }
    Ok(from_logs(a, u.ln(), v.ln()))
}

fn from_logs(a: &dyn Pickands, lu: f64, lv: f64) -> f64 {
    let s = lu + lv;
    (s * a.value(lv / s)).exp()
}

/// The copula generated by a Pickands function, usable wherever a
/// [`CopulaFn`] is expected. Boundary points follow the copula axioms.
pub struct PickandsCopula<P> {
    pickands: P,
}

impl<P: Pickands> PickandsCopula<P> {
    pub fn new(pickands: P) -> Self {
        Self { pickands }
    }
}

impl<P: Pickands> CopulaFn for PickandsCopula<P> {
    fn dim(&self) -> usize {
        2
    }

    fn cdf(&self, u: &[f64]) -> Result<f64> {
        crate::copulas::check_unit_point(u, 2)?;
        let (x, y) = (u[0], u[1]);
        Ok(if x == 0.0 || y == 0.0 {
            0.0
        } else if x == 1.0 {
            y
        } else if y == 1.0 {
            x
        } else {
            from_logs(&self.pickands, x.ln(), y.ln())
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PickandsValidity {
    /// `max(|A(0) − 1|, |A(1) − 1|)`.
    pub endpoint_error: f64,
    /// Largest excursion outside `[max(t, 1−t), 1]`.
    pub bound_violation: f64,
    /// Smallest second difference on the grid.
    pub min_second_difference: f64,
    pub grid_size: usize,
    pub tol: f64,
    pub violations: Vec<String>,
    pub valid: bool,
}

/// Checks endpoint values, the envelope `max(t, 1−t) ≤ A(t) ≤ 1` and
/// discrete convexity on a uniform grid of `grid_size` points.
pub fn check_pickands_validity(
    a: &dyn Pickands,
    grid_size: usize,
    tol: f64,
) -> Result<PickandsValidity> {
    if grid_size < 3 {
        return Err(Error::param("grid_size", format!("{grid_size} < 3")));
    }
    let h = 1.0 / (grid_size - 1) as f64;
    let ts: Vec<f64> = (0..grid_size).map(|i| i as f64 * h).collect();
    let values: Vec<f64> = ts.iter().map(|&t| a.value(t)).collect();

    let mut violations = Vec::new();
    let endpoint_error = (values[0] - 1.0)
        .abs()
        .max((values[grid_size - 1] - 1.0).abs());
    if !(endpoint_error <= tol) {
        violations.push(format!(
            "endpoints: A(0) = {}, A(1) = {}",
            values[0],
            values[grid_size - 1]
        ));
    }

    let mut bound_violation = 0.0f64;
    let mut worst_bound = None;
    for (&t, &v) in ts.iter().zip(&values) {
        let excess = (t.max(1.0 - t) - v).max(v - 1.0);
        if !(excess <= bound_violation) {
            bound_violation = if excess.is_nan() {
                f64::INFINITY
            } else {
                excess
            };
            worst_bound = Some((t, v));
        }
    }
    if let Some((t, v)) = worst_bound.filter(|_| bound_violation > tol) {
        violations.push(format!(
            "bounds: A({t}) = {v} outside [{}, 1]",
            t.max(1.0 - t)
        ));
    }

    let mut min_second_difference = f64::INFINITY;
    let mut worst_convex = 0.0;
    for i in 1..grid_size - 1 {
        let d2 = values[i - 1] - 2.0 * values[i] + values[i + 1];
        if d2 < min_second_difference {
            min_second_difference = d2;
            worst_convex = ts[i];
        }
    }
    if !(min_second_difference >= -tol) {
        violations.push(format!(
            "convexity: second difference {min_second_difference:e} at t = {worst_convex}"
        ));
    }

    Ok(PickandsValidity {
        endpoint_error,
        bound_violation,
        min_second_difference,
        grid_size,
        tol,
        valid: violations.is_empty(),
        violations,
    })
}

/// Dependence-function values on a uniform grid with their validity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PickandsEvaluation {
    pub pickands: PickandsFn,
    pub points: Vec<(f64, f64)>,
    pub validity: PickandsValidity,
}

impl PickandsEvaluation {
    pub fn new(pickands: PickandsFn, grid_size: usize, tol: f64) -> Result<Self> {
        let validity = check_pickands_validity(&pickands, grid_size, tol)?;
        let h = 1.0 / (grid_size - 1) as f64;
        let points = (0..grid_size)
            .map(|i| {
                let t = i as f64 * h;
                (t, pickands.value(t))
            })
            .collect();
        Ok(Self {
            pickands,
            points,
            validity,
        })
    }

    /// Two columns, `t,A`, one grid point per row.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,A")?;
        for (t, a) in &self.points {
            writeln!(w, "{t:?},{a:?}")?;
        }
        Ok(())
    }
}
