use serde::{Deserialize, Serialize};

use super::CopulaFn;
use crate::error::{Error, Result};
use crate::numerics::RngStream;

/// Mass that the distribution `copula` assigns to the box `[a, b]`.
///
/// Inclusion–exclusion over the `2ⁿ` vertices. A zero-width side returns
/// exactly 0.
pub fn c_volume(copula: &dyn CopulaFn, a: &[f64], b: &[f64]) -> Result<f64> {
    let n = copula.dim();
    for len in [a.len(), b.len()] {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: len,
            });
        }
    }
    for (i, (&lo, &hi)) in a.iter().zip(b).enumerate() {
        if !(lo <= hi) {
            return Err(Error::InvalidRectangle {
                index: i,
                lower: lo,
                upper: hi,
            });
        }
    }
    if a.iter().zip(b).any(|(lo, hi)| lo == hi) {
        return Ok(0.0);
    }
    let mut vertex = vec![0.0; n];
    let mut volume = 0.0;
    for mask in 0u64..(1 << n) {
        let mut lower_count = 0;
        for i in 0..n {
            if mask & (1 << i) == 0 {
                vertex[i] = a[i];
                lower_count += 1;
            } else {
                vertex[i] = b[i];
            }
        }
        let c = copula.cdf(&vertex)?;
        if lower_count % 2 == 0 {
            volume += c;
        } else {
            volume -= c;
        }
    }
    Ok(volume)
}

/// Largest violation found for each copula axiom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    /// `max |C(u)|` over points with a zero coordinate.
    pub groundedness: f64,
    /// `max |C(1,…,u_k,…,1) − u_k|`.
    pub margins: f64,
    /// `max(−vol, 0)` over the random rectangles.
    pub negative_volume: f64,
    pub negative_volume_count: usize,
    /// Rectangle `(a, b)` with the most negative volume, if any was negative.
    pub worst_rectangle: Option<(Vec<f64>, Vec<f64>)>,
    pub n_rects: usize,
    pub tol: f64,
    pub passed: bool,
}

const AXIOM_GRID: usize = 50;

/// Numerically checks groundedness, uniform margins and the nonnegativity
/// of rectangle volumes.
///
/// Boundary axioms are probed on a 50-point grid of `[0, 1]`; volumes on
/// `n_rects` random boxes drawn from `rng`. Violations are report contents;
/// only evaluator failures are errors.
pub fn check_copula_axioms(
    copula: &dyn CopulaFn,
    n_rects: usize,
    rng: &mut RngStream,
    tol: f64,
) -> Result<AxiomReport> {
    if !(tol > 0.0) {
        return Err(Error::param("tol", format!("{tol} is not positive")));
    }
    let n = copula.dim();
    let grid: Vec<f64> = (0..AXIOM_GRID)
        .map(|i| i as f64 / (AXIOM_GRID - 1) as f64)
        .collect();

    let mut groundedness = 0.0f64;
    let mut margins = 0.0f64;
    let mut u = vec![0.0; n];
    for k in 0..n {
        for &g in &grid {
            for &h in &grid {
                for (i, ui) in u.iter_mut().enumerate() {
                    *ui = if i % 2 == 0 { g } else { h };
                }
                u[k] = 0.0;
                groundedness = groundedness.max(copula.cdf(&u)?.abs());
            }
            u.fill(1.0);
            u[k] = g;
            margins = margins.max((copula.cdf(&u)? - g).abs());
        }
    }

    let mut negative_volume = 0.0f64;
    let mut negative_volume_count = 0;
    let mut worst_rectangle = None;
    let (mut a, mut b) = (vec![0.0; n], vec![0.0; n]);
    for _ in 0..n_rects {
        for i in 0..n {
            let (x, y) = (rng.uniform(), rng.uniform());
            a[i] = x.min(y);
            b[i] = x.max(y);
        }
        let vol = c_volume(copula, &a, &b)?;
        if vol < 0.0 {
            negative_volume_count += 1;
            if -vol > negative_volume {
                negative_volume = -vol;
                worst_rectangle = Some((a.clone(), b.clone()));
            }
        }
    }

    Ok(AxiomReport {
        groundedness,
        margins,
        negative_volume,
        negative_volume_count,
        worst_rectangle,
        n_rects,
        tol,
        passed: groundedness <= tol && margins <= tol && negative_volume <= tol,
    })
}
