use std::f64::consts::PI;

use crate::copulas::{CopulaSpec, Family};
use crate::error::{Error, Result};

/// `1 − 1/θ`.
pub fn kendall_tau_gumbel(theta: f64) -> Result<f64> {
    if !(theta >= 1.0) {
        return Err(Error::param("theta", format!("{theta} < 1")));
    }
    Ok(1.0 - 1.0 / theta)
}

/// `α₁α₂ / (α₁ + α₂ − α₁α₂)`, zero when either parameter vanishes.
pub fn kendall_tau_marshall_olkin(alpha1: f64, alpha2: f64) -> f64 {
    if alpha1 == 0.0 || alpha2 == 0.0 {
        return 0.0;
    }
    alpha1 * alpha2 / (alpha1 + alpha2 - alpha1 * alpha2)
}

/// `(2/π)·asin ρ`.
pub fn kendall_tau_gaussian(rho: f64) -> f64 {
    2.0 / PI * rho.asin()
}

/// Population tau of a bivariate spec, where a closed form is known.
pub fn kendall_tau_analytic(spec: &CopulaSpec) -> Option<f64> {
    if spec.dim() != 2 {
        return None;
    }
    match spec.family() {
        Family::GumbelHougaard => kendall_tau_gumbel(spec.theta()?).ok(),
        Family::MarshallOlkin => {
            let (a1, a2) = spec.alphas()?;
            Some(kendall_tau_marshall_olkin(a1, a2))
        }
        Family::Gaussian => Some(kendall_tau_gaussian(spec.corr()?.get(0, 1))),
        Family::Independence => Some(0.0),
        Family::Comonotone => Some(1.0),
    }
}

fn tied_pairs(sorted: &[f64]) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Sorts `v` ascending and returns the number of strict inversions.
fn sort_counting_inversions(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (left, right) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        sort_counting_inversions(left, bl) + sort_counting_inversions(right, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// `(concordant − discordant) / (n choose 2)`; pairs tied in either
/// coordinate contribute zero.
///
/// Knight's `O(n log n)` method: sort by `(u, v)`, then count the
/// inversions left in the `v` column with a merge sort.
pub fn kendall_tau_empirical(pairs: &[(f64, f64)]) -> Result<f64> {
    let n = pairs.len();
    if n < 2 {
        return Err(Error::param(
            "pairs",
            format!("need at least 2 pairs, got {n}"),
        ));
    }
    if pairs.iter().any(|(u, v)| u.is_nan() || v.is_nan()) {
        return Err(Error::param("pairs", "NaN in sample"));
    }
    let mut sorted = pairs.to_vec();
    sorted.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let total = n as u64 * (n as u64 - 1) / 2;
    let xs: Vec<f64> = sorted.iter().map(|p| p.0).collect();
    let x_ties = tied_pairs(&xs);
    let mut joint_ties = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
            run += 1;
        } else {
            joint_ties += run * (run - 1) / 2;
            run = 1;
        }
    }
    joint_ties += run * (run - 1) / 2;

    let mut ys: Vec<f64> = sorted.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; n];
    let discordant = sort_counting_inversions(&mut ys, &mut buf);
    let y_ties = tied_pairs(&ys);

    let untied = (total + joint_ties) as i128 - x_ties as i128 - y_ties as i128;
    let diff = untied - 2 * discordant as i128;
    Ok(diff as f64 / total as f64)
}
