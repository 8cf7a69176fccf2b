use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal distribution function `Φ(x)`.
///
/// Evaluated through the complementary error function so that both tails
/// keep full relative precision.
pub fn std_normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

// Acklam's rational approximation, relative error below 1.15e-9.
const A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_69e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];
const P_LOW: f64 = 0.02425;

fn acklam(p: f64) -> f64 {
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Quantile function `Φ⁻¹(p)` for `p ∈ (0, 1)`.
///
/// A rational first guess followed by one Newton step on `Φ`. The residual
/// is taken on whichever tail is smaller so the correction does not cancel
/// near `p = 1`.
pub fn std_normal_inv_cdf(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(
            "std_normal_inv_cdf",
            format!("probability {p} is not in (0, 1)"),
        ));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let x = acklam(p);
    let density = std_normal_pdf(x);
    if density == 0.0 {
        return Ok(x);
    }
    let err = if p < 0.5 {
        std_normal_cdf(x) - p
    } else {
        (1.0 - p) - std_normal_cdf(-x)
    };
    Ok(x - err / density)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // 40-digit quadrature values.
    const PHI_1: f64 = 0.841_344_746_068_542_9;
    const PHI_8: f64 = 0.999_999_999_999_999_4;

    #[test]
    fn cdf_reference_points() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        assert!((std_normal_cdf(1.0) - PHI_1).abs() <= 1e-15);
        let tail = std_normal_cdf(8.0);
        assert!(tail > 1.0 - 1e-14 && tail <= 1.0);
        assert!((tail - PHI_8).abs() <= 1e-15);
        assert!(std_normal_cdf(-37.0) > 0.0);
    }

    #[test]
    fn inverse_reference_points() {
        assert_eq!(std_normal_inv_cdf(0.5).unwrap(), 0.0);
        assert!((std_normal_inv_cdf(0.841344746).unwrap() - 1.0).abs() < 1e-7);
        assert!((std_normal_inv_cdf(PHI_1).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn inverse_rejects_boundary() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(std_normal_inv_cdf(p).is_err(), "p = {p}");
        }
    }

    #[test]
    fn round_trip_on_grid() {
        for i in 0..=1200 {
            let x = -6.0 + 0.01 * i as f64;
            let back = std_normal_inv_cdf(std_normal_cdf(x)).unwrap();
            assert!((back - x).abs() < 1e-8, "x = {x}, back = {back}");
        }
    }

    #[test]
    fn deep_tail_inverse() {
        for p in [1e-300, 1e-100, 1e-20, 1e-10] {
            let x = std_normal_inv_cdf(p).unwrap();
            let rel = (std_normal_cdf(x) - p).abs() / p;
            assert!(rel < 1e-12, "p = {p}, rel = {rel}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn cdf_is_monotone(a in -40.0f64..40.0, b in -40.0f64..40.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(std_normal_cdf(lo) <= std_normal_cdf(hi));
        }

        #[test]
        fn inverse_contract(p in 1e-12f64..(1.0 - 1e-12)) {
            let x = std_normal_inv_cdf(p).unwrap();
            prop_assert!((std_normal_cdf(x) - p).abs() <= 1e-9);
        }
    }
}
