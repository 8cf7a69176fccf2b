use selfchain::chaining::{
    default_grid, homogeneity_residual, max_pde_grid, max_residual_grid, mc_multi_step,
    mc_one_shot, multi_step_survival, one_shot_survival, DEFAULT_KS, PDE_STEP,
};
use selfchain::copulas::copula_cdf;
use selfchain::extremevalue::{check_pickands_validity, Pickands, PickandsCopula, PickandsFn};
use selfchain::{ArrivalTimeModel, CopulaSpec, Error, RngStream};

fn self_chaining() -> Vec<CopulaSpec> {
    vec![
        CopulaSpec::gumbel_hougaard(1.0, 2).unwrap(),
        CopulaSpec::gumbel_hougaard(3.5, 2).unwrap(),
        CopulaSpec::marshall_olkin(0.0, 0.6).unwrap(),
        CopulaSpec::marshall_olkin(0.25, 0.75).unwrap(),
        CopulaSpec::independence(2).unwrap(),
        CopulaSpec::comonotone(2).unwrap(),
    ]
}

fn gaussians() -> Vec<CopulaSpec> {
    [-0.5, 0.3, 0.5, 0.9]
        .iter()
        .map(|&r| CopulaSpec::gaussian_bivariate(r).unwrap())
        .collect()
}

/// `|C(uᵏ) − C(u)ᵏ|` relative to the larger side; the identity residual on
/// the same scale as the log-copula residual.
fn relative_identity(spec: &CopulaSpec, u: &[f64], k: f64) -> f64 {
    let uk: Vec<f64> = u.iter().map(|x| x.powf(k)).collect();
    let a = copula_cdf(spec, &uk).unwrap();
    let b = copula_cdf(spec, u).unwrap().powf(k);
    (a - b).abs() / a.max(b)
}

#[test]
fn identity_and_homogeneity_agree_pointwise() {
    let near = |x: f64| (0.5e-10..=2e-10).contains(&x);
    for spec in self_chaining().into_iter().chain(gaussians()) {
        let mut compared = 0;
        for u in default_grid(2) {
            let v: Vec<f64> = u.iter().map(|x| x.ln()).collect();
            for k in DEFAULT_KS {
                let h = match homogeneity_residual(&spec, &v, k) {
                    Ok(h) => h,
                    Err(Error::OutsideLogDomain) => continue,
                    Err(e) => panic!("{e}"),
                };
                let rel = relative_identity(&spec, &u, k);
                // Deep in the Gaussian tail C is only accurate in absolute
                // terms, so the two scales are compared where residuals are small.
                assert!(
                    h > 1e-3 || (rel - (-(-h).exp_m1())).abs() <= 1e-12,
                    "{spec:?} at {u:?}, k={k}: rel {rel:e}, hom {h:e}"
                );
                if !(near(rel) || near(h)) {
                    assert_eq!(rel <= 1e-10, h <= 1e-10, "{spec:?} at {u:?}, k={k}");
                }
                compared += 1;
            }
        }
        assert!(compared > 1000, "{spec:?}");
    }
}

#[test]
fn pde_holds_for_self_chaining_and_fails_for_gaussian() {
    let grid = default_grid(2);
    for spec in self_chaining() {
        let r = max_pde_grid(&spec, &grid, PDE_STEP, 1e-6).unwrap();
        assert!(r.max_abs_residual <= 1e-6, "{spec:?}: {r:?}");
        assert_eq!(r.skipped, 0);
    }
    for spec in gaussians() {
        let r = max_pde_grid(&spec, &grid, PDE_STEP, 1e-4).unwrap();
        assert!(!r.passed, "{spec:?}: {r:?}");
    }
}

#[test]
fn analytic_chaining_consistency() {
    for spec in self_chaining() {
        let m = ArrivalTimeModel::new(vec![0.015, 0.04], spec.clone()).unwrap();
        for n in [2, 10, 100] {
            let one = one_shot_survival(&m, n, 0.7).unwrap();
            let multi = multi_step_survival(&m, n, 0.7).unwrap();
            assert!((one - multi).abs() <= 1e-10, "{spec:?}, N={n}");
        }
    }
}

#[test]
fn monte_carlo_chaining_consistency() {
    for (i, spec) in self_chaining().into_iter().enumerate() {
        let m = ArrivalTimeModel::new(vec![0.02, 0.03], spec.clone()).unwrap();
        for n in [2, 10, 100] {
            let dt = 20.0 / n as f64;
            let one = mc_one_shot(&m, n, dt, 40_000, &RngStream::new(i as u64, 0)).unwrap();
            let multi = mc_multi_step(&m, n, dt, 40_000, &RngStream::new(i as u64, 1)).unwrap();
            let joint = (one.stderr.powi(2) + multi.stderr.powi(2)).sqrt();
            assert!(
                (one.mean - multi.mean).abs() <= 3.0 * joint,
                "{spec:?}, N={n}: {one:?} vs {multi:?}"
            );
        }
    }
}

#[test]
fn gaussian_multi_step_decays_toward_independence() {
    let m = ArrivalTimeModel::new(
        vec![0.02, 0.02],
        CopulaSpec::gaussian_bivariate(0.9).unwrap(),
    )
    .unwrap();
    let independent = (-4.0f64).exp();
    let values: Vec<f64> = [1u32, 2, 5, 10, 20, 50, 100, 1000]
        .iter()
        .map(|&n| multi_step_survival(&m, n, 100.0 / n as f64).unwrap())
        .collect();
    assert!((values[0] - one_shot_survival(&m, 1, 100.0).unwrap()).abs() < 1e-15);
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
    assert!(values.iter().all(|&p| p > independent));
}

/// Convex combination of valid dependence functions.
struct Mixture(PickandsFn, PickandsFn, f64);

impl Pickands for Mixture {
    fn value(&self, t: f64) -> f64 {
        self.2 * self.0.value(t) + (1.0 - self.2) * self.1.value(t)
    }
}

#[test]
fn valid_pickands_functions_give_self_chaining_copulas() {
    let grid = default_grid(2);
    let shipped = [
        PickandsFn::gumbel(1.3).unwrap(),
        PickandsFn::gumbel(8.0).unwrap(),
        PickandsFn::marshall_olkin(0.1, 0.9).unwrap(),
        PickandsFn::Constant1,
    ];
    for a in shipped {
        let r = max_residual_grid(&PickandsCopula::new(a), &grid, &DEFAULT_KS).unwrap();
        assert!(r.max_residual <= 1e-10, "{a:?}: {r:?}");
    }
    let mix = Mixture(
        PickandsFn::gumbel(3.0).unwrap(),
        PickandsFn::marshall_olkin(0.2, 0.8).unwrap(),
        0.4,
    );
    assert!(check_pickands_validity(&mix, 101, 1e-9).unwrap().valid);
    let r = max_residual_grid(&PickandsCopula::new(mix), &grid, &DEFAULT_KS).unwrap();
    assert!(r.max_residual <= 1e-10, "{r:?}");
}
