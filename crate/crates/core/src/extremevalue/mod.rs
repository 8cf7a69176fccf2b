//! Bivariate extreme-value copulas through their Pickands dependence
//! function, and Kendall's tau.
//!
//! With `x = −ln u`, `y = −ln v` and `t = y / (x + y)`, every bivariate
//! extreme-value copula is `C(u, v) = exp(−(x + y)·A(t))` for a convex `A`
//! with `max(t, 1−t) ≤ A(t) ≤ 1`. The log-copula `−(x + y)·A(t)` is then
//! homogeneous of degree one, which is the self-chaining identity.

mod pickands;
mod tau;

pub use pickands::{
    check_pickands_validity, copula_from_pickands, pickands_eval, Pickands, PickandsCopula,
    PickandsEvaluation, PickandsFn, PickandsValidity,
};
pub use tau::{
    kendall_tau_analytic, kendall_tau_empirical, kendall_tau_gaussian, kendall_tau_gumbel,
    kendall_tau_marshall_olkin,
};
