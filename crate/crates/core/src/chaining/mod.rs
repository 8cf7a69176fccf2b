//! Self-chaining verification and the one-shot versus multi-step survival
//! harness.
//!
//! For exponential arrival times with survival times copula `C`, survival
//! over `N` periods of length `T` can be simulated in one shot,
//! `C(G₁(NT),…,Gₙ(NT))`, or as `N` independent one-period checks,
//! `C(G₁(T),…,Gₙ(T))^N`. Since `Gᵢ(NT) = Gᵢ(T)^N` the two agree for every
//! `N` exactly when `C(uᵏ) = C(u)ᵏ`. Three equivalent tests of that identity
//! are provided: the identity itself, degree-one homogeneity of
//! `L(v) = log C(eᵛ)`, and the Euler PDE
//! `C_u·u·ln u + C_v·v·ln v = C·ln C`.

mod residual;
mod survival;

pub use residual::{
    default_grid, homogeneity_residual, log_copula, max_homogeneity_grid, max_pde_grid,
    max_residual_grid, max_stable_transform, pde_residual, self_chain_residual, MaxStable,
    PdeReport, ResidualReport, DEFAULT_KS, PDE_STEP,
};
pub use survival::{
    chain_compare, mc_multi_step, mc_one_shot, multi_step_survival, one_shot_survival, ChainReport,
};
