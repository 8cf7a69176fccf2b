//! Normal distribution kernels, reproducible random streams and Monte Carlo
//! estimation.

mod bivariate;
mod mc;
mod normal;
mod rng;

pub use bivariate::bivariate_normal_cdf;
pub use mc::{count_successes, mc_estimate, McEstimate, MC_BLOCK_SIZE};
pub use normal::{std_normal_cdf, std_normal_inv_cdf, std_normal_pdf};
pub use rng::RngStream;
