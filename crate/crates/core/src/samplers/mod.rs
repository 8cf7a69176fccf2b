//! Exact samplers for every shipped family and the map from survival
//! uniforms to exponential arrival times.

mod batch;
mod families;
mod stable;

pub use batch::{sample_batch, to_arrival_times, SampleBatch, SampleKind};
pub use families::{sample_gaussian_copula, sample_gumbel_copula, sample_mo_copula, CopulaSampler};
pub use stable::{sample_positive_stable, StableParams};
