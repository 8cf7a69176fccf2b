//! mdbook cannot link external crates when testing listings, so each chapter
//! is pulled in as module docs and `cargo test` runs its code blocks.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/arrival-times.md")]
pub mod arrival_times {}
#[doc = include_str!("../../../book/src/copulas.md")]
pub mod copulas {}
#[doc = include_str!("../../../book/src/sampling.md")]
pub mod sampling {}
#[doc = include_str!("../../../book/src/self-chaining.md")]
pub mod self_chaining {}
#[doc = include_str!("../../../book/src/gaussian-iteration.md")]
pub mod gaussian_iteration {}
#[doc = include_str!("../../../book/src/extreme-value.md")]
pub mod extreme_value {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
