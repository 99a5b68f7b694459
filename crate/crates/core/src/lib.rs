//! Nearest-neighbor tours on complete graphs with i.i.d. edge weights.
//!
//! The crate generates mean-field instances, runs the greedy tour, and checks
//! its length against the limit laws that depend on how the weight density
//! behaves at zero: logarithmic growth, power growth, a bounded mean, or
//! Gaussian fluctuations.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod asymptotics;
pub mod distributions;
pub mod error;
pub mod exact;
pub mod harness;
pub mod instance;
pub mod nn;
pub mod numeric;
pub mod parallel;
pub mod rng;
pub mod special;
pub mod stats;

pub use distributions::{AlphaBehavior, DistributionSpec};
pub use error::{Error, Result};
pub use instance::Instance;
pub use nn::{nn_tour, repeated_nn, TourResult};
pub use rng::{split_seed, RngStream};
