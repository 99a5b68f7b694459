//! Matrix-free draws of the nearest-neighbor tour length.

use crate::distributions::DistributionSpec;
use crate::error::{domain, Result};
use crate::nn::TourResult;
use crate::rng::RngStream;

/// One draw with the law of `nn_tour(.., start).total` on a fresh instance,
/// in O(n) time and O(1) memory.
///
/// The first edge is the minimum of the `n - 1` weights at the start city,
/// the closing edge is one of the remaining `n - 2` chosen uniformly (so `F`
/// conditioned above the first edge), and the forward minima in between are
/// independent `W_i`, none of them touching the start city's weights.
pub fn simulate_streaming(
    spec: DistributionSpec,
    n: usize,
    start: usize,
    seed: u64,
) -> Result<TourResult> {
    if n < 3 {
        return domain(format!("a tour needs at least 3 cities, got n = {n}"));
    }
    if start >= n {
        return domain(format!("start city {start} out of range for n = {n}"));
    }
    let mut rng = RngStream::new(seed);
    let first_hazard = rng.exp1() / (n - 1) as f64;
    let first = spec.quantile_hazard(first_hazard);
    let last = spec.quantile_hazard(first_hazard + rng.exp1());
    let mins = spec.surrogate_sum_unchecked(n, &mut rng);
    Ok(TourResult::from_parts(Vec::new(), start, first, mins, last))
}
