//! The nearest-neighbor tour and its first / successive-minima / closing
//! edge decomposition.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::instance::Instance;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TourResult {
    /// Visiting order, `order[0]` is the start. Empty for draws produced by
    /// the matrix-free streaming simulator, which never materializes a tour.
    pub order: Vec<usize>,
    pub start: usize,
    /// Tour length including the closing edge. Always
    /// `(first_edge + mins_sum) + last_edge`.
    pub total: f64,
    pub first_edge: f64,
    /// Forward edges 2 through n-1.
    pub mins_sum: f64,
    /// Closing edge back to the start.
    pub last_edge: f64,
}

impl TourResult {
    pub(crate) fn from_parts(
        order: Vec<usize>,
        start: usize,
        first_edge: f64,
        mins_sum: f64,
        last_edge: f64,
    ) -> Self {
        Self {
            order,
            start,
            total: first_edge + mins_sum + last_edge,
            first_edge,
            mins_sum,
            last_edge,
        }
    }

    /// `(first, mins_sum, last)`.
    pub fn decompose(&self) -> (f64, f64, f64) {
        (self.first_edge, self.mins_sum, self.last_edge)
    }

    pub const CSV_HEADER: &'static str = "seed,n,start,total,first,mins_sum,last";

    /// `seed,n,start,total,first,mins_sum,last`, optionally followed by the
    /// visiting order as a quoted space-separated list.
    pub fn csv_row(&self, seed: u64, n: usize, with_order: bool) -> String {
        let mut row = format!(
            "{seed},{n},{},{},{},{},{}",
            self.start, self.total, self.first_edge, self.mins_sum, self.last_edge
        );
        if with_order {
            let order: Vec<String> = self.order.iter().map(|c| c.to_string()).collect();
            row.push_str(&format!(",\"{}\"", order.join(" ")));
        }
        row
    }
}

/// Greedy tour from `start`: always move to the nearest unvisited city, ties
/// going to the lowest city index, then close back to `start`.
pub fn nn_tour(inst: &Instance, start: usize) -> Result<TourResult> {
    let n = inst.n();
    if start >= n {
        return domain(format!("start city {start} out of range for n = {n}"));
    }
    let mut unvisited: Vec<usize> = (0..n).filter(|&c| c != start).collect();
    let mut order = Vec::with_capacity(n);
    order.push(start);
    let mut current = start;
    let mut first_edge = 0.0;
    let mut mins_sum = 0.0;
    for step in 1..n {
        let mut best_pos = 0;
        let mut best_city = usize::MAX;
        let mut best_w = f64::INFINITY;
        for (pos, &u) in unvisited.iter().enumerate() {
            let w = inst.weight_unchecked(current, u);
            if w < best_w || (w == best_w && u < best_city) {
                best_w = w;
                best_city = u;
                best_pos = pos;
            }
        }
        unvisited.swap_remove(best_pos);
        if step == 1 {
            first_edge = best_w;
        } else {
            mins_sum += best_w;
        }
        order.push(best_city);
        current = best_city;
    }
    let last_edge = inst.weight_unchecked(current, start);
    Ok(TourResult::from_parts(
        order, start, first_edge, mins_sum, last_edge,
    ))
}

/// Best nearest-neighbor tour over all starts; ties go to the lowest start.
pub fn repeated_nn(inst: &Instance) -> TourResult {
    let mut best: Option<TourResult> = None;
    for s in 0..inst.n() {
        let t = nn_tour(inst, s).expect("start in range");
        if best.as_ref().is_none_or(|b| t.total < b.total) {
            best = Some(t);
        }
    }
    best.expect("n >= 3")
}

/// Length of the closed tour visiting `order`, summed edge by edge.
pub fn tour_length(inst: &Instance, order: &[usize]) -> f64 {
    let n = order.len();
    (0..n)
        .map(|k| inst.weight_unchecked(order[k], order[(k + 1) % n]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DistributionSpec;
    use approx::assert_relative_eq;

    fn exp1() -> DistributionSpec {
        DistributionSpec::exponential(1.0).unwrap()
    }

    pub(crate) fn hand_instance() -> Instance {
        // L12, L13, L14, L23, L24, L34 (cities renumbered from 0)
        Instance::from_weights(4, vec![0.2, 0.5, 0.9, 0.1, 0.8, 0.3], exp1(), 0).unwrap()
    }

    #[test]
    fn hand_trace() {
        let t = nn_tour(&hand_instance(), 0).unwrap();
        assert_eq!(t.order, vec![0, 1, 2, 3]);
        assert_relative_eq!(t.total, 1.5, epsilon = 1e-15);
        assert_eq!(t.first_edge, 0.2);
        assert_eq!(t.last_edge, 0.9);
        assert_relative_eq!(t.mins_sum, 0.4, epsilon = 1e-15);
        let (f, m, l) = t.decompose();
        assert_eq!(f + m + l, t.total);
    }

    #[test]
    fn three_cities_all_starts_equal() {
        let inst = Instance::from_weights(3, vec![0.3, 1.1, 0.7], exp1(), 0).unwrap();
        for s in 0..3 {
            assert_relative_eq!(nn_tour(&inst, s).unwrap().total, 2.1, epsilon = 1e-15);
        }
        assert_eq!(repeated_nn(&inst), nn_tour(&inst, 0).unwrap());
    }

    #[test]
    fn equal_weights_tie_break() {
        let n = 9;
        let inst = Instance::from_weights(n, vec![0.5; n * (n - 1) / 2], exp1(), 0).unwrap();
        let t = nn_tour(&inst, 0).unwrap();
        assert_eq!(t.order, (0..n).collect::<Vec<_>>());
        assert_relative_eq!(t.total, n as f64 * 0.5, epsilon = 1e-14);
        let t = nn_tour(&inst, 4).unwrap();
        assert_eq!(t.order, vec![4, 0, 1, 2, 3, 5, 6, 7, 8]);
    }

    #[test]
    fn invalid_start() {
        assert!(nn_tour(&hand_instance(), 4).is_err());
    }

    #[test]
    fn forward_minimum_property_by_replay() {
        for seed in 0..20 {
            let inst = Instance::generate(30, exp1(), seed).unwrap();
            let t = nn_tour(&inst, 0).unwrap();
            let mut sorted = t.order.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..30).collect::<Vec<_>>());
            for k in 1..30 {
                let from = t.order[k - 1];
                let chosen = inst.weight_unchecked(from, t.order[k]);
                for &u in &t.order[k..] {
                    assert!(chosen <= inst.weight_unchecked(from, u));
                }
            }
            let min_from_start = (1..30)
                .map(|j| inst.weight_unchecked(0, j))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(t.first_edge, min_from_start);
            assert_relative_eq!(t.total, tour_length(&inst, &t.order), max_relative = 1e-12);
            assert_eq!(t.first_edge + t.mins_sum + t.last_edge, t.total);
        }
    }

    #[test]
    fn repeated_is_minimum_over_starts() {
        let inst = Instance::generate(25, exp1(), 77).unwrap();
        let best = repeated_nn(&inst);
        for s in 0..25 {
            assert!(best.total <= nn_tour(&inst, s).unwrap().total);
        }
    }

    #[test]
    fn csv_row_format() {
        let t = nn_tour(&hand_instance(), 0).unwrap();
        let row = t.csv_row(9, 4, true);
        assert!(row.starts_with("9,4,0,"));
        assert!(row.ends_with(",0.2,0.4,0.9,\"0 1 2 3\""));
        assert_eq!(t.csv_row(9, 4, false).split(',').count(), 7);
    }
}
