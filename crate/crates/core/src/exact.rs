//! Exact optimal tours for small instances.

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::nn::nn_tour;
use crate::parallel::replicate;
use crate::rng::split_seed;
use crate::stats::McSummary;

pub const BRUTE_FORCE_MAX_N: usize = 11;
pub const HELD_KARP_MAX_N: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExactMethod {
    BruteForce,
    HeldKarp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub optimal_length: f64,
    /// One optimal cyclic order, starting at city 0.
    pub optimal_order: Vec<usize>,
    pub method: ExactMethod,
}

/// Exhaustive search over all tours through city 0.
pub fn brute_force(inst: &Instance) -> Result<ExactResult> {
    let n = inst.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::Resource(format!(
            "brute force is capped at n = {BRUTE_FORCE_MAX_N}, got {n}"
        )));
    }
    let mut path = vec![0usize];
    let mut used = vec![false; n];
    used[0] = true;
    let mut best = (f64::INFINITY, Vec::new());
    extend(inst, &mut path, &mut used, 0.0, &mut best);
    Ok(ExactResult {
        optimal_length: best.0,
        optimal_order: best.1,
        method: ExactMethod::BruteForce,
    })
}

fn extend(
    inst: &Instance,
    path: &mut Vec<usize>,
    used: &mut [bool],
    len: f64,
    best: &mut (f64, Vec<usize>),
) {
    let n = used.len();
    let last = *path.last().unwrap();
    if path.len() == n {
        let total = len + inst.weight_unchecked(last, 0);
        if total < best.0 {
            *best = (total, path.clone());
        }
        return;
    }
    for c in 1..n {
        if !used[c] {
            used[c] = true;
            path.push(c);
            extend(inst, path, used, len + inst.weight_unchecked(last, c), best);
            path.pop();
            used[c] = false;
        }
    }
}

/// Subset dynamic program anchored at city 0, `O(2^n n^2)` time.
pub fn held_karp(inst: &Instance) -> Result<ExactResult> {
    let n = inst.n();
    if n > HELD_KARP_MAX_N {
        return Err(Error::Resource(format!(
            "Held-Karp table is capped at n = {HELD_KARP_MAX_N}, got {n}"
        )));
    }
    // cities 1..n map to bits 0..m
    let m = n - 1;
    let full = (1usize << m) - 1;
    let d: Vec<f64> = (0..n * n)
        .map(|ij| {
            if ij / n == ij % n {
                0.0
            } else {
                inst.weight_unchecked(ij / n, ij % n)
            }
        })
        .collect();
    // cost[mask * m + j]: shortest path 0 -> ... -> (j + 1) visiting exactly mask
    let mut cost = vec![f64::INFINITY; (1usize << m) * m];
    let mut parent = vec![u8::MAX; (1usize << m) * m];
    for j in 0..m {
        cost[(1 << j) * m + j] = inst.weight_unchecked(0, j + 1);
    }
    for mask in 1..=full {
        for j in 0..m {
            if mask & (1 << j) == 0 {
                continue;
            }
            let here = cost[mask * m + j];
            if !here.is_finite() {
                continue;
            }
            let row = &d[(j + 1) * n + 1..(j + 2) * n];
            let mut rest = full & !mask;
            while rest != 0 {
                let k = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let next = mask | (1 << k);
                let cand = here + row[k];
                let slot = next * m + k;
                if cand < cost[slot] {
                    cost[slot] = cand;
                    parent[slot] = j as u8;
                }
            }
        }
    }
    let (mut best_j, mut best) = (0, f64::INFINITY);
    for j in 0..m {
        let total = cost[full * m + j] + inst.weight_unchecked(j + 1, 0);
        if total < best {
            best = total;
            best_j = j;
        }
    }
    let mut order = Vec::with_capacity(n);
    let (mut mask, mut j) = (full, best_j);
    loop {
        order.push(j + 1);
        let p = parent[mask * m + j];
        mask &= !(1 << j);
        if p == u8::MAX {
            break;
        }
        j = p as usize;
    }
    order.push(0);
    order.reverse();
    Ok(ExactResult {
        optimal_length: best,
        optimal_order: order,
        method: ExactMethod::HeldKarp,
    })
}

/// Picks brute force where it is cheap, Held-Karp otherwise.
pub fn solve_exact(inst: &Instance) -> Result<ExactResult> {
    if inst.n() <= 8 {
        brute_force(inst)
    } else {
        held_karp(inst)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptRow {
    pub seed: u64,
    pub n: usize,
    pub t_opt: f64,
    pub t_nn: f64,
    pub ratio: f64,
}

impl OptRow {
    pub const CSV_HEADER: &'static str = "seed,n,t_opt,t_nn,ratio";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.seed, self.n, self.t_opt, self.t_nn, self.ratio
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NnVsOpt {
    pub rows: Vec<OptRow>,
    pub t_opt: McSummary,
    pub t_nn: McSummary,
    pub ratio: McSummary,
    pub gap: McSummary,
}

/// Paired NN (start 0) and optimal lengths over `replications` instances;
/// instance `r` uses seed `split_seed(seed, r)`.
pub fn nn_vs_opt(
    spec: DistributionSpec,
    n: usize,
    replications: usize,
    seed: u64,
) -> Result<NnVsOpt> {
    if n > HELD_KARP_MAX_N {
        return Err(Error::Resource(format!(
            "Held-Karp table is capped at n = {HELD_KARP_MAX_N}, got {n}"
        )));
    }
    let rows = replicate(replications, |r| -> Result<OptRow> {
        let s = split_seed(seed, r as u64);
        let inst = Instance::generate(n, spec, s)?;
        let t_opt = held_karp(&inst)?.optimal_length;
        let t_nn = nn_tour(&inst, 0)?.total;
        Ok(OptRow {
            seed: s,
            n,
            t_opt,
            t_nn,
            ratio: t_nn / t_opt,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let col = |f: fn(&OptRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    Ok(NnVsOpt {
        t_opt: McSummary::from_samples(&col(|r| r.t_opt), false),
        t_nn: McSummary::from_samples(&col(|r| r.t_nn), false),
        ratio: McSummary::from_samples(&col(|r| r.ratio), false),
        gap: McSummary::from_samples(&col(|r| r.t_nn - r.t_opt), false),
        rows,
    })
}
