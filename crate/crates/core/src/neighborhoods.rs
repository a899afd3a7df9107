//! Neighborhood set systems: traces `N_A(v)`, representatives, the shatter
//! function and VC-dimension.

use std::collections::{BTreeSet, HashSet};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{normalize_set, Graph};

/// Exhaustive shatter/VC computations are limited to this many vertices.
pub const EXHAUSTIVE_CAP: usize = 16;

/// The distinct traces `{N_A(v) : v in V}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NeighborhoodFamily {
    pub a: Vec<usize>,
    /// Each trace as a sorted subset of `a`; the list is sorted.
    pub traces: Vec<Vec<usize>>,
    pub has_empty: bool,
}

impl NeighborhoodFamily {
    pub fn size(&self) -> usize {
        self.traces.len()
    }

    /// `|N_G(A)| / |A|`.
    pub fn ratio(&self) -> f64 {
        self.size() as f64 / self.a.len() as f64
    }
}

fn check_set(g: &Graph, a: &[usize]) -> Result<(Vec<usize>, FixedBitSet)> {
    let a = normalize_set(g, a)?;
    if a.is_empty() {
        return Err(Error::input("vertex set A must be non-empty"));
    }
    let mut mask = FixedBitSet::with_capacity(g.n());
    for &v in &a {
        mask.insert(v);
    }
    Ok((a, mask))
}

/// `N_A(v)` for every vertex, as bitsets over `V`.
pub fn traces(g: &Graph, a_mask: &FixedBitSet) -> Vec<FixedBitSet> {
    (0..g.n())
        .map(|v| {
            let mut t = g.neighbors(v).clone();
            t.intersect_with(a_mask);
            t
        })
        .collect()
}

pub fn neighborhoods_in(g: &Graph, a: &[usize]) -> Result<NeighborhoodFamily> {
    let (a, mask) = check_set(g, a)?;
    let distinct: BTreeSet<Vec<usize>> = traces(g, &mask)
        .iter()
        .map(|t| t.ones().collect())
        .collect();
    Ok(NeighborhoodFamily {
        a,
        has_empty: distinct.contains(&Vec::new()),
        traces: distinct.into_iter().collect(),
    })
}

/// `|N_G(A)|`, counting the empty trace.
pub fn distinct_neighborhoods(g: &Graph, a: &[usize]) -> Result<usize> {
    let (_, mask) = check_set(g, a)?;
    Ok(traces(g, &mask).into_iter().collect::<HashSet<_>>().len())
}

/// One vertex per non-empty trace, the smallest id realizing it; sorted.
pub fn representative_set(g: &Graph, a: &[usize]) -> Result<Vec<usize>> {
    let (_, mask) = check_set(g, a)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (v, t) in traces(g, &mask).into_iter().enumerate() {
        if !t.is_clear() && seen.insert(t) {
            out.push(v);
        }
    }
    Ok(out)
}

fn check_cap(g: &Graph) -> Result<Vec<u32>> {
    if g.n() > EXHAUSTIVE_CAP {
        return Err(Error::ResourceLimit(format!(
            "exhaustive set-system computations limited to {EXHAUSTIVE_CAP} vertices, graph has {}",
            g.n()
        )));
    }
    Ok((0..g.n())
        .map(|v| g.neighbors(v).ones().fold(0u32, |m, u| m | 1 << u))
        .collect())
}

fn trace_count(rows: &[u32], a: u32) -> usize {
    let mut ts: Vec<u32> = rows.iter().map(|r| r & a).collect();
    ts.sort_unstable();
    ts.dedup();
    ts.len()
}

/// `pi_G(k)`: the largest `|N_G(A)|` over `|A| <= k`; `A = {}` contributes 1.
pub fn shatter_function(g: &Graph, k: usize) -> Result<usize> {
    Ok(shatter_profile(g)?[k.min(g.n())])
}

/// `pi_G(k)` for every `0 <= k <= n`.
pub fn shatter_profile(g: &Graph) -> Result<Vec<usize>> {
    let rows = check_cap(g)?;
    let n = g.n();
    let mut best = vec![1usize; n + 1];
    for a in 1u32..(1u32 << n) {
        let k = a.count_ones() as usize;
        best[k] = best[k].max(trace_count(&rows, a));
    }
    for k in 1..=n {
        best[k] = best[k].max(best[k - 1]);
    }
    Ok(best)
}

/// Size of the largest shattered set.
pub fn vc_dimension(g: &Graph) -> Result<usize> {
    let rows = check_cap(g)?;
    let n = g.n();
    let mut best = 0;
    for a in 1u32..(1u32 << n) {
        let k = a.count_ones() as usize;
        // at most n traces, so only sets with 2^k <= n can be shattered
        if k > best && (1usize << k) <= n && trace_count(&rows, a) == 1 << k {
            best = k;
        }
    }
    Ok(best)
}
