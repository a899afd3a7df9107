//! Brute-force oracles shared by the integration tests, written from the
//! definitions and independent of the library.

#![allow(dead_code)]

use twl_core::Graph;

/// Exhaustive twin-width: tries every contraction sequence.
/// Entries: 0 none, 1 black, 2 red.
pub fn oracle_tww(n: usize, edges: &[(usize, usize)]) -> usize {
    fn best(adj: &mut [Vec<u8>], live: &[usize]) -> usize {
        if live.len() <= 1 {
            return 0;
        }
        let mut out = usize::MAX;
        for i in 0..live.len() {
            for j in i + 1..live.len() {
                let (u, v) = (live[i], live[j]);
                let saved = adj.to_vec();
                for &x in live.iter() {
                    if x == u || x == v {
                        continue;
                    }
                    let (a, b) = (adj[u][x], adj[v][x]);
                    let e = if a == 1 && b == 1 {
                        1
                    } else if a == 0 && b == 0 {
                        0
                    } else {
                        2
                    };
                    adj[u][x] = e;
                    adj[x][u] = e;
                }
                let rest: Vec<usize> = live.iter().copied().filter(|&x| x != v).collect();
                let red = rest
                    .iter()
                    .map(|&x| rest.iter().filter(|&&y| adj[x][y] == 2).count())
                    .max()
                    .unwrap_or(0);
                if red < out {
                    out = out.min(red.max(best(adj, &rest)));
                }
                adj.clone_from_slice(&saved);
            }
        }
        out
    }
    let mut adj = vec![vec![0u8; n]; n];
    for &(u, v) in edges {
        adj[u][v] = 1;
        adj[v][u] = 1;
    }
    best(&mut adj, &(0..n).collect::<Vec<_>>())
}

pub fn naive_crossings(g: &Graph, a: &[usize], parts: &[Vec<usize>]) -> Vec<usize> {
    parts
        .iter()
        .map(|p| {
            a.iter()
                .filter(|&&x| {
                    p.iter().any(|&y| g.has_edge(x, y)) && p.iter().any(|&y| !g.has_edge(x, y))
                })
                .count()
        })
        .collect()
}

pub fn naive_defect(g: &Graph, parts: &[Vec<usize>]) -> u64 {
    let mut defect = 0;
    for (i, p) in parts.iter().enumerate() {
        for (j, q) in parts.iter().enumerate() {
            let edges = p
                .iter()
                .flat_map(|&u| q.iter().map(move |&v| (u, v)))
                .filter(|&(u, v)| g.has_edge(u, v))
                .count();
            let homogeneous = if i == j {
                edges == 0
            } else {
                edges == 0 || edges == p.len() * q.len()
            };
            if !homogeneous {
                defect += (p.len() * q.len()) as u64;
            }
        }
    }
    defect
}

/// Cut sets of size `k - 1` for `len` indices, as sorted start positions.
fn cut_sets(len: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << (len - 1))
        .filter(|mask| mask.count_ones() as usize == k - 1)
        .map(|mask| (1..len).filter(|&i| mask >> (i - 1) & 1 == 1).collect())
        .collect()
}

fn ranges(cuts: &[usize], len: usize) -> Vec<(usize, usize)> {
    let mut starts = vec![0];
    starts.extend_from_slice(cuts);
    let mut ends: Vec<usize> = cuts.to_vec();
    ends.push(len);
    starts.into_iter().zip(ends).collect()
}

fn zone_ok(
    m: &[Vec<bool>],
    (r0, r1): (usize, usize),
    (c0, c1): (usize, usize),
    mixed: bool,
) -> bool {
    if !mixed {
        return (r0..r1).any(|i| (c0..c1).any(|j| m[i][j]));
    }
    let vertical = (r0..r1).all(|i| (c0..c1).all(|j| m[i][j] == m[r0][j]));
    let horizontal = (r0..r1).all(|i| (c0..c1).all(|j| m[i][j] == m[i][c0]));
    !vertical && !horizontal
}

/// Largest `t` with a `(t, t)`-division all of whose zones contain a 1
/// (grid) or are mixed, by trying every division.
pub fn oracle_max_minor(m: &[Vec<bool>], mixed: bool) -> usize {
    let (rows, cols) = (m.len(), m[0].len());
    for t in (1..=rows.min(cols)).rev() {
        for rc in cut_sets(rows, t) {
            let rr = ranges(&rc, rows);
            for cc in cut_sets(cols, t) {
                let cr = ranges(&cc, cols);
                if rr
                    .iter()
                    .all(|&r| cr.iter().all(|&c| zone_ok(m, r, c, mixed)))
                {
                    return t;
                }
            }
        }
    }
    0
}

fn trace_count(g: &Graph, a: &[usize]) -> usize {
    let mut traces: Vec<Vec<bool>> = (0..g.n())
        .map(|v| a.iter().map(|&x| g.has_edge(v, x)).collect())
        .collect();
    traces.sort();
    traces.dedup();
    traces.len()
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

/// Largest `S` such that every subset of `S` is some `N(v) ∩ S`.
pub fn oracle_vc(g: &Graph) -> usize {
    subsets(g.n())
        .filter(|s| trace_count(g, s) == 1 << s.len())
        .map(|s| s.len())
        .max()
        .unwrap_or(0)
}

/// `pi(k)` for `k = 0..=n`; the empty set has one (empty) trace.
pub fn oracle_shatter(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut best = vec![1; n + 1];
    for s in subsets(n).filter(|s| !s.is_empty()) {
        let c = trace_count(g, &s);
        for b in best.iter_mut().skip(s.len()) {
            *b = (*b).max(c);
        }
    }
    best
}
