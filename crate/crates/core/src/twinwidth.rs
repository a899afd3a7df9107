//! Exact twin-width of small graphs.
//!
//! Iterative deepening on the width bound `d`. For each `d` a depth-first
//! search tries every live pair, pruning merges that exceed red degree `d`, and
//! remembers trigraph states already shown to be dead ends. Since merged
//! vertices keep the smaller id, a state is exactly the tuple of live mask and
//! black/red rows, which serves as the memo key.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::trigraph::ContractionSequence;

pub const DEFAULT_VERTEX_CAP: usize = 10;
/// Hard ceiling from the `u32` state encoding.
pub const MAX_VERTEX_CAP: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactTwinWidth {
    pub tww: usize,
    pub sequence: ContractionSequence,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    live: u32,
    black: Vec<u32>,
    red: Vec<u32>,
}

impl State {
    fn from_graph(g: &Graph) -> Self {
        let n = g.n();
        let row = |v: usize| g.neighbors(v).ones().fold(0u32, |acc, u| acc | 1 << u);
        State {
            live: if n == 32 { u32::MAX } else { (1u32 << n) - 1 },
            black: (0..n).map(row).collect(),
            red: vec![0; n],
        }
    }

    fn live_count(&self) -> u32 {
        self.live.count_ones()
    }

    /// Merges `u < v` into `u`; returns the new state and its maximum red degree.
    fn merge(&self, u: usize, v: usize) -> (State, u32) {
        let mut next = self.clone();
        let ub = 1u32 << u;
        let vb = 1u32 << v;
        let keep = !(ub | vb);
        let black = self.black[u] & self.black[v] & keep;
        let red = (self.black[u] | self.red[u] | self.black[v] | self.red[v]) & keep & !black;
        next.live &= !vb;
        next.black[v] = 0;
        next.red[v] = 0;
        next.black[u] = black;
        next.red[u] = red;
        let mut rest = next.live & !ub;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let clear = |m: u32| m & keep;
            next.black[x] = clear(next.black[x]) | if black >> x & 1 == 1 { ub } else { 0 };
            next.red[x] = clear(next.red[x]) | if red >> x & 1 == 1 { ub } else { 0 };
        }
        let mut max_red = 0;
        let mut rest = next.live;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            max_red = max_red.max(next.red[x].count_ones());
        }
        (next, max_red)
    }
}

struct Search {
    d: u32,
    dead: HashSet<State>,
    path: Vec<(usize, usize)>,
}

impl Search {
    fn run(&mut self, s: &State) -> bool {
        if s.live_count() <= 1 {
            return true;
        }
        if self.dead.contains(s) {
            return false;
        }
        let live: Vec<usize> = (0..32).filter(|&x| s.live >> x & 1 == 1).collect();
        for (i, &u) in live.iter().enumerate() {
            for &v in &live[i + 1..] {
                let (next, red) = s.merge(u, v);
                if red > self.d {
                    continue;
                }
                self.path.push((u, v));
                if self.run(&next) {
                    return true;
                }
                self.path.pop();
            }
        }
        self.dead.insert(s.clone());
        false
    }
}

/// Exact twin-width with a witnessing optimal sequence; refuses graphs above `limit` vertices.
pub fn exact_twinwidth(g: &Graph, limit: usize) -> Result<ExactTwinWidth> {
    let n = g.n();
    if n > limit.min(MAX_VERTEX_CAP) {
        return Err(Error::ResourceLimit(format!(
            "exact twin-width limited to {} vertices, graph has {n}",
            limit.min(MAX_VERTEX_CAP)
        )));
    }
    let start = State::from_graph(g);
    for d in 0..n.max(1) as u32 {
        let mut search = Search {
            d,
            dead: HashSet::new(),
            path: Vec::new(),
        };
        if search.run(&start) {
            return Ok(ExactTwinWidth {
                tww: d as usize,
                sequence: ContractionSequence::new(search.path),
            });
        }
    }
    unreachable!("any sequence has width below n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigraph::verify_sequence;

    #[test]
    fn small_table() {
        for n in 1..=8 {
            assert_eq!(exact_twinwidth(&Graph::complete(n), 10).unwrap().tww, 0);
            assert_eq!(exact_twinwidth(&Graph::new(n), 10).unwrap().tww, 0);
        }
        assert_eq!(exact_twinwidth(&Graph::path(4), 10).unwrap().tww, 1);
        assert_eq!(exact_twinwidth(&Graph::cycle(5), 10).unwrap().tww, 2);
    }

    #[test]
    fn witness_verifies() {
        for g in [Graph::path(6), Graph::cycle(7), Graph::complete(4)] {
            let r = exact_twinwidth(&g, 10).unwrap();
            let check = verify_sequence(&g, &r.sequence, r.tww).unwrap();
            assert!(check.ok);
            assert_eq!(check.width, r.tww);
        }
    }

    #[test]
    fn limit_enforced() {
        assert!(matches!(
            exact_twinwidth(&Graph::new(11), 10),
            Err(Error::ResourceLimit(_))
        ));
    }
}
