//! Trigraphs, contractions and contraction sequences.
//!
//! Merging `u` and `v` keeps the smaller id alive as the merged vertex, so ids
//! stay stable along a sequence.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexOrder};

/// Black and red edge sets over the live subset of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trigraph {
    live: FixedBitSet,
    black: Vec<FixedBitSet>,
    red: Vec<FixedBitSet>,
}

impl Trigraph {
    /// `n` live vertices, no edges.
    pub fn new(n: usize) -> Self {
        let mut live = FixedBitSet::with_capacity(n);
        live.insert_range(..);
        Trigraph {
            live,
            black: vec![FixedBitSet::with_capacity(n); n],
            red: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut tg = Trigraph::new(g.n());
        for v in 0..g.n() {
            tg.black[v] = g.neighbors(v).clone();
        }
        tg
    }

    pub fn capacity(&self) -> usize {
        self.black.len()
    }

    pub fn live_count(&self) -> usize {
        self.live.count_ones(..)
    }

    pub fn is_live(&self, v: usize) -> bool {
        v < self.capacity() && self.live.contains(v)
    }

    pub fn live_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.live.ones()
    }

    pub fn is_black(&self, u: usize, v: usize) -> bool {
        self.black[u].contains(v)
    }

    pub fn is_red(&self, u: usize, v: usize) -> bool {
        self.red[u].contains(v)
    }

    pub fn red_neighbors(&self, v: usize) -> &FixedBitSet {
        &self.red[v]
    }

    pub fn black_neighbors(&self, v: usize) -> &FixedBitSet {
        &self.black[v]
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::input(format!("cannot pair vertex {u} with itself")));
        }
        for x in [u, v] {
            if !self.is_live(x) {
                return Err(Error::input(format!("vertex {x} is not live")));
            }
        }
        Ok(())
    }

    pub fn add_black(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_pair(u, v)?;
        self.set_edge(u, v, Some(true));
        Ok(())
    }

    pub fn add_red(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_pair(u, v)?;
        self.set_edge(u, v, Some(false));
        Ok(())
    }

    /// `Some(true)` black, `Some(false)` red, `None` no edge.
    fn set_edge(&mut self, u: usize, v: usize, edge: Option<bool>) {
        let black = edge == Some(true);
        let red = edge == Some(false);
        self.black[u].set(v, black);
        self.black[v].set(u, black);
        self.red[u].set(v, red);
        self.red[v].set(u, red);
    }

    pub fn red_degree(&self, v: usize) -> usize {
        self.red[v].count_ones(..)
    }

    /// Maximum red degree over live vertices; 0 without red edges.
    pub fn max_red_degree(&self) -> usize {
        self.live
            .ones()
            .map(|v| self.red_degree(v))
            .max()
            .unwrap_or(0)
    }

    /// `G / u, v` with the merged vertex named `min(u, v)`.
    pub fn contract(&self, u: usize, v: usize) -> Result<Trigraph> {
        let mut out = self.clone();
        out.contract_in_place(u, v)?;
        Ok(out)
    }

    /// In-place contraction; returns the id of the merged vertex.
    pub fn contract_in_place(&mut self, u: usize, v: usize) -> Result<usize> {
        self.check_pair(u, v)?;
        let (w, gone) = (u.min(v), u.max(v));

        // black iff black to both; absent iff absent from both; red otherwise
        let mut black = self.black[u].clone();
        black.intersect_with(&self.black[v]);
        let mut any = self.black[u].clone();
        any.union_with(&self.red[u]);
        any.union_with(&self.black[v]);
        any.union_with(&self.red[v]);
        let mut red = any;
        red.difference_with(&black);
        for s in [&mut black, &mut red] {
            s.set(u, false);
            s.set(v, false);
        }

        for x in [u, v] {
            for y in self.black[x]
                .ones()
                .chain(self.red[x].ones())
                .collect::<Vec<_>>()
            {
                self.black[y].set(x, false);
                self.red[y].set(x, false);
            }
            self.black[x].clear();
            self.red[x].clear();
        }
        self.live.set(gone, false);
        for y in black.ones() {
            self.black[y].insert(w);
        }
        for y in red.ones() {
            self.red[y].insert(w);
        }
        self.black[w] = black;
        self.red[w] = red;
        Ok(w)
    }
}

/// Ordered merges `(u, v)`; each merge keeps `min(u, v)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContractionSequence {
    pub merges: Vec<(usize, usize)>,
}

impl ContractionSequence {
    pub fn new(merges: Vec<(usize, usize)>) -> Self {
        ContractionSequence { merges }
    }

    pub fn len(&self) -> usize {
        self.merges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.merges.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceStep {
    pub step: usize,
    pub merged: (usize, usize),
    pub max_red: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SequenceCheck {
    /// Every intermediate trigraph has red degree at most the bound.
    pub ok: bool,
    pub width: usize,
    pub trace: Vec<TraceStep>,
}

/// Replays `seq` on `g`. Structural problems (dead or repeated vertices, not
/// ending at one vertex) are errors; exceeding `d` is reported through `ok`.
pub fn verify_sequence(g: &Graph, seq: &ContractionSequence, d: usize) -> Result<SequenceCheck> {
    let mut tg = Trigraph::from_graph(g);
    let mut trace = Vec::with_capacity(seq.len());
    for (step, &(u, v)) in seq.merges.iter().enumerate() {
        tg.contract_in_place(u, v)
            .map_err(|e| Error::InvalidSequence {
                step,
                msg: e.to_string(),
            })?;
        trace.push(TraceStep {
            step,
            merged: (u, v),
            max_red: tg.max_red_degree(),
        });
    }
    if tg.live_count() != 1 {
        return Err(Error::InvalidSequence {
            step: seq.len(),
            msg: format!("sequence ends with {} live vertices", tg.live_count()),
        });
    }
    let width = trace.iter().map(|s| s.max_red).max().unwrap_or(0);
    Ok(SequenceCheck {
        ok: width <= d,
        width,
        trace,
    })
}

/// Left-to-right leaf order of the contraction forest: each merge places the
/// subtree of its first argument before that of its second. Trees still
/// separate at the end are listed by root id.
pub fn order_from_sequence(g: &Graph, seq: &ContractionSequence) -> Result<VertexOrder> {
    let n = g.n();
    let mut leaves: Vec<Option<Vec<usize>>> = (0..n).map(|v| Some(vec![v])).collect();
    for (step, &(u, v)) in seq.merges.iter().enumerate() {
        let bad = |msg: String| Error::InvalidSequence { step, msg };
        if u == v {
            return Err(bad(format!("merges {u} with itself")));
        }
        if u >= n || v >= n {
            return Err(bad(format!("vertex out of range in ({u}, {v})")));
        }
        let (Some(mut left), Some(right)) = (leaves[u].take(), leaves[v].take()) else {
            return Err(bad(format!("merge ({u}, {v}) uses a dead vertex")));
        };
        left.extend(right);
        leaves[u.min(v)] = Some(left);
    }
    VertexOrder::new(leaves.into_iter().flatten().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contract_true_twins() {
        let tg = Trigraph::from_graph(&Graph::complete(3))
            .contract(0, 1)
            .unwrap();
        assert!(tg.is_black(0, 2));
        assert_eq!(tg.max_red_degree(), 0);
        assert_eq!(tg.live_count(), 2);
    }

    #[test]
    fn contract_path_creates_red_edge() {
        let tg = Trigraph::from_graph(&Graph::path(4))
            .contract(0, 1)
            .unwrap();
        assert!(tg.is_red(0, 2));
        assert!(!tg.is_black(0, 2));
        assert!(tg.is_black(2, 3));
        assert!(!tg.is_black(0, 3) && !tg.is_red(0, 3));
        assert_eq!(tg.max_red_degree(), 1);
    }

    #[test]
    fn contract_edgeless_pair() {
        let tg = Trigraph::from_graph(&Graph::new(2)).contract(1, 0).unwrap();
        assert_eq!(tg.live_vertices().collect::<Vec<_>>(), vec![0]);
        assert_eq!(tg.max_red_degree(), 0);
        assert_eq!(tg.black_neighbors(0).count_ones(..), 0);
    }

    #[test]
    fn contract_errors() {
        let tg = Trigraph::from_graph(&Graph::path(3));
        assert!(tg.contract(1, 1).is_err());
        let tg = tg.contract(0, 1).unwrap();
        assert!(tg.contract(1, 2).is_err());
    }

    #[test]
    fn red_edges_stay_red() {
        let mut tg = Trigraph::new(3);
        tg.add_red(0, 2).unwrap();
        tg.add_red(1, 2).unwrap();
        let tg = tg.contract(0, 1).unwrap();
        assert!(tg.is_red(0, 2));
    }

    #[test]
    fn red_star() {
        let mut tg = Trigraph::new(4);
        for x in 1..4 {
            tg.add_red(0, x).unwrap();
        }
        assert_eq!(tg.max_red_degree(), 3);
        assert_eq!(Trigraph::from_graph(&Graph::cycle(6)).max_red_degree(), 0);
    }

    #[test]
    fn verify_examples() {
        let k3 = Graph::complete(3);
        let seq = ContractionSequence::new(vec![(0, 1), (0, 2)]);
        assert!(verify_sequence(&k3, &seq, 0).unwrap().ok);

        let p4 = Graph::path(4);
        let seq = ContractionSequence::new(vec![(0, 1), (0, 2), (0, 3)]);
        let check = verify_sequence(&p4, &seq, 1).unwrap();
        assert!(check.ok);
        assert_eq!(
            check.trace.iter().map(|s| s.max_red).collect::<Vec<_>>(),
            vec![1, 1, 0]
        );
        assert!(!verify_sequence(&p4, &seq, 0).unwrap().ok);
    }

    #[test]
    fn verify_structural_errors() {
        let p4 = Graph::path(4);
        let short = ContractionSequence::new(vec![(0, 1), (0, 2)]);
        assert!(matches!(
            verify_sequence(&p4, &short, 3),
            Err(Error::InvalidSequence { step: 2, .. })
        ));
        let dead = ContractionSequence::new(vec![(0, 1), (1, 2), (0, 3)]);
        assert!(matches!(
            verify_sequence(&p4, &dead, 3),
            Err(Error::InvalidSequence { step: 1, .. })
        ));
    }

    #[test]
    fn order_examples() {
        let one = Graph::new(1);
        assert_eq!(
            order_from_sequence(&one, &ContractionSequence::default())
                .unwrap()
                .perm(),
            &[0]
        );
        let k3 = Graph::complete(3);
        let seq = ContractionSequence::new(vec![(0, 1), (0, 2)]);
        assert_eq!(order_from_sequence(&k3, &seq).unwrap().perm(), &[0, 1, 2]);
        let g = Graph::new(4);
        let seq = ContractionSequence::new(vec![(2, 0), (3, 1), (1, 0)]);
        assert_eq!(order_from_sequence(&g, &seq).unwrap().perm(), &[3, 1, 2, 0]);
        assert!(order_from_sequence(&g, &ContractionSequence::new(vec![(2, 0), (2, 1)])).is_err());
    }
}
