//! Simple undirected graphs with dense vertex ids, total vertex orders and
//! their text formats.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::matrix::BitMatrix;

/// Undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: (0..n).map(|_| FixedBitSet::with_capacity(n)).collect(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 1..n {
            g.insert(u - 1, u);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n > 2 {
            g.insert(0, n - 1);
        }
        g
    }

    /// Adds `{u, v}`; rejects self-loops, duplicates and unknown ids.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(Error::input(format!(
                "edge ({u}, {v}) out of range for n = {n}"
            )));
        }
        if u == v {
            return Err(Error::input(format!("self-loop at vertex {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::input(format!("duplicate edge ({u}, {v})")));
        }
        self.insert(u, v);
        Ok(())
    }

    fn insert(&mut self, u: usize, v: usize) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones(..)).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            for v in self.adj[u].ones().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        check_permutation(perm, self.n())?;
        let mut g = Graph::new(self.n());
        for (u, v) in self.edges() {
            g.insert(perm[u], perm[v]);
        }
        Ok(g)
    }

    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header line \"n m\""))?;
        let [n, m] = parse_pair(header, hline)?;
        if n == 0 {
            return Err(Error::parse(hline, "graph must have at least one vertex"));
        }
        let mut g = Graph::new(n);
        let mut seen = 0usize;
        for (line, l) in lines {
            let [u, v] = parse_pair(l, line)?;
            g.add_edge(u, v).map_err(|e| match e {
                Error::Input(msg) => Error::parse(line, msg),
                other => other,
            })?;
            seen += 1;
        }
        if seen != m {
            return Err(Error::parse(
                hline,
                format!("header declares {m} edges, found {seen}"),
            ));
        }
        Ok(g)
    }

    /// Canonical text form: header, then edges sorted with `u < v`.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }
}

fn parse_pair(l: &str, line: usize) -> Result<[usize; 2]> {
    let fields: Vec<&str> = l.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::parse(
            line,
            format!("expected two integers, got {l:?}"),
        ));
    }
    let mut out = [0; 2];
    for (slot, f) in out.iter_mut().zip(fields) {
        *slot = f
            .parse()
            .map_err(|_| Error::parse(line, format!("not a non-negative integer: {f:?}")))?;
    }
    Ok(out)
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::input(format!(
            "order has {} entries, graph has {n} vertices",
            perm.len()
        )));
    }
    let mut seen = FixedBitSet::with_capacity(n);
    for &v in perm {
        if v >= n || seen.put(v) {
            return Err(Error::input(format!(
                "order is not a permutation of 0..{n} (at {v})"
            )));
        }
    }
    Ok(())
}

/// Total order on `0..n`; `perm[i]` is the `i`-th smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexOrder {
    perm: Vec<usize>,
    pos: Vec<usize>,
}

impl VertexOrder {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        check_permutation(&perm, perm.len())?;
        let mut pos = vec![0; perm.len()];
        for (i, &v) in perm.iter().enumerate() {
            pos[v] = i;
        }
        Ok(VertexOrder { perm, pos })
    }

    pub fn identity(n: usize) -> Self {
        VertexOrder {
            perm: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn vertex_at(&self, i: usize) -> usize {
        self.perm[i]
    }

    /// `s(v)`, or `None` for the maximal vertex.
    pub fn successor(&self, v: usize) -> Option<usize> {
        self.perm.get(self.pos[v] + 1).copied()
    }

    /// `S^k(v)`: `v` and up to `k` vertices after it.
    pub fn window(&self, v: usize, k: usize) -> &[usize] {
        let start = self.pos[v];
        let end = (start + k + 1).min(self.perm.len());
        &self.perm[start..end]
    }

    /// Sorts `set` by position in this order.
    pub fn sort(&self, set: &mut [usize]) {
        set.sort_by_key(|&v| self.pos[v]);
    }

    /// Errors unless the order covers exactly the vertices of `g`.
    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.len() != g.n() {
            return Err(Error::input(format!(
                "order covers {} vertices, graph has {}",
                self.len(),
                g.n()
            )));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut perm = Vec::new();
        for (i, line) in text.lines().enumerate() {
            for f in line.split_whitespace() {
                perm.push(
                    f.parse()
                        .map_err(|_| Error::parse(i + 1, format!("not a vertex id: {f:?}")))?,
                );
            }
        }
        VertexOrder::new(perm)
    }

    pub fn to_text(&self) -> String {
        let ids: Vec<String> = self.perm.iter().map(|v| v.to_string()).collect();
        format!("{}\n", ids.join(" "))
    }
}

/// `M_σ(G)`: entry `(i, j)` is set iff the `i`-th and `j`-th vertices of `ord` are adjacent.
pub fn adjacency_matrix(g: &Graph, ord: &VertexOrder) -> Result<BitMatrix> {
    ord.check_graph(g)?;
    let n = g.n();
    let mut m = BitMatrix::zeros(n, n)?;
    for i in 0..n {
        let u = ord.vertex_at(i);
        for v in g.neighbors(u).ones() {
            m.set(i, ord.position(v), true);
        }
    }
    Ok(m)
}

/// `k` disjoint edges `(2i, 2i+1)` together with the set of their odd endpoints.
pub fn gen_matching(k: usize) -> Result<(Graph, Vec<usize>)> {
    if k == 0 {
        return Err(Error::input("matching needs k >= 1"));
    }
    let mut g = Graph::new(2 * k);
    for i in 0..k {
        g.insert(2 * i, 2 * i + 1);
    }
    Ok((g, (0..k).map(|i| 2 * i + 1).collect()))
}

/// Parses a comma-separated id list such as `1,3,5`; result is sorted and deduplicated.
pub fn parse_vertex_set(text: &str, n: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for f in text.split(',').map(str::trim).filter(|f| !f.is_empty()) {
        let v: usize = f
            .parse()
            .map_err(|_| Error::input(format!("not a vertex id: {f:?}")))?;
        if v >= n {
            return Err(Error::input(format!("vertex {v} out of range for n = {n}")));
        }
        out.push(v);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Sorted, deduplicated copy of `set` with every id checked against `g`.
pub(crate) fn normalize_set(g: &Graph, set: &[usize]) -> Result<Vec<usize>> {
    let mut out = set.to_vec();
    out.sort_unstable();
    out.dedup();
    if let Some(&v) = out.iter().find(|&&v| v >= g.n()) {
        return Err(Error::input(format!(
            "vertex {v} out of range for n = {}",
            g.n()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_single_edge() {
        let g = Graph::parse("2 1\n0 1").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), vec![(0, 1)]);
    }

    #[test]
    fn parse_edgeless() {
        let g = Graph::parse("3 0").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            Graph::parse("2 1\n0 0"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::parse("2 1\n0 2"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::parse("3 2\n0 1\n1 0"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            Graph::parse("3 1\n0 x"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::parse("3 2\n0 1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(Graph::parse("").is_err());
    }

    #[test]
    fn path_matrix_is_tridiagonal() {
        let g = Graph::path(4);
        let m = adjacency_matrix(&g, &VertexOrder::identity(4)).unwrap();
        for i in 0..4usize {
            for j in 0..4 {
                let expect = i.abs_diff(j) == 1;
                assert_eq!(m.get(i, j), expect, "({i},{j})");
            }
        }
    }

    #[test]
    fn complete_and_edgeless_matrices() {
        let k3 = adjacency_matrix(&Graph::complete(3), &VertexOrder::identity(3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(k3.get(i, j), i != j);
            }
        }
        let ord = VertexOrder::new(vec![2, 0, 1]).unwrap();
        let z = adjacency_matrix(&Graph::new(3), &ord).unwrap();
        assert_eq!(z.count_ones(), 0);
    }

    #[test]
    fn matrix_size_mismatch() {
        assert!(adjacency_matrix(&Graph::new(3), &VertexOrder::identity(2)).is_err());
    }

    #[test]
    fn order_window_and_successor() {
        let ord = VertexOrder::new(vec![3, 1, 0, 2]).unwrap();
        assert_eq!(ord.successor(1), Some(0));
        assert_eq!(ord.successor(2), None);
        assert_eq!(ord.window(1, 5), &[1, 0, 2]);
        assert_eq!(ord.window(3, 0), &[3]);
        assert!(VertexOrder::new(vec![0, 0]).is_err());
        assert!(VertexOrder::new(vec![0, 2]).is_err());
    }

    #[test]
    fn matching_family() {
        let (g, a) = gen_matching(2).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (2, 3)]);
        assert_eq!(a, vec![1, 3]);
        let (g, a) = gen_matching(1).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(a.len(), 1);
        assert!(gen_matching(0).is_err());
    }

    #[test]
    fn vertex_set_parsing() {
        assert_eq!(parse_vertex_set("3,1, 3", 4).unwrap(), vec![1, 3]);
        assert!(parse_vertex_set("4", 4).is_err());
        assert!(parse_vertex_set("a", 4).is_err());
    }
}
