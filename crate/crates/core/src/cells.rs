//! Corner-profiles, the block sweep, and the partition of `V(G)` into cells of
//! equal neighborhood in `A`, each carried by a decodable descriptor.
//!
//! Everything works on the reduced matrix: rows are the vertices of `A` in
//! the order, columns are all vertices in the order. A corner at rows
//! `(i, i+1)` is named by the two row vertices, i.e. an anchor from `A` and its
//! successor within `A`.
//!
//! Cells come in three kinds:
//!
//! * `boundary-by-profile`: a single vertex found from a set `P` of anchored
//!   row pairs, either as the `k`-th column whose own profile contains `P`, or
//!   as the end of the `k`-th window of the greedy left-to-right cover of `P`.
//! * `boundary-extremal`: the maximal vertex.
//! * `interior`: the vertices strictly between two consecutive defined
//!   vertices with a given 0/1 pattern on designated anchor rows. The
//!   designated rows hit every row segment left by the corners inside the
//!   interval, and a corner-free segment is vertical or horizontal, so the
//!   pattern fixes the whole column.

use std::collections::{BTreeMap, HashSet};

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::constants::PatternConstants;
use crate::error::{Error, Result};
use crate::graph::{normalize_set, Graph, VertexOrder};
use crate::matrix::{is_corner, BitMatrix};
use crate::neighborhoods::traces;

/// Adjacency matrix restricted to the rows of `A`, both sides in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedMatrix {
    rows: Vec<usize>,
    cols: Vec<usize>,
    bits: BitMatrix,
}

impl ReducedMatrix {
    pub fn new(g: &Graph, ord: &VertexOrder, a: &[usize]) -> Result<Self> {
        ord.check_graph(g)?;
        let mut rows = normalize_set(g, a)?;
        if rows.is_empty() {
            return Err(Error::input("vertex set A must be non-empty"));
        }
        ord.sort(&mut rows);
        let cols = ord.perm().to_vec();
        let mut bits = BitMatrix::zeros(rows.len(), cols.len())?;
        for (i, &r) in rows.iter().enumerate() {
            for u in g.neighbors(r).ones() {
                bits.set(i, ord.position(u), true);
            }
        }
        Ok(ReducedMatrix { rows, cols, bits })
    }

    /// Vertices of `A` in order.
    pub fn row_vertices(&self) -> &[usize] {
        &self.rows
    }

    pub fn col_vertices(&self) -> &[usize] {
        &self.cols
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    fn profile_bits(&self, j: usize) -> FixedBitSet {
        let m = self.rows.len();
        let mut p = FixedBitSet::with_capacity(m.saturating_sub(1));
        if j + 1 < self.cols.len() {
            for i in 0..m.saturating_sub(1) {
                if self.bits.is_corner_at(i, j) {
                    p.insert(i);
                }
            }
        }
        p
    }
}

/// Rows `i` with a corner on rows `i, i+1` and columns `j, j+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CornerProfile {
    pub column: usize,
    pub rows: Vec<usize>,
}

/// Corner-profile of column position `j`. The last column has no right
/// neighbor and gets the empty profile, as does a single-row matrix.
pub fn corner_profile(m: &ReducedMatrix, j: usize) -> Result<CornerProfile> {
    if j >= m.cols.len() {
        return Err(Error::input(format!("column {j} out of range")));
    }
    Ok(CornerProfile {
        column: j,
        rows: m.profile_bits(j).ones().collect(),
    })
}

/// One block `S^r(v)` of the sweep, as positions `start..=end`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepBlock {
    pub start: usize,
    pub end: usize,
    pub start_vertex: usize,
    pub profile_size: usize,
    /// Whether the block's profile reached the threshold (false only for a tail block).
    pub reached: bool,
}

impl SweepBlock {
    pub fn extent(&self) -> usize {
        self.end - self.start
    }
}

/// Reduced matrix plus every column profile; shared by the sweep and the encoder.
struct Profiles {
    m: ReducedMatrix,
    prof: Vec<FixedBitSet>,
}

impl Profiles {
    fn new(g: &Graph, ord: &VertexOrder, a: &[usize]) -> Result<Self> {
        let m = ReducedMatrix::new(g, ord, a)?;
        let prof = (0..m.cols.len()).map(|j| m.profile_bits(j)).collect();
        Ok(Profiles { m, prof })
    }

    fn n(&self) -> usize {
        self.prof.len()
    }

    fn empty_rows(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.m.rows.len().saturating_sub(1))
    }

    fn union(&self, cols: std::ops::Range<usize>) -> FixedBitSet {
        let mut acc = self.empty_rows();
        for j in cols {
            acc.union_with(&self.prof[j]);
        }
        acc
    }

    fn blocks(&self, theta: usize) -> Vec<SweepBlock> {
        let n = self.n();
        let mut out = Vec::new();
        let mut start = 0;
        while start < n {
            let mut acc = self.empty_rows();
            let mut end = None;
            for j in start..n {
                acc.union_with(&self.prof[j]);
                if acc.count_ones(..) >= theta {
                    end = Some(j);
                    break;
                }
            }
            let reached = end.is_some();
            let end = end.unwrap_or(n - 1);
            out.push(SweepBlock {
                start,
                end,
                start_vertex: self.m.cols[start],
                profile_size: acc.count_ones(..),
                reached,
            });
            start = end + 1;
        }
        out
    }

    /// Ends of the greedy windows covering `rows`: each window starts right
    /// after the previous one and stops at the first column where the union
    /// of profiles contains `rows`.
    fn segment_ends(&self, rows: &[usize]) -> Vec<usize> {
        let mut ends = Vec::new();
        let mut acc = self.empty_rows();
        for j in 0..self.n() {
            acc.union_with(&self.prof[j]);
            if rows.iter().all(|&r| acc.contains(r)) {
                ends.push(j);
                acc.clear();
            }
        }
        ends
    }

    /// Columns whose own profile contains `rows`.
    fn containing(&self, rows: &[usize]) -> Vec<usize> {
        (0..self.n())
            .filter(|&j| rows.iter().all(|&r| self.prof[j].contains(r)))
            .collect()
    }

    fn pair_anchors(&self, rows: &[usize]) -> Vec<usize> {
        rows.iter()
            .flat_map(|&r| [self.m.rows[r], self.m.rows[r + 1]])
            .collect()
    }
}

/// First `q` rows of `prof` with no two consecutive, smallest first.
fn pick_spread(prof: &FixedBitSet, q: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(q);
    for r in prof.ones() {
        if out.len() == q {
            break;
        }
        if out.last().is_none_or(|&l| r > l + 1) {
            out.push(r);
        }
    }
    out
}

/// Greedy minimal blocks of consecutive columns whose profile union reaches `theta`.
pub fn sweep_blocks(
    g: &Graph,
    ord: &VertexOrder,
    a: &[usize],
    theta: usize,
) -> Result<Vec<SweepBlock>> {
    if theta == 0 {
        return Err(Error::input("threshold theta must be >= 1"));
    }
    Ok(Profiles::new(g, ord, a)?.blocks(theta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellKind {
    BoundaryByProfile,
    BoundaryExtremal,
    Interior,
}

/// How a bounding vertex is recovered from its anchored row pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "locator", rename_all = "kebab-case")]
pub enum Locator {
    /// The `index`-th column whose own profile contains every anchored pair.
    Rank { index: usize },
    /// End of the `index`-th greedy window covering the anchored pairs.
    SegmentEnd { index: usize },
    /// The maximal vertex.
    Last,
    /// No bound: the interval runs to the start (lower) or the end (upper).
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundRef {
    #[serde(flatten)]
    pub locator: Locator,
    /// Number of anchored row pairs, i.e. `2 * pairs` anchors.
    pub pairs: usize,
}

/// Finite, decodable description of one cell.
///
/// `anchors` lists, in this order, the row pairs of each entry of `block_ref`
/// and then one anchor per pattern bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CellDescriptor {
    pub kind: CellKind,
    pub anchors: Vec<usize>,
    #[serde(serialize_with = "ser_pattern", deserialize_with = "de_pattern")]
    pub pattern: Vec<bool>,
    pub block_ref: Vec<BoundRef>,
}

fn ser_pattern<S: Serializer>(p: &[bool], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(
        &p.iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect::<String>(),
    )
}

fn de_pattern<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<bool>, D::Error> {
    let s = String::deserialize(d)?;
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(serde::de::Error::custom(format!(
                "bad pattern character {c:?}"
            ))),
        })
        .collect()
}

impl CellDescriptor {
    fn boundary(bound: &Bound, anchors: Vec<usize>) -> Self {
        match bound.locator {
            Locator::Last => CellDescriptor {
                kind: CellKind::BoundaryExtremal,
                anchors: vec![],
                pattern: vec![],
                block_ref: vec![bound.as_ref()],
            },
            _ => CellDescriptor {
                kind: CellKind::BoundaryByProfile,
                anchors,
                pattern: vec![],
                block_ref: vec![bound.as_ref()],
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub members: Vec<usize>,
    pub descriptor: CellDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellPartition {
    pub theta: usize,
    pub cells: Vec<Cell>,
    #[serde(skip)]
    pub blocks: Vec<SweepBlock>,
}

impl CellPartition {
    /// Number of distinct anchor tuples in use.
    pub fn anchor_tuple_count(&self) -> usize {
        self.cells
            .iter()
            .map(|c| &c.descriptor.anchors)
            .collect::<HashSet<_>>()
            .len()
    }

    pub fn max_anchors(&self) -> usize {
        self.cells
            .iter()
            .map(|c| c.descriptor.anchors.len())
            .max()
            .unwrap_or(0)
    }

    /// Distinct descriptor shapes (kind and locators), the finite vocabulary in use.
    pub fn descriptor_kinds(&self) -> usize {
        self.cells
            .iter()
            .map(|c| {
                let d = &c.descriptor;
                let shape: Vec<_> = d
                    .block_ref
                    .iter()
                    .map(|b| std::mem::discriminant(&b.locator))
                    .collect();
                (d.kind, shape)
            })
            .collect::<HashSet<_>>()
            .len()
    }

    /// `|f(V)| <= m_t |A|`.
    pub fn within_tuple_bound(&self, pc: &PatternConstants, a_len: usize) -> bool {
        pc.m_t.bounds(
            &BigUint::from(self.anchor_tuple_count()),
            &BigUint::from(a_len),
        )
    }

    /// Block count against `2 * 2^theta * |A|`.
    pub fn within_block_bound(&self, a_len: usize) -> bool {
        crate::constants::Pow2::new(BigUint::from(self.theta) + 1u8)
            .bounds(&BigUint::from(self.blocks.len()), &BigUint::from(a_len))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bound {
    locator: Locator,
    rows: Vec<usize>,
}

impl Bound {
    fn as_ref(&self) -> BoundRef {
        BoundRef {
            locator: self.locator,
            pairs: self.rows.len(),
        }
    }

    fn open() -> Self {
        Bound {
            locator: Locator::Open,
            rows: vec![],
        }
    }
}

/// Partitions `V` into cells of equal `N_A`, sweeping with threshold `theta`.
pub fn cell_partition(
    g: &Graph,
    ord: &VertexOrder,
    a: &[usize],
    theta: usize,
) -> Result<CellPartition> {
    if theta == 0 {
        return Err(Error::input("threshold theta must be >= 1"));
    }
    let pr = Profiles::new(g, ord, a)?;
    let n = pr.n();
    let blocks = pr.blocks(theta);
    let q = theta.div_ceil(2);

    let mut defined: BTreeMap<usize, Bound> = BTreeMap::new();
    for b in blocks.iter().filter(|b| b.reached) {
        let rows = pick_spread(&pr.union(b.start..b.end + 1), q);
        let ends = pr.segment_ends(&rows);
        let index = ends
            .iter()
            .position(|&e| e >= b.start)
            .filter(|&i| ends[i] <= b.end)
            .ok_or_else(|| Error::Invariant(format!("no window end inside block {b:?}")))?;
        defined.insert(
            ends[index],
            Bound {
                locator: Locator::SegmentEnd { index },
                rows,
            },
        );
        if b.end + 1 < n && pr.prof[b.end].count_ones(..) >= theta {
            let rows = pick_spread(&pr.prof[b.end], q);
            let index = pr
                .containing(&rows)
                .iter()
                .position(|&j| j == b.end)
                .ok_or_else(|| Error::Invariant("block end misses its own profile".into()))?;
            defined.entry(b.end).or_insert(Bound {
                locator: Locator::Rank { index },
                rows,
            });
        }
    }
    defined.insert(
        n - 1,
        Bound {
            locator: Locator::Last,
            rows: vec![],
        },
    );

    let tr = traces(g, &{
        let mut m = FixedBitSet::with_capacity(g.n());
        pr.m.rows.iter().for_each(|&v| m.insert(v));
        m
    });
    let mut cells = Vec::new();
    let mut lower = Bound::open();
    let mut lo = 0;
    for (&pos, bound) in &defined {
        if lo < pos {
            cells.extend(interior_cells(&pr, &lower, bound, lo..pos));
        }
        cells.push(Cell {
            members: vec![pr.m.cols[pos]],
            descriptor: CellDescriptor::boundary(bound, pr.pair_anchors(&bound.rows)),
        });
        lower = bound.clone();
        lo = pos + 1;
    }

    for c in &cells {
        let first = c.members[0];
        if let Some(&other) = c.members.iter().find(|&&v| tr[v] != tr[first]) {
            return Err(Error::Invariant(format!(
                "cell mixes vertices {first} and {other} with different neighborhoods in A"
            )));
        }
    }
    Ok(CellPartition {
        theta,
        cells,
        blocks,
    })
}

fn interior_cells(
    pr: &Profiles,
    lower: &Bound,
    upper: &Bound,
    span: std::ops::Range<usize>,
) -> Vec<Cell> {
    // corners with both columns inside the span
    let corners = pr.union(span.start..span.end - 1);
    let designated: Vec<usize> = std::iter::once(0)
        .chain(corners.ones().map(|i| i + 1))
        .collect();
    let mut anchors = pr.pair_anchors(&lower.rows);
    anchors.extend(pr.pair_anchors(&upper.rows));
    anchors.extend(designated.iter().map(|&r| pr.m.rows[r]));

    let mut groups: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
    for j in span {
        let pattern = designated.iter().map(|&r| pr.m.bits.get(r, j)).collect();
        groups.entry(pattern).or_default().push(j);
    }
    let mut groups: Vec<_> = groups.into_iter().collect();
    groups.sort_by_key(|(_, cols)| cols[0]);
    groups
        .into_iter()
        .map(|(pattern, cols)| Cell {
            members: cols.iter().map(|&j| pr.m.cols[j]).collect(),
            descriptor: CellDescriptor {
                kind: CellKind::Interior,
                anchors: anchors.clone(),
                pattern,
                block_ref: vec![lower.as_ref(), upper.as_ref()],
            },
        })
        .collect()
}

/// Reads descriptors back using only the order, adjacency to anchors, and the pattern.
struct Decoder<'a> {
    g: &'a Graph,
    ord: &'a VertexOrder,
    /// Position of each vertex within `A`'s order, if in `A`.
    a_index: Vec<Option<usize>>,
    a_rows: Vec<usize>,
}

impl<'a> Decoder<'a> {
    fn new(g: &'a Graph, ord: &'a VertexOrder, a: &[usize]) -> Result<Self> {
        ord.check_graph(g)?;
        let mut a_rows = normalize_set(g, a)?;
        if a_rows.is_empty() {
            return Err(Error::input("vertex set A must be non-empty"));
        }
        ord.sort(&mut a_rows);
        let mut a_index = vec![None; g.n()];
        for (i, &v) in a_rows.iter().enumerate() {
            a_index[v] = Some(i);
        }
        Ok(Decoder {
            g,
            ord,
            a_index,
            a_rows,
        })
    }

    fn check_anchor(&self, v: usize) -> Result<usize> {
        if v >= self.g.n() {
            return Err(Error::input(format!("anchor {v} is not a vertex")));
        }
        self.a_index[v].ok_or_else(|| Error::input(format!("anchor {v} is not in A")))
    }

    /// Validates `(a, s_A(a))` pairs.
    fn pairs(&self, anchors: &[usize]) -> Result<Vec<(usize, usize)>> {
        anchors
            .chunks(2)
            .map(|p| {
                let i = self.check_anchor(p[0])?;
                self.check_anchor(p[1])?;
                if self.a_rows.get(i + 1) != Some(&p[1]) {
                    return Err(Error::input(format!(
                        "anchor {} is not the successor of {} within A",
                        p[1], p[0]
                    )));
                }
                Ok((p[0], p[1]))
            })
            .collect()
    }

    fn corner(&self, (a, b): (usize, usize), j: usize) -> bool {
        let (c, d) = (self.ord.vertex_at(j), self.ord.vertex_at(j + 1));
        is_corner(
            self.g.has_edge(a, c),
            self.g.has_edge(a, d),
            self.g.has_edge(b, c),
            self.g.has_edge(b, d),
        )
    }

    fn locate(&self, loc: Locator, pairs: &[(usize, usize)]) -> Result<Option<usize>> {
        let n = self.g.n();
        let missing = || Error::input(format!("locator {loc:?} selects no vertex"));
        if matches!(loc, Locator::Rank { .. } | Locator::SegmentEnd { .. }) && pairs.is_empty() {
            return Err(Error::input("profile locator without anchored pairs"));
        }
        match loc {
            Locator::Open => Ok(None),
            Locator::Last => Ok(Some(n - 1)),
            Locator::Rank { index } => (0..n - 1)
                .filter(|&j| pairs.iter().all(|&p| self.corner(p, j)))
                .nth(index)
                .map(Some)
                .ok_or_else(missing),
            Locator::SegmentEnd { index } => {
                let mut covered = vec![false; pairs.len()];
                let mut seen = 0;
                for j in 0..n {
                    if j + 1 < n {
                        for (c, &p) in covered.iter_mut().zip(pairs) {
                            *c |= self.corner(p, j);
                        }
                    }
                    if covered.iter().all(|&c| c) {
                        if seen == index {
                            return Ok(Some(j));
                        }
                        seen += 1;
                        covered.iter_mut().for_each(|c| *c = false);
                    }
                }
                Err(missing())
            }
        }
    }

    fn decode(&self, d: &CellDescriptor) -> Result<Vec<usize>> {
        let bad = |msg: &str| Error::input(format!("descriptor inconsistent: {msg}"));
        let bound_anchors: usize = d.block_ref.iter().map(|b| 2 * b.pairs).sum();
        if bound_anchors > d.anchors.len() {
            return Err(bad("fewer anchors than the bounds need"));
        }
        for b in &d.block_ref {
            if matches!(b.locator, Locator::Open | Locator::Last) && b.pairs != 0 {
                return Err(bad("open or extremal bound with anchored pairs"));
            }
        }
        let (bound_part, pattern_part) = d.anchors.split_at(bound_anchors);
        let mut bounds = Vec::with_capacity(d.block_ref.len());
        let mut rest = bound_part;
        for b in &d.block_ref {
            let (mine, tail) = rest.split_at(2 * b.pairs);
            rest = tail;
            bounds.push(self.locate(b.locator, &self.pairs(mine)?)?);
        }
        let single = |pos: Option<usize>| Ok(vec![self.ord.vertex_at(pos.expect("bounded"))]);
        match (d.kind, d.block_ref.as_slice()) {
            (
                CellKind::BoundaryExtremal,
                [BoundRef {
                    locator: Locator::Last,
                    ..
                }],
            )
            | (
                CellKind::BoundaryByProfile,
                [BoundRef {
                    locator: Locator::Rank { .. } | Locator::SegmentEnd { .. },
                    ..
                }],
            ) => {
                if !pattern_part.is_empty() || !d.pattern.is_empty() {
                    return Err(bad("boundary cells carry no pattern"));
                }
                single(bounds[0])
            }
            (CellKind::Interior, [lower, _]) => {
                if lower.locator == Locator::Last {
                    return Err(bad("interval cannot start after the maximal vertex"));
                }
                if pattern_part.len() != d.pattern.len() {
                    return Err(bad("pattern length differs from pattern anchors"));
                }
                for &v in pattern_part {
                    self.check_anchor(v)?;
                }
                let lo = bounds[0].map_or(0, |p| p + 1);
                let hi = bounds[1].unwrap_or(self.g.n());
                if lo > hi {
                    return Err(bad("bounds out of order"));
                }
                Ok((lo..hi)
                    .map(|j| self.ord.vertex_at(j))
                    .filter(|&u| {
                        pattern_part
                            .iter()
                            .zip(&d.pattern)
                            .all(|(&a, &bit)| self.g.has_edge(a, u) == bit)
                    })
                    .collect())
            }
            _ => Err(bad("kind does not match its bounds")),
        }
    }
}

/// The vertex set a descriptor defines, in order.
pub fn decode_cell(
    g: &Graph,
    ord: &VertexOrder,
    a: &[usize],
    d: &CellDescriptor,
) -> Result<Vec<usize>> {
    Decoder::new(g, ord, a)?.decode(d)
}

/// A vertex pinned down by `t` spread-out anchored row pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DefinedVertex {
    pub vertex: usize,
    pub descriptor: CellDescriptor,
    /// `|{u : P ⊆ prof(u)}|`.
    pub candidates: usize,
    /// The locator index: rank among the candidates, or window number.
    pub index: usize,
}

/// With `|prof(S^l(v))| >= 2t`, picks `t` pairwise non-consecutive profile
/// rows `P` and returns a vertex of `S^l(v)` recoverable from `P` alone: `v`
/// itself by rank when `l = 0`, otherwise the end of the greedy window of `P`
/// that meets `S^l(v)`. `None` when the profile is too small.
pub fn define_vertex(
    g: &Graph,
    ord: &VertexOrder,
    a: &[usize],
    v: usize,
    l: usize,
    t: usize,
) -> Result<Option<DefinedVertex>> {
    if v >= g.n() {
        return Err(Error::input(format!("vertex {v} out of range")));
    }
    let pr = Profiles::new(g, ord, a)?;
    let start = ord.position(v);
    let end = (start + l).min(pr.n() - 1);
    let prof = pr.union(start..end + 1);
    if t == 0 || prof.count_ones(..) < 2 * t {
        return Ok(None);
    }
    let rows = pick_spread(&prof, t);
    let candidates = pr.containing(&rows);
    let (pos, locator, index) = if l == 0 {
        let index = candidates
            .iter()
            .position(|&j| j == start)
            .ok_or_else(|| Error::Invariant("column misses its own profile".into()))?;
        (start, Locator::Rank { index }, index)
    } else {
        let ends = pr.segment_ends(&rows);
        let index = ends
            .iter()
            .position(|&e| e >= start)
            .filter(|&i| ends[i] <= end)
            .ok_or_else(|| Error::Invariant("no window end inside the span".into()))?;
        (ends[index], Locator::SegmentEnd { index }, index)
    };
    let bound = Bound { locator, rows };
    Ok(Some(DefinedVertex {
        vertex: ord.vertex_at(pos),
        descriptor: CellDescriptor::boundary(&bound, pr.pair_anchors(&bound.rows)),
        candidates: candidates.len(),
        index,
    }))
}

/// Classes of equal `N_A`, each sorted, ordered by smallest member.
pub fn oracle_partition(g: &Graph, a: &[usize]) -> Result<Vec<Vec<usize>>> {
    let a = normalize_set(g, a)?;
    if a.is_empty() {
        return Err(Error::input("vertex set A must be non-empty"));
    }
    let mut by_trace: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for v in 0..g.n() {
        let key = a.iter().copied().filter(|&x| g.has_edge(v, x)).collect();
        by_trace.entry(key).or_default().push(v);
    }
    let mut classes: Vec<Vec<usize>> = by_trace.into_values().collect();
    classes.sort_by_key(|c| c[0]);
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_matching;

    #[test]
    fn profile_examples() {
        // Rows 0, 1 of [[0,1],[1,0]]: the graph on {0,1,2,3} with A = {0,1}.
        // Use a bipartite-style graph where A rows see columns 2, 3 only.
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let m = ReducedMatrix::new(&g, &VertexOrder::identity(2), &[0, 1]).unwrap();
        assert_eq!(m.bits().row_strings(), vec!["01", "10"]);
        assert_eq!(corner_profile(&m, 0).unwrap().rows, vec![0]);
        assert!(corner_profile(&m, 1).unwrap().rows.is_empty());
        assert!(corner_profile(&m, 2).is_err());

        let e = Graph::new(4);
        let m = ReducedMatrix::new(&e, &VertexOrder::identity(4), &[0, 1, 2]).unwrap();
        for j in 0..4 {
            assert!(corner_profile(&m, j).unwrap().rows.is_empty());
        }
    }

    #[test]
    fn sweep_single_block_when_threshold_unreachable() {
        let g = Graph::path(6);
        let ord = VertexOrder::identity(6);
        let blocks = sweep_blocks(&g, &ord, &[0, 2, 4], 100).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(
            (blocks[0].start, blocks[0].end, blocks[0].reached),
            (0, 5, false)
        );
        assert!(sweep_blocks(&g, &ord, &[], 1).is_err());
        assert!(sweep_blocks(&g, &ord, &[1], 0).is_err());
    }

    #[test]
    fn oracle_examples() {
        let (g, a) = gen_matching(2).unwrap();
        assert_eq!(
            oracle_partition(&g, &a).unwrap(),
            vec![vec![0], vec![1, 3], vec![2]]
        );
        assert_eq!(
            oracle_partition(&Graph::new(3), &[1]).unwrap(),
            vec![vec![0, 1, 2]]
        );
        assert_eq!(
            oracle_partition(&Graph::complete(3), &[0, 1, 2]).unwrap(),
            vec![vec![0], vec![1], vec![2]]
        );
    }

    #[test]
    fn matching_partition_round_trips() {
        let (g, a) = gen_matching(3).unwrap();
        let ord = VertexOrder::identity(g.n());
        for theta in 1..=4 {
            let p = cell_partition(&g, &ord, &a, theta).unwrap();
            let mut all: Vec<usize> = p.cells.iter().flat_map(|c| c.members.clone()).collect();
            all.sort_unstable();
            assert_eq!(all, (0..g.n()).collect::<Vec<_>>());
            for c in &p.cells {
                assert_eq!(decode_cell(&g, &ord, &a, &c.descriptor).unwrap(), c.members);
            }
        }
    }

    #[test]
    fn single_anchor_groups_by_adjacency() {
        let g = Graph::path(5);
        let ord = VertexOrder::identity(5);
        let p = cell_partition(&g, &ord, &[2], 2).unwrap();
        for c in &p.cells {
            let first = g.has_edge(c.members[0], 2);
            assert!(c.members.iter().all(|&v| g.has_edge(v, 2) == first));
        }
        assert!(p.cells.len() <= 3);
    }

    #[test]
    fn whole_graph_descriptor() {
        let g = Graph::new(4);
        let ord = VertexOrder::identity(4);
        let d = CellDescriptor {
            kind: CellKind::Interior,
            anchors: vec![1],
            pattern: vec![false],
            block_ref: vec![
                BoundRef {
                    locator: Locator::Open,
                    pairs: 0,
                },
                BoundRef {
                    locator: Locator::Open,
                    pairs: 0,
                },
            ],
        };
        assert_eq!(
            decode_cell(&g, &ord, &[1, 3], &d).unwrap(),
            vec![0, 1, 2, 3]
        );
        let p = cell_partition(&Graph::new(1), &VertexOrder::identity(1), &[0], 1).unwrap();
        assert_eq!(p.cells.len(), 1);
        assert_eq!(p.cells[0].members, vec![0]);
        assert_eq!(p.cells[0].descriptor.kind, CellKind::BoundaryExtremal);
    }

    #[test]
    fn tampered_descriptors_rejected() {
        let (g, a) = gen_matching(4).unwrap();
        let ord = VertexOrder::identity(g.n());
        let p = cell_partition(&g, &ord, &a, 2).unwrap();
        let interior = p
            .cells
            .iter()
            .find(|c| c.descriptor.kind == CellKind::Interior)
            .unwrap();
        let mut d = interior.descriptor.clone();
        *d.anchors.last_mut().unwrap() = 0; // vertex 0 is not in A
        assert!(decode_cell(&g, &ord, &a, &d).is_err());
        let mut d = interior.descriptor.clone();
        d.pattern.push(true);
        assert!(decode_cell(&g, &ord, &a, &d).is_err());
        let mut d = interior.descriptor.clone();
        d.kind = CellKind::BoundaryExtremal;
        assert!(decode_cell(&g, &ord, &a, &d).is_err());
    }

    #[test]
    fn define_vertex_examples() {
        // A = {0, 1, 2} last in the order; columns of 3 and 4 are (1,0,1), the rest zero,
        // so only the column of 4 has a profile, namely {0, 1}.
        let g = Graph::from_edges(7, &[(3, 0), (3, 2), (4, 0), (4, 2)]).unwrap();
        let ord = VertexOrder::new(vec![3, 4, 5, 6, 0, 1, 2]).unwrap();
        let a = [0, 1, 2];
        let m = ReducedMatrix::new(&g, &ord, &a).unwrap();
        assert_eq!(corner_profile(&m, 1).unwrap().rows, vec![0, 1]);

        let dv = define_vertex(&g, &ord, &a, 4, 0, 1).unwrap().unwrap();
        assert_eq!((dv.vertex, dv.index, dv.candidates), (4, 0, 1));
        assert_eq!(dv.descriptor.anchors, vec![0, 1]);
        assert_eq!(decode_cell(&g, &ord, &a, &dv.descriptor).unwrap(), vec![4]);

        let dv = define_vertex(&g, &ord, &a, 3, 2, 1).unwrap().unwrap();
        assert_eq!(dv.vertex, 4);
        assert_eq!(
            dv.descriptor.block_ref[0].locator,
            Locator::SegmentEnd { index: 0 }
        );
        assert_eq!(decode_cell(&g, &ord, &a, &dv.descriptor).unwrap(), vec![4]);

        assert!(define_vertex(&g, &ord, &a, 4, 0, 2).unwrap().is_none());
        assert!(define_vertex(&g, &ord, &a, 5, 0, 1).unwrap().is_none());
        assert!(define_vertex(&g, &ord, &a, 3, 0, 1).unwrap().is_none());
    }

    #[test]
    fn define_vertex_round_trips_on_paths() {
        let g = Graph::path(12);
        let ord = VertexOrder::identity(12);
        let a: Vec<usize> = (0..12).step_by(2).collect();
        for v in 0..12 {
            for l in 0..4 {
                if let Some(dv) = define_vertex(&g, &ord, &a, v, l, 1).unwrap() {
                    let p = ord.position(v);
                    assert!((p..=p + l).contains(&ord.position(dv.vertex)));
                    assert_eq!(
                        decode_cell(&g, &ord, &a, &dv.descriptor).unwrap(),
                        vec![dv.vertex]
                    );
                }
            }
        }
    }
}
