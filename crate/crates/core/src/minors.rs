//! Exact search for grid and mixed minors.
//!
//! Both searches share one shape: a zone `rows x cols` of `M` is good iff an
//! auxiliary matrix `X` has a 1 inside `rows' x cols'`. For grid minors `X = M`
//! and the ranges are taken as is. For mixed minors `X` is the corner matrix and
//! both ranges lose their last index, since a zone is mixed iff it contains a
//! corner lying entirely inside it.
//!
//! With the row division fixed, scanning columns left to right and cutting as
//! soon as every zone of the current column part is good finds the maximum
//! number of column parts (goodness is monotone under widening). So the search
//! enumerates row divisions and runs that scan for each.

use std::ops::Range;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::matrix::{corner_matrix, BitMatrix, Division};

/// Exact enumeration is used while the smaller dimension is at most this
/// (at most `2^19` row divisions in total); beyond it only equal-height row
/// divisions are tried and the result is a lower bound.
pub const EXACT_DIM_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinorKind {
    Grid,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorSearch {
    /// Largest `t <= cap` found.
    pub t: usize,
    /// Witnessing `(t, t)`-division; `None` when `t == 0`.
    pub division: Option<Division>,
    /// `false` when the search budget ran out and `t` is only a lower bound.
    pub exact: bool,
}

pub fn max_grid_minor(m: &BitMatrix, cap: usize) -> MinorSearch {
    max_minor(m, MinorKind::Grid, cap)
}

pub fn max_mixed_minor(m: &BitMatrix, cap: usize) -> MinorSearch {
    max_minor(m, MinorKind::Mixed, cap)
}

pub fn max_minor(m: &BitMatrix, kind: MinorKind, cap: usize) -> MinorSearch {
    let transposed = m.rows() > m.cols();
    let base = if transposed { m.transpose() } else { m.clone() };
    let Some(search) = ZoneSearch::new(&base, kind) else {
        return MinorSearch {
            t: 0,
            division: None,
            exact: true,
        };
    };
    let flip = |d: Division| if transposed { d.transpose() } else { d };

    let mut best = MinorSearch {
        t: 0,
        division: None,
        exact: true,
    };
    for t in 1..=cap {
        if t > search.max_parts() {
            break;
        }
        let exact_mode = base.rows() <= EXACT_DIM_LIMIT && best.exact;
        let found = if exact_mode {
            search.find(t)
        } else {
            search.find_equal_rows(t)
        };
        match found {
            Some(d) => {
                best = MinorSearch {
                    t,
                    division: Some(flip(d)),
                    exact: exact_mode,
                }
            }
            None => {
                best.exact = exact_mode;
                break;
            }
        }
    }
    if best.t == cap.min(search.max_parts()) {
        best.exact = true;
    }
    best
}

/// Decides whether `m` has a `t`-minor of the given kind, by exhaustive search.
pub fn find_minor(m: &BitMatrix, kind: MinorKind, t: usize) -> Option<Division> {
    if t == 0 {
        return Some(Division {
            row_cuts: vec![],
            col_cuts: vec![],
        });
    }
    let transposed = m.rows() > m.cols();
    let base = if transposed { m.transpose() } else { m.clone() };
    let search = ZoneSearch::new(&base, kind)?;
    if t > search.max_parts() {
        return None;
    }
    let d = search.find(t)?;
    Some(if transposed { d.transpose() } else { d })
}

struct ZoneSearch {
    rows: usize,
    cols: usize,
    shrink: usize,
    /// Columns of the auxiliary matrix as row sets.
    x_cols: Vec<FixedBitSet>,
    x_rows: usize,
}

impl ZoneSearch {
    fn new(m: &BitMatrix, kind: MinorKind) -> Option<Self> {
        let (x, shrink) = match kind {
            MinorKind::Grid => (m.clone(), 0),
            MinorKind::Mixed => (corner_matrix(m).ok()?, 1),
        };
        Some(ZoneSearch {
            rows: m.rows(),
            cols: m.cols(),
            shrink,
            x_cols: (0..x.cols()).map(|j| x.column(j)).collect(),
            x_rows: x.rows(),
        })
    }

    fn min_part(&self) -> usize {
        1 + self.shrink
    }

    fn max_parts(&self) -> usize {
        self.rows.min(self.cols) / self.min_part()
    }

    fn zone_good(&self, rows: &Range<usize>, acc: &FixedBitSet) -> bool {
        let end = rows.end - self.shrink;
        end > rows.start && acc.count_ones(rows.start..end) > 0
    }

    /// Greedy column scan for fixed row parts; returns column cuts for `t` parts.
    fn greedy_cols(&self, row_parts: &[Range<usize>], t: usize) -> Option<Vec<usize>> {
        let mut cuts = Vec::with_capacity(t - 1);
        let mut acc = FixedBitSet::with_capacity(self.x_rows);
        let mut start = 0;
        let mut found = 0;
        for end in 1..=self.cols {
            if end - start > self.shrink {
                acc.union_with(&self.x_cols[end - 1 - self.shrink]);
            }
            if row_parts.iter().all(|r| self.zone_good(r, &acc)) {
                found += 1;
                if found == t {
                    return Some(cuts);
                }
                cuts.push(end);
                start = end;
                acc.clear();
            }
        }
        None
    }

    fn find(&self, t: usize) -> Option<Division> {
        let mut cuts = Vec::with_capacity(t - 1);
        self.enumerate_rows(t, 0, &mut cuts)
    }

    fn enumerate_rows(&self, t: usize, start: usize, cuts: &mut Vec<usize>) -> Option<Division> {
        let min = self.min_part();
        let remaining = t - cuts.len();
        if remaining == 1 {
            if self.rows - start < min {
                return None;
            }
            let parts = parts_from(cuts, self.rows);
            return self.greedy_cols(&parts, t).map(|col_cuts| Division {
                row_cuts: cuts.clone(),
                col_cuts,
            });
        }
        let last = self.rows - (remaining - 1) * min;
        for c in start + min..=last {
            cuts.push(c);
            if let Some(d) = self.enumerate_rows(t, c, cuts) {
                return Some(d);
            }
            cuts.pop();
        }
        None
    }

    /// Lower-bound probe: equal row parts, greedy columns.
    fn find_equal_rows(&self, t: usize) -> Option<Division> {
        let row_cuts: Vec<usize> = (1..t).map(|i| i * self.rows / t).collect();
        let parts = parts_from(&row_cuts, self.rows);
        if parts.iter().any(|r| r.len() < self.min_part()) {
            return None;
        }
        self.greedy_cols(&parts, t)
            .map(|col_cuts| Division { row_cuts, col_cuts })
    }
}

fn parts_from(cuts: &[usize], len: usize) -> Vec<Range<usize>> {
    Division {
        row_cuts: cuts.to_vec(),
        col_cuts: vec![],
    }
    .row_parts(len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::classify_submatrix;

    fn mat(rows: &[&str]) -> BitMatrix {
        BitMatrix::from_rows(
            &rows
                .iter()
                .map(|r| r.chars().map(|c| c == '1').collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn check_witness(m: &BitMatrix, kind: MinorKind, res: &MinorSearch) {
        let Some(d) = &res.division else {
            assert_eq!(res.t, 0);
            return;
        };
        d.validate(m.rows(), m.cols()).unwrap();
        let rows = d.row_parts(m.rows());
        let cols = d.col_parts(m.cols());
        assert_eq!((rows.len(), cols.len()), (res.t, res.t));
        for r in &rows {
            for c in &cols {
                let good = match kind {
                    MinorKind::Grid => r.clone().any(|i| c.clone().any(|j| m.get(i, j))),
                    MinorKind::Mixed => classify_submatrix(m, r.clone(), c.clone()).unwrap().mixed,
                };
                assert!(good, "zone {r:?} x {c:?} fails");
            }
        }
    }

    #[test]
    fn grid_examples() {
        assert_eq!(max_grid_minor(&BitMatrix::zeros(3, 4).unwrap(), 6).t, 0);
        let ones = mat(&["11", "11"]);
        let r = max_grid_minor(&ones, 6);
        assert_eq!(r.t, 2);
        assert_eq!(
            r.division,
            Some(Division {
                row_cuts: vec![1],
                col_cuts: vec![1]
            })
        );
        assert_eq!(max_grid_minor(&mat(&["10", "01"]), 6).t, 1);
    }

    #[test]
    fn mixed_examples() {
        assert_eq!(max_mixed_minor(&BitMatrix::zeros(4, 4).unwrap(), 6).t, 0);
        assert_eq!(max_mixed_minor(&mat(&["01", "10"]), 6).t, 1);
        let tiled = mat(&["0101", "1010", "0101", "1010"]);
        let r = max_mixed_minor(&tiled, 6);
        assert_eq!(r.t, 2);
        check_witness(&tiled, MinorKind::Mixed, &r);
        assert_eq!(max_mixed_minor(&mat(&["0110"]), 6).t, 0);
    }

    #[test]
    fn cap_limits_result() {
        let ones = BitMatrix::from_rows(&vec![vec![true; 5]; 5]).unwrap();
        assert_eq!(max_grid_minor(&ones, 3).t, 3);
        assert_eq!(max_grid_minor(&ones, 9).t, 5);
    }

    #[test]
    fn beyond_exact_limits() {
        // Past t = 6 the probe takes over; reaching the trivial bound is still exact.
        let ones = BitMatrix::from_rows(&vec![vec![true; 8]; 8]).unwrap();
        let r = max_grid_minor(&ones, 8);
        assert_eq!((r.t, r.exact), (8, true));
        check_witness(&ones, MinorKind::Grid, &r);

        let n = EXACT_DIM_LIMIT + 5;
        let mut id = BitMatrix::zeros(n, n).unwrap();
        for i in 0..n {
            id.set(i, i, true);
        }
        let r = max_grid_minor(&id, 6);
        assert_eq!((r.t, r.exact), (1, false));
    }

    #[test]
    fn witnesses_are_valid_on_rectangular_inputs() {
        let m = mat(&["0110", "1001", "0110", "1011", "0100", "1110"]);
        for kind in [MinorKind::Grid, MinorKind::Mixed] {
            let r = max_minor(&m, kind, 6);
            assert!(r.exact);
            check_witness(&m, kind, &r);
            assert!(find_minor(&m, kind, r.t + 1).is_none());
        }
    }
}
