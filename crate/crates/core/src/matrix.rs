//! 0/1 matrices, divisions, and the corner machinery built on them.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::ops::Range;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major 0/1 matrix with at least one row and one column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<FixedBitSet>,
}

impl BitMatrix {
    pub fn zeros(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::input(format!(
                "matrix dimensions must be positive, got {m}x{n}"
            )));
        }
        Ok(BitMatrix {
            cols: n,
            rows: (0..m).map(|_| FixedBitSet::with_capacity(n)).collect(),
        })
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        let mut out = BitMatrix::zeros(rows.len(), n)?;
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::input("ragged matrix rows"));
            }
            for (j, &b) in r.iter().enumerate() {
                out.set(i, j, b);
            }
        }
        Ok(out)
    }

    /// Builds an `m x n` matrix from the low `m*n` bits of `code`, row-major,
    /// bit `i*n + j` giving entry `(i, j)`.
    pub fn from_code(m: usize, n: usize, code: u64) -> Result<Self> {
        let mut out = BitMatrix::zeros(m, n)?;
        for i in 0..m {
            for j in 0..n {
                out.set(i, j, code >> (i * n + j) & 1 == 1);
            }
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn row(&self, i: usize) -> &FixedBitSet {
        &self.rows[i]
    }

    /// Rows holding a 1 in column `j`.
    pub fn column(&self, j: usize) -> FixedBitSet {
        let mut c = FixedBitSet::with_capacity(self.rows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.contains(j) {
                c.insert(i);
            }
        }
        c
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix {
            cols: self.rows(),
            rows: (0..self.cols)
                .map(|_| FixedBitSet::with_capacity(self.rows()))
                .collect(),
        };
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.rows[j].insert(i);
            }
        }
        t
    }

    /// Copy of the submatrix on the given rows and columns (need not be consecutive).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<BitMatrix> {
        let mut out = BitMatrix::zeros(rows.len(), cols.len())?;
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        Ok(out)
    }

    pub fn distinct_columns(&self) -> usize {
        (0..self.cols)
            .map(|j| self.column(j))
            .collect::<HashSet<_>>()
            .len()
    }

    /// Whether the 2x2 window with top-left corner `(i, j)` is a corner.
    #[inline]
    pub fn is_corner_at(&self, i: usize, j: usize) -> bool {
        is_corner(
            self.get(i, j),
            self.get(i, j + 1),
            self.get(i + 1, j),
            self.get(i + 1, j + 1),
        )
    }

    pub fn parse(text: &str) -> Result<BitMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header line \"m n\""))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|f| f.parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(hline, "header must be \"m n\""))?;
        let &[m, n] = dims.as_slice() else {
            return Err(Error::parse(hline, "header must be \"m n\""));
        };
        if m == 0 || n == 0 {
            return Err(Error::parse(hline, "matrix dimensions must be positive"));
        }
        let mut out = BitMatrix::zeros(m, n)?;
        let mut i = 0;
        for (line, l) in lines {
            if i == m {
                return Err(Error::parse(line, format!("more than {m} rows")));
            }
            if l.len() != n {
                return Err(Error::parse(
                    line,
                    format!("expected {n} entries, got {}", l.len()),
                ));
            }
            for (j, c) in l.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => out.set(i, j, true),
                    _ => return Err(Error::parse(line, format!("invalid entry {c:?}"))),
                }
            }
            i += 1;
        }
        if i != m {
            return Err(Error::parse(
                hline,
                format!("header declares {m} rows, found {i}"),
            ));
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows(), self.cols);
        for line in self.row_strings() {
            let _ = writeln!(s, "{line}");
        }
        s
    }

    pub fn row_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                (0..self.cols)
                    .map(|j| if r.contains(j) { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }
}

/// 2x2 matrix `[[a, b], [c, d]]` is a corner iff its rows differ and its columns differ.
#[inline]
pub fn is_corner(a: bool, b: bool, c: bool, d: bool) -> bool {
    (a != c || b != d) && (a != b || c != d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub vertical: bool,
    pub horizontal: bool,
    pub mixed: bool,
    pub corner: bool,
}

/// Classifies the consecutive submatrix `M[rows][cols]` by direct comparison of rows and columns.
pub fn classify_submatrix(
    m: &BitMatrix,
    rows: Range<usize>,
    cols: Range<usize>,
) -> Result<Classification> {
    if rows.is_empty() || cols.is_empty() || rows.end > m.rows() || cols.end > m.cols() {
        return Err(Error::input(format!(
            "submatrix {rows:?} x {cols:?} out of range for {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let vertical = rows
        .clone()
        .all(|i| cols.clone().all(|j| m.get(i, j) == m.get(rows.start, j)));
    let horizontal = cols
        .clone()
        .all(|j| rows.clone().all(|i| m.get(i, j) == m.get(i, cols.start)));
    let mixed = !vertical && !horizontal;
    Ok(Classification {
        vertical,
        horizontal,
        mixed,
        corner: mixed && rows.len() == 2 && cols.len() == 2,
    })
}

/// The `(m-1) x (n-1)` indicator of 2x2 windows that are corners.
pub fn corner_matrix(m: &BitMatrix) -> Result<BitMatrix> {
    if m.rows() < 2 || m.cols() < 2 {
        return Err(Error::input(format!(
            "corner matrix needs at least 2x2, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let mut out = BitMatrix::zeros(m.rows() - 1, m.cols() - 1)?;
    for i in 0..m.rows() - 1 {
        for j in 0..m.cols() - 1 {
            if m.is_corner_at(i, j) {
                out.set(i, j, true);
            }
        }
    }
    Ok(out)
}

/// Consecutive row pairs hosting a corner, against the distinct-column bound `2^(p+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CornerRowPairs {
    pub p: usize,
    pub pairs: Vec<usize>,
    #[serde(serialize_with = "crate::constants::ser_biguint")]
    pub column_bound: BigUint,
    pub distinct: usize,
    pub ok: bool,
}

/// A single row has no corners, so `p = 0` there.
pub fn corner_row_pairs(m: &BitMatrix) -> CornerRowPairs {
    let pairs: Vec<usize> = (0..m.rows() - 1)
        .filter(|&i| (0..m.cols().saturating_sub(1)).any(|j| m.is_corner_at(i, j)))
        .collect();
    let p = pairs.len();
    let column_bound = BigUint::from(1u8) << (p + 1);
    let distinct = m.distinct_columns();
    CornerRowPairs {
        p,
        pairs,
        ok: BigUint::from(distinct) <= column_bound,
        column_bound,
        distinct,
    }
}

/// A `(k, l)`-division: `row_cuts` holds the first row of every part but the
/// first, strictly increasing; likewise `col_cuts`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Division {
    pub row_cuts: Vec<usize>,
    pub col_cuts: Vec<usize>,
}

impl Division {
    pub fn row_parts(&self, m: usize) -> Vec<Range<usize>> {
        parts_of(&self.row_cuts, m)
    }

    pub fn col_parts(&self, n: usize) -> Vec<Range<usize>> {
        parts_of(&self.col_cuts, n)
    }

    /// Checks that the cuts describe non-empty consecutive parts covering `m x n`.
    pub fn validate(&self, m: usize, n: usize) -> Result<()> {
        for (cuts, len) in [(&self.row_cuts, m), (&self.col_cuts, n)] {
            let mut prev = 0;
            for &c in cuts {
                if c <= prev || c >= len {
                    return Err(Error::input(format!("bad cut {c} for length {len}")));
                }
                prev = c;
            }
        }
        Ok(())
    }

    pub fn transpose(&self) -> Division {
        Division {
            row_cuts: self.col_cuts.clone(),
            col_cuts: self.row_cuts.clone(),
        }
    }
}

fn parts_of(cuts: &[usize], len: usize) -> Vec<Range<usize>> {
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut start = 0;
    for &c in cuts {
        out.push(start..c);
        start = c;
    }
    out.push(start..len);
    out
}
