//! Exact rational linear algebra: an incremental sparse echelon form and a
//! small dense matrix type.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Returns the value as an `i64` when it is an integer that fits.
pub fn q_to_i64(x: &Q) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.to_integer()).ok()
}

/// A sparse vector keyed by column index. Zero entries are never stored.
pub type SparseRow = BTreeMap<usize, Q>;

pub fn add_scaled(row: &mut SparseRow, other: &SparseRow, factor: &Q) {
    for (k, v) in other {
        let entry = row.entry(*k).or_insert_with(Q::zero);
        *entry += v * factor;
        if entry.is_zero() {
            row.remove(k);
        }
    }
}

/// Row echelon form built one row at a time. Each stored row is normalised
/// so that its smallest column carries a 1, and no two rows share that column.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut start = 0usize;
        loop {
            let hit = row
                .range(start..)
                .map(|(k, _)| *k)
                .find(|k| self.pivots.contains_key(k));
            let Some(k) = hit else { break };
            let factor = -row[&k].clone();
            add_scaled(&mut row, &self.pivots[&k], &factor);
            start = k + 1;
        }
        row
    }

    /// Adds a row; returns whether it was independent of the rows so far.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = self.reduce(row);
        let Some((&lead, lead_val)) = row.iter().next() else {
            return false;
        };
        let inv = lead_val.recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        self.pivots.insert(lead, row);
        true
    }

    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row.clone()).is_empty()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }
}

/// Rank of a family of sparse rows.
pub fn sparse_rank<I: IntoIterator<Item = SparseRow>>(rows: I) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Solves a sparse linear system. Each equation is a row over unknowns
/// `0..n` together with its right-hand side. Free unknowns are set to zero.
pub fn solve_sparse(n: usize, equations: Vec<(SparseRow, Q)>) -> Option<Vec<Q>> {
    let rhs_col = n;
    let mut e = Echelon::new();
    for (mut row, b) in equations {
        if let Some(k) = row.keys().next_back() {
            assert!(*k < n, "unknown index out of range");
        }
        if !b.is_zero() {
            row.insert(rhs_col, b);
        }
        e.insert(row);
    }
    if e.pivots.contains_key(&rhs_col) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (&p, row) in e.pivots.iter().rev() {
        let mut val = row.get(&rhs_col).cloned().unwrap_or_else(Q::zero);
        for (&k, v) in row.range(p + 1..) {
            if k < n {
                val -= v * &x[k];
            }
        }
        x[p] = val;
    }
    Some(x)
}

/// Dense exact matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

/// Serialised as a list of rows of rational strings such as `"-1/2"`.
impl serde::Serialize for QMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|r| (0..self.cols).map(|c| self[(r, c)].to_string()).collect()).collect();
        rows.serialize(s)
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = q(*v);
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_skew(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..=i).all(|j| self[(i, j)] == -self[(j, i)].clone()))
    }

    pub fn row_sparse(&self, r: usize) -> SparseRow {
        (0..self.cols)
            .filter(|&c| !self[(r, c)].is_zero())
            .map(|c| (c, self[(r, c)].clone()))
            .collect()
    }

    pub fn rank(&self) -> usize {
        sparse_rank((0..self.rows).map(|r| self.row_sparse(r)))
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = a[(col, col)].recip();
            for c in 0..n {
                a[(col, c)] *= &p;
                inv[(col, c)] *= &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for c in 0..n {
                    let da = &a[(col, c)] * &f;
                    a[(r, c)] -= da;
                    let di = &inv[(col, c)] * &f;
                    inv[(r, c)] -= di;
                }
            }
        }
        Some(inv)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Entries as integers, panicking on non-integral values.
    pub fn to_i64(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| q_to_i64(&self[(r, c)]).expect("non-integral entry"))
                    .collect()
            })
            .collect()
    }

    pub fn abs_max(&self) -> Q {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_rows() {
        let m = QMatrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let row = |v: &[(usize, i64)]| v.iter().map(|(k, x)| (*k, q(*x))).collect::<SparseRow>();
        let sol = solve_sparse(2, vec![(row(&[(0, 1), (1, 1)]), q(3)), (row(&[(0, 1), (1, -1)]), q(1))])
            .unwrap();
        assert_eq!(sol, vec![q(2), q(1)]);
        assert!(solve_sparse(1, vec![(row(&[(0, 1)]), q(1)), (row(&[(0, 2)]), q(3))]).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let m = QMatrix::from_i64(&[vec![2, 1], vec![7, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(2));
        assert!(QMatrix::from_i64(&[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }
}
