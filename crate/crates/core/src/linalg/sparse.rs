use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

/// Sparse integer matrix in compressed row form.
///
/// Rows are kept sorted by column with no stored zeros, so structural
/// equality is matrix equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

/// One nonzero entry, as exported in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Triplet {
    pub row: usize,
    pub col: usize,
    pub value: i64,
}

impl IntMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        IntMatrix {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix {
            nrows: n,
            ncols: n,
            rows: (0..n).map(|i| vec![(i, 1)]).collect(),
        }
    }

    pub fn diagonal(values: &[i64]) -> Self {
        let mut m = IntMatrix::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            if v != 0 {
                m.rows[i].push((i, v));
            }
        }
        m
    }

    /// Matrix of a function between finite sets: column `c` has a single 1 in
    /// row `map[c]`.
    pub fn from_function(map: &[usize], nrows: usize) -> Self {
        let mut m = IntMatrix::zeros(nrows, map.len());
        for (c, &r) in map.iter().enumerate() {
            assert!(r < nrows, "function value {r} out of range {nrows}");
            m.rows[r].push((c, 1));
        }
        m
    }

    /// Duplicate positions are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, entries: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); nrows];
        for (r, c, v) in entries {
            assert!(r < nrows && c < ncols, "entry ({r},{c}) outside {nrows}x{ncols}");
            *acc[r].entry(c).or_insert(0) += v;
        }
        IntMatrix {
            nrows,
            ncols,
            rows: acc
                .into_iter()
                .map(|row| row.into_iter().filter(|&(_, v)| v != 0).collect())
                .collect(),
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        Self::from_triplets(
            nrows,
            ncols,
            rows.iter()
                .enumerate()
                .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v))),
        )
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, i64)] {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        let row = &self.rows[r];
        match row.binary_search_by_key(&c, |&(col, _)| col) {
            Ok(k) => row[k].1,
            Err(_) => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn is_diagonal(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(r, row)| row.iter().all(|&(c, _)| c == r))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn diag(&self) -> Vec<i64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    pub fn triplets(&self) -> Vec<Triplet> {
        self.iter()
            .map(|(row, col, value)| Triplet { row, col, value })
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.ncols];
        for (r, c, v) in self.iter() {
            rows[c].push((r, v));
        }
        IntMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            rows,
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return IntMatrix::zeros(self.nrows, self.ncols);
        }
        IntMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|&(c, v)| (c, v * k)).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1)
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sum");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
                    let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
                    let (c, v) = if take_a {
                        i += 1;
                        a[i - 1]
                    } else if take_b {
                        j += 1;
                        (b[j - 1].0, sign * b[j - 1].1)
                    } else {
                        i += 1;
                        j += 1;
                        (a[i - 1].0, a[i - 1].1 + sign * b[j - 1].1)
                    };
                    if v != 0 {
                        out.push((c, v));
                    }
                }
                out
            })
            .collect();
        IntMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "shape mismatch in product");
        let mut acc = vec![0i64; other.ncols];
        let mut marked = vec![false; other.ncols];
        let mut touched = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                for &(k, a) in row {
                    for &(c, b) in &other.rows[k] {
                        if !marked[c] {
                            marked[c] = true;
                            touched.push(c);
                        }
                        acc[c] += a * b;
                    }
                }
                touched.sort_unstable();
                let out = touched
                    .iter()
                    .filter_map(|&c| {
                        let v = std::mem::take(&mut acc[c]);
                        marked[c] = false;
                        (v != 0).then_some((c, v))
                    })
                    .collect();
                touched.clear();
                out
            })
            .collect();
        IntMatrix {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        }
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.ncols);
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(c, a)| a * v[c]).sum())
            .collect()
    }

    /// Submatrix on the given row and column positions, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_pos = vec![usize::MAX; self.ncols];
        for (k, &c) in cols.iter().enumerate() {
            col_pos[c] = k;
        }
        let out_rows = rows
            .iter()
            .map(|&r| {
                let mut row: Vec<(usize, i64)> = self.rows[r]
                    .iter()
                    .filter(|&&(c, _)| col_pos[c] != usize::MAX)
                    .map(|&(c, v)| (col_pos[c], v))
                    .collect();
                row.sort_unstable_by_key(|&(c, _)| c);
                row
            })
            .collect();
        IntMatrix {
            nrows: rows.len(),
            ncols: cols.len(),
            rows: out_rows,
        }
    }

    /// Block matrix with the given blocks on the diagonal.
    pub fn block_diagonal(blocks: &[&IntMatrix]) -> Self {
        let nrows = blocks.iter().map(|b| b.nrows).sum();
        let ncols = blocks.iter().map(|b| b.ncols).sum();
        let mut entries = Vec::new();
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            entries.extend(b.iter().map(|(r, c, v)| (r + r0, c + c0, v)));
            r0 += b.nrows;
            c0 += b.ncols;
        }
        Self::from_triplets(nrows, ncols, entries)
    }

    /// Places `block` at offset `(r0, c0)` inside a zero matrix of the given shape.
    pub fn embed(&self, nrows: usize, ncols: usize, r0: usize, c0: usize) -> Self {
        Self::from_triplets(nrows, ncols, self.iter().map(|(r, c, v)| (r + r0, c + c0, v)))
    }

    pub fn max_abs(&self) -> i64 {
        self.iter().map(|(_, _, v)| v.abs()).max().unwrap_or(0)
    }

    /// Largest absolute row sum.
    pub fn inf_norm(&self) -> i64 {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(_, v)| v.abs()).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.ncols]; self.nrows];
        for (r, c, v) in self.iter() {
            out[r][c] = v;
        }
        out
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.iter() {
            m[(r, c)] = v as f64;
        }
        m
    }

    /// Every column holds exactly one entry and it equals 1.
    pub fn is_function_matrix(&self) -> bool {
        let mut seen = vec![0usize; self.ncols];
        for (_, c, v) in self.iter() {
            if v != 1 {
                return false;
            }
            seen[c] += 1;
        }
        seen.iter().all(|&k| k == 1)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.nrows, self.ncols)?;
        if self.nrows <= 16 && self.ncols <= 16 {
            for row in self.to_dense() {
                writeln!(f, "  {row:?}")?;
            }
        } else {
            writeln!(f, "  {} nonzeros", self.nnz())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        let m = b.first().map_or(0, Vec::len);
        let k = b.len();
        let mut out = vec![vec![0; m]; n];
        for i in 0..n {
            for j in 0..m {
                out[i][j] = (0..k).map(|t| a[i][t] * b[t][j]).sum();
            }
        }
        out
    }

    fn small_matrix(r: usize, c: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-2i64..=2, c), r)
    }

    proptest! {
        #[test]
        fn product_matches_dense(a in small_matrix(4, 3), b in small_matrix(3, 5)) {
            let p = IntMatrix::from_dense(&a).mul(&IntMatrix::from_dense(&b));
            prop_assert_eq!(p.to_dense(), dense_mul(&a, &b));
        }

        #[test]
        fn sum_and_difference_cancel(a in small_matrix(3, 4), b in small_matrix(3, 4)) {
            let (a, b) = (IntMatrix::from_dense(&a), IntMatrix::from_dense(&b));
            prop_assert_eq!(a.add(&b).sub(&b), a.clone());
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn transpose_reverses_products(a in small_matrix(3, 4), b in small_matrix(4, 2)) {
            let (a, b) = (IntMatrix::from_dense(&a), IntMatrix::from_dense(&b));
            prop_assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
            prop_assert_eq!(a.transpose().transpose(), a);
        }
    }

    #[test]
    fn cancelling_products_store_no_zeros() {
        let a = IntMatrix::from_dense(&[vec![1, 1]]);
        let b = IntMatrix::from_dense(&[vec![1], vec![-1]]);
        let p = a.mul(&b);
        assert!(p.is_zero());
        assert_eq!(p.nnz(), 0);
    }

    #[test]
    fn function_matrix_has_one_entry_per_column() {
        let m = IntMatrix::from_function(&[1, 0, 1], 2);
        assert!(m.is_function_matrix());
        assert_eq!(m.to_dense(), vec![vec![0, 1, 0], vec![1, 0, 1]]);
        assert!(!m.transpose().is_function_matrix());
    }

    #[test]
    fn select_reorders() {
        let m = IntMatrix::from_dense(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(m.select(&[1, 0], &[1]).to_dense(), vec![vec![4], vec![2]]);
    }
}
