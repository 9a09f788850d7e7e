//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Rank over ℚ by fraction-free (Bareiss) elimination.
///
/// Every intermediate entry is a minor of the input, so the integers stay
/// exact without ever forming fractions.
pub fn rank(m: &IntMatrix) -> usize {
    if m.nnz() == 0 {
        return 0;
    }
    // eliminate along the shorter side
    let work = if m.nrows() > m.ncols() { m.transpose() } else { m.clone() };
    let mut a: Vec<Vec<BigInt>> = work
        .to_dense()
        .into_iter()
        .filter(|row| row.iter().any(|&v| v != 0))
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect();
    let nrows = a.len();
    let ncols = work.ncols();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in r + 1..nrows {
            if a[i][c].is_zero() {
                // the fraction-free update still has to rescale this row
                for j in c + 1..ncols {
                    if !a[i][j].is_zero() {
                        a[i][j] = &a[i][j] * &pivot / &prev;
                    }
                }
                continue;
            }
            let factor = a[i][c].clone();
            for j in c + 1..ncols {
                let v = &a[i][j] * &pivot - &a[r][j] * &factor;
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Dense matrix of rationals, used for exact kernels and projectors.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub data: Vec<Vec<BigRational>>,
}

impl RatMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        RatMatrix {
            nrows,
            ncols,
            data: vec![vec![BigRational::zero(); ncols]; nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigRational::one();
        }
        m
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for (r, c, v) in m.iter() {
            out.data[r][c] = BigRational::from_integer(BigInt::from(v));
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.ncols, self.nrows);
        for r in 0..self.nrows {
            for c in 0..self.ncols {
                out.data[c][r] = self.data[r][c].clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "shape mismatch in product");
        let mut out = Self::zeros(self.nrows, other.ncols);
        for r in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self.data[r][k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.ncols {
                    let b = &other.data[k][c];
                    if !b.is_zero() {
                        out.data[r][c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for r in 0..self.nrows {
            for c in 0..self.ncols {
                out.data[r][c] -= &other.data[r][c];
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|row| row.iter().all(Zero::is_zero))
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        use num_traits::ToPrimitive;
        nalgebra::DMatrix::from_fn(self.nrows, self.ncols, |r, c| {
            self.data[r][c].to_f64().unwrap_or(f64::NAN)
        })
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == self.nrows {
                break;
            }
            let Some(p) = (r..self.nrows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = self.data[r][c].recip();
            for v in self.data[r].iter_mut() {
                *v *= &inv;
            }
            for i in 0..self.nrows {
                if i != r && !self.data[i][c].is_zero() {
                    let f = self.data[i][c].clone();
                    for j in 0..self.ncols {
                        let delta = &f * &self.data[r][j];
                        self.data[i][j] -= delta;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of the null space, one column per free variable.
    pub fn kernel_basis(&self) -> RatMatrix {
        let mut reduced = self.clone();
        let pivots = reduced.rref();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zeros(self.ncols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.data[f][k] = BigRational::one();
            for (row, &p) in pivots.iter().enumerate() {
                basis.data[p][k] = -reduced.data[row][f].clone();
            }
        }
        basis
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.data[r][c] = self.data[r][c].clone();
            }
            aug.data[r][n + r] = BigRational::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out.data[r][c] = aug.data[r][n + c].clone();
            }
        }
        Some(out)
    }

    /// Orthogonal projector onto the null space: K (KᵀK)⁻¹ Kᵀ.
    pub fn kernel_projector(&self) -> RatMatrix {
        let k = self.kernel_basis();
        if k.ncols == 0 {
            return Self::zeros(self.ncols, self.ncols);
        }
        let kt = k.transpose();
        let gram_inv = kt.mul(&k).inverse().expect("kernel basis is independent");
        k.mul(&gram_inv).mul(&kt)
    }

    pub fn max_abs(&self) -> BigRational {
        self.data
            .iter()
            .flatten()
            .map(|v| v.abs())
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Independent oracle: rank from f64 Gaussian elimination with full
    // pivoting, fine for tiny integer matrices.
    fn float_rank(rows: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| v as f64).collect())
            .collect();
        let (n, m) = (a.len(), a.first().map_or(0, Vec::len));
        let mut rank = 0;
        for c in 0..m {
            let Some(p) = (rank..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())) else {
                break;
            };
            if a[p][c].abs() < 1e-9 {
                continue;
            }
            a.swap(rank, p);
            for i in rank + 1..n {
                let f = a[i][c] / a[rank][c];
                for j in c..m {
                    a[i][j] -= f * a[rank][j];
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_of_known_matrices() {
        assert_eq!(rank(&IntMatrix::zeros(3, 4)), 0);
        assert_eq!(rank(&IntMatrix::identity(5)), 5);
        let m = IntMatrix::from_dense(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        // torus second boundary: two equal columns
        let q2 = IntMatrix::from_dense(&[vec![1, 1], vec![1, 1], vec![-1, -1]]);
        assert_eq!(rank(&q2), 1);
    }

    proptest! {
        #[test]
        fn rank_matches_float_oracle(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..6)) {
            let m = IntMatrix::from_dense(&rows);
            prop_assert_eq!(rank(&m), float_rank(&rows));
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn kernel_basis_is_annihilated(rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 4), 1..5)) {
            let m = IntMatrix::from_dense(&rows);
            let q = RatMatrix::from_int(&m);
            let k = q.kernel_basis();
            prop_assert_eq!(k.ncols, 4 - rank(&m));
            prop_assert!(q.mul(&k).is_zero());
            let p = q.kernel_projector();
            prop_assert_eq!(p.mul(&p), p.clone());
            prop_assert_eq!(p.transpose(), p.clone());
            prop_assert!(q.mul(&p).is_zero());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = RatMatrix::from_int(&IntMatrix::from_dense(&[vec![2, 1], vec![1, 1]]));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMatrix::identity(2));
        let singular = RatMatrix::from_int(&IntMatrix::from_dense(&[vec![1, 2], vec![2, 4]]));
        assert!(singular.inverse().is_none());
    }
}
