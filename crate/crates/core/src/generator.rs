use std::fmt;

use num_traits::Zero;

use crate::matrix::{DenseMatrix, MatrixError};
use crate::ring::{hermitian_inner, HermitianRing};

/// A generator matrix. Builders in [`crate::constructions`] return the
/// standard form `(I_k | X)`; the building-up extension returns a general
/// full-rank matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct GeneratorMatrix<R> {
    m: DenseMatrix<R>,
}

impl<R: HermitianRing> GeneratorMatrix<R> {
    /// `(I_k | x)` for a `k × m` redundancy block `x`.
    pub fn standard(x: &DenseMatrix<R>) -> Self {
        let id = DenseMatrix::identity(x.rows());
        GeneratorMatrix {
            m: id.hstack(x).expect("identity and redundancy share row count"),
        }
    }

    pub fn from_matrix(m: DenseMatrix<R>) -> Self {
        GeneratorMatrix { m }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self, MatrixError> {
        DenseMatrix::from_rows(rows).map(|m| GeneratorMatrix { m })
    }

    /// Number of rows.
    pub fn k(&self) -> usize {
        self.m.rows()
    }

    /// Code length.
    pub fn n(&self) -> usize {
        self.m.cols()
    }

    pub fn matrix(&self) -> &DenseMatrix<R> {
        &self.m
    }

    pub fn row(&self, i: usize) -> &[R] {
        self.m.row(i)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[R]> {
        (0..self.k()).map(move |i| self.m.row(i))
    }

    pub fn is_standard_form(&self) -> bool {
        let k = self.k();
        k <= self.n()
            && (0..k).all(|i| {
                (0..k).all(|j| self.m.get(i, j) == if i == j { R::one() } else { R::zero() })
            })
    }

    /// The block right of the identity, when in standard form.
    pub fn redundancy(&self) -> Option<DenseMatrix<R>> {
        if !self.is_standard_form() {
            return None;
        }
        let k = self.k();
        Some(DenseMatrix::from_fn(k, self.n() - k, |i, j| self.m.get(i, k + j)))
    }

    /// Row-reduce to `(I_k | X)` without permuting columns. Returns `None`
    /// when the leading `k × k` block is not invertible.
    ///
    /// Pivots must be units, which over GF(4)+uGF(4) is also sufficient: an
    /// invertible matrix over a local ring always has a unit in each
    /// pivot column below the current row.
    pub fn to_standard_form(&self) -> Option<Self> {
        let k = self.k();
        if k > self.n() {
            return None;
        }
        let mut rows = self.m.row_vecs();
        for col in 0..k {
            let p = (col..k).find(|&r| rows[r][col].is_unit())?;
            rows.swap(col, p);
            let inv = rows[col][col].inv().expect("pivot is a unit");
            for x in rows[col].iter_mut() {
                *x *= inv;
            }
            for r in 0..k {
                if r == col {
                    continue;
                }
                let f = rows[r][col];
                if f.is_zero() {
                    continue;
                }
                let pivot = rows[col].clone();
                for (x, &p) in rows[r].iter_mut().zip(&pivot) {
                    *x += f.negate() * p;
                }
            }
        }
        Some(GeneratorMatrix {
            m: DenseMatrix::from_rows(rows).expect("rectangular"),
        })
    }

    /// Every pair of rows (self-pairs included) is Hermitian-orthogonal.
    pub fn rows_self_orthogonal(&self) -> bool {
        let k = self.k();
        (0..k).all(|i| (i..k).all(|j| hermitian_inner(self.row(i), self.row(j)).is_zero()))
    }
}

impl<R: HermitianRing> fmt::Debug for GeneratorMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GeneratorMatrix[{}, {}] {:?}", self.n(), self.k(), self.m)
    }
}

/// Rank of a matrix over GF(4) by Gaussian elimination.
pub fn rank_f4(m: &DenseMatrix<crate::ring::F4>) -> usize {
    let mut rows = m.row_vecs();
    let (nr, nc) = m.shape();
    let mut rank = 0;
    for col in 0..nc {
        let Some(p) = (rank..nr).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv().expect("nonzero in a field");
        for x in rows[rank].iter_mut() {
            *x *= inv;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col];
            for (x, &p) in row.iter_mut().zip(&pivot) {
                *x += f * p;
            }
        }
        rank += 1;
        if rank == nr {
            break;
        }
    }
    rank
}
