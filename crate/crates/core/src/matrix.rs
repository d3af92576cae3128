//! Small dense matrices over a [`HermitianRing`].
//!
//! Used for final generator assembly and as the independent dense oracle
//! that the Θ-based condition checks are compared against.

use thiserror::Error;

use crate::ring::HermitianRing;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("ragged rows: expected {expected} columns, row {row} has {found}")]
    Ragged {
        expected: usize,
        row: usize,
        found: usize,
    },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: HermitianRing> DenseMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![R::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, R::one());
        }
        m
    }

    /// The exchange matrix `J_n` (ones on the anti-diagonal).
    pub fn exchange(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, n - 1 - i, R::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(MatrixError::Ragged {
                    expected: cols,
                    row: i,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(DenseMatrix {
            rows: n,
            cols,
            data,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> R {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == R::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] += a * other.get(l, j);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.shape() != other.shape() {
            return Err(MatrixError::DimensionMismatch {
                op: "add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: R) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| s * a).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entry-wise Hermitian conjugation.
    pub fn conj(&self) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// `self · conj(self)ᵀ`.
    pub fn hermitian_gram(&self) -> Self {
        let mut out = Self::zeros(self.rows, self.rows);
        let conj: Vec<R> = self.data.iter().map(|a| a.conj()).collect();
        for i in 0..self.rows {
            let ri = self.row(i);
            for j in 0..self.rows {
                let rj = &conj[j * self.cols..(j + 1) * self.cols];
                let v = ri.iter().zip(rj).map(|(&a, &b)| a * b).sum();
                out.set(i, j, v);
            }
        }
        out
    }

    /// `J_m · self`: reverses the row order.
    pub fn exchange_rows(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(self.rows - 1 - i, j))
    }

    /// `self · J_n`: reverses the column order.
    pub fn exchange_cols(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, self.cols - 1 - j))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self.get(i, j) == if i == j { R::one() } else { R::zero() })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == R::zero())
    }

    /// Assemble a matrix from a grid of equally shaped blocks per row/column.
    pub fn from_blocks(blocks: &[Vec<&DenseMatrix<R>>]) -> Result<Self, MatrixError> {
        let heights: Vec<usize> = blocks.iter().map(|r| r[0].rows).collect();
        let widths: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        for (bi, row) in blocks.iter().enumerate() {
            if row.len() != widths.len() {
                return Err(MatrixError::DimensionMismatch {
                    op: "from_blocks",
                    left: (blocks.len(), widths.len()),
                    right: (bi, row.len()),
                });
            }
            for (bj, b) in row.iter().enumerate() {
                if b.rows != heights[bi] || b.cols != widths[bj] {
                    return Err(MatrixError::DimensionMismatch {
                        op: "from_blocks",
                        left: (heights[bi], widths[bj]),
                        right: b.shape(),
                    });
                }
            }
        }
        let total_rows = heights.iter().sum();
        let total_cols = widths.iter().sum();
        let mut out = Self::zeros(total_rows, total_cols);
        let mut r0 = 0;
        for (bi, row) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        out.set(r0 + i, c0 + j, b.get(i, j));
                    }
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(out)
    }

    /// `(self | other)`.
    pub fn hstack(&self, other: &Self) -> Result<Self, MatrixError> {
        Self::from_blocks(&[vec![self, other]])
    }
}

impl<R: HermitianRing> std::fmt::Debug for DenseMatrix<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let s: String = self.row(i).iter().map(|x| x.symbol()).collect();
            writeln!(f, "  {s}")?;
        }
        write!(f, "]")
    }
}
