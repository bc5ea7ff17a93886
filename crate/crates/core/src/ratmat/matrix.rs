use std::fmt;

use super::rational::Rational;

/// Dense row-major matrix over [`Rational`].
///
/// Zero-row and zero-column shapes are legal; they represent maps to or from
/// the zero space and every operation is total on them.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Shape and invertibility errors for matrix operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixError {
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    NotSquare {
        rows: usize,
        cols: usize,
    },
    Singular {
        size: usize,
    },
    RaggedRow {
        row: usize,
    },
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::ShapeMismatch { op, left, right } => write!(
                f,
                "ShapeMismatch: {op} on {}x{} and {}x{}",
                left.0, left.1, right.0, right.1
            ),
            MatrixError::NotSquare { rows, cols } => {
                write!(f, "NotSquare: {rows}x{cols} matrix")
            }
            MatrixError::Singular { size } => {
                write!(f, "SingularMatrix: {size}x{size} matrix has no inverse")
            }
            MatrixError::RaggedRow { row } => {
                write!(f, "RaggedRow: row {row} has a different length")
            }
        }
    }
}

impl std::error::Error for MatrixError {}

/// Result of a reduced-row-echelon computation.
///
/// The contract is `transform * (input) = reduced` exactly, with `transform`
/// square and invertible and `reduced` in canonical form: every pivot is 1 and
/// is the only nonzero entry of its column, pivot columns strictly increase,
/// and zero rows sit at the bottom. `ops` counts the entry slots touched by
/// elementary row operations (swap, scale, add-multiple), a machine-checkable
/// proxy for the arithmetic work of the elimination.
pub struct RrefResult {
    pub reduced: Matrix,
    pub transform: Matrix,
    pub rank: usize,
    pub ops: u64,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows. All rows must have equal length; an empty
    /// row list yields the 0x0 matrix (use [`Matrix::zero`] for 0xN shapes).
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MatrixError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(MatrixError::RaggedRow { row: i });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    /// Single-column matrix holding `v`.
    pub fn from_column(v: Vec<Rational>) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of range"
        );
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of range"
        );
        self.data[r * self.cols + c] = v;
    }

    /// Copy of column `c` as a vector.
    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Submatrix made of the last `k` columns.
    pub fn last_columns(&self, k: usize) -> Matrix {
        assert!(k <= self.cols, "cannot take {k} of {} columns", self.cols);
        let mut out = Matrix::zero(self.rows, k);
        for r in 0..self.rows {
            for c in 0..k {
                out.set(r, c, self.get(r, self.cols - k + c).clone());
            }
        }
        out
    }

    /// Matrix-vector product. Panics on length mismatch.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert!(
            v.len() == self.cols,
            "vector length {} does not match {} columns",
            v.len(),
            self.cols
        );
        let mut out = vec![Rational::zero(); self.rows];
        for (r, slot) in out.iter_mut().enumerate() {
            for (c, entry) in v.iter().enumerate() {
                let a = self.get(r, c);
                if !a.is_zero() && !entry.is_zero() {
                    *slot += &(a * entry);
                }
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::ShapeMismatch {
                op: "matmul",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = Matrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] += &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hconcat(&self, rhs: &Matrix) -> Result<Matrix, MatrixError> {
        if self.rows != rhs.rows {
            return Err(MatrixError::ShapeMismatch {
                op: "hconcat",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = Matrix::zero(self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..rhs.cols {
                out.set(r, self.cols + c, rhs.get(r, c).clone());
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Scales row `row` by `factor`, starting at column `from`.
    fn scale_row_from(&mut self, row: usize, from: usize, factor: &Rational) {
        for c in from..self.cols {
            let idx = row * self.cols + c;
            if !self.data[idx].is_zero() {
                self.data[idx] *= factor;
            }
        }
    }

    /// Subtracts `factor` times row `source` from row `target`, starting at
    /// column `from`.
    fn sub_scaled_row_from(
        &mut self,
        target: usize,
        source: usize,
        from: usize,
        factor: &Rational,
    ) {
        debug_assert!(target != source);
        for c in from..self.cols {
            let s = &self.data[source * self.cols + c];
            if s.is_zero() {
                continue;
            }
            let delta = factor * s;
            let idx = target * self.cols + c;
            self.data[idx] -= &delta;
        }
    }

    /// Canonical Gauss-Jordan reduction.
    ///
    /// Scans columns left to right; for each column takes the first unused
    /// row (top-down) with a nonzero entry, swaps it into pivot position,
    /// normalizes it to 1, and eliminates the column in every other row.
    /// Pivot rows are assigned top-down, so zero rows end at the bottom and
    /// the output is the unique canonical reduced row echelon form.
    pub fn rref(&self) -> RrefResult {
        let m = self.rows;
        let n = self.cols;
        let mut reduced = self.clone();
        let mut transform = Matrix::identity(m);
        let mut ops: u64 = 0;
        let mut next_pivot = 0usize;
        for col in 0..n {
            if next_pivot == m {
                break;
            }
            let Some(src) = (next_pivot..m).find(|&i| !reduced.get(i, col).is_zero()) else {
                continue;
            };
            // Each elementary row operation acts on the reduced matrix (only
            // columns >= col can be nonzero there) and on the transform; the
            // counter charges the touched width of both.
            let width = (n - col + m) as u64;
            if src != next_pivot {
                reduced.swap_rows(src, next_pivot);
                transform.swap_rows(src, next_pivot);
                ops += width;
            }
            let pivot = reduced.get(next_pivot, col).clone();
            if !pivot.is_one() {
                let inv = pivot.recip().expect("pivot entry is nonzero");
                reduced.scale_row_from(next_pivot, col, &inv);
                transform.scale_row_from(next_pivot, 0, &inv);
                ops += width;
            }
            for i in 0..m {
                if i == next_pivot {
                    continue;
                }
                let factor = reduced.get(i, col).clone();
                if factor.is_zero() {
                    continue;
                }
                reduced.sub_scaled_row_from(i, next_pivot, col, &factor);
                transform.sub_scaled_row_from(i, next_pivot, 0, &factor);
                ops += width;
            }
            next_pivot += 1;
        }
        RrefResult {
            reduced,
            transform,
            rank: next_pivot,
            ops,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Exact inverse of a square full-rank matrix.
    pub fn inverse(&self) -> Result<Matrix, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let res = self.rref();
        if res.rank < self.rows {
            return Err(MatrixError::Singular { size: self.rows });
        }
        // transform * self = identity, so transform is the inverse.
        Ok(res.transform)
    }

    /// Columns completing the column space of `self` to a basis of the full
    /// target space.
    ///
    /// With `E * self = R` from [`Matrix::rref`], the column space of `self`
    /// is carried by `E` onto the span of the first `rank` coordinate
    /// vectors, so the last `rows - rank` columns of `E^-1` span a
    /// complement. Returns a `rows x (rows - rank)` matrix; empty when
    /// `self` is surjective.
    pub fn complement_columns(&self) -> Matrix {
        self.complement_columns_counted().0
    }

    /// Same as [`Matrix::complement_columns`], also returning the operation
    /// count of the two eliminations it performs.
    pub fn complement_columns_counted(&self) -> (Matrix, u64) {
        let res = self.rref();
        // transform is invertible, so reducing it yields its exact inverse.
        let inv_res = res.transform.rref();
        debug_assert_eq!(inv_res.rank, self.rows);
        let complement = inv_res.transform.last_columns(self.rows - res.rank);
        (complement, res.ops + inv_res.ops)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}
