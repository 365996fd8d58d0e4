use super::NumericsError;

/// Dense row-major matrix of `f64`.
///
/// Invariants: `values.len() == rows * cols` and every entry is finite.
/// Constructors reject non-finite input; arithmetic on finite inputs stays
/// finite at the magnitudes this crate works with.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl Matrix {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.values[i * n + i] = 1.0;
        }
        m
    }

    /// Build from a row-major value vector.
    pub fn from_vec(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self, NumericsError> {
        if values.len() != rows * cols {
            return Err(NumericsError::Domain(format!(
                "value vector has length {} but {rows}x{cols} needs {}",
                values.len(),
                rows * cols
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(NumericsError::NonFinite(format!(
                "entry at flat index {pos} is {}",
                values[pos]
            )));
        }
        Ok(Matrix { rows, cols, values })
    }

    /// Build from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, NumericsError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut values = Vec::with_capacity(r * c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(NumericsError::Domain(format!(
                    "row {i} has length {} but row 0 has length {c}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Matrix::from_vec(r, c, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.values[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.values[i * self.cols + j] = v;
    }

    /// Borrow row `i` as a slice.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        debug_assert!(i < self.rows);
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Standard matrix product.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix, NumericsError> {
        if self.cols != other.rows {
            return Err(NumericsError::ShapeMismatch {
                op: "matmul",
                lhs: self.shape(),
                rhs: other.shape(),
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        // i-k-j order keeps the inner loop contiguous in both operands.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.values[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.values[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out.values[i * other.cols..(i + 1) * other.cols];
                for j in 0..other.cols {
                    orow[j] += a * brow[j];
                }
            }
        }
        debug_assert!(out.values.iter().all(|v| v.is_finite()));
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.values[j * self.rows + i] = self.values[i * self.cols + j];
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, NumericsError> {
        if self.shape() != other.shape() {
            return Err(NumericsError::ShapeMismatch {
                op: "add",
                lhs: self.shape(),
                rhs: other.shape(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            values,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, NumericsError> {
        if self.shape() != other.shape() {
            return Err(NumericsError::ShapeMismatch {
                op: "sub",
                lhs: self.shape(),
                rhs: other.shape(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            values,
        })
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest absolute asymmetry `|a_ij - a_ji|`; zero for non-square input.
    pub fn max_asymmetry(&self) -> f64 {
        if self.rows != self.cols {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

/// Euclidean distance between two equal-length slices.
pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngState;

    /// Independent check: plain triple loop in j-inner order.
    fn matmul_oracle(a: &Matrix, b: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut acc = 0.0;
                for k in 0..a.cols() {
                    acc += a.get(i, k) * b.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    fn random_matrix(rng: &mut RngState, rows: usize, cols: usize) -> Matrix {
        let values = rng.uniform(-1.0, 1.0, rows * cols).unwrap();
        Matrix::from_vec(rows, cols, values).unwrap()
    }

    #[test]
    fn matmul_identity_is_noop() {
        let mut rng = RngState::new(7);
        let m = random_matrix(&mut rng, 3, 4);
        let id = Matrix::identity(3);
        assert_eq!(id.matmul(&m).unwrap(), m);
    }

    #[test]
    fn matmul_hand_checked_2x2() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = Matrix::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let c = a.matmul(&b).unwrap();
        assert_eq!(c.as_slice(), &[2.0, 4.0]);
    }

    #[test]
    fn matmul_matches_triple_loop_oracle() {
        let mut rng = RngState::new(11);
        let a = random_matrix(&mut rng, 5, 7);
        let b = random_matrix(&mut rng, 7, 3);
        let got = a.matmul(&b).unwrap();
        let want = matmul_oracle(&a, &b);
        for (g, w) in got.as_slice().iter().zip(want.as_slice()) {
            assert!((g - w).abs() < 1e-12, "got {g}, oracle {w}");
        }
    }

    #[test]
    fn matmul_shape_error_names_both_shapes() {
        let a = Matrix::zeros(2, 3);
        let b = Matrix::zeros(2, 3);
        let err = a.matmul(&b).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("2x3"), "message was: {msg}");
    }

    #[test]
    fn matmul_associative_on_random_triples() {
        let mut rng = RngState::new(23);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 4, 3);
            let b = random_matrix(&mut rng, 3, 5);
            let c = random_matrix(&mut rng, 5, 2);
            let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
            let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
            let diff = left.sub(&right).unwrap().frobenius_norm();
            assert!(diff < 1e-9, "associativity residual {diff}");
        }
    }

    #[test]
    fn from_vec_rejects_non_finite() {
        let err = Matrix::from_vec(1, 2, vec![1.0, f64::NAN]).unwrap_err();
        assert!(matches!(err, NumericsError::NonFinite(_)));
    }

    #[test]
    fn from_rows_rejects_ragged_input() {
        let err = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).unwrap_err();
        assert!(matches!(err, NumericsError::Domain(_)));
    }
}
