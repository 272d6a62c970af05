//! Small dense row-major matrices.
//!
//! The matrices in this crate are tiny (a handful of rows and columns), so a
//! flat `Vec<f64>` with inline indexing beats any general linear-algebra
//! dependency. Two types are exposed: [`Mat`] for arbitrary real matrices
//! (observations may be negative under the Gaussian family) and
//! [`NonnegMatrix`] for data that carries a nonnegativity invariant
//! (parameters, means, validated CSV input).

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense row-major matrix of `f64`, at least 1×1, all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    /// All-zero matrix. Errors when either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::filled(rows, cols, 0.0)
    }

    /// Constant matrix.
    pub fn filled(rows: usize, cols: usize, value: f64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dims(format!("matrix must be at least 1x1, got {rows}x{cols}")));
        }
        if !value.is_finite() {
            return Err(Error::Domain(format!("matrix fill value {value} is not finite")));
        }
        Ok(Self { rows, cols, data: vec![value; rows * cols] })
    }

    /// All-ones matrix.
    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        Self::filled(rows, cols, 1.0)
    }

    /// Builds from nested rows; rows must be nonempty, rectangular, finite.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::Dims("matrix must have at least one row and one column".into()));
        }
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    cols
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::Domain(format!(
                        "entry ({},{}) = {v} is not finite",
                        i + 1,
                        j + 1
                    )));
                }
                data.push(v);
            }
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Rows as nested vectors (for serialization and CSV emission).
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Mat) -> Result<Mat> {
        let mut out = Mat::zeros(self.rows, rhs.cols)?;
        self.matmul_into(rhs, &mut out)?;
        Ok(out)
    }

    /// Matrix product written into a preallocated output (hot paths).
    pub fn matmul_into(&self, rhs: &Mat, out: &mut Mat) -> Result<()> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if out.rows != self.rows || out.cols != rhs.cols {
            return Err(Error::Shape(format!(
                "output is {}x{}, expected {}x{}",
                out.rows, out.cols, self.rows, rhs.cols
            )));
        }
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        for i in 0..n {
            let lhs_row = &self.data[i * k..(i + 1) * k];
            let out_row = &mut out.data[i * m..(i + 1) * m];
            out_row.fill(0.0);
            for (l, &a) in lhs_row.iter().enumerate() {
                let rhs_row = &rhs.data[l * m..(l + 1) * m];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(())
    }

    /// Squared Frobenius norm.
    pub fn frob_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    /// Squared Frobenius distance `‖self − other‖²`.
    pub fn frob_sq_diff(&self, other: &Mat) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum())
    }

    /// Elementwise inner product `Σ self_ij · other_ij`.
    pub fn dot(&self, other: &Mat) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    /// Sum of all entries.
    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Minimum entry.
    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Maximum entry.
    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn check_same_shape(&self, other: &Mat) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "expected {}x{}, got {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|j| format!("{}", self.get(i, j))).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(deserializer)?;
        Mat::from_rows(&rows).map_err(D::Error::custom)
    }
}

/// A [`Mat`] whose entries are all `≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonnegMatrix(Mat);

impl NonnegMatrix {
    /// Validates nonnegativity of every entry.
    pub fn new(mat: Mat) -> Result<Self> {
        for i in 0..mat.rows() {
            for j in 0..mat.cols() {
                let v = mat.get(i, j);
                if v < 0.0 {
                    return Err(Error::Domain(format!(
                        "entry ({},{}) = {v} is negative",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self(mat))
    }

    /// Builds from nested rows with the nonnegativity check.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(Mat::from_rows(rows)?)
    }

    /// All-ones matrix (trivially nonnegative).
    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        Ok(Self(Mat::ones(rows, cols)?))
    }

    pub fn as_mat(&self) -> &Mat {
        &self.0
    }

    pub fn into_mat(self) -> Mat {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    /// Errors unless every entry is strictly positive (required of
    /// Poisson/exponential means and of true factors A, B).
    pub fn require_strictly_positive(&self, what: &str) -> Result<()> {
        if self.0.min_entry() <= 0.0 {
            return Err(Error::Domain(format!(
                "{what} must have strictly positive entries (min is {})",
                self.0.min_entry()
            )));
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for NonnegMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        NonnegMatrix::new(Mat::deserialize(deserializer)?).map_err(D::Error::custom)
    }
}
