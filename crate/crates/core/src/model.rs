//! Model-size and ground-truth descriptors shared across the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Mat, NonnegMatrix};

/// Size of an NMF model: observations are M×N, the factorization is
/// X (M×H) times Y (H×N).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDims {
    pub m: u32,
    pub n: u32,
    pub h: u32,
}

impl ModelDims {
    /// Validates M ≥ 1 and N ≥ 1 (H = 0 is allowed: the zero model).
    pub fn new(m: u32, n: u32, h: u32) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Dims(format!("M and N must be at least 1, got M={m}, N={n}")));
        }
        Ok(Self { m, n, h })
    }

    pub fn min_mn(&self) -> u32 {
        self.m.min(self.n)
    }

    /// Number of free parameters H(M+N).
    pub fn param_count(&self) -> u64 {
        self.h as u64 * (self.m as u64 + self.n as u64)
    }
}

/// Ground truth for experiments: the true inner dimension H0 (the
/// nonnegative rank of AB) and, when needed for data generation or volume
/// probing, the true factors themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrueStructure {
    pub h0: u32,
    pub a: Option<NonnegMatrix>,
    pub b: Option<NonnegMatrix>,
}

impl TrueStructure {
    /// Truth known only by rank (formulas need nothing else).
    pub fn rank_only(h0: u32) -> Self {
        Self { h0, a: None, b: None }
    }

    /// Truth with explicit factors. Requires strictly positive entries and
    /// consistent inner dimensions; `h0 = 0` must use [`Self::rank_only`].
    pub fn with_factors(h0: u32, a: NonnegMatrix, b: NonnegMatrix) -> Result<Self> {
        if h0 == 0 {
            return Err(Error::Dims("H0 = 0 admits no factor matrices; use rank_only(0)".into()));
        }
        if a.cols() != h0 as usize || b.rows() != h0 as usize {
            return Err(Error::Shape(format!(
                "factors must be Mx{h0} and {h0}xN, got {}x{} and {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        a.require_strictly_positive("true factor A")?;
        b.require_strictly_positive("true factor B")?;
        Ok(Self { h0, a: Some(a), b: Some(b) })
    }

    /// The canonical experiment truth: A and B all-ones, so AB ≡ H0.
    pub fn ones(m: u32, n: u32, h0: u32) -> Result<Self> {
        if h0 == 0 {
            return Ok(Self::rank_only(0));
        }
        Self::with_factors(
            h0,
            NonnegMatrix::ones(m as usize, h0 as usize)?,
            NonnegMatrix::ones(h0 as usize, n as usize)?,
        )
    }

    /// Checks H0 against model dimensions: H0 ≤ H and H0 ≤ min(M,N), plus
    /// factor shapes when factors are present.
    pub fn validate_against(&self, dims: &ModelDims) -> Result<()> {
        if self.h0 > dims.h {
            return Err(Error::Dims(format!("H0 = {} exceeds H = {}", self.h0, dims.h)));
        }
        if self.h0 > dims.min_mn() {
            return Err(Error::Dims(format!(
                "H0 = {} exceeds min(M,N) = {}",
                self.h0,
                dims.min_mn()
            )));
        }
        if let (Some(a), Some(b)) = (&self.a, &self.b) {
            if a.rows() != dims.m as usize || b.cols() != dims.n as usize {
                return Err(Error::Shape(format!(
                    "factors are {}x{} and {}x{}, inconsistent with M={}, N={}",
                    a.rows(),
                    a.cols(),
                    b.rows(),
                    b.cols(),
                    dims.m,
                    dims.n
                )));
            }
        }
        Ok(())
    }

    /// The true mean matrix AB as an M×N matrix. For H0 = 0 this is the
    /// zero matrix; otherwise both factors must be present.
    pub fn mean_matrix(&self, m: u32, n: u32) -> Result<Mat> {
        if self.h0 == 0 {
            return Mat::zeros(m as usize, n as usize);
        }
        let (a, b) = match (&self.a, &self.b) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Config(
                    "truth has H0 > 0 but no factor matrices; supply A and B".into(),
                ))
            }
        };
        let ab = a.as_mat().matmul(b.as_mat())?;
        if ab.rows() != m as usize || ab.cols() != n as usize {
            return Err(Error::Shape(format!(
                "AB is {}x{}, expected {m}x{n}",
                ab.rows(),
                ab.cols()
            )));
        }
        Ok(ab)
    }
}

/// Ground truth for reduced rank regression: the (unconstrained) rank of
/// the true parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RrrTruth {
    pub r: u32,
}

impl RrrTruth {
    pub fn new(r: u32) -> Self {
        Self { r }
    }
}
