//! Kullback–Leibler divergences for the three observation families.
//!
//! Between unit-variance Gaussians the KL is ½(a−b)²; between Poisson
//! distributions with means a, b it is the I-divergence
//! `K(a,b) = b − a + a·log(a/b)`; between exponentials it is the
//! Itakura–Saito divergence `K(a,b) = log b − log a − 1 + a/b`. Matrix
//! divergences sum the scalar divergence over entries. All three scalar
//! kernels reduce to `f(t) = t − log(1+t)` in a shifted variable, which is
//! evaluated in a cancellation-free form so that the sandwich ratios
//! `K/(b−a)²` stay accurate arbitrarily close to the diagonal.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;

/// Observation family of the NMF model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gaussian,
    Poisson,
    Exponential,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Gaussian => "gaussian",
            Family::Poisson => "poisson",
            Family::Exponential => "exponential",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(Family::Gaussian),
            "poisson" => Ok(Family::Poisson),
            "exponential" | "exp" => Ok(Family::Exponential),
            other => Err(Error::Config(format!(
                "unknown family '{other}' (expected gaussian, poisson, or exponential)"
            ))),
        }
    }
}

/// `f(t) = t − log(1+t)`, the common convex kernel of the Poisson and
/// exponential divergences. Uses the Maclaurin series near 0 where the
/// direct form loses all significant digits.
fn t_minus_log1p(t: f64) -> f64 {
    debug_assert!(t > -1.0);
    if t.abs() < 1e-4 {
        // f(t) = t²/2 − t³/3 + t⁴/4 − ...; the first omitted term is
        // t⁵/5 < 2e-21, far below f64 resolution relative to t²/2.
        t * t * (0.5 + t * (-1.0 / 3.0 + t * 0.25))
    } else {
        t - t.ln_1p()
    }
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Domain(format!("{name} must be a positive finite real, got {v}")));
    }
    Ok(())
}

/// Scalar Gaussian KL between unit-variance normals with means a, b.
pub fn kl_gaussian_scalar(a: f64, b: f64) -> f64 {
    0.5 * (a - b) * (a - b)
}

/// Scalar Poisson KL (I-divergence): `b − a + a·log(a/b)`.
pub fn kl_poisson_scalar(a: f64, b: f64) -> Result<f64> {
    require_positive("Poisson mean a", a)?;
    require_positive("Poisson mean b", b)?;
    // b − a + a·log(a/b) = a·f((b−a)/a) with f(t) = t − log(1+t).
    Ok(a * t_minus_log1p((b - a) / a))
}

/// Scalar exponential KL (Itakura–Saito): `log b − log a − 1 + a/b`.
pub fn kl_exponential_scalar(a: f64, b: f64) -> Result<f64> {
    require_positive("exponential mean a", a)?;
    require_positive("exponential mean b", b)?;
    // log(b/a) − 1 + a/b = f((a−b)/b).
    Ok(t_minus_log1p((a - b) / b))
}

/// Scalar KL for any family.
pub fn kl_scalar(family: Family, a: f64, b: f64) -> Result<f64> {
    match family {
        Family::Gaussian => {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::Domain(format!("Gaussian means must be finite, got {a}, {b}")));
            }
            Ok(kl_gaussian_scalar(a, b))
        }
        Family::Poisson => kl_poisson_scalar(a, b),
        Family::Exponential => kl_exponential_scalar(a, b),
    }
}

/// Matrix Gaussian KL: ½‖A−B‖².
pub fn kl_gaussian(mean_a: &NonnegMatrix, mean_b: &NonnegMatrix) -> Result<f64> {
    Ok(0.5 * mean_a.as_mat().frob_sq_diff(mean_b.as_mat())?)
}

/// Matrix KL: the elementwise sum of the scalar family divergence.
pub fn kl_matrix(family: Family, mean_a: &NonnegMatrix, mean_b: &NonnegMatrix) -> Result<f64> {
    if mean_a.rows() != mean_b.rows() || mean_a.cols() != mean_b.cols() {
        return Err(Error::Shape(format!(
            "mean matrices are {}x{} and {}x{}",
            mean_a.rows(),
            mean_a.cols(),
            mean_b.rows(),
            mean_b.cols()
        )));
    }
    let mut total = 0.0;
    for i in 0..mean_a.rows() {
        for j in 0..mean_a.cols() {
            total += kl_scalar(family, mean_a.get(i, j), mean_b.get(i, j))?;
        }
    }
    Ok(total)
}

/// Empirical sandwich constants: the min and max of K(a,b)/(b−a)² over a
/// 200×200 grid on [eps, c]², excluding the diagonal. A finite positive
/// pair witnesses the square-error equivalence of the family divergence on
/// that box.
pub fn sandwich_constants(family: Family, eps: f64, c: f64) -> Result<(f64, f64)> {
    if !(eps > 0.0 && c.is_finite() && eps < c) {
        return Err(Error::Domain(format!("degenerate box [{eps}, {c}]")));
    }
    const GRID: usize = 200;
    let step = (c - eps) / (GRID as f64 - 1.0);
    let points: Vec<f64> = (0..GRID).map(|i| eps + i as f64 * step).collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, &a) in points.iter().enumerate() {
        for (j, &b) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let ratio = kl_scalar(family, a, b)? / ((b - a) * (b - a));
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    Ok((lo, hi))
}
