//! Monte Carlo level-set volume scaling.
//!
//! The RLCT λ governs the small-`t` scaling of
//! `V(t) = vol{(X,Y) ∈ [0,c]^(MH+HN) : ‖XY − AB‖² ≤ t}`, which behaves
//! like `t^λ` up to `log(1/t)` factors of unknown order. This module
//! estimates V(t) by plain hit-or-miss sampling over the box — every
//! threshold evaluated from one shared sample stream — and fits the
//! log-log slope over the smallest usable decade of thresholds.
//!
//! Sampling is split into fixed-size blocks with seeds derived per block
//! from the master seed, and the per-block hit histograms are merged by
//! commutative addition, so results are bit-identical for a given seed no
//! matter how many worker threads participate.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelDims, TrueStructure};
use crate::rlct::{nmf_rlct_bound, RlctValue};
use crate::seeds::{rng_from, tag};

/// Samples per RNG block; fixed so that the block decomposition (and hence
/// the sampled stream) depends only on the total sample count.
const BLOCK: u64 = 1 << 16;

/// Minimum hits per grid point for it to anchor or join a fit window.
const MIN_HITS: u64 = 100;

/// Minimum number of grid points in a fit window.
const MIN_POINTS: usize = 4;

/// Result of one volume scan: `V(t)` estimates over a threshold grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeScan {
    pub dims: ModelDims,
    pub h0: u32,
    pub box_upper: f64,
    /// Strictly decreasing thresholds.
    pub thresholds: Vec<f64>,
    /// Hit counts per threshold (non-increasing along the grid).
    pub hits: Vec<u64>,
    /// Volume estimates: box volume × hit fraction.
    pub volumes: Vec<f64>,
    /// Binomial standard errors of the volume estimates.
    pub stderrs: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
}

/// Weighted log-log slope fit of a [`VolumeScan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    pub lambda_hat: f64,
    pub stderr: f64,
    /// The (t_lo, t_hi) window actually used.
    pub fit_window: (f64, f64),
    pub r_squared: f64,
    pub points_used: usize,
}

/// Comparison of a fitted slope against the closed-form bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub lambda_hat: f64,
    pub stderr: f64,
    pub bound: RlctValue,
    /// Whether `lambda_hat ≤ bound + 3·stderr`.
    pub consistent: bool,
    /// `bound + 3·stderr − lambda_hat` (positive = comfortably below).
    pub margin: f64,
}

/// Default box upper edge: `2·max(1, max entry of AB)`, which keeps the
/// true parameter interior to the box.
pub fn default_box_upper(dims: &ModelDims, truth: &TrueStructure) -> Result<f64> {
    let ab = truth.mean_matrix(dims.m, dims.n)?;
    Ok(2.0 * ab.max_entry().max(1.0))
}

/// Strictly decreasing log-spaced thresholds: `per_decade` points per
/// decade over `decades` decades, ending at `t_max`.
pub fn log_thresholds(t_max: f64, decades: u32, per_decade: u32) -> Result<Vec<f64>> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Domain(format!("t_max must be positive and finite, got {t_max}")));
    }
    if decades == 0 || per_decade == 0 {
        return Err(Error::Config("need at least one decade and one point per decade".into()));
    }
    let count = decades * per_decade;
    let log_max = t_max.log10();
    Ok((0..=count)
        .map(|i| 10f64.powf(log_max - i as f64 / per_decade as f64))
        .collect())
}

/// Estimates V(t) for every threshold with one uniform sample stream over
/// the box `[0, box_upper]^(MH+HN)`.
pub fn estimate_volume(
    dims: &ModelDims,
    truth: &TrueStructure,
    box_upper: f64,
    thresholds: &[f64],
    samples: u64,
    seed: u64,
) -> Result<VolumeScan> {
    truth.validate_against(dims)?;
    if dims.h == 0 {
        return Err(Error::Dims("volume probe requires H >= 1".into()));
    }
    if !(box_upper > 0.0 && box_upper.is_finite()) {
        return Err(Error::Domain(format!("box upper edge must be positive, got {box_upper}")));
    }
    if thresholds.is_empty() {
        return Err(Error::Config("threshold grid is empty".into()));
    }
    if thresholds.iter().any(|t| !t.is_finite() || *t <= 0.0) {
        return Err(Error::Config("thresholds must be positive and finite".into()));
    }
    if thresholds.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Config("thresholds must be strictly decreasing".into()));
    }
    if samples == 0 {
        return Err(Error::Config("need a positive sample count".into()));
    }
    let ab = truth.mean_matrix(dims.m, dims.n)?;
    let c = box_upper;
    let reachable_max = c * c * dims.h as f64;
    if ab.max_entry() >= reachable_max {
        return Err(Error::Domain(format!(
            "AB entry {} is unreachable inside the box (max XY entry is {reachable_max}); \
             increase the box upper edge",
            ab.max_entry()
        )));
    }

    let (m, n, h) = (dims.m as usize, dims.n as usize, dims.h as usize);
    let t_count = thresholds.len();
    let blocks = samples.div_ceil(BLOCK);

    // Per block: histogram over "number of thresholds ≥ K". Merged by
    // elementwise addition (commutative), so worker count cannot matter.
    let histogram = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng_from(seed, &[tag::VOLUME, b]);
            let in_block = (samples - b * BLOCK).min(BLOCK);
            let mut x = vec![0.0f64; m * h];
            let mut y = vec![0.0f64; h * n];
            let mut bucket = vec![0u64; t_count + 1];
            for _ in 0..in_block {
                for v in x.iter_mut() {
                    *v = c * rng.random::<f64>();
                }
                for v in y.iter_mut() {
                    *v = c * rng.random::<f64>();
                }
                let mut k = 0.0;
                for i in 0..m {
                    for j in 0..n {
                        let mut mu = 0.0;
                        for l in 0..h {
                            mu += x[i * h + l] * y[l * n + j];
                        }
                        let d = mu - ab.get(i, j);
                        k += d * d;
                    }
                }
                // Thresholds are decreasing: the sample is a hit for the
                // first `p` of them.
                let p = thresholds.partition_point(|&t| t >= k);
                bucket[p] += 1;
            }
            bucket
        })
        .reduce(
            || vec![0u64; t_count + 1],
            |mut acc, b| {
                for (a, v) in acc.iter_mut().zip(b) {
                    *a += v;
                }
                acc
            },
        );

    // hits[i] = number of samples with K ≤ thresholds[i] = suffix sum.
    let mut hits = vec![0u64; t_count];
    let mut acc = 0u64;
    for i in (0..t_count).rev() {
        acc += histogram[i + 1];
        hits[i] = acc;
    }

    let box_vol = c.powi((m * h + h * n) as i32);
    if !box_vol.is_finite() {
        return Err(Error::Domain("box volume overflows f64; reduce dimensions or box".into()));
    }
    let s = samples as f64;
    let volumes: Vec<f64> = hits.iter().map(|&hct| box_vol * hct as f64 / s).collect();
    let stderrs: Vec<f64> = hits
        .iter()
        .map(|&hct| {
            let p = hct as f64 / s;
            box_vol * (p * (1.0 - p) / s).sqrt()
        })
        .collect();

    Ok(VolumeScan {
        dims: *dims,
        h0: truth.h0,
        box_upper: c,
        thresholds: thresholds.to_vec(),
        hits,
        volumes,
        stderrs,
        samples,
        seed,
    })
}

/// Fits `log V` against `log t` by weighted least squares over the smallest
/// one-decade window of grid points in which every point has at least 100
/// hits and at least 4 points participate.
pub fn fit_lambda(scan: &VolumeScan) -> Result<SlopeFit> {
    let t_count = scan.thresholds.len();
    // Ascending-t order: reversed grid indices.
    let asc: Vec<usize> = (0..t_count).rev().collect();
    let mut window: Option<Vec<usize>> = None;
    for (pos, &start) in asc.iter().enumerate() {
        let t_lo = scan.thresholds[start];
        if scan.hits[start] < MIN_HITS {
            continue;
        }
        let mut idxs = Vec::new();
        let mut all_good = true;
        for &i in &asc[pos..] {
            if scan.thresholds[i] > t_lo * 10.0 * (1.0 + 1e-12) {
                break;
            }
            if scan.hits[i] < MIN_HITS {
                all_good = false;
                break;
            }
            idxs.push(i);
        }
        if all_good && idxs.len() >= MIN_POINTS {
            window = Some(idxs);
            break;
        }
    }
    let idxs = window.ok_or_else(|| {
        Error::Insufficient(format!(
            "no one-decade window has >= {MIN_POINTS} grid points with >= {MIN_HITS} hits each \
             (max hits seen: {}); increase the sample budget or shift the threshold grid to \
             larger t",
            scan.hits.first().copied().unwrap_or(0)
        ))
    })?;

    // Weighted least squares of y = ln V on x = ln t with binomial weights
    // w = h/(1−p), i.e. inverse variance of ln V.
    let s = scan.samples as f64;
    let pts: Vec<(f64, f64, f64)> = idxs
        .iter()
        .map(|&i| {
            let p = (scan.hits[i] as f64 / s).min(1.0 - 0.5 / s);
            let w = scan.hits[i] as f64 / (1.0 - p);
            (scan.thresholds[i].ln(), scan.volumes[i].ln(), w)
        })
        .collect();
    let wsum: f64 = pts.iter().map(|p| p.2).sum();
    let xbar = pts.iter().map(|p| p.0 * p.2).sum::<f64>() / wsum;
    let ybar = pts.iter().map(|p| p.1 * p.2).sum::<f64>() / wsum;
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - xbar) * (p.0 - xbar)).sum();
    let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - xbar) * (p.1 - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ssr: f64 = pts
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            p.2 * r * r
        })
        .sum();
    let sst: f64 = pts.iter().map(|p| p.2 * (p.1 - ybar) * (p.1 - ybar)).sum();
    let dof = (pts.len() - 2) as f64;
    let stderr = (ssr / dof / sxx).sqrt();
    let r_squared = if sst > 0.0 { 1.0 - ssr / sst } else { 1.0 };

    Ok(SlopeFit {
        lambda_hat: slope,
        stderr,
        fit_window: (scan.thresholds[idxs[0]], scan.thresholds[*idxs.last().unwrap()]),
        r_squared,
        points_used: pts.len(),
    })
}

/// Compares a fitted slope with the closed-form bound for the same model.
pub fn check_bound(dims: &ModelDims, truth: &TrueStructure, fit: &SlopeFit) -> Result<BoundCheck> {
    let bound = nmf_rlct_bound(dims, truth)?;
    let limit = bound.to_f64() + 3.0 * fit.stderr;
    Ok(BoundCheck {
        lambda_hat: fit.lambda_hat,
        stderr: fit.stderr,
        bound,
        consistent: fit.lambda_hat <= limit,
        margin: limit - fit.lambda_hat,
    })
}
