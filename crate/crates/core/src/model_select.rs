//! Free-energy estimation by thermodynamic integration, the λ-from-free-
//! energy regression, and sBIC-style rank selection driven by the closed-
//! form RLCT bound.
//!
//! The free energy F = −log ∫ φ(θ) Π p(W_i|θ) dθ is estimated as
//! F̂ = −∫₀¹ E_β[log likelihood] dβ, where E_β is the expectation under the
//! tempered posterior ∝ φ·(likelihood)^β; the integral uses the trapezoid
//! rule on a fixed inverse-temperature ladder and tempered Metropolis
//! chains for each rung. Centering F̂ by the empirical truth log-likelihood
//! exposes the λ·log n term, recovered by least squares across n.

use rayon::prelude::*;
use serde::Serialize;

use crate::bayes::{
    run_tempered_chain, true_log_likelihood, ChainConfig, Dataset, PriorBox, SuffStats,
};
use crate::error::{Error, Result};
use crate::model::{ModelDims, TrueStructure};
use crate::rlct::{nmf_rlct_bound, RlctValue};
use crate::seeds::{derive_seed, tag};

/// How a free energy estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FreeEnergyMethod {
    ThermodynamicIntegration,
}

/// Estimated free energy of one dataset under one model width.
#[derive(Debug, Clone, Serialize)]
pub struct FreeEnergyEstimate {
    pub n: usize,
    pub f_value: f64,
    pub method: FreeEnergyMethod,
    /// Number of ladder points (rungs) used.
    pub ladder_size: usize,
    /// Standard error propagated from per-rung across-chain variation;
    /// 0 only in degenerate cases (point prior, empty data).
    pub stderr: f64,
    pub seed: u64,
    /// Per-rung posterior expectations of the log likelihood, in ladder
    /// order (diagnostic).
    pub rung_expectations: Vec<f64>,
}

/// Default number of trapezoid intervals in the inverse-temperature ladder.
pub const DEFAULT_LADDER_INTERVALS: usize = 16;

/// β_k = (k/K)² for k = 0..=K: quadratic spacing concentrates rungs near
/// β = 0 where the integrand varies most.
pub fn quadratic_ladder(intervals: usize) -> Vec<f64> {
    let k = intervals.max(1) as f64;
    (0..=intervals.max(1)).map(|i| (i as f64 / k).powi(2)).collect()
}

fn validate_ladder(ladder: &[f64]) -> Result<()> {
    if ladder.len() < 10 {
        return Err(Error::Config(format!(
            "temperature ladder needs at least 10 rungs, got {}",
            ladder.len()
        )));
    }
    if ladder[0] != 0.0 || *ladder.last().unwrap() != 1.0 {
        return Err(Error::Config("temperature ladder must run from 0 to 1".into()));
    }
    if ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("temperature ladder must be strictly increasing".into()));
    }
    Ok(())
}

/// Trapezoid quadrature weights for an irregular grid.
fn trapezoid_weights(grid: &[f64]) -> Vec<f64> {
    let k = grid.len();
    let mut w = vec![0.0; k];
    for i in 0..k - 1 {
        let half = 0.5 * (grid[i + 1] - grid[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    w
}

/// Estimates the free energy of `dataset` under model width `h` and the
/// given box prior by thermodynamic integration over `ladder`.
pub fn estimate_free_energy(
    dataset: &Dataset,
    h: u32,
    prior: &PriorBox,
    ladder: &[f64],
    chain_cfg: &ChainConfig,
    seed: u64,
) -> Result<FreeEnergyEstimate> {
    validate_ladder(ladder)?;
    chain_cfg.validate()?;
    let stats = SuffStats::new(dataset)?;
    // Per rung: chain means of the untempered log likelihood, plus the
    // spread across chains for the error bar.
    let per_rung: Vec<(f64, f64)> = ladder
        .par_iter()
        .enumerate()
        .map(|(k, &beta)| -> Result<(f64, f64)> {
            let mut chain_means = Vec::with_capacity(chain_cfg.chains);
            for c in 0..chain_cfg.chains {
                let run = run_tempered_chain(
                    &stats,
                    h,
                    prior,
                    chain_cfg,
                    beta,
                    derive_seed(seed, &[tag::FREE_ENERGY, k as u64, c as u64]),
                )?;
                let mean = run.log_liks.iter().sum::<f64>() / run.log_liks.len() as f64;
                chain_means.push(mean);
            }
            let c = chain_means.len() as f64;
            let mean = chain_means.iter().sum::<f64>() / c;
            let se = if chain_means.len() < 2 {
                0.0
            } else {
                let var = chain_means.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                    / (c - 1.0);
                (var / c).sqrt()
            };
            Ok((mean, se))
        })
        .collect::<Result<Vec<_>>>()?;
    let weights = trapezoid_weights(ladder);
    let f_value: f64 =
        -weights.iter().zip(&per_rung).map(|(w, (m, _))| w * m).sum::<f64>();
    let var: f64 = weights.iter().zip(&per_rung).map(|(w, (_, se))| (w * se) * (w * se)).sum();
    Ok(FreeEnergyEstimate {
        n: dataset.n(),
        f_value,
        method: FreeEnergyMethod::ThermodynamicIntegration,
        ladder_size: ladder.len(),
        stderr: var.sqrt(),
        seed,
        rung_expectations: per_rung.iter().map(|(m, _)| *m).collect(),
    })
}

/// A free energy centered by the empirical truth log-likelihood:
/// value = F̂ + Σ_i log q(W_i). Its expectation grows like λ·log n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CenteredFreeEnergy {
    pub n: usize,
    pub value: f64,
}

/// Centers an estimate against the truth that generated its dataset.
pub fn centered_free_energy(
    est: &FreeEnergyEstimate,
    dataset: &Dataset,
    truth: &TrueStructure,
) -> Result<CenteredFreeEnergy> {
    Ok(CenteredFreeEnergy { n: est.n, value: est.f_value + true_log_likelihood(dataset, truth)? })
}

/// Least-squares slope of centered free energy against log n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaSlope {
    pub slope: f64,
    pub stderr: f64,
    pub points_used: usize,
}

/// Fits λ as the slope of centered free energy vs log n. Needs at least 3
/// distinct n values; repeated n values are fine and tighten the fit.
pub fn fit_lambda_from_free_energy(points: &[CenteredFreeEnergy]) -> Result<LambdaSlope> {
    let mut ns: Vec<usize> = points.iter().map(|p| p.n).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 3 {
        return Err(Error::Insufficient(format!(
            "lambda regression needs free energies at >= 3 distinct n, got {}",
            ns.len()
        )));
    }
    if points.iter().any(|p| p.n == 0 || !p.value.is_finite()) {
        return Err(Error::Domain("centered free energies must be finite with n >= 1".into()));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.value).collect();
    let xbar = xs.iter().sum::<f64>() / k;
    let ybar = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let dof = (points.len() - 2) as f64;
    let stderr = (ssr / dof / sxx).sqrt();
    Ok(LambdaSlope { slope, stderr, points_used: points.len() })
}

/// One candidate model width with its sBIC ingredients.
#[derive(Debug, Clone, Serialize)]
pub struct SbicCandidate {
    pub h: u32,
    /// λ̄(M, N, H, Ĥ0) actually used in the score.
    pub lambda_bar: RlctValue,
    /// Best log likelihood visited by the posterior sampler.
    pub best_log_lik: f64,
    /// −best_log_lik + λ̄·log n.
    pub score: f64,
    /// Transparency: scores under every feasible Ĥ0 (0 ..= min(H, M, N)),
    /// as (h0, score) pairs; the headline score is the last entry.
    pub scores_by_h0: Vec<(u32, f64)>,
}

/// Rank-selection report across candidate widths.
#[derive(Debug, Clone, Serialize)]
pub struct SbicReport {
    pub n: usize,
    pub seed: u64,
    pub candidates: Vec<SbicCandidate>,
    pub selected_h: u32,
}

impl SbicReport {
    /// CSV summary (one line per candidate) for plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("h,score,lambda_bar,best_log_lik,selected\n");
        for c in &self.candidates {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                c.h,
                c.score,
                c.lambda_bar.value.to_f64(),
                c.best_log_lik,
                (c.h == self.selected_h) as u8
            ));
        }
        out
    }
}

/// Minimal score wins; ties break to the smallest H.
pub(crate) fn pick_selected(candidates: &[SbicCandidate]) -> u32 {
    let mut best = &candidates[0];
    for c in &candidates[1..] {
        if c.score < best.score || (c.score == best.score && c.h < best.h) {
            best = c;
        }
    }
    best.h
}

/// Scores each candidate width H with
/// score(H) = −(best sampled log likelihood) + λ̄(M, N, H, Ĥ0)·log n and
/// selects the minimizer. The unknown true rank is replaced by the working
/// estimate Ĥ0 = H, capped at min(M, N) to stay inside the bound's domain.
pub fn sbic_select(
    dataset: &Dataset,
    candidates: &[u32],
    prior: &PriorBox,
    chain_cfg: &ChainConfig,
    seed: u64,
) -> Result<SbicReport> {
    if candidates.is_empty() {
        return Err(Error::Config("sBIC needs a nonempty candidate list".into()));
    }
    if candidates.contains(&0) {
        return Err(Error::Config("candidate widths must all be >= 1".into()));
    }
    if dataset.n() == 0 {
        return Err(Error::Insufficient("sBIC needs at least one observation".into()));
    }
    chain_cfg.validate()?;
    let stats = SuffStats::new(dataset)?;
    let (m, n_cols) = (dataset.rows, dataset.cols);
    let ln_n = (dataset.n() as f64).ln();
    let scored: Vec<SbicCandidate> = candidates
        .par_iter()
        .map(|&h| -> Result<SbicCandidate> {
            let mut best = f64::NEG_INFINITY;
            for c in 0..chain_cfg.chains {
                let run = run_tempered_chain(
                    &stats,
                    h,
                    prior,
                    chain_cfg,
                    1.0,
                    derive_seed(seed, &[tag::SBIC, h as u64, c as u64]),
                )?;
                best = best.max(run.best_log_lik);
            }
            let dims = ModelDims::new(m, n_cols, h)?;
            let h0_cap = h.min(dims.min_mn());
            let mut scores_by_h0 = Vec::with_capacity(h0_cap as usize + 1);
            let mut headline: Option<RlctValue> = None;
            for h0 in 0..=h0_cap {
                let lam = nmf_rlct_bound(&dims, &TrueStructure::rank_only(h0))?;
                scores_by_h0.push((h0, -best + lam.value.to_f64() * ln_n));
                if h0 == h0_cap {
                    headline = Some(lam);
                }
            }
            let lambda_bar = headline.expect("h0 loop always runs");
            let score = scores_by_h0.last().expect("nonempty").1;
            Ok(SbicCandidate { h, lambda_bar, best_log_lik: best, score, scores_by_h0 })
        })
        .collect::<Result<Vec<_>>>()?;
    let selected_h = pick_selected(&scored);
    Ok(SbicReport { n: dataset.n(), seed, candidates: scored, selected_h })
}
