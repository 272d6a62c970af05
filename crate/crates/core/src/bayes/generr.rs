//! Monte Carlo estimation of the Bayes generalization error
//! G = E_q[log q(W) − log p(W | data)].
//!
//! Each replication draws a fresh dataset from the truth, runs independent
//! posterior chains, pools their draws into a predictive distribution, and
//! averages log q(W) − log_predictive(W) over fresh test draws W ~ q.
//! Replications and chains use disjoint deterministic RNG substreams, so
//! results are reproducible for a fixed master seed at any worker count.

use rayon::prelude::*;
use serde::Serialize;

use super::{
    generate_dataset, log_density_mean, run_tempered_chain, sample_observation, ChainConfig,
    PredictiveCache, PriorBox, SuffStats,
};
use crate::divergence::Family;
use crate::error::{Error, Result};
use crate::model::{ModelDims, TrueStructure};
use crate::seeds::{derive_seed, rng_from, tag};

/// Experiment description for one generalization-error estimate.
#[derive(Debug, Clone)]
pub struct GenErrConfig {
    pub family: Family,
    pub truth: TrueStructure,
    pub rows: u32,
    pub cols: u32,
    /// Model width H (number of factor columns fitted).
    pub h: u32,
    pub prior: PriorBox,
    /// Observations per replication.
    pub n: usize,
    pub replications: usize,
    pub chain: ChainConfig,
    /// Test draws W ~ q per replication; 10⁴ is the experiment default.
    pub mc_test_draws: usize,
}

impl GenErrConfig {
    pub fn validate(&self) -> Result<()> {
        self.chain.validate()?;
        self.truth.validate_against(&ModelDims::new(self.rows, self.cols, self.h)?)?;
        if self.h == 0 {
            return Err(Error::Dims("model width H must be at least 1".into()));
        }
        if self.replications == 0 {
            return Err(Error::Config("need at least one replication".into()));
        }
        if self.mc_test_draws == 0 {
            return Err(Error::Config("need at least one test draw".into()));
        }
        if self.n == 0 {
            return Err(Error::Config("generalization error needs n >= 1 observations".into()));
        }
        if matches!(self.family, Family::Poisson | Family::Exponential) && self.prior.lower <= 0.0
        {
            return Err(Error::Config(format!(
                "{} family needs a strictly positive prior lower edge",
                self.family
            )));
        }
        Ok(())
    }
}

/// Aggregated generalization-error estimate.
#[derive(Debug, Clone, Serialize)]
pub struct GEstimate {
    /// Mean of per-replication G estimates.
    pub g_mean: f64,
    /// Standard error of `g_mean` across replications (0 when only one).
    pub stderr: f64,
    pub n: usize,
    pub replications: usize,
    pub posterior_samples_per_chain: usize,
    pub seed: u64,
    /// Per-replication estimates, in replication order.
    pub g_values: Vec<f64>,
}

pub(crate) fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let r = values.len() as f64;
    let mean = values.iter().sum::<f64>() / r;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (r - 1.0);
    (mean, (var / r).sqrt())
}

/// Estimates G for the configured experiment. Replications run in parallel;
/// the result depends only on `(cfg, seed)`.
pub fn estimate_generalization_error(cfg: &GenErrConfig, seed: u64) -> Result<GEstimate> {
    cfg.validate()?;
    let ab = cfg.truth.mean_matrix(cfg.rows, cfg.cols)?;
    let g_values: Vec<f64> = (0..cfg.replications)
        .into_par_iter()
        .map(|rep| -> Result<f64> {
            let rep_u = rep as u64;
            let data_seed = derive_seed(seed, &[tag::DATASET, rep_u]);
            let ds =
                generate_dataset(cfg.family, &cfg.truth, cfg.rows, cfg.cols, cfg.n, data_seed)?;
            let stats = SuffStats::new(&ds)?;
            let mut pooled =
                Vec::with_capacity(cfg.chain.chains * cfg.chain.retained);
            for c in 0..cfg.chain.chains {
                let chain_seed = derive_seed(seed, &[tag::CHAIN, rep_u, c as u64]);
                let run =
                    run_tempered_chain(&stats, cfg.h, &cfg.prior, &cfg.chain, 1.0, chain_seed)?;
                pooled.extend(run.samples);
            }
            let cache = PredictiveCache::new(cfg.family, &pooled)?;
            let mut rng = rng_from(seed, &[tag::TEST_DRAWS, rep_u]);
            let mut acc = 0.0;
            for _ in 0..cfg.mc_test_draws {
                let w = sample_observation(cfg.family, &ab, false, &mut rng)?;
                acc += log_density_mean(cfg.family, &w, &ab)? - cache.log_predictive(&w)?;
            }
            Ok(acc / cfg.mc_test_draws as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (g_mean, stderr) = mean_and_stderr(&g_values);
    Ok(GEstimate {
        g_mean,
        stderr,
        n: cfg.n,
        replications: cfg.replications,
        posterior_samples_per_chain: cfg.chain.retained,
        seed,
        g_values,
    })
}
