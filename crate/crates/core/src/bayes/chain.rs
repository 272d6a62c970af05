//! Random-walk Metropolis over the box prior, with optional likelihood
//! tempering for thermodynamic integration.
//!
//! Proposals perturb every coordinate of (X, Y) with an isotropic Gaussian
//! step and reflect at the box walls, so the proposal is symmetric and the
//! prior never vetoes a move. The step size adapts multiplicatively toward
//! a 0.3 acceptance rate during burn-in only; the post-burn-in kernel is a
//! fixed, valid Metropolis kernel.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{Dataset, ParamPoint, PriorBox, SuffStats};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::seeds::rng_from;

/// Knobs for one chain. `retained` counts kept draws after thinning, so a
/// chain runs `burn_in + retained * thinning` iterations total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub chains: usize,
    pub burn_in: usize,
    pub retained: usize,
    pub thinning: usize,
    /// Proposal standard deviation before adaptation.
    pub initial_step: f64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self { chains: 4, burn_in: 5000, retained: 2000, thinning: 5, initial_step: 0.25 }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.chains == 0 || self.retained == 0 || self.thinning == 0 {
            return Err(Error::Config(format!(
                "chains, retained, and thinning must all be positive, got {self:?}"
            )));
        }
        if !(self.initial_step.is_finite() && self.initial_step > 0.0) {
            return Err(Error::Config(format!(
                "initial step size must be positive, got {}",
                self.initial_step
            )));
        }
        Ok(())
    }

    pub fn steps_per_chain(&self) -> usize {
        self.burn_in + self.retained * self.thinning
    }
}

/// Output of one chain.
#[derive(Debug, Clone)]
pub struct ChainRun {
    /// Thinned post-burn-in draws, `retained` of them.
    pub samples: Vec<ParamPoint>,
    /// Log likelihood (untempered) at each retained draw.
    pub log_liks: Vec<f64>,
    /// Post-burn-in acceptance rate.
    pub acceptance_rate: f64,
    /// Step size after adaptation froze.
    pub final_step: f64,
    /// Highest untempered log likelihood seen at any evaluated point,
    /// including rejected proposals.
    pub best_log_lik: f64,
}

const TARGET_ACCEPT: f64 = 0.3;

fn reflect(v: f64, lo: f64, hi: f64) -> f64 {
    let width = hi - lo;
    if width <= 0.0 {
        return lo;
    }
    // Fold into [lo, lo + 2w) then mirror the upper half.
    let mut t = (v - lo).rem_euclid(2.0 * width);
    if t > width {
        t = 2.0 * width - t;
    }
    lo + t
}

/// Runs one tempered chain at inverse temperature `beta` against
/// precomputed sufficient statistics. `beta = 1` is the posterior,
/// `beta = 0` the prior.
pub fn run_tempered_chain(
    stats: &SuffStats,
    h: u32,
    prior: &PriorBox,
    cfg: &ChainConfig,
    beta: f64,
    seed: u64,
) -> Result<ChainRun> {
    cfg.validate()?;
    if h == 0 {
        return Err(Error::Dims("chain needs at least one factor column (H >= 1)".into()));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Config(format!("inverse temperature {beta} outside [0, 1]")));
    }
    let (m, n, h) = (stats.rows as usize, stats.cols as usize, h as usize);
    let (lo, hi) = (prior.lower, prior.upper);
    let width = prior.width();
    let mut rng = rng_from(seed, &[]);

    // Uniform start inside the box (the box point itself when degenerate).
    let mut cur_x = Mat::filled(m, h, lo)?;
    let mut cur_y = Mat::filled(h, n, lo)?;
    if width > 0.0 {
        for v in cur_x.data_mut().iter_mut().chain(cur_y.data_mut()) {
            *v = lo + width * rng.random::<f64>();
        }
    }
    let mut prop_x = cur_x.clone();
    let mut prop_y = cur_y.clone();
    let mut mu = Mat::zeros(m, n)?;
    cur_x.matmul_into(&cur_y, &mut mu)?;
    let mut cur_l = stats.log_lik_mean(&mu);
    let mut best = cur_l;

    let mut step = cfg.initial_step;
    let step_max = 10.0 * width.max(1.0);
    let total = cfg.steps_per_chain();
    let mut samples = Vec::with_capacity(cfg.retained);
    let mut log_liks = Vec::with_capacity(cfg.retained);
    let mut accepted_post = 0usize;
    let mut proposed_post = 0usize;

    for t in 0..total {
        let accepted = if width > 0.0 {
            for (p, c) in prop_x
                .data_mut()
                .iter_mut()
                .chain(prop_y.data_mut())
                .zip(cur_x.data().iter().chain(cur_y.data()))
            {
                let z: f64 = rng.sample(StandardNormal);
                *p = reflect(c + step * z, lo, hi);
            }
            prop_x.matmul_into(&prop_y, &mut mu)?;
            let prop_l = stats.log_lik_mean(&mu);
            if prop_l > best {
                best = prop_l;
            }
            let delta = beta * (prop_l - cur_l);
            let accept = delta >= 0.0 || rng.random::<f64>().ln() < delta;
            if accept {
                std::mem::swap(&mut cur_x, &mut prop_x);
                std::mem::swap(&mut cur_y, &mut prop_y);
                cur_l = prop_l;
            }
            accept
        } else {
            // Point prior: the chain cannot move.
            true
        };

        if t < cfg.burn_in {
            if width > 0.0 {
                // Robbins-Monro on log step size, decaying gain.
                let gain = (t as f64 + 1.0).powf(-0.6);
                let dir = if accepted { 1.0 - TARGET_ACCEPT } else { -TARGET_ACCEPT };
                step = (step * (gain * dir).exp()).clamp(1e-8, step_max);
            }
        } else {
            proposed_post += 1;
            accepted_post += accepted as usize;
            if (t - cfg.burn_in + 1).is_multiple_of(cfg.thinning) {
                samples.push(ParamPoint { x: cur_x.clone(), y: cur_y.clone() });
                log_liks.push(cur_l);
            }
        }
    }

    Ok(ChainRun {
        samples,
        log_liks,
        acceptance_rate: accepted_post as f64 / proposed_post.max(1) as f64,
        final_step: step,
        best_log_lik: best,
    })
}

/// Runs one untempered posterior chain for a dataset.
pub fn run_chain(
    dataset: &Dataset,
    h: u32,
    prior: &PriorBox,
    cfg: &ChainConfig,
    seed: u64,
) -> Result<ChainRun> {
    let stats = SuffStats::new(dataset)?;
    run_tempered_chain(&stats, h, prior, cfg, 1.0, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayes::generate_dataset;
    use crate::divergence::Family;
    use crate::model::TrueStructure;

    fn small_cfg() -> ChainConfig {
        ChainConfig { chains: 1, burn_in: 1000, retained: 500, thinning: 2, initial_step: 0.25 }
    }

    fn gaussian_dataset(n: usize, seed: u64) -> Dataset {
        let truth = TrueStructure::ones(2, 2, 1).unwrap();
        generate_dataset(Family::Gaussian, &truth, 2, 2, n, seed).unwrap()
    }

    #[test]
    fn reflection_folds_into_box() {
        assert_eq!(reflect(0.5, 0.0, 1.0), 0.5);
        assert_eq!(reflect(1.25, 0.0, 1.0), 0.75);
        assert_eq!(reflect(-0.25, 0.0, 1.0), 0.25);
        assert_eq!(reflect(2.25, 0.0, 1.0), 0.25);
        assert_eq!(reflect(-1.75, 0.0, 1.0), 0.25);
        // Degenerate box pins to the point.
        assert_eq!(reflect(7.0, 2.0, 2.0), 2.0);
        // Far fold stays inside.
        for k in -20..20 {
            let v = reflect(0.3 + k as f64 * 0.77, 1.0, 2.5);
            assert!((1.0..=2.5).contains(&v), "{v}");
        }
    }

    #[test]
    fn config_validation() {
        assert!(ChainConfig { chains: 0, ..Default::default() }.validate().is_err());
        assert!(ChainConfig { retained: 0, ..Default::default() }.validate().is_err());
        assert!(ChainConfig { thinning: 0, ..Default::default() }.validate().is_err());
        assert!(ChainConfig { initial_step: 0.0, ..Default::default() }.validate().is_err());
        assert!(ChainConfig { initial_step: f64::NAN, ..Default::default() }.validate().is_err());
        assert!(ChainConfig::default().validate().is_ok());
        assert_eq!(ChainConfig::default().steps_per_chain(), 5000 + 2000 * 5);
    }

    #[test]
    fn rejects_bad_beta_and_zero_h() {
        let ds = gaussian_dataset(5, 1);
        let stats = SuffStats::new(&ds).unwrap();
        let prior = PriorBox::new(0.0, 2.0).unwrap();
        assert!(run_tempered_chain(&stats, 1, &prior, &small_cfg(), 1.5, 0).is_err());
        assert!(run_tempered_chain(&stats, 1, &prior, &small_cfg(), -0.1, 0).is_err());
        assert!(run_tempered_chain(&stats, 0, &prior, &small_cfg(), 1.0, 0).is_err());
    }

    #[test]
    fn chain_output_shape_and_box_containment() {
        let ds = gaussian_dataset(30, 2);
        let prior = PriorBox::new(0.0, 2.0).unwrap();
        let cfg = small_cfg();
        let run = run_chain(&ds, 2, &prior, &cfg, 11).unwrap();
        assert_eq!(run.samples.len(), cfg.retained);
        assert_eq!(run.log_liks.len(), cfg.retained);
        assert!(run.samples.iter().all(|p| p.in_box(&prior)));
        assert!(run.samples.iter().all(|p| p.x.rows() == 2 && p.x.cols() == 2));
        assert!(run.samples.iter().all(|p| p.y.rows() == 2 && p.y.cols() == 2));
        assert!(run.best_log_lik >= *run.log_liks.iter().max_by(|a, b| a.total_cmp(b)).unwrap());
    }

    #[test]
    fn adaptation_lands_near_target_acceptance() {
        let ds = gaussian_dataset(50, 3);
        let prior = PriorBox::new(0.0, 2.0).unwrap();
        let cfg =
            ChainConfig { chains: 1, burn_in: 4000, retained: 2000, thinning: 2, ..Default::default() };
        let run = run_chain(&ds, 1, &prior, &cfg, 5).unwrap();
        assert!(
            (run.acceptance_rate - TARGET_ACCEPT).abs() < 0.1,
            "acceptance {} after adaptation",
            run.acceptance_rate
        );
        assert!(run.final_step > 0.0 && run.final_step.is_finite());
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let ds = gaussian_dataset(20, 4);
        let prior = PriorBox::new(0.0, 2.0).unwrap();
        let a = run_chain(&ds, 1, &prior, &small_cfg(), 77).unwrap();
        let b = run_chain(&ds, 1, &prior, &small_cfg(), 77).unwrap();
        let c = run_chain(&ds, 1, &prior, &small_cfg(), 78).unwrap();
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.log_liks, b.log_liks);
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn prior_chain_accepts_everything() {
        let ds = gaussian_dataset(20, 5);
        let stats = SuffStats::new(&ds).unwrap();
        let prior = PriorBox::new(0.0, 2.0).unwrap();
        let run = run_tempered_chain(&stats, 1, &prior, &small_cfg(), 0.0, 6).unwrap();
        assert_eq!(run.acceptance_rate, 1.0);
        // Prior draws are uniform on the box: the mean of X entries over
        // the run should sit near the box midpoint.
        let mean: f64 = run.samples.iter().map(|p| p.x.get(0, 0)).sum::<f64>()
            / run.samples.len() as f64;
        assert!((mean - 1.0).abs() < 0.15, "prior mean {mean}");
    }

    #[test]
    fn point_prior_is_degenerate_but_valid() {
        let ds = gaussian_dataset(10, 8);
        let prior = PriorBox::new(1.0, 1.0).unwrap();
        let run = run_chain(&ds, 1, &prior, &small_cfg(), 9).unwrap();
        assert!(run.samples.iter().all(|p| p.x.get(0, 0) == 1.0 && p.y.data()[0] == 1.0));
        assert_eq!(run.acceptance_rate, 1.0);
    }

    #[test]
    fn posterior_concentrates_with_data() {
        // With lots of data at AB = 1 (scalar model), the posterior mean of
        // x*y should be close to 1 and much tighter than the prior.
        let truth = TrueStructure::ones(1, 1, 1).unwrap();
        let ds = generate_dataset(Family::Gaussian, &truth, 1, 1, 400, 10).unwrap();
        let prior = PriorBox::new(0.0, 2.0).unwrap();
        let cfg =
            ChainConfig { chains: 1, burn_in: 3000, retained: 2000, thinning: 3, ..Default::default() };
        let run = run_chain(&ds, 1, &prior, &cfg, 12).unwrap();
        let prods: Vec<f64> =
            run.samples.iter().map(|p| p.x.get(0, 0) * p.y.get(0, 0)).collect();
        let mean = prods.iter().sum::<f64>() / prods.len() as f64;
        let var = prods.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
            / (prods.len() - 1) as f64;
        assert!((mean - 1.0).abs() < 0.05, "posterior mean {mean}");
        assert!(var < 0.01, "posterior variance {var}");
    }

    #[test]
    fn poisson_chain_stays_positive_and_fits() {
        let truth = TrueStructure::ones(2, 2, 1).unwrap();
        let ds = generate_dataset(Family::Poisson, &truth, 2, 2, 200, 13).unwrap();
        let prior = PriorBox::default_for(Family::Poisson, &truth, 2, 2).unwrap();
        let run = run_chain(&ds, 1, &prior, &small_cfg(), 14).unwrap();
        assert!(run.samples.iter().all(|p| p.in_box(&prior)));
        let mean_prod: f64 = run
            .samples
            .iter()
            .map(|p| p.product().unwrap().get(0, 0))
            .sum::<f64>()
            / run.samples.len() as f64;
        assert!((mean_prod - 1.0).abs() < 0.15, "posterior mean product {mean_prod}");
    }
}
