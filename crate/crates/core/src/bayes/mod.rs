//! Bayesian NMF: data generation, likelihoods, posterior simulation, and
//! generalization-error estimation.
//!
//! The model is W ≈ XY with X (M×H) and Y (H×N) entrywise inside a uniform
//! box prior. Observations are entrywise independent given the mean matrix:
//! unit-variance Gaussian, Poisson, or exponential. Log densities follow a
//! fixed constant convention per family — Gaussian drops the normalization
//! entirely (log p = −½‖W−μ‖²), Poisson and exponential use their full
//! forms — and every quantity that mixes terms (free energy centering,
//! generalization error) uses the same convention on both sides so the
//! constants cancel.

mod chain;
mod generr;

pub use chain::{run_chain, run_tempered_chain, ChainConfig, ChainRun};
pub use generr::{estimate_generalization_error, GEstimate, GenErrConfig};

use std::sync::OnceLock;

use rand::Rng;
use rand_distr::{Distribution, Exp, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::divergence::Family;
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::model::TrueStructure;
use crate::seeds::rng_from;
use crate::seeds::tag;

/// Uniform box prior applied independently to every entry of X and Y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorBox {
    pub lower: f64,
    pub upper: f64,
}

impl PriorBox {
    /// Validates 0 ≤ lower ≤ upper, both finite. A zero-width box is the
    /// degenerate point prior (useful for exactness tests).
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && 0.0 <= lower && lower <= upper) {
            return Err(Error::Domain(format!("invalid prior box [{lower}, {upper}]")));
        }
        Ok(Self { lower, upper })
    }

    /// Default experiment prior: upper edge 2·max(1, max entry of AB);
    /// lower edge 0 for Gaussian, 10⁻³·upper for the strictly positive
    /// families.
    pub fn default_for(family: Family, truth: &TrueStructure, rows: u32, cols: u32) -> Result<Self> {
        let ab = truth.mean_matrix(rows, cols)?;
        let upper = 2.0 * ab.max_entry().max(1.0);
        let lower = match family {
            Family::Gaussian => 0.0,
            Family::Poisson | Family::Exponential => 1e-3 * upper,
        };
        Self::new(lower, upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }
}

/// One point of the parameter space: X (M×H) and Y (H×N).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamPoint {
    pub x: Mat,
    pub y: Mat,
}

impl ParamPoint {
    /// The mean matrix XY.
    pub fn product(&self) -> Result<Mat> {
        self.x.matmul(&self.y)
    }

    /// Whether every entry of X and Y lies in the box.
    pub fn in_box(&self, prior: &PriorBox) -> bool {
        self.x.data().iter().chain(self.y.data()).all(|&v| prior.contains(v))
    }
}

/// A set of observed matrices with their generating family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub family: Family,
    pub rows: u32,
    pub cols: u32,
    pub observations: Vec<Mat>,
    /// Ground truth when the data are synthetic.
    pub truth: Option<TrueStructure>,
    /// Seed the data were generated from, when synthetic.
    pub seed: Option<u64>,
}

impl Dataset {
    /// Validates shapes and per-family support: Poisson observations must
    /// be nonnegative integers, exponential observations nonnegative.
    pub fn new(
        family: Family,
        rows: u32,
        cols: u32,
        observations: Vec<Mat>,
        truth: Option<TrueStructure>,
        seed: Option<u64>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dims("observation shape must be at least 1x1".into()));
        }
        for (i, w) in observations.iter().enumerate() {
            if w.rows() != rows as usize || w.cols() != cols as usize {
                return Err(Error::Shape(format!(
                    "observation {} is {}x{}, expected {rows}x{cols}",
                    i + 1,
                    w.rows(),
                    w.cols()
                )));
            }
            match family {
                Family::Gaussian => {}
                Family::Poisson => {
                    if w.data().iter().any(|&v| v < 0.0 || v.fract() != 0.0) {
                        return Err(Error::Domain(format!(
                            "observation {} has a non-integer or negative entry; \
                             Poisson data must be nonnegative integers",
                            i + 1
                        )));
                    }
                }
                Family::Exponential => {
                    if w.data().iter().any(|&v| v < 0.0) {
                        return Err(Error::Domain(format!(
                            "observation {} has a negative entry; exponential data \
                             must be nonnegative",
                            i + 1
                        )));
                    }
                }
            }
        }
        Ok(Self { family, rows, cols, observations, truth, seed })
    }

    pub fn n(&self) -> usize {
        self.observations.len()
    }
}

/// Draws one observation with mean matrix `ab`.
pub(crate) fn sample_observation<R: Rng>(
    family: Family,
    ab: &Mat,
    truncate_gaussian: bool,
    rng: &mut R,
) -> Result<Mat> {
    let mut w = Mat::zeros(ab.rows(), ab.cols())?;
    for i in 0..ab.rows() {
        for j in 0..ab.cols() {
            let mean = ab.get(i, j);
            let v = match family {
                Family::Gaussian => {
                    let mut v = mean + rng.sample::<f64, _>(StandardNormal);
                    if truncate_gaussian {
                        while v < 0.0 {
                            v = mean + rng.sample::<f64, _>(StandardNormal);
                        }
                    }
                    v
                }
                Family::Poisson => {
                    let d = Poisson::new(mean).map_err(|e| {
                        Error::Domain(format!("Poisson mean {mean} at ({i},{j}): {e}"))
                    })?;
                    d.sample(rng)
                }
                Family::Exponential => {
                    let d = Exp::new(1.0 / mean).map_err(|e| {
                        Error::Domain(format!("exponential mean {mean} at ({i},{j}): {e}"))
                    })?;
                    d.sample(rng)
                }
            };
            w.set(i, j, v);
        }
    }
    Ok(w)
}

/// Generates `n` independent observations from the truth, with the
/// Gaussian truncation knob exposed.
pub fn generate_dataset_opts(
    family: Family,
    truth: &TrueStructure,
    rows: u32,
    cols: u32,
    n: usize,
    seed: u64,
    truncate_gaussian: bool,
) -> Result<Dataset> {
    let ab = truth.mean_matrix(rows, cols)?;
    if matches!(family, Family::Poisson | Family::Exponential) && ab.min_entry() <= 0.0 {
        return Err(Error::Domain(format!(
            "{family} means must be strictly positive, got min AB entry {}",
            ab.min_entry()
        )));
    }
    let mut rng = rng_from(seed, &[tag::DATASET]);
    let mut observations = Vec::with_capacity(n);
    for _ in 0..n {
        observations.push(sample_observation(family, &ab, truncate_gaussian, &mut rng)?);
    }
    Dataset::new(family, rows, cols, observations, Some(truth.clone()), Some(seed))
}

/// Generates `n` independent observations from the truth (Gaussian draws
/// untruncated; see [`generate_dataset_opts`] for the truncated variant).
pub fn generate_dataset(
    family: Family,
    truth: &TrueStructure,
    rows: u32,
    cols: u32,
    n: usize,
    seed: u64,
) -> Result<Dataset> {
    generate_dataset_opts(family, truth, rows, cols, n, seed, false)
}

static LN_FACT: OnceLock<Vec<f64>> = OnceLock::new();

/// log(k!) for integer-valued `k ≥ 0` stored in an f64; table-driven with a
/// Stirling tail beyond 1024.
pub(crate) fn ln_factorial(k: f64) -> f64 {
    let table = LN_FACT.get_or_init(|| {
        let mut t = vec![0.0f64; 1025];
        let mut acc = 0.0;
        for (i, slot) in t.iter_mut().enumerate().skip(1) {
            acc += (i as f64).ln();
            *slot = acc;
        }
        t
    });
    let idx = k as usize;
    if idx < table.len() {
        table[idx]
    } else {
        // Stirling series for ln Γ(k+1); error < 1e-16 relative here.
        let n = k;
        n * n.ln() - n + 0.5 * (2.0 * std::f64::consts::PI * n).ln() + 1.0 / (12.0 * n)
            - 1.0 / (360.0 * n * n * n)
    }
}

/// Log density of one observation under mean matrix `mu`, in the crate's
/// constant convention (see module docs).
pub fn log_density_mean(family: Family, w: &Mat, mu: &Mat) -> Result<f64> {
    if w.rows() != mu.rows() || w.cols() != mu.cols() {
        return Err(Error::Shape(format!(
            "observation is {}x{}, mean is {}x{}",
            w.rows(),
            w.cols(),
            mu.rows(),
            mu.cols()
        )));
    }
    match family {
        Family::Gaussian => Ok(-0.5 * w.frob_sq_diff(mu)?),
        Family::Poisson => {
            let mut l = 0.0;
            for (v, m) in w.data().iter().zip(mu.data()) {
                if *m <= 0.0 {
                    return Err(Error::Domain(format!("Poisson mean entry {m} must be positive")));
                }
                l += v * m.ln() - m - ln_factorial(*v);
            }
            Ok(l)
        }
        Family::Exponential => {
            let mut l = 0.0;
            for (v, m) in w.data().iter().zip(mu.data()) {
                if *m <= 0.0 {
                    return Err(Error::Domain(format!(
                        "exponential mean entry {m} must be positive"
                    )));
                }
                l += -m.ln() - v / m;
            }
            Ok(l)
        }
    }
}

/// Log likelihood of one observation at a parameter point.
pub fn log_likelihood(family: Family, w: &Mat, point: &ParamPoint) -> Result<f64> {
    log_density_mean(family, w, &point.product()?)
}

/// Total log likelihood of a dataset under its generating truth. Uses the
/// same constant convention as [`log_density_mean`], so it cancels exactly
/// in centered free energies.
pub fn true_log_likelihood(dataset: &Dataset, truth: &TrueStructure) -> Result<f64> {
    let ab = truth.mean_matrix(dataset.rows, dataset.cols)?;
    let mut total = 0.0;
    for w in &dataset.observations {
        total += log_density_mean(dataset.family, w, &ab)?;
    }
    Ok(total)
}

/// Sufficient statistics of a dataset: everything the likelihood needs so
/// that evaluating a parameter point costs O(MN) regardless of n.
#[derive(Debug, Clone)]
pub struct SuffStats {
    pub family: Family,
    pub n: usize,
    pub rows: u32,
    pub cols: u32,
    /// Entrywise sum of observations.
    pub sum: Mat,
    /// Total squared Frobenius norm Σ‖W_i‖² (Gaussian only).
    pub sum_sq: f64,
    /// Σ_i Σ_jk log(W_i[jk]!) (Poisson only).
    pub ln_fact: f64,
}

impl SuffStats {
    pub fn new(dataset: &Dataset) -> Result<Self> {
        let mut sum = Mat::zeros(dataset.rows as usize, dataset.cols as usize)?;
        let mut sum_sq = 0.0;
        let mut ln_fact = 0.0;
        for w in &dataset.observations {
            for (s, v) in sum.data_mut().iter_mut().zip(w.data()) {
                *s += v;
            }
            sum_sq += w.frob_sq();
            if dataset.family == Family::Poisson {
                ln_fact += w.data().iter().map(|&v| ln_factorial(v)).sum::<f64>();
            }
        }
        Ok(Self {
            family: dataset.family,
            n: dataset.n(),
            rows: dataset.rows,
            cols: dataset.cols,
            sum,
            sum_sq,
            ln_fact,
        })
    }

    /// Total log likelihood Σ_i log p(W_i | mu). `mu` must be rows×cols;
    /// positive-family means with nonpositive entries yield −∞, which a
    /// Metropolis step simply rejects.
    pub fn log_lik_mean(&self, mu: &Mat) -> f64 {
        debug_assert_eq!(mu.rows(), self.rows as usize);
        debug_assert_eq!(mu.cols(), self.cols as usize);
        let n = self.n as f64;
        match self.family {
            Family::Gaussian => {
                let cross: f64 =
                    self.sum.data().iter().zip(mu.data()).map(|(s, m)| s * m).sum();
                -0.5 * (self.sum_sq - 2.0 * cross + n * mu.frob_sq())
            }
            Family::Poisson => {
                let mut l = -self.ln_fact;
                for (s, m) in self.sum.data().iter().zip(mu.data()) {
                    l += s * m.ln() - n * m;
                }
                l
            }
            Family::Exponential => {
                let mut l = 0.0;
                for (s, m) in self.sum.data().iter().zip(mu.data()) {
                    l += -n * m.ln() - s / m;
                }
                l
            }
        }
    }
}

/// Precomputed per-sample quantities for fast predictive evaluation.
pub struct PredictiveCache {
    family: Family,
    rows: usize,
    cols: usize,
    /// Flattened mean matrices (or their logs/reciprocals, per family).
    per_sample: Vec<Vec<f64>>,
    /// Per-sample scalar term (‖μ‖², Σμ, or Σlog μ, per family).
    scalar: Vec<f64>,
}

impl PredictiveCache {
    /// Builds the cache from pooled posterior samples.
    pub fn new(family: Family, samples: &[ParamPoint]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Insufficient("no posterior samples for the predictive".into()));
        }
        let mut per_sample = Vec::with_capacity(samples.len());
        let mut scalar = Vec::with_capacity(samples.len());
        let first_mu = samples[0].product()?;
        let (rows, cols) = (first_mu.rows(), first_mu.cols());
        for p in samples {
            let mu = p.product()?;
            if mu.rows() != rows || mu.cols() != cols {
                return Err(Error::Shape("posterior samples have mixed shapes".into()));
            }
            match family {
                Family::Gaussian => {
                    scalar.push(mu.frob_sq());
                    per_sample.push(mu.data().to_vec());
                }
                Family::Poisson => {
                    if mu.min_entry() <= 0.0 {
                        return Err(Error::Domain(
                            "Poisson predictive needs strictly positive means".into(),
                        ));
                    }
                    scalar.push(mu.sum());
                    per_sample.push(mu.data().iter().map(|m| m.ln()).collect());
                }
                Family::Exponential => {
                    if mu.min_entry() <= 0.0 {
                        return Err(Error::Domain(
                            "exponential predictive needs strictly positive means".into(),
                        ));
                    }
                    scalar.push(mu.data().iter().map(|m| m.ln()).sum());
                    per_sample.push(mu.data().iter().map(|m| 1.0 / m).collect());
                }
            }
        }
        Ok(Self { family, rows, cols, per_sample, scalar })
    }

    pub fn len(&self) -> usize {
        self.per_sample.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_sample.is_empty()
    }

    /// log of the posterior-averaged density of `w`, log-sum-exp stabilized.
    pub fn log_predictive(&self, w: &Mat) -> Result<f64> {
        if w.rows() != self.rows || w.cols() != self.cols {
            return Err(Error::Shape(format!(
                "observation is {}x{}, cache is {}x{}",
                w.rows(),
                w.cols(),
                self.rows,
                self.cols
            )));
        }
        let wd = w.data();
        let mut lls = Vec::with_capacity(self.per_sample.len());
        match self.family {
            Family::Gaussian => {
                let w_sq: f64 = wd.iter().map(|v| v * v).sum();
                for (mu, &mu_sq) in self.per_sample.iter().zip(&self.scalar) {
                    let cross: f64 = wd.iter().zip(mu).map(|(a, b)| a * b).sum();
                    lls.push(-0.5 * (w_sq - 2.0 * cross + mu_sq));
                }
            }
            Family::Poisson => {
                let lf: f64 = wd.iter().map(|&v| ln_factorial(v)).sum();
                for (ln_mu, &mu_sum) in self.per_sample.iter().zip(&self.scalar) {
                    let cross: f64 = wd.iter().zip(ln_mu).map(|(a, b)| a * b).sum();
                    lls.push(cross - mu_sum - lf);
                }
            }
            Family::Exponential => {
                for (inv_mu, &ln_mu_sum) in self.per_sample.iter().zip(&self.scalar) {
                    let cross: f64 = wd.iter().zip(inv_mu).map(|(a, b)| a * b).sum();
                    lls.push(-ln_mu_sum - cross);
                }
            }
        }
        let max = lls.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Err(Error::Domain("predictive degenerated to zero density".into()));
        }
        let sum: f64 = lls.iter().map(|l| (l - max).exp()).sum();
        Ok(max + (sum / lls.len() as f64).ln())
    }
}

/// log p(w | posterior) averaged over the given samples. Convenience
/// wrapper that builds a [`PredictiveCache`] for a single evaluation.
pub fn log_predictive(family: Family, w: &Mat, samples: &[ParamPoint]) -> Result<f64> {
    PredictiveCache::new(family, samples)?.log_predictive(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::NonnegMatrix;

    fn ones_truth(m: u32, n: u32, h0: u32) -> TrueStructure {
        TrueStructure::ones(m, n, h0).unwrap()
    }

    #[test]
    fn prior_box_validation() {
        assert!(PriorBox::new(-0.1, 1.0).is_err());
        assert!(PriorBox::new(2.0, 1.0).is_err());
        let p = PriorBox::new(1.0, 1.0).unwrap();
        assert_eq!(p.width(), 0.0);
        let d = PriorBox::default_for(Family::Gaussian, &ones_truth(2, 2, 1), 2, 2).unwrap();
        assert_eq!((d.lower, d.upper), (0.0, 2.0));
        let d = PriorBox::default_for(Family::Poisson, &ones_truth(2, 2, 1), 2, 2).unwrap();
        assert_eq!((d.lower, d.upper), (0.002, 2.0));
    }

    #[test]
    fn empty_dataset_is_fine() {
        let ds = generate_dataset(Family::Gaussian, &ones_truth(2, 2, 1), 2, 2, 0, 1).unwrap();
        assert_eq!(ds.n(), 0);
        assert_eq!((ds.rows, ds.cols), (2, 2));
    }

    #[test]
    fn gaussian_law_of_large_numbers() {
        let truth = ones_truth(1, 1, 1);
        let ds = generate_dataset(Family::Gaussian, &truth, 1, 1, 10_000, 42).unwrap();
        let mean: f64 =
            ds.observations.iter().map(|w| w.get(0, 0)).sum::<f64>() / ds.n() as f64;
        assert!((mean - 1.0).abs() < 4.0 / 100.0, "sample mean {mean}");
        // Untruncated by default: with mean 1 some draws must be negative.
        assert!(ds.observations.iter().any(|w| w.get(0, 0) < 0.0));
    }

    #[test]
    fn truncated_gaussian_is_nonnegative() {
        let truth = ones_truth(1, 1, 1);
        let ds =
            generate_dataset_opts(Family::Gaussian, &truth, 1, 1, 5_000, 42, true).unwrap();
        assert!(ds.observations.iter().all(|w| w.get(0, 0) >= 0.0));
    }

    #[test]
    fn poisson_mean_equals_variance() {
        let a = NonnegMatrix::from_rows(&[vec![3.0]]).unwrap();
        let b = NonnegMatrix::from_rows(&[vec![1.0]]).unwrap();
        let truth = TrueStructure::with_factors(1, a, b).unwrap();
        let ds = generate_dataset(Family::Poisson, &truth, 1, 1, 10_000, 7).unwrap();
        let n = ds.n() as f64;
        let mean: f64 = ds.observations.iter().map(|w| w.get(0, 0)).sum::<f64>() / n;
        let var: f64 = ds
            .observations
            .iter()
            .map(|w| (w.get(0, 0) - mean) * (w.get(0, 0) - mean))
            .sum::<f64>()
            / (n - 1.0);
        assert!((var - 3.0).abs() < 0.2, "sample variance {var}");
        // Support check: integers only.
        assert!(ds.observations.iter().all(|w| w.get(0, 0).fract() == 0.0));
    }

    #[test]
    fn positive_family_rejects_zero_mean() {
        let truth = TrueStructure::rank_only(0);
        assert!(generate_dataset(Family::Poisson, &truth, 2, 2, 5, 1).is_err());
        assert!(generate_dataset(Family::Exponential, &truth, 2, 2, 5, 1).is_err());
        assert!(generate_dataset(Family::Gaussian, &truth, 2, 2, 5, 1).is_ok());
    }

    #[test]
    fn log_likelihood_examples() {
        let w = Mat::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let point = ParamPoint {
            x: Mat::from_rows(&[vec![1.0]]).unwrap(),
            y: Mat::from_rows(&[vec![1.0, 1.0]]).unwrap(),
        };
        // W = XY gives 0 in the Gaussian convention.
        assert_eq!(log_likelihood(Family::Gaussian, &w, &point).unwrap(), 0.0);
        // ‖W−XY‖² = 2 gives −1.
        let w2 = Mat::from_rows(&[vec![2.0, 0.0]]).unwrap();
        assert_eq!(log_likelihood(Family::Gaussian, &w2, &point).unwrap(), -1.0);
        // Poisson full form at W = 2, μ = 2: 2·log2 − 2 − log 2!.
        let w = Mat::from_rows(&[vec![2.0]]).unwrap();
        let mu = Mat::from_rows(&[vec![2.0]]).unwrap();
        let expect = 2.0 * 2.0f64.ln() - 2.0 - 2.0f64.ln();
        assert!((log_density_mean(Family::Poisson, &w, &mu).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn ln_factorial_values() {
        assert_eq!(ln_factorial(0.0), 0.0);
        assert_eq!(ln_factorial(1.0), 0.0);
        assert!((ln_factorial(5.0) - 120.0f64.ln()).abs() < 1e-12);
        // Stirling tail agrees with the table where they meet.
        let direct: f64 = (1..=2000).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(2000.0) - direct).abs() < 1e-8);
    }

    #[test]
    fn suff_stats_match_direct_likelihood() {
        for family in [Family::Gaussian, Family::Poisson, Family::Exponential] {
            let truth = ones_truth(2, 3, 1);
            let ds = generate_dataset(family, &truth, 2, 3, 50, 9).unwrap();
            let stats = SuffStats::new(&ds).unwrap();
            let mu = Mat::from_rows(&[
                vec![0.7, 1.2, 0.4],
                vec![1.1, 0.9, 1.6],
            ])
            .unwrap();
            let direct: f64 = ds
                .observations
                .iter()
                .map(|w| log_density_mean(family, w, &mu).unwrap())
                .sum();
            let fast = stats.log_lik_mean(&mu);
            assert!(
                (direct - fast).abs() < 1e-8 * (1.0 + direct.abs()),
                "{family}: {direct} vs {fast}"
            );
        }
    }

    #[test]
    fn predictive_single_and_mixture() {
        let w = Mat::from_rows(&[vec![1.0, 0.0]]).unwrap();
        let p1 = ParamPoint {
            x: Mat::from_rows(&[vec![1.0]]).unwrap(),
            y: Mat::from_rows(&[vec![1.0, 0.0]]).unwrap(),
        };
        // Single sample: predictive equals the likelihood at that sample.
        let single = log_predictive(Family::Gaussian, &w, std::slice::from_ref(&p1)).unwrap();
        assert_eq!(single, log_likelihood(Family::Gaussian, &w, &p1).unwrap());
        // Two identical samples: unchanged.
        let two = log_predictive(Family::Gaussian, &w, &[p1.clone(), p1.clone()]).unwrap();
        assert!((two - single).abs() < 1e-14);
        // Likelihoods L and 3L average to 2L.
        let l = 0.25f64;
        let make = |ll: f64| {
            // Construct a point with ‖W−XY‖² = −2·log(ll) at W = (1,0).
            let d = (-2.0 * ll.ln()).sqrt();
            ParamPoint {
                x: Mat::from_rows(&[vec![1.0]]).unwrap(),
                y: Mat::from_rows(&[vec![1.0, d]]).unwrap(),
            }
        };
        let pa = make(l);
        let pb = make(3.0 * l);
        let mix = log_predictive(Family::Gaussian, &w, &[pa, pb]).unwrap();
        assert!((mix - (2.0 * l).ln()).abs() < 1e-12, "{mix}");
    }

    #[test]
    fn predictive_requires_samples() {
        let w = Mat::from_rows(&[vec![1.0]]).unwrap();
        assert!(log_predictive(Family::Gaussian, &w, &[]).is_err());
    }

    #[test]
    fn true_log_likelihood_matches_sum() {
        let truth = ones_truth(2, 2, 1);
        let ds = generate_dataset(Family::Gaussian, &truth, 2, 2, 25, 3).unwrap();
        let ab = truth.mean_matrix(2, 2).unwrap();
        let direct: f64 = ds
            .observations
            .iter()
            .map(|w| log_density_mean(Family::Gaussian, w, &ab).unwrap())
            .sum();
        assert!((true_log_likelihood(&ds, &truth).unwrap() - direct).abs() < 1e-10);
    }
}
