//! Real log canonical thresholds for nonnegative matrix factorization:
//! closed-form bounds and exact values, numeric level-set volume probes,
//! Bayesian posterior simulation with generalization-error estimation, and
//! free-energy / sBIC model selection built on the closed forms.
//!
//! Everything randomized is deterministic given a master seed, independent
//! of worker count: parallel units (sampling blocks, replications, chains,
//! ladder rungs) each draw from an RNG substream derived from the master
//! seed and the unit's index, and results merge commutatively.

pub mod bayes;
pub mod divergence;
pub mod error;
pub mod matrix;
pub mod model;
pub mod model_select;
pub mod rational;
pub mod rlct;
pub mod seeds;
pub mod table;
pub mod volume;

pub use bayes::{
    estimate_generalization_error, generate_dataset, generate_dataset_opts, log_likelihood,
    log_predictive, run_chain, ChainConfig, ChainRun, Dataset, GEstimate, GenErrConfig,
    ParamPoint, PredictiveCache, PriorBox,
};
pub use divergence::{
    kl_exponential_scalar, kl_gaussian, kl_gaussian_scalar, kl_matrix, kl_poisson_scalar,
    sandwich_constants, Family,
};
pub use error::{Error, Result};
pub use matrix::{Mat, NonnegMatrix};
pub use model::{ModelDims, RrrTruth, TrueStructure};
pub use model_select::{
    centered_free_energy, estimate_free_energy, fit_lambda_from_free_energy, quadratic_ladder,
    sbic_select, CenteredFreeEnergy, FreeEnergyEstimate, FreeEnergyMethod, LambdaSlope,
    SbicCandidate, SbicReport, DEFAULT_LADDER_INTERVALS,
};
pub use rational::Rational;
pub use rlct::{
    nmf_rlct_bound, nmf_rlct_exact_nonneg_residual, rank_feasibility, regular_half_dim, rrr_rlct,
    RankFeasibility, RlctKind, RlctSource, RlctValue,
};
pub use table::{comparison_table, ComparisonTable, TableCell, TableRowGroup};
pub use volume::{
    check_bound, default_box_upper, estimate_volume, fit_lambda, log_thresholds, BoundCheck,
    SlopeFit, VolumeScan,
};
