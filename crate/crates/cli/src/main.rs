//! `nmf-rlct`: exact RLCT formulas and reproducible Monte Carlo experiments
//! for nonnegative matrix factorization.
//!
//! Deterministic subcommands (`rlct`, `table`) run without a seed; every
//! randomized subcommand refuses to run unless `--seed <u64>` or
//! `--seed auto` is given, and embeds the resolved seed in its JSON report.
//! Worker count (`--workers`, or the `RLCT_NMF_WORKERS` environment
//! variable) affects wall clock only, never numeric results.

mod io;

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use nmf_rlct_core::bayes::{
    estimate_generalization_error, generate_dataset_opts, ChainConfig, GEstimate, GenErrConfig,
    PriorBox,
};
use nmf_rlct_core::divergence::Family;
use nmf_rlct_core::model::{ModelDims, RrrTruth, TrueStructure};
use nmf_rlct_core::model_select::{
    centered_free_energy, estimate_free_energy, fit_lambda_from_free_energy, quadratic_ladder,
    sbic_select, CenteredFreeEnergy, FreeEnergyEstimate, LambdaSlope,
};
use nmf_rlct_core::rlct::{nmf_rlct_bound, regular_half_dim, rrr_rlct, RlctValue};
use nmf_rlct_core::seeds::{derive_seed, mix64};
use nmf_rlct_core::table::comparison_table;
use nmf_rlct_core::volume::{
    check_bound, default_box_upper, estimate_volume, fit_lambda, log_thresholds, BoundCheck,
    SlopeFit, VolumeScan,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "nmf-rlct", version, about = "RLCT toolkit for nonnegative matrix factorization")]
struct Cli {
    /// Worker threads (default: RLCT_NMF_WORKERS, then all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the NMF RLCT bound, the RRR value, and the regular d/2.
    Rlct(RlctArgs),
    /// Emit the NMF-vs-RRR comparison table over square sizes.
    Table(TableArgs),
    /// Monte Carlo level-set volume scan and λ̂ slope fit.
    Volume(VolumeArgs),
    /// Estimate the Bayes generalization error over replications.
    Generr(GenErrArgs),
    /// Thermodynamic-integration free energy (single dataset or λ slope).
    FreeEnergy(FreeEnergyArgs),
    /// sBIC model selection over candidate widths.
    Sbic(SbicArgs),
    /// Generate a synthetic dataset directory.
    GenData(GenDataArgs),
}

// ---------------------------------------------------------------------------
// Shared argument groups.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
enum SeedArg {
    Value(u64),
    Auto,
}

fn parse_seed(s: &str) -> Result<SeedArg, String> {
    if s.eq_ignore_ascii_case("auto") {
        Ok(SeedArg::Auto)
    } else {
        s.parse().map(SeedArg::Value).map_err(|e| format!("seed must be a u64 or 'auto': {e}"))
    }
}

fn resolve_seed(seed: Option<SeedArg>) -> Result<u64> {
    match seed {
        Some(SeedArg::Value(v)) => Ok(v),
        Some(SeedArg::Auto) => {
            let nanos =
                SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default().as_nanos() as u64;
            let s = mix64(nanos ^ mix64(u64::from(std::process::id())));
            eprintln!("--seed auto: using seed {s} (recorded in the report)");
            Ok(s)
        }
        None => bail!(
            "this command is randomized and refuses to run without a seed; \
             pass --seed <u64> or --seed auto"
        ),
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Args, Debug, Serialize)]
struct TruthArgs {
    /// True inner width H0 (0 = zero-mean truth with no factors).
    #[arg(long, default_value_t = 0)]
    h0: u32,
    /// CSV with the true left factor A (M×H0). Default: all ones.
    #[arg(long)]
    truth_a: Option<PathBuf>,
    /// CSV with the true right factor B (H0×N). Default: all ones.
    #[arg(long)]
    truth_b: Option<PathBuf>,
    /// Skip the first line of factor CSV files.
    #[arg(long)]
    header: bool,
}

impl TruthArgs {
    fn build(&self, m: u32, n: u32) -> Result<TrueStructure> {
        if self.h0 == 0 {
            if self.truth_a.is_some() || self.truth_b.is_some() {
                bail!("--truth-a/--truth-b require --h0 >= 1");
            }
            return Ok(TrueStructure::rank_only(0));
        }
        match (&self.truth_a, &self.truth_b) {
            (None, None) => Ok(TrueStructure::ones(m, n, self.h0)?),
            (Some(a), Some(b)) => {
                let a = io::load_matrix_csv(a, self.header)?;
                let b = io::load_matrix_csv(b, self.header)?;
                Ok(TrueStructure::with_factors(self.h0, a, b)?)
            }
            _ => bail!("provide both --truth-a and --truth-b, or neither"),
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct ChainArgs {
    /// Independent chains per estimate.
    #[arg(long, default_value_t = 4)]
    chains: usize,
    /// Burn-in steps per chain (step size adapts only here).
    #[arg(long, default_value_t = 5000)]
    burn_in: usize,
    /// Retained posterior samples per chain.
    #[arg(long, default_value_t = 2000)]
    retained: usize,
    /// Steps between retained samples.
    #[arg(long, default_value_t = 5)]
    thinning: usize,
    /// Initial random-walk step size.
    #[arg(long, default_value_t = 0.25)]
    initial_step: f64,
}

impl ChainArgs {
    fn to_config(&self) -> ChainConfig {
        ChainConfig {
            chains: self.chains,
            burn_in: self.burn_in,
            retained: self.retained,
            thinning: self.thinning,
            initial_step: self.initial_step,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct PriorArgs {
    /// Prior box lower edge (default: 0 for Gaussian, 1e-3·upper otherwise).
    #[arg(long)]
    prior_lower: Option<f64>,
    /// Prior box upper edge (default: 2·max(1, max true mean entry)).
    #[arg(long)]
    prior_upper: Option<f64>,
}

impl PriorArgs {
    fn resolve(
        &self,
        family: Family,
        truth: Option<&TrueStructure>,
        rows: u32,
        cols: u32,
    ) -> Result<PriorBox> {
        match (self.prior_lower, self.prior_upper) {
            (Some(lo), Some(up)) => Ok(PriorBox::new(lo, up)?),
            (None, Some(up)) => {
                let lo = match family {
                    Family::Gaussian => 0.0,
                    Family::Poisson | Family::Exponential => 1e-3 * up,
                };
                Ok(PriorBox::new(lo, up)?)
            }
            (Some(_), None) => bail!("--prior-lower also needs --prior-upper"),
            (None, None) => match truth {
                Some(t) => Ok(PriorBox::default_for(family, t, rows, cols)?),
                None => bail!(
                    "the dataset records no truth, so the prior box cannot be derived; \
                     pass --prior-upper explicitly"
                ),
            },
        }
    }
}

// ---------------------------------------------------------------------------
// rlct
// ---------------------------------------------------------------------------

#[derive(Args)]
struct RlctArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: u32,
    /// Model inner width H.
    #[arg(long)]
    h: u32,
    /// True inner width H0.
    #[arg(long)]
    h0: u32,
    /// Emit the JSON report instead of plain text.
    #[arg(long)]
    json: bool,
    /// Write the JSON report to a file (implies --json).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_rlct(a: &RlctArgs, workers: Option<usize>) -> Result<()> {
    let dims = ModelDims::new(a.m, a.n, a.h)?;
    let truth = TrueStructure::rank_only(a.h0);
    let nmf = nmf_rlct_bound(&dims, &truth)?;
    let rrr = rrr_rlct(&dims, &RrrTruth::new(a.h0))?;
    let regular = regular_half_dim(&dims);
    if a.json || a.out.is_some() {
        #[derive(Serialize)]
        struct Config {
            m: u32,
            n: u32,
            h: u32,
            h0: u32,
        }
        #[derive(Serialize)]
        struct Output {
            nmf: RlctValue,
            rrr: RlctValue,
            regular: RlctValue,
        }
        let report = io::Report {
            command: "rlct",
            version: io::toolkit_version(),
            seed: None,
            workers,
            config: Config { m: a.m, n: a.n, h: a.h, h0: a.h0 },
            result: Output { nmf, rrr, regular },
        };
        io::emit_json(a.out.as_ref(), &report)?;
    } else {
        println!("{}", nmf.display());
        println!("rrr (r={}): {}", a.h0, rrr.display());
        println!("regular (d/2): {}", regular.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

#[derive(Args)]
struct TableArgs {
    /// Square sizes M = N to tabulate.
    #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3, 4, 5])]
    sizes: Vec<u32>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the CSV rendering here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn cmd_table(a: &TableArgs, workers: Option<usize>) -> Result<()> {
    let table = comparison_table(&a.sizes)?;
    if let Some(csv) = &a.csv {
        io::emit_text(Some(csv), &table.to_csv())?;
    }
    if a.out.is_some() {
        #[derive(Serialize)]
        struct Config {
            sizes: Vec<u32>,
        }
        let report = io::Report {
            command: "table",
            version: io::toolkit_version(),
            seed: None,
            workers,
            config: Config { sizes: a.sizes.clone() },
            result: &table,
        };
        io::emit_json(a.out.as_ref(), &report)?;
    }
    if a.out.is_none() && a.csv.is_none() {
        print!("{}", table.to_csv());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// volume
// ---------------------------------------------------------------------------

#[derive(Args)]
struct VolumeArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: u32,
    /// Model inner width H.
    #[arg(long)]
    h: u32,
    #[command(flatten)]
    truth: TruthArgs,
    /// Largest threshold of the scan grid.
    #[arg(long, default_value_t = 1.0)]
    t_max: f64,
    /// Decades of thresholds below t-max.
    #[arg(long, default_value_t = 3)]
    decades: u32,
    /// Grid points per decade.
    #[arg(long, default_value_t = 12)]
    per_decade: u32,
    /// Uniform samples over the parameter box.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Parameter box upper edge (default: 2·max(1, max true mean entry)).
    #[arg(long)]
    box_upper: Option<f64>,
    /// Master seed (u64 or 'auto').
    #[arg(long, value_parser = parse_seed)]
    seed: Option<SeedArg>,
    /// Write the JSON report here (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a threshold,hits,volume,stderr CSV summary here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn cmd_volume(a: &VolumeArgs, workers: Option<usize>) -> Result<()> {
    let seed = resolve_seed(a.seed)?;
    let dims = ModelDims::new(a.m, a.n, a.h)?;
    let truth = a.truth.build(a.m, a.n)?;
    let box_upper = match a.box_upper {
        Some(c) => c,
        None => default_box_upper(&dims, &truth)?,
    };
    let thresholds = log_thresholds(a.t_max, a.decades, a.per_decade)?;
    let scan = estimate_volume(&dims, &truth, box_upper, &thresholds, a.samples, seed)?;
    let fit = fit_lambda(&scan)?;
    let bound = check_bound(&dims, &truth, &fit)?;

    if let Some(csv) = &a.csv {
        let mut text = String::from("threshold,hits,volume,stderr\n");
        for i in 0..scan.thresholds.len() {
            text.push_str(&format!(
                "{},{},{},{}\n",
                io::format_cell(scan.thresholds[i]),
                scan.hits[i],
                io::format_cell(scan.volumes[i]),
                io::format_cell(scan.stderrs[i]),
            ));
        }
        io::emit_text(Some(csv), &text)?;
    }

    #[derive(Serialize)]
    struct Config {
        m: u32,
        n: u32,
        h: u32,
        h0: u32,
        t_max: f64,
        decades: u32,
        per_decade: u32,
        samples: u64,
        box_upper: f64,
    }
    #[derive(Serialize)]
    struct Output {
        scan: VolumeScan,
        fit: SlopeFit,
        bound_check: BoundCheck,
    }
    eprintln!(
        "lambda_hat = {:.4} ± {:.4} over t ∈ [{:.3e}, {:.3e}] ({} bound {})",
        fit.lambda_hat,
        fit.stderr,
        fit.fit_window.0,
        fit.fit_window.1,
        if bound.consistent { "respects" } else { "VIOLATES" },
        bound.bound.display(),
    );
    let report = io::Report {
        command: "volume",
        version: io::toolkit_version(),
        seed: Some(seed),
        workers,
        config: Config {
            m: a.m,
            n: a.n,
            h: a.h,
            h0: a.truth.h0,
            t_max: a.t_max,
            decades: a.decades,
            per_decade: a.per_decade,
            samples: a.samples,
            box_upper,
        },
        result: Output { scan, fit, bound_check: bound },
    };
    io::emit_json(a.out.as_ref(), &report)
}

// ---------------------------------------------------------------------------
// generr
// ---------------------------------------------------------------------------

#[derive(Args)]
struct GenErrArgs {
    /// Observation family: gaussian, poisson, or exponential.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: u32,
    #[command(flatten)]
    truth: TruthArgs,
    /// Fitted model inner width H.
    #[arg(long)]
    h: u32,
    /// Observations per replication.
    #[arg(long)]
    n_obs: usize,
    /// Independent replications (fresh dataset each).
    #[arg(long, default_value_t = 50)]
    replications: usize,
    /// Fresh test draws W ~ q per replication.
    #[arg(long, default_value_t = 10_000)]
    test_draws: usize,
    #[command(flatten)]
    prior: PriorArgs,
    #[command(flatten)]
    chain: ChainArgs,
    /// Master seed (u64 or 'auto').
    #[arg(long, value_parser = parse_seed)]
    seed: Option<SeedArg>,
    /// Write the JSON report here (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a replication,g_value CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn cmd_generr(a: &GenErrArgs, workers: Option<usize>) -> Result<()> {
    let seed = resolve_seed(a.seed)?;
    let truth = a.truth.build(a.m, a.n)?;
    let prior = a.prior.resolve(a.family, Some(&truth), a.m, a.n)?;
    let cfg = GenErrConfig {
        family: a.family,
        truth,
        rows: a.m,
        cols: a.n,
        h: a.h,
        prior,
        n: a.n_obs,
        replications: a.replications,
        chain: a.chain.to_config(),
        mc_test_draws: a.test_draws,
    };
    let est = estimate_generalization_error(&cfg, seed)?;

    if let Some(csv) = &a.csv {
        let mut text = String::from("replication,g_value\n");
        for (i, g) in est.g_values.iter().enumerate() {
            text.push_str(&format!("{},{}\n", i + 1, io::format_cell(*g)));
        }
        io::emit_text(Some(csv), &text)?;
    }

    #[derive(Serialize)]
    struct Config<'a> {
        family: Family,
        m: u32,
        n: u32,
        h0: u32,
        h: u32,
        n_obs: usize,
        replications: usize,
        test_draws: usize,
        prior: PriorBox,
        chain: &'a ChainArgs,
    }
    #[derive(Serialize)]
    struct Output {
        estimate: GEstimate,
        /// n·Ĝ, the quantity that converges to λ.
        scaled_g_mean: f64,
        scaled_stderr: f64,
    }
    let scaled_g_mean = a.n_obs as f64 * est.g_mean;
    let scaled_stderr = a.n_obs as f64 * est.stderr;
    eprintln!(
        "G ≈ {:.6e} ± {:.2e}  (n·G ≈ {scaled_g_mean:.4} ± {scaled_stderr:.4}, {} replications)",
        est.g_mean, est.stderr, est.replications
    );
    let report = io::Report {
        command: "generr",
        version: io::toolkit_version(),
        seed: Some(seed),
        workers,
        config: Config {
            family: a.family,
            m: a.m,
            n: a.n,
            h0: a.truth.h0,
            h: a.h,
            n_obs: a.n_obs,
            replications: a.replications,
            test_draws: a.test_draws,
            prior,
            chain: &a.chain,
        },
        result: Output { estimate: est, scaled_g_mean, scaled_stderr },
    };
    io::emit_json(a.out.as_ref(), &report)
}

// ---------------------------------------------------------------------------
// free-energy
// ---------------------------------------------------------------------------

#[derive(Args)]
struct FreeEnergyArgs {
    /// Dataset directory (single-dataset mode).
    #[arg(long, conflicts_with = "n_list")]
    data_dir: Option<PathBuf>,
    /// Fitted model inner width H.
    #[arg(long)]
    h: u32,
    /// Temperature-ladder intervals K (rungs at (k/K)², k = 0..K).
    #[arg(long, default_value_t = 16)]
    ladder_intervals: usize,
    /// Slope mode: sample sizes to scan, e.g. 50,100,200.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    /// Slope mode: replications per sample size.
    #[arg(long, default_value_t = 8)]
    replications: usize,
    /// Slope mode: observation family.
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    /// Slope mode: rows M.
    #[arg(long)]
    m: Option<u32>,
    /// Slope mode: columns N.
    #[arg(long)]
    n: Option<u32>,
    #[command(flatten)]
    truth: TruthArgs,
    #[command(flatten)]
    prior: PriorArgs,
    #[command(flatten)]
    chain: ChainArgs,
    /// Master seed (u64 or 'auto').
    #[arg(long, value_parser = parse_seed)]
    seed: Option<SeedArg>,
    /// Write the JSON report here (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a CSV summary here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct FreeEnergyConfig {
    mode: &'static str,
    h: u32,
    ladder_intervals: usize,
    prior: PriorBox,
    chains: usize,
    burn_in: usize,
    retained: usize,
    thinning: usize,
    initial_step: f64,
}

fn fe_config(mode: &'static str, a: &FreeEnergyArgs, prior: &PriorBox) -> FreeEnergyConfig {
    FreeEnergyConfig {
        mode,
        h: a.h,
        ladder_intervals: a.ladder_intervals,
        prior: *prior,
        chains: a.chain.chains,
        burn_in: a.chain.burn_in,
        retained: a.chain.retained,
        thinning: a.chain.thinning,
        initial_step: a.chain.initial_step,
    }
}

fn cmd_free_energy_single(
    a: &FreeEnergyArgs,
    dir: &std::path::Path,
    workers: Option<usize>,
) -> Result<()> {
    let seed = resolve_seed(a.seed)?;
    let ds = io::load_dataset(dir)?;
    let prior = a.prior.resolve(ds.family, ds.truth.as_ref(), ds.rows, ds.cols)?;
    let ladder = quadratic_ladder(a.ladder_intervals);
    let chain = a.chain.to_config();
    let est = estimate_free_energy(&ds, a.h, &prior, &ladder, &chain, seed)?;
    let centered = match &ds.truth {
        Some(truth) => Some(centered_free_energy(&est, &ds, truth)?),
        None => None,
    };

    if let Some(csv) = &a.csv {
        let mut text = String::from("beta,expected_log_lik\n");
        for (beta, e) in ladder.iter().zip(&est.rung_expectations) {
            text.push_str(&format!("{},{}\n", io::format_cell(*beta), io::format_cell(*e)));
        }
        io::emit_text(Some(csv), &text)?;
    }

    #[derive(Serialize)]
    struct Output {
        estimate: FreeEnergyEstimate,
        centered: Option<CenteredFreeEnergy>,
    }
    eprintln!("F̂ = {:.4} ± {:.4} (n = {})", est.f_value, est.stderr, est.n);
    let report = io::Report {
        command: "free-energy",
        version: io::toolkit_version(),
        seed: Some(seed),
        workers,
        config: fe_config("single-dataset", a, &prior),
        result: Output { estimate: est, centered },
    };
    io::emit_json(a.out.as_ref(), &report)
}

fn cmd_free_energy_slope(a: &FreeEnergyArgs, ns: &[usize], workers: Option<usize>) -> Result<()> {
    let seed = resolve_seed(a.seed)?;
    let (Some(family), Some(m), Some(n_cols)) = (a.family, a.m, a.n) else {
        bail!("slope mode needs --family, --m, and --n (plus --h0 for the truth)");
    };
    if a.replications == 0 {
        bail!("slope mode needs --replications >= 1");
    }
    let truth = a.truth.build(m, n_cols)?;
    let prior = a.prior.resolve(family, Some(&truth), m, n_cols)?;
    let ladder = quadratic_ladder(a.ladder_intervals);
    let chain = a.chain.to_config();

    #[derive(Serialize)]
    struct Point {
        n: usize,
        replication: usize,
        f_value: f64,
        stderr: f64,
        centered: f64,
    }
    let mut points = Vec::new();
    let mut centered_points: Vec<CenteredFreeEnergy> = Vec::new();
    for &n in ns {
        for rep in 0..a.replications {
            let ds_seed = derive_seed(seed, &[0xD5, n as u64, rep as u64]);
            let fe_seed = derive_seed(seed, &[0xFE, n as u64, rep as u64]);
            let ds = generate_dataset_opts(family, &truth, m, n_cols, n, ds_seed, false)?;
            let est = estimate_free_energy(&ds, a.h, &prior, &ladder, &chain, fe_seed)?;
            let centered = centered_free_energy(&est, &ds, &truth)?;
            points.push(Point {
                n,
                replication: rep + 1,
                f_value: est.f_value,
                stderr: est.stderr,
                centered: centered.value,
            });
            centered_points.push(centered);
        }
    }
    let slope: LambdaSlope = fit_lambda_from_free_energy(&centered_points)?;

    if let Some(csv) = &a.csv {
        let mut text = String::from("n,replication,f_value,stderr,centered\n");
        for p in &points {
            text.push_str(&format!(
                "{},{},{},{},{}\n",
                p.n,
                p.replication,
                io::format_cell(p.f_value),
                io::format_cell(p.stderr),
                io::format_cell(p.centered),
            ));
        }
        io::emit_text(Some(csv), &text)?;
    }

    #[derive(Serialize)]
    struct Output {
        points: Vec<Point>,
        lambda_slope: LambdaSlope,
    }
    eprintln!(
        "λ slope = {:.4} ± {:.4} over n ∈ {ns:?} ({} points)",
        slope.slope, slope.stderr, points.len()
    );
    let report = io::Report {
        command: "free-energy",
        version: io::toolkit_version(),
        seed: Some(seed),
        workers,
        config: fe_config("lambda-slope", a, &prior),
        result: Output { points, lambda_slope: slope },
    };
    io::emit_json(a.out.as_ref(), &report)
}

fn cmd_free_energy(a: &FreeEnergyArgs, workers: Option<usize>) -> Result<()> {
    match (&a.data_dir, &a.n_list) {
        (Some(dir), None) => cmd_free_energy_single(a, dir, workers),
        (None, Some(ns)) => cmd_free_energy_slope(a, ns, workers),
        (None, None) => bail!("pass --data-dir (single dataset) or --n-list (slope experiment)"),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with enforces exclusivity"),
    }
}

// ---------------------------------------------------------------------------
// sbic
// ---------------------------------------------------------------------------

#[derive(Args)]
struct SbicArgs {
    /// Dataset directory (see gen-data).
    #[arg(long)]
    data_dir: PathBuf,
    /// Candidate inner widths, e.g. 1,2,3.
    #[arg(long, value_delimiter = ',')]
    candidates: Vec<u32>,
    #[command(flatten)]
    prior: PriorArgs,
    #[command(flatten)]
    chain: ChainArgs,
    /// Master seed (u64 or 'auto').
    #[arg(long, value_parser = parse_seed)]
    seed: Option<SeedArg>,
    /// Write the JSON report here (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the h,score CSV summary here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn cmd_sbic(a: &SbicArgs, workers: Option<usize>) -> Result<()> {
    let seed = resolve_seed(a.seed)?;
    let ds = io::load_dataset(&a.data_dir)?;
    let prior = a.prior.resolve(ds.family, ds.truth.as_ref(), ds.rows, ds.cols)?;
    let chain = a.chain.to_config();
    let rpt = sbic_select(&ds, &a.candidates, &prior, &chain, seed)?;

    if let Some(csv) = &a.csv {
        io::emit_text(Some(csv), &rpt.to_csv())?;
    }

    #[derive(Serialize)]
    struct Config<'a> {
        data_dir: String,
        candidates: &'a [u32],
        prior: PriorBox,
        chains: usize,
        burn_in: usize,
        retained: usize,
        thinning: usize,
        initial_step: f64,
    }
    eprintln!("selected H = {}", rpt.selected_h);
    let report = io::Report {
        command: "sbic",
        version: io::toolkit_version(),
        seed: Some(seed),
        workers,
        config: Config {
            data_dir: a.data_dir.display().to_string(),
            candidates: &a.candidates,
            prior,
            chains: a.chain.chains,
            burn_in: a.chain.burn_in,
            retained: a.chain.retained,
            thinning: a.chain.thinning,
            initial_step: a.chain.initial_step,
        },
        result: rpt,
    };
    io::emit_json(a.out.as_ref(), &report)
}

// ---------------------------------------------------------------------------
// gen-data
// ---------------------------------------------------------------------------

#[derive(Args)]
struct GenDataArgs {
    /// Observation family: gaussian, poisson, or exponential.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: u32,
    #[command(flatten)]
    truth: TruthArgs,
    /// Number of observation matrices to draw.
    #[arg(long)]
    n_obs: usize,
    /// Reject-and-redraw Gaussian observations with negative entries.
    #[arg(long)]
    truncate_gaussian: bool,
    /// Master seed (u64 or 'auto').
    #[arg(long, value_parser = parse_seed)]
    seed: Option<SeedArg>,
    /// Output dataset directory.
    #[arg(long)]
    out_dir: PathBuf,
}

fn cmd_gen_data(a: &GenDataArgs) -> Result<()> {
    let seed = resolve_seed(a.seed)?;
    let truth = a.truth.build(a.m, a.n)?;
    let ds = generate_dataset_opts(
        a.family,
        &truth,
        a.m,
        a.n,
        a.n_obs,
        seed,
        a.truncate_gaussian,
    )?;
    io::save_dataset(&a.out_dir, &ds)
        .with_context(|| format!("saving dataset to {}", a.out_dir.display()))?;
    println!(
        "wrote {} {} observations ({}x{}, H0={}, seed {seed}) to {}",
        a.n_obs,
        a.family,
        a.m,
        a.n,
        a.truth.h0,
        a.out_dir.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------

fn init_workers(requested: Option<usize>) -> Result<Option<usize>> {
    let resolved = match requested {
        Some(w) => Some(w),
        None => match std::env::var("RLCT_NMF_WORKERS") {
            Ok(s) if !s.trim().is_empty() => Some(
                s.trim()
                    .parse()
                    .context("RLCT_NMF_WORKERS must be a positive integer")?,
            ),
            _ => None,
        },
    };
    if let Some(w) = resolved {
        if w == 0 {
            bail!("worker count must be >= 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .context("initializing the worker pool")?;
    }
    Ok(resolved)
}

fn run(cli: Cli) -> Result<()> {
    let workers = init_workers(cli.workers)?;
    match &cli.command {
        Command::Rlct(a) => cmd_rlct(a, workers),
        Command::Table(a) => cmd_table(a, workers),
        Command::Volume(a) => cmd_volume(a, workers),
        Command::Generr(a) => cmd_generr(a, workers),
        Command::FreeEnergy(a) => cmd_free_energy(a, workers),
        Command::Sbic(a) => cmd_sbic(a, workers),
        Command::GenData(a) => cmd_gen_data(a),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
