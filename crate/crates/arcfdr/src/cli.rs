//! Argument definitions and the five subcommands.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use arcfdr_core::boosting::{solve_boost_factor, GaussianLrModel, Truncation, TruncationSpec};
use arcfdr_core::simulate::{
    parse_roster, run_adversarial, AdversarialConfig, Experiment, ExperimentConfig, ProcedureKind,
};
use arcfdr_core::WeightSequence;
use clap::{ArgGroup, Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::checks;
use crate::output::{write_rows, write_rows_atomically};
use crate::parallel::{run_experiment, with_threads};
use crate::stream::{build_procedure, run_stream, StreamSpec};

#[derive(Debug, Parser)]
#[command(name = "arcfdr", version, about = "Online multiple testing with accept-to-reject changes")]
pub struct Cli {
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte-Carlo power, FDR and SupFDR in the Gaussian batch model, as CSV.
    Simulate(SimulateArgs),
    /// Runs one procedure over scores read line by line.
    Stream(StreamArgs),
    /// Solves for boosting factors of the Gaussian likelihood-ratio e-value.
    BoostFactor(BoostArgs),
    /// FDP of online BH at the stopping time of the adversarial construction.
    Adversarial(AdversarialArgs),
    /// Compares the streaming procedures with the brute-force oracles.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Comma-separated roster; `name@q` overrides q, `all` adds every procedure.
    #[arg(long, default_value = "all")]
    pub procedures: String,
    #[arg(long, default_value_t = 3.5)]
    pub mu_a: f64,
    /// `start:stop:step` (inclusive) or a comma-separated list.
    #[arg(long, default_value = "0.1:0.9:0.1")]
    pub pi_a: String,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub m: usize,
    /// Batch size of the equicorrelated blocks.
    #[arg(long, default_value_t = 1)]
    pub batch: usize,
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    #[arg(long, default_value_t = 0.99)]
    pub q: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Compute p-values from the standardized statistic instead of the observed one.
    #[arg(long)]
    pub literal_p: bool,
    /// Series cutoff for boosting factors (default: n).
    #[arg(long)]
    pub boost_cutoff: Option<u64>,
    /// Check nestedness, self-consistency and domination at every step.
    #[arg(long)]
    pub audit: bool,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output CSV (default: standard output).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("weights").required(true).args(["uniform", "q"])))]
pub struct StreamArgs {
    #[arg(long, default_value = "oe-bh")]
    pub procedure: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// `γ_t = 1/K` for `t ≤ K`.
    #[arg(long, value_name = "K")]
    pub uniform: Option<usize>,
    /// `γ_t = q^{t-1}(1-q)`.
    #[arg(long)]
    pub q: Option<f64>,
    /// Decision deadline `d_t = t + lag` for e-toad and toad.
    #[arg(long)]
    pub deadline_lag: Option<usize>,
    /// `K` of the BY shape for r-lond and obr (default: the uniform K).
    #[arg(long)]
    pub by_k: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    /// Read scores from a file instead of standard input.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoostArgs {
    #[arg(long, default_value_t = 3.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    pub gamma: f64,
    #[arg(long, default_value = "plus,minus,local-plus,local-minus")]
    pub variants: String,
    #[arg(long, default_value = "10,100")]
    pub s: String,
    /// Lagged `k*` values for the local variants.
    #[arg(long, default_value = "2,10")]
    pub lag: String,
}

#[derive(Debug, Args)]
pub struct AdversarialArgs {
    /// Number of leading nulls.
    #[arg(long, default_value_t = 1000)]
    pub k0: usize,
    /// Total number of hypotheses (default: 2·k0).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value = "0.1,0.05,0.01")]
    pub alpha: String,
    #[arg(long, default_value_t = 500)]
    pub m: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Stream lengths for the offline comparison.
    #[arg(long, default_value = "5,50,500")]
    pub k: String,
    #[arg(long, default_value_t = 1000)]
    pub instances: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long, default_value_t = 10_000)]
    pub simes_instances: usize,
    #[arg(long, default_value_t = 50)]
    pub simes_max_k: usize,
    #[arg(long, default_value_t = 200)]
    pub sup_instances: usize,
    #[arg(long, default_value_t = 12)]
    pub sup_k: usize,
    #[arg(long, default_value_t = 8)]
    pub sup_k0: usize,
    #[arg(long, default_value_t = 0.1)]
    pub sup_alpha: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    text.split(',').map(|s| s.trim().parse::<T>().with_context(|| format!("bad {what} value {s:?}"))).collect()
}

/// `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_pi_a(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [_] => parse_list(text, "pi-a"),
        [a, b, step] => {
            let (a, b, step): (f64, f64, f64) = (a.trim().parse()?, b.trim().parse()?, step.trim().parse()?);
            if !(step > 0.0 && b >= a && a.is_finite() && b.is_finite()) {
                bail!("pi-a range {text:?} needs start <= stop and a positive step");
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12).collect())
        }
        _ => bail!("pi-a {text:?} is neither start:stop:step nor a list"),
    }
}

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let roster = parse_roster(&args.procedures)?;
    let mut cfg = ExperimentConfig::new(
        args.n,
        args.m,
        args.mu_a,
        parse_pi_a(&args.pi_a)?,
        args.batch,
        args.q,
        args.alpha,
        args.seed,
    );
    cfg.rho = args.rho;
    cfg.lambda = args.lambda;
    cfg.literal_p = args.literal_p;
    cfg.boost_cutoff = args.boost_cutoff;
    cfg.audit = args.audit;
    let exp = Experiment::prepare(cfg, roster)?;
    let rows = with_threads(args.threads, || run_experiment(&exp))??;
    match &args.output {
        Some(path) => write_rows_atomically(path, &rows),
        None => write_rows(out, &rows),
    }
}

pub fn cmd_stream(args: &StreamArgs, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<()> {
    let kind: ProcedureKind = args.procedure.parse()?;
    let weights = match (args.uniform, args.q) {
        (Some(k), None) => WeightSequence::uniform(k)?,
        (None, Some(q)) => WeightSequence::geometric(q)?,
        _ => bail!("give exactly one of --uniform and --q"),
    };
    let spec = StreamSpec {
        kind,
        weights,
        alpha: args.alpha,
        deadline_lag: args.deadline_lag,
        by_k: args.by_k.or(args.uniform),
        lambda: args.lambda,
    };
    let mut procedure = build_procedure(&spec)?;
    match &args.input {
        Some(path) => {
            let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
            run_stream(procedure.as_mut(), BufReader::new(file), out)?;
        }
        None => {
            run_stream(procedure.as_mut(), input, out)?;
        }
    }
    Ok(())
}

fn truncation(variant: &str, s: u64, lag: u64) -> Result<Truncation> {
    Ok(match variant {
        "plus" => Truncation::PlusCutoff { s },
        "minus" => Truncation::MinusCutoff { s },
        "local-plus" => Truncation::LocalPlus { s, lag_kstar: lag },
        "local-minus" => Truncation::LocalMinus { s, lag_kstar: lag },
        "toad" => Truncation::Toad { deadline: s },
        _ => bail!("unknown variant {variant:?} (plus, minus, local-plus, local-minus, toad)"),
    })
}

pub fn cmd_boost_factor(args: &BoostArgs, out: &mut dyn Write) -> Result<()> {
    let model = GaussianLrModel::new(args.delta)?;
    let variants: Vec<String> = parse_list(&args.variants, "variant")?;
    let cutoffs: Vec<u64> = parse_list(&args.s, "s")?;
    let lags: Vec<u64> = parse_list(&args.lag, "lag")?;
    writeln!(out, "{:<12} {:>6} {:>5} {:>10} {:>12}", "variant", "s", "lag", "b", "residual")?;
    for variant in &variants {
        let local = variant.starts_with("local");
        for &s in &cutoffs {
            let lag_values: Vec<Option<u64>> = if local { lags.iter().map(|&l| Some(l)).collect() } else { vec![None] };
            for lag in lag_values {
                let t = truncation(variant, s, lag.unwrap_or(0))?;
                let spec = TruncationSpec::new(args.alpha, args.gamma, t)?;
                let lag_text = lag.map_or_else(|| "-".to_string(), |l| l.to_string());
                let b = solve_boost_factor(&model, &spec)
                    .with_context(|| format!("no boosting factor for {variant} s={s} lag={lag_text}"))?;
                writeln!(out, "{:<12} {:>6} {:>5} {:>10.6} {:>12.3e}", variant, s, lag_text, b.b, b.residual)?;
            }
        }
    }
    Ok(())
}

pub fn cmd_adversarial(args: &AdversarialArgs, out: &mut dyn Write) -> Result<()> {
    let alphas: Vec<f64> = parse_list(&args.alpha, "alpha")?;
    let configs = alphas
        .iter()
        .map(|&a| match args.k {
            Some(k) => AdversarialConfig::with_total(k, args.k0, a),
            None => AdversarialConfig::new(args.k0, a),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let summaries =
        configs.par_iter().map(|cfg| run_adversarial(cfg, args.m, args.seed)).collect::<Result<Vec<_>, _>>()?;
    writeln!(out, "alpha,k0,k,feasible,infeasible,mean_fdp,stderr,fdp_over_alpha")?;
    for (cfg, s) in configs.iter().zip(&summaries) {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            cfg.alpha,
            cfg.k0,
            cfg.k,
            s.feasible,
            s.infeasible,
            s.mean_fdp.mean,
            s.mean_fdp.stderr,
            s.inflation(cfg.alpha)
        )?;
    }
    Ok(())
}

pub fn cmd_oracle_check(args: &OracleArgs, out: &mut dyn Write) -> Result<()> {
    let ks: Vec<usize> = parse_list(&args.k, "k")?;
    let reports = ks
        .par_iter()
        .map(|&k| checks::offline_equivalence(k, args.instances, args.alpha, args.lambda, args.seed))
        .collect::<Result<Vec<_>>>()?;
    let mut failed = false;
    for (k, r) in ks.iter().zip(&reports) {
        writeln!(
            out,
            "offline K={k}: {} instances, mismatches e-BH {} BH {} Storey-BH {}",
            r.instances, r.ebh_mismatches, r.bh_mismatches, r.storey_mismatches
        )?;
        for e in &r.examples {
            writeln!(out, "  {e}")?;
        }
        failed |= !r.passed();
    }
    let simes = checks::simes_equivalence(args.simes_instances, args.simes_max_k, args.alpha, args.seed)?;
    writeln!(out, "weighted Simes vs weighted BH: {} instances, {} mismatches", simes.instances, simes.mismatches)?;
    for e in &simes.examples {
        writeln!(out, "  {e}")?;
    }
    failed |= !simes.passed();
    let sup = checks::small_instance_supremum(args.sup_instances, args.sup_k, args.sup_k0, args.sup_alpha, args.seed)?;
    writeln!(
        out,
        "self-consistent supremum K={}: {} violations, e-value mean sup {:.5} (se {:.5}) vs pi0*alpha {:.5}",
        args.sup_k, sup.violations, sup.e_sup.mean, sup.e_sup.stderr, sup.bound
    )?;
    for e in &sup.examples {
        writeln!(out, "  {e}")?;
    }
    failed |= !sup.passed();
    if failed {
        bail!("oracle check failed");
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Simulate(a) => cmd_simulate(a, &mut out),
        Command::Stream(a) => cmd_stream(a, &mut io::stdin().lock(), &mut out),
        Command::BoostFactor(a) => cmd_boost_factor(a, &mut out),
        Command::Adversarial(a) => cmd_adversarial(a, &mut out),
        Command::OracleCheck(a) => cmd_oracle_check(a, &mut out),
    }
}
