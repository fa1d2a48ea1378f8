use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::Parser;
use iwasawa_bench::cache::Cache;
use iwasawa_bench::commands::{run_command, Command, RunConfig};
use iwasawa_bench::curvefile::{parse_curve_file, parse_pair_file, resolve};
use iwasawa_bench::report::{write_lines, Params};

/// Elliptic curve p-adic L-function workbench. Writes one JSON object per
/// line.
#[derive(Parser, Debug)]
#[command(name = "iwb", version)]
struct Cli {
    command: Command,
    /// Curve labels; pair commands take them two at a time.
    labels: Vec<String>,
    #[arg(long, default_value_t = 5)]
    p: u64,
    /// Level `n` of the measure tower.
    #[arg(long, default_value_t = 1)]
    level: u32,
    /// p-adic precision `M`.
    #[arg(long, default_value_t = 6)]
    prec: u32,
    /// Power series degree `d`.
    #[arg(long, default_value_t = 4)]
    degree: usize,
    /// Largest `a_n` index any computation may use.
    #[arg(long, default_value_t = 100_000)]
    nmax: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Largest modular symbol denominator accepted.
    #[arg(long, default_value_t = 256)]
    denom_bound: u64,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// File of `label : a1 a2 a3 a4 a6` records.
    #[arg(long)]
    curves: Option<PathBuf>,
    /// File of label pairs.
    #[arg(long)]
    pairs: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Discriminant bound for `twist-search`.
    #[arg(long, default_value_t = 200)]
    twist_bound: u64,
    #[arg(long, default_value_t = 5)]
    twist_limit: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global().context("thread pool")?;
    }
    let params = Params { level: cli.level, prec: cli.prec, degree: cli.degree, nmax: cli.nmax, tol: cli.tol, denom_bound: cli.denom_bound };
    let mut cfg = RunConfig::new(cli.p, params);
    cfg.twist_bound = cli.twist_bound;
    cfg.twist_limit = cli.twist_limit;
    if let Some(dir) = &cli.cache_dir {
        cfg.cache = Some(Cache::new(dir)?);
    }

    let loaded = match &cli.curves {
        Some(path) => parse_curve_file(path)?,
        None => Vec::new(),
    };
    let mut curves = Vec::new();
    let mut pairs = Vec::new();
    if cli.command.takes_pairs() {
        if !cli.labels.len().is_multiple_of(2) {
            bail!("{} takes labels in pairs", cli.command.name());
        }
        for two in cli.labels.chunks(2) {
            pairs.push((resolve(&two[0], &loaded)?, resolve(&two[1], &loaded)?));
        }
        if let Some(path) = &cli.pairs {
            for (a, b) in parse_pair_file(path)? {
                pairs.push((resolve(&a, &loaded)?, resolve(&b, &loaded)?));
            }
        }
        if pairs.is_empty() {
            bail!("{} needs at least one pair", cli.command.name());
        }
    } else if cli.command != Command::Selfcheck {
        curves = cli.labels.iter().map(|l| resolve(l, &loaded)).collect::<Result<_, _>>()?;
        if cli.labels.is_empty() {
            curves = loaded;
        }
        if curves.is_empty() {
            bail!("{} needs curve labels or --curves", cli.command.name());
        }
    }

    let lines = run_command(cli.command, &curves, &pairs, &cfg);
    let ok = !lines.iter().any(|l| l.is_failure());
    match &cli.out {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_lines(&mut BufWriter::new(f), &lines)?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_lines(&mut lock, &lines)?;
            lock.flush()?;
        }
    }
    Ok(ok)
}
