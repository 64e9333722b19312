use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use coherent_magic::harness::{
    aggregate, ingest_experiment, phase_diagram, run_sweep, write_ingest_csv, write_phase_csv, write_summary_csv,
    RateMode, SweepConfig,
};
use coherent_magic::magic_measures::SyndromeWeighting;
use coherent_magic::pauli_core::{circuit_to_tableau, derive_seed, sample_encoder};
use coherent_magic::Error as CoreError;
use coherent_magic::scaling_analysis::{
    bootstrap_stderr, fit_collapse, write_collapse_csv, CollapseConfig, DataPoint, DEFAULT_RESAMPLES,
    DEFAULT_RESAMPLE_SIZE,
};
use coherent_magic::schur_weyl::{analytic_renyi_row, write_analytic_csv};
use coherent_magic::vanishing_rate::{
    class_summaries, classify_syndromes, vanishing_prediction_from, write_classification_csv,
};

#[derive(Parser)]
#[command(name = "coherent-magic", version, about = "Magic and conditional entropy of random Clifford codes under coherent Rz errors")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Master seed (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file, or directory for commands that write several files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Circuit-count multiplier (overrides the config file).
    #[arg(long, global = true)]
    budget: Option<f64>,
    /// Sweep configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print a random encoder circuit as JSON.
    SampleCircuit {
        #[arg(long)]
        n: usize,
        /// Layer count (default: n).
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Run a sweep; writes records.jsonl and summary.csv into --out.
    Sweep,
    /// Mean densities over a grid of code rates.
    PhaseDiagram {
        #[arg(long, value_delimiter = ',', required = true)]
        rates: Vec<f64>,
    },
    /// Closed-form single-logical-qubit predictions for one encoder.
    Vanishing {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        /// Average uniformly over syndromes instead of with Born weights.
        #[arg(long)]
        uniform: bool,
        /// Also write the per-syndrome classification CSV at the first angle.
        #[arg(long)]
        classes: Option<PathBuf>,
    },
    /// Circuit-averaged Rényi conditional entropy from the commutant.
    AnalyticRenyi {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0.5)]
        rate: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
    },
    /// Finite-size scaling collapse of a CSV with `n` and `alpha` columns.
    Collapse {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "density")]
        column: String,
        /// Error column, used by `--weighted`.
        #[arg(long, default_value = "density_stderr")]
        err_column: String,
        /// Keep only rows whose `measure` column equals this.
        #[arg(long)]
        measure: Option<String>,
        /// Fit window `lo,hi` in α (default: around the centre of the α_c search range).
        #[arg(long, value_delimiter = ',')]
        window: Option<Vec<f64>>,
        /// Weight residuals by `1/stderr²`; every point needs a positive stderr.
        #[arg(long)]
        weighted: bool,
        /// Write the rescaled data here.
        #[arg(long)]
        collapsed: Option<PathBuf>,
    },
    /// Bootstrap standard error of whitespace-separated numbers.
    Bootstrap {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
        resamples: usize,
        #[arg(long, default_value_t = DEFAULT_RESAMPLE_SIZE)]
        size: usize,
    },
    /// Score measured bitstring counts against replayed ideal distributions.
    Ingest {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn load_config(common: &Common) -> Result<SweepConfig> {
    let path = common.config.as_ref().context("--config is required")?;
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut cfg = SweepConfig::from_toml(&text)?;
    if let Some(s) = common.seed {
        cfg.master_seed = s;
    }
    if let Some(b) = common.budget {
        cfg.budget = b;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(common: &Common) -> Result<PathBuf> {
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn read_collapse_points(
    path: &Path,
    column: &str,
    err_column: &str,
    measure: Option<&str>,
) -> Result<Vec<DataPoint>> {
    let mut rd = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let headers = rd.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let (Some(ni), Some(ai), Some(vi)) = (find("n"), find("alpha"), find(column)) else {
        bail!("{} needs columns n, alpha and {column}", path.display());
    };
    let ei = find(err_column);
    let mi = find("measure");
    let countc = find("count");
    let mut pts = Vec::new();
    for row in rd.records() {
        let row = row?;
        if let (Some(m), Some(mi)) = (measure, mi) {
            if &row[mi] != m {
                continue;
            }
        }
        let mut p = DataPoint::new(row[ni].parse()?, row[ai].parse()?, row[vi].parse()?);
        if let Some(ei) = ei {
            p.stderr = Some(row[ei].parse()?);
        }
        if let Some(ci) = countc {
            p.count = row[ci].parse()?;
        }
        pts.push(p);
    }
    Ok(pts)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let common = &cli.common;
    if let Some(t) = common.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let out = common.out.as_deref();
    match cli.command {
        Command::SampleCircuit { n, depth } => {
            let spec = sample_encoder(n, depth.unwrap_or(n), common.seed.unwrap_or(0))?;
            write_json(out, &spec)?;
        }
        Command::Sweep => {
            let cfg = load_config(common)?;
            let dir = out_dir(common)?;
            let result = run_sweep(&cfg)?;
            result.write_jsonl(BufWriter::new(File::create(dir.join("records.jsonl"))?))?;
            write_summary_csv(File::create(dir.join("summary.csv"))?, &aggregate(&result.records))?;
            eprintln!(
                "{} records, {} encoders redrawn, {} circuit slots failed",
                result.records.len(),
                result.resampled_events,
                result.failed_circuits
            );
            if !result.failed_points.is_empty() {
                eprintln!("points with no data: {:?}", result.failed_points);
                return Ok(ExitCode::from(2));
            }
        }
        Command::PhaseDiagram { rates } => {
            let cfg = load_config(common)?;
            let cells = phase_diagram(&cfg, &rates)?;
            write_phase_csv(sink(out)?, &cells)?;
        }
        Command::Vanishing {
            n,
            depth,
            alphas,
            uniform,
            classes,
        } => {
            // non-generic encoders are redrawn from seeds derived from the given one
            let base = common.seed.unwrap_or(0);
            let mut drawn = None;
            for attempt in 0..64u64 {
                let seed = if attempt == 0 { base } else { derive_seed(base, &[attempt]) };
                let tableau = circuit_to_tableau(&sample_encoder(n, depth.unwrap_or(n), seed)?);
                match classify_syndromes(&tableau) {
                    Ok(c) => {
                        drawn = Some((seed, c));
                        break;
                    }
                    Err(CoreError::NonGenericCode { .. }) => continue,
                    Err(e) => return Err(e.into()),
                }
            }
            let (seed, cls) = drawn.context("no generic encoder in 64 draws")?;
            if seed != base {
                eprintln!("encoder seed {base} is not generic, using {seed}");
            }
            let weighting = if uniform {
                SyndromeWeighting::Uniform
            } else {
                SyndromeWeighting::Born
            };
            #[derive(Serialize)]
            struct Entry {
                seed: u64,
                prediction: coherent_magic::vanishing_rate::VanishingPrediction,
                classes: Vec<coherent_magic::vanishing_rate::ClassSummary>,
            }
            let entries = alphas
                .iter()
                .map(|&a| {
                    Ok(Entry {
                        seed,
                        prediction: vanishing_prediction_from(&cls, a, weighting)?,
                        classes: class_summaries(&cls, a)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(path) = classes {
                write_classification_csv(File::create(path)?, &cls, alphas[0])?;
            }
            write_json(out, &entries)?;
        }
        Command::AnalyticRenyi { sizes, rate, alphas } => {
            if !(rate > 0.0 && rate <= 1.0) {
                bail!("rate {rate} outside (0, 1]");
            }
            let mut rows = Vec::new();
            for &n in &sizes {
                let k = RateMode::Constant { r: rate }.logical_count(n);
                for &a in &alphas {
                    rows.push(analytic_renyi_row(a, n, k)?);
                }
            }
            write_analytic_csv(sink(out)?, &rows)?;
        }
        Command::Collapse {
            input,
            column,
            err_column,
            measure,
            window,
            weighted,
            collapsed,
        } => {
            if window.as_ref().is_some_and(|w| w.len() != 2) {
                bail!("--window takes two values");
            }
            let pts = read_collapse_points(&input, &column, &err_column, measure.as_deref())?;
            if weighted && !pts.iter().all(|p| p.stderr.is_some_and(|e| e > 0.0)) {
                bail!("--weighted needs a positive `{err_column}` on every row");
            }
            let cfg = CollapseConfig {
                window: window.map(|w| (w[0], w[1])),
                weighted,
                ..CollapseConfig::default()
            };
            let fit = fit_collapse(&pts, &cfg)?;
            if let Some(path) = collapsed {
                write_collapse_csv(File::create(path)?, &pts, &fit)?;
            }
            write_json(out, &fit)?;
        }
        Command::Bootstrap { input, resamples, size } => {
            let text = std::fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let sample = text
                .split_whitespace()
                .map(str::parse::<f64>)
                .collect::<Result<Vec<_>, _>>()?;
            write_json(out, &bootstrap_stderr(&sample, resamples, size, common.seed.unwrap_or(0))?)?;
        }
        Command::Ingest { files } => {
            let result = ingest_experiment(&files, common.seed.unwrap_or(0))?;
            for f in &result.failures {
                eprintln!("{}: {}", f.file, f.message);
            }
            match out {
                Some(_) => {
                    let dir = out_dir(common)?;
                    write_ingest_csv(File::create(dir.join("records.csv"))?, &result.records)?;
                    write_json(Some(&dir.join("summary.json")), &result.summaries)?;
                }
                None => write_json(None, &result)?,
            }
            if result.records.is_empty() {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
