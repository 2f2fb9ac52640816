use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sbm_frechet::experiment::{
    emit_report, run_experiment, ExperimentConfig, ExperimentKind, ReportFormat,
};
use sbm_frechet::frechet::BRUTE_FORCE_MAX_N;
use sbm_frechet::io::{
    read_binary_matrix, read_sample_dir, read_weighted_matrix, save_binary_matrix,
    write_barycenter, write_sample_dir,
};
use sbm_frechet::{
    brute_force_frechet_mean, delta, frechet_function_hamming, hamming, majority_median,
    resistance_barycenter, resistance_distance_sq, sample_sbm, FrechetMetric, SbmParams,
};

const DEFAULT_SEED: u64 = 20240101;

/// Sample Fréchet means of two-community stochastic block model networks.
///
/// Experiment defaults (desk scale, seed 20240101):
///   theorem1      n=6, p=0.9, q=0.1, N=201, 100 trials
///   theorem2      n in {50,100,200}, p=0.5, q=0.1, N=50, 10 trials
///   zeta-scaling  n=8, p=0.9, q=0.1, N in {16,64,256,1024}, 20 trials
///   spectrum      n=400, p=0.5, q=0.1, 50 trials
///   round-trip    n<=50, extra-edge density 0.3, 100 trials, alpha 1 and 7
#[derive(Parser, Debug)]
#[command(name = "sbm-frechet", version, verbatim_doc_comment)]
struct Cli {
    /// Base seed (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Experiment configuration in TOML.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format; both are written when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<ReportFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw N networks from G(n, p, q) into a sample directory.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        /// Number of networks N.
        #[arg(long)]
        count: usize,
    },
    /// Distance between two adjacency matrix files.
    Distance {
        #[arg(long, value_enum, default_value = "hamming")]
        metric: DistanceKind,
        a: PathBuf,
        b: PathBuf,
    },
    /// Resistance barycenter of a sample directory.
    Barycenter {
        sample: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
    /// Majority-rule median of a sample directory.
    Median { sample: PathBuf },
    /// Run a Monte-Carlo experiment (from --config, or the named defaults).
    Experiment {
        #[arg(value_enum)]
        kind: Option<ExperimentKind>,
        /// Override the number of trials.
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DistanceKind {
    /// Number of differing edges (binary inputs).
    Hamming,
    /// Bilinear extension of Hamming to [0, 1] weights.
    Delta,
    /// Squared Frobenius distance of resistance matrices.
    ResistanceSq,
    /// Square root of `resistance-sq`.
    Resistance,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn out_dir(cli_out: &Option<PathBuf>, fallback: &str) -> PathBuf {
    cli_out.clone().unwrap_or_else(|| PathBuf::from(fallback))
}

fn run(cli: Cli) -> sbm_frechet::Result<ExitCode> {
    match &cli.command {
        Command::Sample { n, p, q, count } => {
            let params = SbmParams::new(*n, *p, *q)?;
            let seed = cli.seed.unwrap_or(DEFAULT_SEED);
            let sample = sample_sbm(&params, *count, seed)?;
            let dir = out_dir(&cli.out, "sample");
            write_sample_dir(&dir, &sample, Some(&params))?;
            println!("wrote {count} networks to {}", dir.display());
        }
        Command::Distance { metric, a, b } => {
            let value = match metric {
                DistanceKind::Hamming => {
                    hamming(&read_binary_matrix(a)?, &read_binary_matrix(b)?)? as f64
                }
                DistanceKind::Delta => delta(&read_weighted_matrix(a)?, &read_weighted_matrix(b)?)?,
                DistanceKind::ResistanceSq => {
                    resistance_distance_sq(&read_weighted_matrix(a)?, &read_weighted_matrix(b)?)?
                }
                DistanceKind::Resistance => {
                    resistance_distance_sq(&read_weighted_matrix(a)?, &read_weighted_matrix(b)?)?
                        .sqrt()
                }
            };
            println!("{value}");
        }
        Command::Barycenter { sample, alpha } => {
            let (sample, _) = read_sample_dir(sample)?;
            let result = resistance_barycenter(&sample, *alpha)?;
            let dir = out_dir(&cli.out, "barycenter");
            write_barycenter(&dir, &result)?;
            println!(
                "barycenter of {} networks written to {} (entries in [{}, {}], round-trip residual {:.3e})",
                sample.len(),
                dir.display(),
                result.min_entry(),
                result.max_entry(),
                result.round_trip_residual
            );
            if sample.n() <= BRUTE_FORCE_MAX_N {
                let best = brute_force_frechet_mean(&sample, FrechetMetric::ResistanceSq)?;
                save_binary_matrix(&dir.join("binary_minimizer.txt"), &best.minimizers[0])?;
                println!(
                    "best unweighted graph: {} edges, Fréchet value {}, {} minimizer(s)",
                    best.minimizers[0].edge_count(),
                    best.value,
                    best.minimizers.len()
                );
            }
        }
        Command::Median { sample } => {
            let (sample, _) = read_sample_dir(sample)?;
            let median = majority_median(&sample);
            let dir = out_dir(&cli.out, "median");
            std::fs::create_dir_all(&dir)?;
            save_binary_matrix(&dir.join("median.txt"), &median)?;
            println!(
                "median: {} edges, Fréchet value {}",
                median.edge_count(),
                frechet_function_hamming(&median, &sample)?
            );
        }
        Command::Experiment { kind, trials } => {
            let mut config = match (&cli.config, kind) {
                (Some(path), _) => ExperimentConfig::from_file(path)?,
                (None, Some(kind)) => ExperimentConfig::default_for(*kind),
                (None, None) => {
                    return Err(sbm_frechet::Error::Config(
                        "name an experiment or pass --config".into(),
                    ))
                }
            };
            if let Some(kind) = kind {
                if *kind != config.experiment {
                    return Err(sbm_frechet::Error::Config(format!(
                        "config file describes {}, not {}",
                        config.experiment.name(),
                        kind.name()
                    )));
                }
            }
            if let Some(seed) = cli.seed {
                config.seed = seed;
            }
            if let Some(t) = trials {
                config.trials = *t;
            }
            if let Some(out) = &cli.out {
                config.output_dir = out.clone();
            }
            let report = run_experiment(&config)?;
            let formats = match cli.format {
                Some(f) => vec![f],
                None => vec![ReportFormat::Csv, ReportFormat::Json],
            };
            for f in formats {
                let path = emit_report(&report, f, Path::new(&config.output_dir))?;
                println!("wrote {}", path.display());
            }
            for c in &report.criteria {
                let status = if c.passed { "PASS" } else { "FAIL" };
                println!("{status} {} = {} ({})", c.name, c.value, c.requirement);
            }
            if !report.passed() {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
