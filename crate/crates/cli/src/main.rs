//! `revexp`: file-based stages for building experience-aware code review
//! datasets.
//!
//! Every stage reads JSONL or text inputs, writes its primary outputs into
//! `--out`, and records a `<output>.meta.json` sidecar with the tool version,
//! configuration, seed and input hashes. Errors go to stderr as one JSON
//! object; exit code 1 is a runtime failure, 2 a usage error.

mod error;
mod io;
mod stages;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use revexp_core::sampling::{DEFAULT_RATE, DEFAULT_THRESHOLD};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "revexp", version, about = "Reviewer-experience pipeline for code review datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Output directory (created if missing)
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate and normalize raw commit, pull request and comment dumps
    Ingest {
        #[arg(long)]
        commits: PathBuf,
        #[arg(long)]
        pulls: PathBuf,
        #[arg(long)]
        comments: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Drop untraceable, bot and code-only comments
    Filter {
        #[arg(long)]
        comments: PathBuf,
        /// One account name per line
        #[arg(long)]
        botlist: Option<PathBuf>,
        /// Accounts never treated as bots
        #[arg(long)]
        allowlist: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Annotate comments with the six ownership ratios
    Ownership {
        #[arg(long)]
        commits: PathBuf,
        #[arg(long)]
        pulls: PathBuf,
        #[arg(long)]
        comments: PathBuf,
        /// Repository for history records without a "repo" field
        /// [default: repo of the first comment]
        #[arg(long)]
        repo: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Attach per-example loss weights
    Weight {
        #[arg(long)]
        annotated: PathBuf,
        /// aco, rso, avg or max
        #[arg(long)]
        strategy: String,
        /// repo, sys or pkg
        #[arg(long, default_value = "repo")]
        level: String,
        #[command(flatten)]
        output: Output,
    },
    /// Replicate comments written by major owners
    Oversample {
        #[arg(long)]
        input: PathBuf,
        /// ma, mr or mrma
        #[arg(long)]
        group: String,
        /// Percentage; a positive multiple of 100
        #[arg(long, default_value_t = DEFAULT_RATE)]
        rate: u32,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long, default_value = "repo")]
        level: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Corpus BLEU-4 with stop words removed and kept
    Bleu {
        /// One candidate per line
        #[arg(long)]
        candidates: PathBuf,
        /// One reference per line, aligned with the candidates
        #[arg(long)]
        references: PathBuf,
        #[arg(long)]
        stopwords: Option<PathBuf>,
        #[arg(long)]
        no_smoothing: bool,
        /// Also write bleu.json here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-tailed two-proportion z-test
    Ztest {
        /// successes/trials of the first sample, e.g. 54/100
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// greater or less
        #[arg(long, default_value = "greater")]
        direction: String,
        /// Also write ztest.json here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summary statistics, histogram, correlations and extreme groups
    Stats {
        /// Annotated or weighted JSONL
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "aco_repo")]
        field: String,
        /// Number of histogram bins
        #[arg(long, default_value_t = 20)]
        hist: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Train the toy generator with and without loss weights
    TrainToy {
        /// Weighted JSONL; the built-in conflict corpus when omitted
        #[arg(long)]
        weighted: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        lr: f64,
        #[arg(long, default_value_t = 200)]
        epochs: usize,
        #[arg(long, default_value_t = 8)]
        batch: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Target length for sequences taken from --weighted
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Also write train_toy.json here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("REVEXP_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("REVEXP_THREADS must be a positive integer, got {value:?}")))?;
    // fails only if a pool already exists, which cannot happen this early
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn run(command: Command) -> Result<(), CliError> {
    configure_threads()?;
    match command {
        Command::Ingest { commits, pulls, comments, output } => {
            stages::ingest(&commits, &pulls, &comments, &output.out)
        }
        Command::Filter { comments, botlist, allowlist, output } => {
            stages::filter(&comments, botlist.as_deref(), allowlist.as_deref(), &output.out)
        }
        Command::Ownership { commits, pulls, comments, repo, output } => {
            stages::ownership(&commits, &pulls, &comments, repo.as_deref(), &output.out)
        }
        Command::Weight { annotated, strategy, level, output } => {
            stages::weight(&annotated, &strategy, &level, &output.out)
        }
        Command::Oversample { input, group, rate, threshold, level, seed, output } => {
            stages::oversample(&input, &group, rate, threshold, &level, seed, &output.out)
        }
        Command::Bleu { candidates, references, stopwords, no_smoothing, out } => {
            stages::bleu(&candidates, &references, stopwords.as_deref(), !no_smoothing, out.as_deref())
        }
        Command::Ztest { a, b, direction, out } => stages::ztest(&a, &b, &direction, out.as_deref()),
        Command::Stats { input, field, hist, output } => stages::stats(&input, &field, hist, &output.out),
        Command::TrainToy { weighted, lr, epochs, batch, seed, max_len, out } => {
            let config = revexp_core::toy::TrainConfig { lr, epochs, batch_size: batch, seed };
            stages::train_toy(weighted.as_deref(), &config, max_len, out.as_deref())
        }
    }
}

fn fail(err: &CliError) -> ExitCode {
    eprintln!("{}", err.to_json());
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return fail(&CliError::usage(e.to_string().trim_end()));
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
