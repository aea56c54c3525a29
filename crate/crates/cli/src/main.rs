//! `hdx`: build, certify, walk, verify, generate and report on `.cplx`
//! simplicial complexes.
//!
//! Exit codes: 0 success, 1 other errors, 2 parse errors, 3 exact-mode cap
//! exceeded, 4 a bound or invariant was violated, 5 mixing requested on a
//! disconnected graph.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hdx_walks::HdxError;

#[derive(Parser, Debug)]
#[command(name = "hdx", version, about = "High-order random walks on simplicial complexes")]
struct Cli {
    /// Worker threads for exhaustive searches (0 = one per core).
    #[arg(long, global = true, env = "HDX_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CapArgs {
    /// Largest vertex count for exhaustive subset searches.
    #[arg(long, default_value_t = hdx_walks::search::DEFAULT_SUBSET_CAP)]
    pub subset_cap: usize,
    /// Largest |X(i)| for the exhaustive colorful expansion search.
    #[arg(long, default_value_t = hdx_walks::certify::DEFAULT_COCHAIN_CAP)]
    pub cochain_cap: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a complex and summarize its levels.
    Build {
        input: PathBuf,
        /// Write the canonical `.cplx` form here.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Compute α, ε, conductance and bipartiteness and write a certificate.
    Certify {
        input: PathBuf,
        /// Write the JSON certificate here.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also run every lemma and spectral inequality.
        #[arg(long)]
        all: bool,
        /// Check the part-pair mixing bounds of a partite-regular complex.
        #[arg(long)]
        skeleton_mixing: bool,
        /// Fall back to sampling or local search above the caps.
        #[arg(long)]
        sampled: bool,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        caps: CapArgs,
        #[arg(long)]
        json: bool,
    },
    /// Exact t-step distributions, mixing bound table and simulation.
    Walk {
        input: PathBuf,
        /// Level i of the walk on X(i).
        #[arg(long)]
        dim: isize,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start face as comma-separated labels (`a,c` or `ac` for
        /// one-character labels). Default: every face for the exact table,
        /// a stationary draw for simulation.
        #[arg(long)]
        start: Option<String>,
        /// Use the lazy walk (I + P)/2.
        #[arg(long)]
        lazy: bool,
        /// Number of simulated trajectories.
        #[arg(long, default_value_t = 0)]
        simulate: u64,
        /// Dump the first simulated trajectory here.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        /// Require the mixing bound table; fails on a disconnected graph.
        #[arg(long)]
        mixing: bool,
        /// Additive allowance in the mixing bound.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long)]
        json: bool,
    },
    /// Run every check and randomized proof-trace instances.
    Verify {
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        caps: CapArgs,
        #[arg(long)]
        json: bool,
        /// Perturb a stored degree before verifying: `LEVEL:INDEX:DELTA`.
        #[arg(long, hide = true)]
        corrupt_degree: Option<String>,
    },
    /// Emit a generated complex in `.cplx` form.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Spectrum of the normalized adjacency matrix of G_i.
    Report {
        input: PathBuf,
        /// Level; all levels 0..d when omitted.
        #[arg(long)]
        dim: Option<isize>,
        #[arg(long)]
        lazy: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum GenerateKind {
    /// All (d+1)-subsets of n vertices.
    Complete {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
    },
    /// Complete partite complex, e.g. `--parts 2,2,2`.
    Multipartite {
        #[arg(long, value_delimiter = ',', required = true)]
        parts: Vec<usize>,
    },
    /// Each (d+1)-subset of n vertices kept with probability p.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A failure with its exit code.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<HdxError> for Failure {
    fn from(e: HdxError) -> Self {
        let code = match &e {
            HdxError::Parse { .. } | HdxError::EmptyInput | HdxError::MixedDimension { .. } | HdxError::DuplicateVertexInFace(_) => 2,
            HdxError::TooLargeForExact { .. } => 3,
            HdxError::BoundViolated { .. } | HdxError::InvariantViolated(_) | HdxError::NotPartiteRegular(_) => 4,
            HdxError::DisconnectedGraph { .. } => 5,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let result = match cli.command {
        Command::Build { input, output, json } => commands::build(&input, output.as_deref(), json),
        Command::Certify {
            input,
            output,
            all,
            skeleton_mixing,
            sampled,
            trials,
            seed,
            caps,
            json,
        } => commands::certify(commands::CertifyArgs {
            input,
            output,
            all,
            skeleton_mixing,
            sampled,
            trials,
            seed,
            caps,
            json,
        }),
        Command::Walk {
            input,
            dim,
            steps,
            seed,
            start,
            lazy,
            simulate,
            trajectory,
            mixing,
            tolerance,
            json,
        } => commands::walk(commands::WalkArgs {
            input,
            dim,
            steps,
            seed,
            start,
            lazy,
            simulate,
            trajectory,
            mixing,
            tolerance,
            json,
        }),
        Command::Verify {
            input,
            trials,
            seed,
            caps,
            json,
            corrupt_degree,
        } => commands::verify(&input, trials, seed, &caps, json, corrupt_degree.as_deref()),
        Command::Generate { kind, output } => commands::generate(&kind, output.as_deref()),
        Command::Report { input, dim, lazy, json } => commands::report(&input, dim, lazy, json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
