//! `lssd`: optimal classical, no-signalling and NPA-bounded quantum values
//! of local simultaneous state discrimination games.
//!
//! Exit codes: 0 success, 1 computational failure, 2 input error.

mod commands;
mod grid;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "lssd", version, about)]
struct Cli {
    /// Worker threads for sweeps and the gap analysis (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Seed for all randomized components (optimizer starts, Monte Carlo).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one game file for its classical / no-signalling / NPA values.
    Solve {
        /// Game file (JSON).
        game: PathBuf,
        /// Comma-separated modes: classical, ns, npa.
        #[arg(long, default_value = "classical,ns")]
        modes: String,
        /// Enumeration budget override for the classical search.
        #[arg(long)]
        budget: Option<u128>,
        /// SDP tolerance for the npa mode.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Dump the optimal no-signalling behavior as JSON (ns mode only).
        #[arg(long)]
        dump_behavior: Option<PathBuf>,
        /// Output path for the JSON report (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the BSC game over a noise grid; CSV output.
    Sweep {
        /// Grid start:stop:steps within [0, 1/2].
        #[arg(long, default_value = "0:0.5:51")]
        alpha_grid: String,
        /// Parallel copies of the base game.
        #[arg(long, default_value_t = 1)]
        copies: usize,
        /// Scalar backend: rational (exact) or float.
        #[arg(long, default_value = "rational")]
        scalar: String,
        /// Comma-separated values to compute: classical, ns, npa.
        /// Defaults to classical,ns for up to two copies, ns above.
        #[arg(long)]
        modes: Option<String>,
        /// SDP tolerance when npa is requested.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Output path for the CSV (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the three-party binary no-signalling gap (the full polytope
    /// enumeration plus one LP per candidate vertex).
    Gap3 {
        /// Dump the enumerated vertices as JSON.
        #[arg(long)]
        dump_vertices: Option<PathBuf>,
        /// Output path for the JSON report (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the vertices of a no-signalling polytope.
    Vertices {
        /// Output alphabet size (the hidden value's alphabet).
        #[arg(long, default_value_t = 2)]
        x_size: usize,
        /// Comma-separated input alphabet sizes, one per party.
        #[arg(long, default_value = "2,2")]
        inputs: String,
        /// Dump the vertices as JSON arrays of "num/den" strings.
        #[arg(long)]
        dump_vertices: Option<PathBuf>,
    },
    /// Finite-n exponents of the Hamming-ball strategies and their limit.
    Exponent {
        /// Comma-separated block lengths.
        #[arg(long, default_value = "1,2,4,8,16,32")]
        n_list: String,
        /// Grid start:stop:steps within [0, 1/2].
        #[arg(long, default_value = "0.01:0.49:49")]
        alpha_grid: String,
        /// Cross-check the limit column against the numerical optimizer.
        #[arg(long)]
        check_limit: bool,
        /// Output path for the CSV (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// NPA level-"1+MN" upper bound on the quantum value.
    Npa {
        /// Game file (JSON); exclusive with --alpha.
        #[arg(long)]
        game: Option<PathBuf>,
        /// BSC noise level (builds the game directly).
        #[arg(long)]
        alpha: Option<String>,
        /// Parallel copies when building from --alpha.
        #[arg(long, default_value_t = 1)]
        copies: usize,
        /// Solver tolerance on the combined residual.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Dump the constraint system in the documented sparse text format.
        #[arg(long)]
        dump_sdp: Option<PathBuf>,
        /// Output path for the JSON report (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate code-based strategies on the BSC game; CSV output.
    Codes {
        /// Builtin code: hamming7, repetition:N, identity:N or ball:N:D.
        #[arg(long)]
        builtin: Option<String>,
        /// Code file (JSON); exclusive with --builtin.
        #[arg(long)]
        code: Option<PathBuf>,
        /// Grid start:stop:steps within [0, 1/2].
        #[arg(long, default_value = "0:0.5:26")]
        alpha_grid: String,
        /// Exact-summation budget for the minimum success probability.
        #[arg(long)]
        budget: Option<u128>,
        /// Fall back to Monte Carlo when the exact sum is over budget.
        #[arg(long)]
        mc: bool,
        /// Output path for the CSV (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("failed to size the worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command, cli.seed) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            // Machine-readable error body, human-readable code.
            println!(
                "{}",
                serde_json::json!({ "error": err.message, "kind": err.kind })
            );
            ExitCode::from(err.exit_code)
        }
    }
}
