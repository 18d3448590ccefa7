//! `psturm`: command-line front end for the pattern Sturmian toolkit.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Format;

#[derive(Parser, Debug)]
#[command(name = "psturm", version, about = "Pattern Sturmian sequences and their Schrödinger operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// TOML run configuration.
    #[arg(long, value_name = "FILE")]
    pub spec: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Output format; defaults to the file extension, then the config.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomized sweep ordering.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Export a window as CSV (index, symbol, value) or JSON.
    #[command(after_help = "Example:\n  psturm generate --spec configs/fib.toml --start 0 --len 50 --out w.csv")]
    Generate {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        start: Option<i64>,
        #[arg(long)]
        len: Option<usize>,
    },
    /// Block and maximal pattern complexity estimates.
    #[command(after_help = "Example:\n  psturm complexity --spec configs/fib.toml --n-max 12 --t-max 200 --window 5000")]
    Complexity {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        t_max: Option<usize>,
        #[arg(long)]
        window: Option<usize>,
        /// Beam width for the greedy template search.
        #[arg(long)]
        beam: Option<usize>,
    },
    /// Band approximant σ_K ∪ σ_{K+1} of a Toeplitz potential.
    #[command(after_help = "Example:\n  psturm spectrum --spec configs/simple3.toml --level 4 --grid 100000 --tol 1e-10")]
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Lyapunov exponent estimates on an energy grid, as CSV (E, gamma, spread).
    #[command(after_help = "Example:\n  psturm lyapunov --spec configs/simple3.toml --e-min -3 --e-max 4 --energies 71 --n-steps 100000")]
    Lyapunov {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        e_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        e_max: Option<f64>,
        #[arg(long)]
        energies: Option<usize>,
        #[arg(long)]
        n_steps: Option<usize>,
    },
    /// Gordon case classification and bound verification over a sweep.
    #[command(after_help = "Example:\n  psturm gordon-scan --spec configs/simple3.toml --level 4 --energies 50 --origins 200")]
    GordonScan {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long)]
        energies: Option<usize>,
        #[arg(long)]
        origins: Option<usize>,
        /// Largest `n` for the non-decay scan; 0 skips it.
        #[arg(long)]
        nondecay_n: Option<usize>,
    },
    /// Divergence certificate excluding an energy from the point spectrum.
    #[command(after_help = "Example:\n  psturm sparse-check --spec configs/sparse.toml --energy 0.5")]
    SparseCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        energy: Option<f64>,
        /// Number of series terms.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Direct and recursive traces h_k side by side.
    #[command(after_help = "Example:\n  psturm trace-table --spec configs/simple3.toml --energy 0.0 --k 6")]
    TraceTable {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        energy: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
    },
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("PSTURM_THREADS") {
        let n: usize = v.parse().map_err(|_| anyhow::anyhow!("PSTURM_THREADS must be a positive integer, got {v:?}"))?;
        anyhow::ensure!(n > 0, "PSTURM_THREADS must be a positive integer, got 0");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let internal = err
        .chain()
        .filter_map(|e| e.downcast_ref::<psturm::Error>())
        .any(|e| e.is_internal());
    if internal { 2 } else { 1 }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let run = configure_threads().and_then(|()| commands::run(cli.command));
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
