use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ipgcd_cli::{exit_code, parse, run, Command, Options, Report};

/// Exact solver for integer programs with GCD constraints and for systems of
/// divisibility constraints.
#[derive(Parser)]
#[command(name = "ipgcd", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Pollard rho iteration budget for factorizations during solving.
    #[arg(long, global = true, value_name = "N")]
    max_prime_search: Option<u64>,
    /// Largest number of sign-split members.
    #[arg(long, global = true, value_name = "N")]
    max_members: Option<usize>,
    /// Worker threads; more than one evaluates members concurrently.
    #[arg(long, global = true, value_name = "N", default_value_t = 1)]
    parallel: usize,
    /// Accepted for compatibility; the pipeline is deterministic.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Structured output (the default when stdout is not a terminal).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Human-readable output.
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide feasibility; exits with 1 when infeasible.
    Check { file: PathBuf },
    /// Decide feasibility and print a witness.
    Solve { file: PathBuf },
    /// Minimize or maximize the objective.
    Optimize { file: PathBuf },
    /// Print difficult primes, increasing-form diagnosis and triple count.
    Analyze { file: PathBuf },
    /// Brute-force enumeration over a window.
    Oracle {
        /// `W` for [-W, W] in every coordinate, or `LO:HI`.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: (i128, i128),
        file: PathBuf,
    },
}

fn parse_window(s: &str) -> Result<(i128, i128), String> {
    let num = |t: &str| t.trim().parse::<i128>().map_err(|e| format!("'{t}': {e}"));
    match s.split_once(':') {
        Some((lo, hi)) => Ok((num(lo)?, num(hi)?)),
        None => {
            let w = num(s)?;
            if w < 0 {
                return Err("window radius must be non-negative".into());
            }
            Ok((-w, w))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, file) = match cli.command {
        Cmd::Check { file } => (Command::Check, file),
        Cmd::Solve { file } => (Command::Solve, file),
        Cmd::Optimize { file } => (Command::Optimize, file),
        Cmd::Analyze { file } => (Command::Analyze, file),
        Cmd::Oracle { window: (lo, hi), file } => (Command::Oracle { lo, hi }, file),
    };
    let f = &cli.flags;
    let mut opts = Options::default();
    if let Some(n) = f.max_prime_search {
        opts.config.lg.factor_budget.rho_iterations = n;
    }
    if let Some(n) = f.max_members {
        opts.config.max_members = n;
    }
    opts.config.parallel = f.parallel > 1;
    let json = f.json || (!f.text && !std::io::stdout().is_terminal());

    let report = match std::fs::read_to_string(&file) {
        Err(e) => Report::failure("input", format!("{}: {e}", file.display())),
        Ok(text) => match parse(&text) {
            Err(e) => Report::failure("parse", e),
            Ok(parsed) => match rayon::ThreadPoolBuilder::new().num_threads(f.parallel.max(1)).build() {
                Ok(pool) => pool.install(|| run(cmd, &parsed, &opts)),
                Err(e) => Report::failure("thread pool", e),
            },
        },
    };
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if let Some(e) = &report.error {
        eprintln!("ipgcd: {}: {}", e.stage, e.message);
    }
    ExitCode::from(exit_code(cmd, &report) as u8)
}
