//! Command-line front end: script sessions and seeded test data.

use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dict2d::session::Session;
use dict2d::testgen::{random_pattern, random_text};
use dict2d::Engine;
use rand::rngs::StdRng;
use rand::SeedableRng;

#[derive(Parser)]
#[command(name = "dict2d", version, about = "Dynamic 2D dictionary matching")]
struct Cli {
    /// Search engine used by `search` commands.
    #[arg(long, global = true, default_value = "auto")]
    engine: Engine,
    /// Seed for the test-data subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a command script (add, remove, search, stats).
    Run { script: PathBuf },
    /// Print a random pattern in the matrix file format.
    GenPattern {
        #[arg(long)]
        height: usize,
        #[arg(long)]
        width: usize,
        /// Alphabet size, letters starting at `a`.
        #[arg(long, default_value_t = 2)]
        sigma: u8,
        /// Probability that every row has period at most width/4.
        #[arg(long, default_value_t = 0.0)]
        periodic: f64,
    },
    /// Print a random text in the matrix file format.
    GenText {
        #[arg(long)]
        height: usize,
        #[arg(long)]
        width: usize,
        #[arg(long, default_value_t = 2)]
        sigma: u8,
        /// Probability that a row is periodic.
        #[arg(long, default_value_t = 0.0)]
        periodic: f64,
        /// Largest period of a periodic row.
        #[arg(long, default_value_t = 4)]
        max_period: usize,
    },
}

fn check_gen(height: usize, width: usize, sigma: u8, periodic: f64) -> Result<(), String> {
    if height == 0 || width == 0 {
        return Err("matrix dimensions must be non-zero".into());
    }
    if !(1..=26).contains(&sigma) {
        return Err(format!("sigma must be in 1..=26, got {sigma}"));
    }
    if !(0.0..=1.0).contains(&periodic) {
        return Err(format!("periodic must be a probability, got {periodic}"));
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<(), String> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut rng = StdRng::seed_from_u64(cli.seed);
    match cli.command {
        Command::Run { script } => {
            let body = std::fs::read_to_string(&script)
                .map_err(|e| format!("cannot read {}: {e}", script.display()))?;
            let base = script.parent().unwrap_or(Path::new("."));
            let mut session = Session::new(cli.engine, base);
            let result = session.run_script(&body, &mut out);
            out.flush().map_err(|e| e.to_string())?;
            result.map_err(|e| e.to_string())?;
        }
        Command::GenPattern {
            height,
            width,
            sigma,
            periodic,
        } => {
            check_gen(height, width, sigma, periodic)?;
            let p = random_pattern(&mut rng, sigma, height, width, periodic);
            out.write_all(&p.to_file_bytes())
                .map_err(|e| e.to_string())?;
        }
        Command::GenText {
            height,
            width,
            sigma,
            periodic,
            max_period,
        } => {
            check_gen(height, width, sigma, periodic)?;
            let t = random_text(&mut rng, sigma, height, width, periodic, max_period);
            out.write_all(&t.to_file_bytes())
                .map_err(|e| e.to_string())?;
        }
    }
    out.flush().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.kind().to_string();
            let detail = e.to_string();
            let first = detail
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or(&msg)
                .trim_start_matches("error: ");
            eprintln!("dict2d: {first}");
            return ExitCode::from(2);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dict2d: {e}");
            ExitCode::from(2)
        }
    }
}
