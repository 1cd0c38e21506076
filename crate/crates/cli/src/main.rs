use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod batch;
mod run;

#[derive(Parser)]
#[command(
    name = "glue",
    version,
    about = "Derive the readings of an f-structure by glue deduction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the readings of one scenario.
    Run {
        /// Scenario file, or a directory holding `scenario.scn`.
        scenario: PathBuf,
        /// Lexicon file; defaults to `lexicon.lex` next to the scenario or
        /// one directory up.
        lexicon: Option<PathBuf>,
        /// Print a proof trace under each reading.
        #[arg(long)]
        trace: bool,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        /// Print only the number of readings.
        #[arg(long, conflicts_with = "json")]
        count_only: bool,
        #[command(flatten)]
        opts: SearchOpts,
    },
    /// Check every scenario directory under DIR against its `expected` file.
    Batch {
        dir: PathBuf,
        /// Print results as JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        opts: SearchOpts,
    },
}

#[derive(Args, Clone, Copy)]
pub struct SearchOpts {
    /// Maximum proof depth.
    #[arg(long, default_value_t = 64)]
    pub max_depth: usize,
    /// Also run the brute-force oracle and fail on any difference.
    #[arg(long)]
    pub oracle: bool,
}

/// Readings found; no readings; tool or input error.
pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NO_READINGS: u8 = 2;

/// Writes to stdout, ignoring a closed pipe.
pub fn emit(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run {
            scenario,
            lexicon,
            trace,
            json,
            count_only,
            opts,
        } => run::main(&scenario, lexicon.as_deref(), trace, json, count_only, opts),
        Command::Batch { dir, json, opts } => batch::main(&dir, json, opts),
    };
    ExitCode::from(code)
}
