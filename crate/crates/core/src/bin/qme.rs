use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qme::experiments::{run_preset, PRESETS};
use qme::runner::{run_file, RunOptions};

#[derive(Parser)]
#[command(name = "qme", version, about = "Master equations driven by entangled qubit baths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario described by a JSON config.
    Run {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Sweep points evaluated concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Reproduce a named experiment.
    Preset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(PRESETS))]
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out, jobs } => run_file(&config, &RunOptions { out_dir: out, jobs }),
        Command::Preset { name, out } => run_preset(&name, &out),
    };
    match result {
        Ok(manifest) => {
            for w in &manifest.warnings {
                eprintln!("warning: {w}");
            }
            println!("wrote {} in {:.2}s", manifest.files.join(", "), manifest.runtime_seconds);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
