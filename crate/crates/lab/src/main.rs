use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ngd_lab::error::LabError;
use ngd_lab::{experiments, response, Overrides};

/// Negative group delay experiments.
#[derive(Parser)]
#[command(name = "ngd-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its CSV tables and summary.
    Run {
        id: String,
        /// Parameter override, `key=value`; may be repeated.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Flat key=value parameter file, applied before --set.
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Output directory (default: ngd-out/<id>).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// List experiments with their parameters and defaults.
    List,
    /// Tabulate amplitude, phase and group delay of a transfer function.
    Response {
        /// e.g. `ngd_practical:T=1,a=0.2,b=0.05`
        constructor: String,
        /// `wmin,wmax,npts` in rad/s.
        #[arg(long, value_name = "WMIN,WMAX,NPTS", allow_hyphen_values = true)]
        grid: String,
        /// Write to a file instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), LabError> {
    match cli.command {
        Command::Run {
            id,
            set,
            config,
            out,
        } => {
            let exp = experiments::find(&id)?;
            let mut overrides = Overrides::new();
            if let Some(path) = config {
                let text = fs::read_to_string(&path).map_err(|e| {
                    LabError::config(format!("cannot read {}: {e}", path.display()))
                })?;
                overrides.push_file(&text)?;
            }
            for s in &set {
                overrides.push_assignment(s)?;
            }
            let outcome = exp.run(&overrides)?;
            let dir = out.unwrap_or_else(|| PathBuf::from("ngd-out").join(exp.id));
            let written = outcome.write(&dir)?;
            print!("{}", outcome.summary());
            println!();
            for p in written {
                println!("wrote {}", p.display());
            }
        }
        Command::List => {
            for e in experiments::catalog() {
                print!("{}", e.docs());
            }
        }
        Command::Response {
            constructor,
            grid,
            out,
        } => {
            let tf = response::parse_constructor(&constructor)?;
            let (lo, hi, n) = response::parse_grid(&grid)?;
            let table = response::table(&tf, lo, hi, n)?;
            match out {
                Some(path) => {
                    fs::write(&path, table).map_err(|source| LabError::Io { path, source })?
                }
                None => {
                    let _ = io::stdout().write_all(table.as_bytes());
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
