use std::path::PathBuf;
use std::process::ExitCode;

use catalyst_cli::commands::{cmd_gate_check, cmd_run, cmd_sweep};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "catalyst",
    version,
    about = "GHZ synthesis with a displaced thermal cavity field"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the protocol once and write a JSON result document.
    Run {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Omit the timestamp and wall-clock fields.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Vary one parameter and write a CSV table.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// One of r, n_bar_th, tau, N, cutoff.
        #[arg(long)]
        axis: String,
        /// Comma-separated values; may be empty.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract the two-atom phase gate and compare with 2(g tau)^2.
    GateCheck {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            spec,
            out,
            no_timestamp,
        } => cmd_run(&spec, &out, !no_timestamp),
        Command::Sweep {
            spec,
            axis,
            values,
            out,
        } => cmd_sweep(&spec, &axis, &values, &out),
        Command::GateCheck { spec, out } => cmd_gate_check(&spec, &out),
    };
    match outcome {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("error: {e}");
            e.status().into()
        }
    }
}
