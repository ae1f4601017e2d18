use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hypercpf::cli::{
    cmd_closed_form, cmd_simulate, cmd_sweep, cmd_verify, exit_code, exit_code_for, write_output,
    CliError, RunConfig,
};

/// Heralded hyperparallel controlled-phase-flip gate simulator.
#[derive(Parser)]
#[command(name = "hypercpf", version, about)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the gate once and print the full result as JSON.
    Simulate {
        /// JSON configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Optional output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a two-axis efficiency/fidelity sweep and write a CSV table.
    Sweep {
        /// JSON configuration file with a two-axis `sweep` block.
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads for grid evaluation (0 = one per processor).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Run the seeded self-verification suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        draws: usize,
    },
    /// Evaluate the resonant closed-form efficiency.
    ClosedForm {
        /// Coupling over cavity linewidth.
        #[arg(long)]
        g: f64,
        /// Side leakage over cavity linewidth.
        #[arg(long)]
        ks: f64,
        /// Interaction completeness.
        #[arg(long)]
        p: f64,
    },
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate { config, out } => {
            let config = RunConfig::from_path(&config)?;
            let json = cmd_simulate(&config)?;
            match out {
                Some(path) => write_output(&path, &json)?,
                None => println!("{json}"),
            }
            Ok(())
        }
        Command::Sweep {
            config,
            out,
            threads,
        } => {
            let config = RunConfig::from_path(&config)?;
            let csv = cmd_sweep(&config, threads)?;
            write_output(&out, &csv)?;
            Ok(())
        }
        Command::Verify { seed, draws } => {
            let report = cmd_verify(seed, draws)?;
            print!("{report}");
            Ok(())
        }
        Command::ClosedForm { g, ks, p } => {
            println!("{}", cmd_closed_form(g, ks, p));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args.command) {
        Ok(()) => ExitCode::from(exit_code::OK as u8),
        Err(err) => {
            eprintln!("hypercpf: {err}");
            ExitCode::from(exit_code_for(&err) as u8)
        }
    }
}
