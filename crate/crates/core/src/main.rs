use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fermiball::cli;

#[derive(Parser)]
#[command(name = "fermiball", about = "Concentration experiments for Fourier densities of orthonormal bases")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file
    Run {
        config: PathBuf,
        /// Output prefix; overrides `output` from the config
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List the available experiments
    ListExperiments,
    /// Print the library version
    Version,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match args.command {
        Command::Run { config, output } => match cli::run_file(&config, output.as_deref()) {
            Ok(s) => {
                println!("wrote {} rows to {}", s.rows, s.csv_path.display());
                println!("metadata in {}", s.json_path.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("fermiball: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
        Command::ListExperiments => {
            print!("{}", cli::list_experiments());
            ExitCode::SUCCESS
        }
        Command::Version => {
            println!("fermiball {}", cli::VERSION);
            ExitCode::SUCCESS
        }
    }
}
