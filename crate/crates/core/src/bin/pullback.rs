use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pullback::experiment::{list_experiments, run_file, RunOptions, EXIT_VALIDATION};

#[derive(Parser)]
#[command(name = "pullback", version, about = "Run weighted-Laplacian experiments on flattened rough domains")]
#[command(arg_required_else_help = true, after_help = list_experiments())]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for CSV output and the run manifest.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run { config: PathBuf },
    /// List experiments, required fields and what each probes.
    List,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_VALIDATION as u8 } else { 0 });
        }
    };
    match cli.command {
        Command::List => {
            print!("{}", list_experiments());
            ExitCode::SUCCESS
        }
        Command::Run { config } => {
            let opts = RunOptions { output_dir: cli.output_dir, threads: cli.threads, seed: cli.seed };
            match run_file(&config, &opts) {
                Ok(report) => {
                    for line in &report.summary {
                        println!("{line}");
                    }
                    println!("wrote {} files to {}", report.files.len(), report.output_dir.display());
                    ExitCode::SUCCESS
                }
                Err(f) => {
                    eprintln!("error: {}", f.message);
                    ExitCode::from(f.code as u8)
                }
            }
        }
    }
}
