use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use narrowfront_cli::presets;
use narrowfront_cli::run::{execute, load, RunOptions};

#[derive(Parser)]
#[command(name = "narrowfront", version, about = "Run narrow-domain reaction-diffusion scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (or a preset name).
    Run {
        scenario: PathBuf,
        /// Output directory; defaults to `output.dir` or `out/<name>`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        /// Progress messages on stderr.
        #[arg(long)]
        verbose: bool,
    },
    /// List the built-in scenarios.
    Presets {
        /// Also write them as JSON files into this directory.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match cli.command {
        Command::Presets { dump } => {
            for sc in presets::all() {
                println!("{}\t{}", sc.name, sc.experiment.module());
            }
            if let Some(dir) = dump {
                if let Err(e) = presets::dump(&dir) {
                    eprintln!("error: {e}");
                    return ExitCode::from(e.exit_code());
                }
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            scenario,
            out,
            threads,
            verbose,
        } => {
            if let Some(n) = threads {
                if n == 0 {
                    eprintln!("error: --threads must be at least 1");
                    return ExitCode::from(1);
                }
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("error: cannot start thread pool: {e}");
                    return ExitCode::from(1);
                }
            }
            let opts = RunOptions { out, threads, verbose };
            match load(&scenario).and_then(|sc| execute(&sc, &opts)) {
                Ok(report) => {
                    println!("{} ({})", report.out_dir.display(), report.config_hash);
                    for f in &report.files {
                        println!("  {f}");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code())
                }
            }
        }
    }
}
