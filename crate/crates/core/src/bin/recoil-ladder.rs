use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use recoil_ladder::cli::{list_plans, run};

#[derive(Parser)]
#[command(version, about = "Photon-recoil ladder atom interferometer simulator")]
struct Cli {
    /// Worker threads for parallel scans and pattern synthesis.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Treat warnings as errors (exit status 9, nothing written).
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Show the available plan kinds.
    ListPlans,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match cli.command {
        Command::ListPlans => {
            for p in list_plans() {
                println!("{:<8}  {}  [{}]", p.kind, p.summary, p.anchor);
            }
            ExitCode::SUCCESS
        }
        Command::Run { config, out } => match run(&config, &out, cli.strict) {
            Ok(manifest) => {
                for w in &manifest.warnings {
                    eprintln!("warning: {w}");
                }
                for a in &manifest.artifacts {
                    println!("{}", a.display());
                }
                println!("{}", manifest.provenance.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
