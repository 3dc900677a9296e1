use clap::{Parser, Subcommand};
use hss::commands::{self, CommandError, SweepSpec, EXIT_OK};
use hss::config::Lever;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hss", version, about = "Health-system simulation batch runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scenario file and report every problem found.
    Validate { config: PathBuf },
    /// Run one scenario with one seed.
    Run {
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output directory (default: runs/run-s<seed>-<timestamp>).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a lever grid over shared seeds.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        lever: Lever,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Number of seeds.
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, default_value_t = 1)]
        seed_base: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// DALYs averted by run B relative to baseline run A.
    Compare {
        dir_a: PathBuf,
        dir_b: PathBuf,
        /// Print the machine-readable report instead of text.
        #[arg(long)]
        json: bool,
    },
}

fn execute(cli: Cli) -> Result<(), CommandError> {
    match cli.command {
        Command::Validate { config } => {
            let s = commands::cmd_validate(&config)?;
            println!(
                "{}: valid (districts {}, facility groups {}, diseases {}, cadres {})",
                config.display(),
                s.population.districts.len(),
                s.facilities.len(),
                s.diseases.len(),
                s.cadres.len()
            );
        }
        Command::Run { config, seed, out } => {
            let dir = commands::cmd_run(&config, seed, out)?;
            println!("{}", dir.display());
        }
        Command::Sweep {
            config,
            lever,
            values,
            seeds,
            seed_base,
            jobs,
            out,
        } => {
            let spec = SweepSpec {
                lever,
                values,
                seeds: (seed_base..seed_base + seeds).collect(),
                jobs,
            };
            let (dir, result) = commands::cmd_sweep(&config, &spec, out)?;
            print!("{}", commands::sweep_summary_csv(&result));
            println!("{}", dir.display());
        }
        Command::Compare { dir_a, dir_b, json } => {
            let report = commands::cmd_compare(&dir_a, &dir_b)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("serialisable"));
            } else {
                print!("{}", report.to_text());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HSS_LOG", "warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::from(EXIT_OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
