use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use shellwave::output::read_snapshot_csv;
use shellwave::postprocess::{nrmse, resample_to};
use shellwave::runner::{run_scenario_file, RunOptions};

#[derive(Parser)]
#[command(
    name = "shellwave",
    version,
    about = "Grid-characteristic wave solvers for thin shells and 3D elasticity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write snapshots, traces and the manifest
    Run {
        /// Scenario description (TOML)
        scenario: PathBuf,
        /// Output directory (default: out/<scenario name>)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker thread count (default: all cores); results are
        /// byte-identical for any value
        #[arg(long)]
        threads: Option<usize>,
        /// Override the interpolation order (1-5)
        #[arg(long)]
        order: Option<usize>,
        /// Override the Courant factor (0, 1]
        #[arg(long)]
        courant: Option<f64>,
    },
    /// Print the NRMSE between two snapshot CSV files (second file is
    /// the reference; it is resampled onto the first file's grid if the
    /// dimensions differ)
    Compare { a: PathBuf, b: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: category={} {e}", e.category());
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> shellwave::Result<()> {
    match cli.command {
        Command::Run {
            scenario,
            out,
            threads,
            order,
            courant,
        } => {
            let manifest = run_scenario_file(
                &scenario,
                &RunOptions {
                    out_dir: out,
                    threads,
                    order,
                    courant,
                },
            )?;
            println!(
                "wrote {} files in {:.2} s (scenario {})",
                manifest.files.len(),
                manifest.wall_clock_seconds,
                &manifest.scenario_hash[..12]
            );
            Ok(())
        }
        Command::Compare { a, b } => {
            let field_a = read_snapshot_csv(&a)?;
            let field_b = read_snapshot_csv(&b)?;
            let value = if field_a.geometry.nx == field_b.geometry.nx
                && field_a.geometry.ny == field_b.geometry.ny
            {
                nrmse(&field_a, &field_b)?
            } else {
                let resampled = resample_to(&field_b, field_a.geometry)?;
                nrmse(&field_a, &resampled)?
            };
            println!("{value}");
            Ok(())
        }
    }
}
