use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stevmfe::driver::{self, exit_code, RunConfig};

#[derive(Parser)]
#[command(name = "stevmfe", version, about = "Space-time enhanced velocity mixed finite element simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation and write field snapshots, Newton logs and mass balances.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Run the manufactured-solution convergence study and write error_report.csv.
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Check a configuration and print the unknown counts.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, output_dir } => RunConfig::load(&config).and_then(|cfg| {
            let (_, summary) = driver::run(&cfg, output_dir.as_deref())?;
            println!(
                "{}: {} slabs, max Newton iterations {}, output in {}",
                summary.model,
                summary.n_slabs,
                summary.max_newton_iterations,
                summary.output_dir.display()
            );
            for b in &summary.balance {
                let rel = if b.inflow > 0.0 { b.error().abs() / b.inflow } else { b.error().abs() };
                println!("  {}: balance error {:.3e} (relative {:.3e})", b.name, b.error(), rel);
            }
            Ok(())
        }),
        Command::Converge { config, output_dir } => RunConfig::load(&config).and_then(|cfg| {
            let report = driver::converge(&cfg, output_dir.as_deref())?;
            println!("{:>8} {:>8} {:>12} {:>12} {:>10} {:>8}", "h_c", "h_f", "err_coarse", "err_fine", "DOF", "CPUTIM");
            for r in &report.rows {
                println!(
                    "{:>8.5} {:>8.5} {:>12.4e} {:>12.4e} {:>10} {:>8.2}",
                    r.h_c, r.h_f, r.err_coarse, r.err_fine, r.dof, r.cputim
                );
            }
            Ok(())
        }),
        Command::Validate { config } => RunConfig::load(&config).and_then(|cfg| {
            if cfg.mesh.is_none() && cfg.convergence.is_some() {
                println!("convergence study configuration is valid");
                return Ok(());
            }
            let (mesh, per_slab, total) = driver::validate(&cfg)?;
            println!(
                "valid: {} subdomains, {} interface patches, {} slabs",
                mesh.subdomains.len(),
                mesh.patches.len(),
                mesh.n_slabs
            );
            println!(
                "per slab: {} fluxes ({} interior, {} boundary, {} interface), {} cell unknowns",
                per_slab.fluxes(),
                per_slab.interior_fluxes,
                per_slab.boundary_fluxes,
                per_slab.interface_fluxes,
                per_slab.cell_unknowns
            );
            println!("total: {} unknowns, {} cell unknowns", total.total(), total.cell_unknowns);
            Ok(())
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
