//! Two-phase water injection into oil through a refined near-well block.
//!
//! Runs the low-rate case without capillarity and prints the saturation
//! along the injector-producer diagonal. Pass `--full` to also attempt the
//! 1 STB/day case with capillarity, which Newton does not converge on.

use std::path::Path;

use stevmfe::driver::{self, line_profile, RunConfig};
use stevmfe::Error;

fn main() -> stevmfe::Result<()> {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let cfg = RunConfig::load(configs.join("waterflood_low_rate.json"))?;
    let (mesh, _, _) = driver::validate(&cfg)?;
    let (state, summary) = driver::run(&cfg, None)?;

    let iters: Vec<String> = state.reports().map(|r| r.iterations.to_string()).collect();
    println!("Newton iterations per slab: {}", iters.join(" "));
    for b in &summary.balance {
        println!("{:<8} balance error {:.2e}", b.name, b.error());
    }
    let s = state.final_cells(&mesh);
    println!("final s_w along the diagonal:");
    let extent = mesh.extent;
    for (d, _, sw) in line_profile(&mesh, &s, 2, 1, [0.0, 0.0], [extent[0], extent[1]], 400).iter().step_by(4) {
        println!("{d:>8.2} {sw:.5}");
    }

    if std::env::args().any(|a| a == "--full") {
        let cfg = RunConfig::load(configs.join("waterflood.json"))?;
        match driver::run(&cfg, None) {
            Ok((_, summary)) => println!("full-rate case converged in at most {} iterations", summary.max_newton_iterations),
            Err(e @ Error::NonConvergence { .. }) => println!("full-rate case: {e}"),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
