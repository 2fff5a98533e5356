//! Load a JSON run configuration, report its unknown counts and run it.
//!
//! `cargo run --release --example config_run [config.json]`

use std::path::PathBuf;

use stevmfe::driver::{self, RunConfig};

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/quiescent.json"));
    if let Err(e) = run(&path) {
        eprintln!("{}: {e}", path.display());
        std::process::exit(driver::exit_code(&e));
    }
}

fn run(path: &std::path::Path) -> stevmfe::Result<()> {
    let cfg = RunConfig::load(path)?;
    let (mesh, per_slab, total) = driver::validate(&cfg)?;
    println!("{} subdomains, {} slabs, time levels per slab {:?}", mesh.subdomains.len(), mesh.n_slabs, mesh.levels);
    println!("unknowns per slab {per_slab:?}");
    println!("unknowns total    {total:?}");
    let (_, summary) = driver::run(&cfg, None)?;
    println!("max Newton iterations {}, output in {}", summary.max_newton_iterations, summary.output_dir.display());
    for b in &summary.balance {
        println!("{:<12} balance error {:.3e}", b.name, b.error());
    }
    Ok(())
}
