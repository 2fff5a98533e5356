//! Space-time refinement study for the linear parabolic problem with a known
//! solution. A refined box sits inside a coarse unit square; both the spatial
//! grid and the time step are refined by the same factor.
//!
//! `cargo run --release --example manufactured_convergence [levels...]`

use stevmfe::driver::{convergence_study, ConvergenceConfig};
use stevmfe::solver::NewtonOptions;

fn main() -> stevmfe::Result<()> {
    let levels: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let cfg = ConvergenceConfig {
        levels: if levels.is_empty() { vec![10, 20, 40] } else { levels },
        ..ConvergenceConfig::default()
    };
    let report = convergence_study(&cfg, &NewtonOptions::default())?;

    println!("{:>8} {:>8} {:>12} {:>12} {:>9} {:>8}", "h_c", "h_f", "err_coarse", "err_fine", "DOF", "CPU s");
    for r in &report.rows {
        println!(
            "{:>8.4} {:>8.4} {:>12.4e} {:>12.4e} {:>9} {:>8.2}",
            r.h_c, r.h_f, r.err_coarse, r.err_fine, r.dof, r.cputim
        );
    }
    for w in report.rows.windows(2) {
        let rate = |a: f64, b: f64| (a / b).ln() / (w[0].h_c / w[1].h_c).ln();
        println!(
            "rate {:.4} -> {:.4}: coarse {:.2}, fine {:.2}",
            w[0].h_c,
            w[1].h_c,
            rate(w[0].err_coarse, w[1].err_coarse),
            rate(w[0].err_fine, w[1].err_fine)
        );
    }
    Ok(())
}
