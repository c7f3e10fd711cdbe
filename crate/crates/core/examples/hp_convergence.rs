//! hp-convergence on geometrically graded L-shape meshes for the corner singularity
//! `r^{2/3} sin(2/3 (θ + π/2))`: prints error against `sqrt(N)` and the fitted slope `b`.
//!
//! `cargo run --release --example hp_convergence -- [family] [sigma] [uniform|graded] [n_max] [stab]`

use hvem::element::StabChoice;
use hvem::mesh::GradedFamily;
use hvem::study::{run_hp_study, HpDegrees, TestProblem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(&std::env::args().skip(1).collect::<Vec<_>>())
}

pub fn run(args: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let family: GradedFamily = arg(0, "a").parse()?;
    let sigma: f64 = arg(1, "0.5").parse()?;
    let degrees: HpDegrees = arg(2, "uniform").parse()?;
    let n_max: usize = arg(3, "6").parse()?;
    let stab: StabChoice = arg(4, "l2-lumped").parse()?;

    let result = run_hp_study(
        &TestProblem::lshape_singular(),
        family,
        sigma,
        degrees,
        n_max,
        stab,
    )?;
    println!(
        "{:>3} {:>7} {:>9} {:>12} {:>9}",
        "n", "N", "sqrt(N)", "error", "seconds"
    );
    for r in &result.rows {
        println!(
            "{:>3} {:>7} {:>9.3} {:>12.4e} {:>9.3}",
            r.level,
            r.n_dofs,
            (r.n_dofs as f64).sqrt(),
            r.error,
            r.seconds
        );
    }
    println!(
        "error ~ exp(-b sqrt(N)): b = {:.4}, R^2 = {:.4}",
        result.fit.slope, result.fit.r_squared
    );
    Ok(())
}
