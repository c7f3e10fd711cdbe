//! Algebraic h-convergence for `u = exp(x) sin(y)` on the unit square, on square and
//! hexagonal mesh sequences with uniform degree `p`.
//!
//! `cargo run --release --example h_convergence -- [square|hexagonal] [max p] [stab]`

use hvem::element::StabChoice;
use hvem::study::{run_h_study, MeshFamily, TestProblem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(&std::env::args().skip(1).collect::<Vec<_>>())
}

pub fn run(args: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    let families: Vec<MeshFamily> = match args.first() {
        Some(f) => vec![f.parse()?],
        None => vec![MeshFamily::Square, MeshFamily::Hexagonal],
    };
    let max_p: usize = args.get(1).map_or(Ok(4), |s| s.parse())?;
    let stab: StabChoice = args
        .get(2)
        .map_or(Ok(StabChoice::L2Lumped), |s| s.parse())?;
    let problem = TestProblem::exp_sin();
    let levels = [4, 8, 16, 32];

    for family in families {
        println!("{family:?} meshes, stabilization {stab}");
        for p in 1..=max_p {
            let result = run_h_study(&problem, family, p, &levels, stab)?;
            let errors: Vec<String> = result
                .rows
                .iter()
                .map(|r| format!("{:.3e}", r.error))
                .collect();
            println!(
                "  p = {p}: errors [{}]  rate {:.3}  (R^2 {:.4})",
                errors.join(", "),
                result.fit.slope,
                result.fit.r_squared
            );
        }
    }
    Ok(())
}
