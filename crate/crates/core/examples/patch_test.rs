//! Patch test: a harmonic polynomial of degree `k` is reproduced to rounding error by the
//! discrete solution whenever every element degree is at least `k`.
//!
//! `cargo run --release --example patch_test`

use hvem::element::StabChoice;
use hvem::mesh::{
    generate_graded_mesh, generate_hexagonal_mesh, generate_square_mesh, GradedFamily,
};
use hvem::solver::{assign_degrees, solve_dirichlet, DegreeMode};
use hvem::study::{computable_error, TestProblem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(&std::env::args().skip(1).collect::<Vec<_>>())
}

pub fn run(_args: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    let meshes = [
        ("square n=3", generate_square_mesh(3)?),
        ("hexagonal n=2", generate_hexagonal_mesh(2)?),
        (
            "graded a n=2",
            generate_graded_mesh(GradedFamily::A, 0.5, 2)?,
        ),
    ];
    let stabs = [
        StabChoice::L2Exact,
        StabChoice::L2Lumped,
        StabChoice::H_HALF,
    ];
    let mut worst: f64 = 0.0;
    for (name, mesh) in &meshes {
        for p in 1..=3 {
            let degrees = assign_degrees(mesh, DegreeMode::Uniform(p))?;
            for &stab in &stabs {
                let errors: Vec<String> = (1..=p)
                    .map(|k| {
                        let problem = TestProblem::harmonic_polynomial(k, mesh.domain)?;
                        let sol = solve_dirichlet(mesh, &degrees, stab, |x| problem.u(x))?;
                        let e = computable_error(mesh, &sol, &problem)?;
                        worst = worst.max(e);
                        Ok(format!("{e:.1e}"))
                    })
                    .collect::<hvem::Result<_>>()?;
                println!(
                    "{name:<14} p={p} {stab:<10} errors for k = 1..=p: {}",
                    errors.join(" ")
                );
            }
        }
    }
    println!("largest error {worst:.2e}");
    Ok(())
}
