//! Imports an externally generated Voronoi mesh and solves `exp(x) sin(y)` with increasing
//! degree on it (p-version on a fixed polygonal mesh).
//!
//! `cargo run --release --example voronoi_import -- [mesh.pm] [max p]`
//!
//! An empty path selects the bundled 64-cell Voronoi mesh.

use hvem::element::StabChoice;
use hvem::mesh::{import_mesh, validate_geometry};
use hvem::solver::{assign_degrees, solve_dirichlet, DegreeMode};
use hvem::study::{computable_error, TestProblem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(&std::env::args().skip(1).collect::<Vec<_>>())
}

pub fn run(args: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    let path = args
        .first()
        .filter(|s| !s.is_empty())
        .cloned()
        .unwrap_or_else(|| {
            concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/voronoi64.pm").to_string()
        });
    let max_p: usize = args.get(1).map_or(Ok(6), |s| s.parse())?;

    let mesh = import_mesh(&path)?;
    let report = validate_geometry(&mesh, 0.05)?;
    let sides: Vec<usize> = report.elements.iter().map(|g| g.edge_count).collect();
    println!(
        "{path}: {} cells with {}..={} edges, area {:.12}, min edge ratio {:.3}",
        mesh.n_elements(),
        sides.iter().min().unwrap_or(&0),
        sides.iter().max().unwrap_or(&0),
        mesh.total_area(),
        report.min_edge_ratio()
    );

    let problem = TestProblem::exp_sin();
    for p in 1..=max_p {
        let degrees = assign_degrees(&mesh, DegreeMode::Uniform(p))?;
        let sol = solve_dirichlet(&mesh, &degrees, StabChoice::L2Lumped, |x| problem.u(x))?;
        let e = computable_error(&mesh, &sol, &problem)?;
        println!("p = {p}: N = {:>5}, relative error {e:.3e}", sol.n_dofs());
    }
    Ok(())
}
