//! Local operators on a single pentagon: projector reproduction of harmonic polynomials and
//! the spectrum of the stiffness matrix for every stabilization.
//!
//! `cargo run --example local_element -- [p]`

use hvem::element::{build_dof_layout, local_operators, LocalElement, StabChoice};
use hvem::Point2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(&std::env::args().skip(1).collect::<Vec<_>>())
}

pub fn run(args: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    let p: usize = args.first().map_or(Ok(3), |s| s.parse())?;
    let pentagon = vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.3, 0.8),
        Point2::new(0.5, 1.2),
        Point2::new(-0.2, 0.6),
    ];
    let el = LocalElement::uniform(pentagon, p)?;
    let layout = build_dof_layout(&el)?;
    println!(
        "pentagon with p = {p}: {} boundary DoFs, diameter {:.4}",
        layout.len(),
        el.diameter()
    );

    for stab in [
        StabChoice::L2Lumped,
        StabChoice::L2Exact,
        StabChoice::H_HALF,
    ] {
        let ops = local_operators(&el, stab)?;
        let proj = &ops.projector;

        // projecting the nodal values of a basis polynomial gives back its coefficients
        let reproduction = (&proj.pi_poly * &proj.d
            - nalgebra::DMatrix::identity(proj.d.ncols(), proj.d.ncols()))
        .amax();
        let idempotence = (&proj.pi_dof * &proj.pi_dof - &proj.pi_dof).amax();

        let mut eig = ops.k.clone().symmetric_eigenvalues().as_slice().to_vec();
        eig.sort_by(f64::total_cmp);
        println!(
            "{stab:>10}: reproduction {reproduction:.1e}, idempotence {idempotence:.1e}, \
             K eigenvalues min {:.1e}, second {:.4}, max {:.4}",
            eig[0],
            eig[1],
            eig[eig.len() - 1]
        );
    }
    Ok(())
}
