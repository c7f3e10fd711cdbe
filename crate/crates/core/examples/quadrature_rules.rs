//! One-dimensional rules used by the element routines: Gauss–Lobatto and Gauss–Legendre
//! exactness, the graded composite rule on a corner singularity and the Duffy rule for
//! edges sharing a vertex.
//!
//! `cargo run --example quadrature_rules -- [p]`

use hvem::quadrature::{
    duffy_points, gauss_legendre, gauss_lobatto, Accumulation, CommonVertexPair, CompositeRule,
};
use hvem::Point2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(&std::env::args().skip(1).collect::<Vec<_>>())
}

pub fn run(args: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    let p: usize = args.first().map_or(Ok(4), |s| s.parse())?;

    let lobatto = gauss_lobatto(p)?;
    let legendre = gauss_legendre(p)?;
    println!(
        "Gauss-Lobatto with {} nodes: {:?}",
        lobatto.len(),
        lobatto.nodes
    );
    println!(
        "Gauss-Legendre with {} nodes: {:?}",
        legendre.len(),
        legendre.nodes
    );
    let exact = |k: usize| {
        if k.is_multiple_of(2) {
            2.0 / (k as f64 + 1.0)
        } else {
            0.0
        }
    };
    for (name, rule, deg) in [
        ("Lobatto", &lobatto, 2 * p - 1),
        ("Legendre", &legendre, 2 * p - 1),
    ] {
        let worst = (0..=deg)
            .map(|k| (rule.integrate(|x| x.powi(k as i32)) - exact(k)).abs())
            .fold(0.0, f64::max);
        let beyond = (rule.integrate(|x| x.powi(deg as i32 + 1)) - exact(deg + 1)).abs();
        println!(
            "{name}: monomials up to degree {deg} error {worst:.2e}, degree {} error {beyond:.2e}",
            deg + 1
        );
    }

    let graded = CompositeRule::graded(10, Accumulation::Left)?;
    let i = graded.integrate(|x| x.powf(-1.0 / 3.0));
    println!(
        "graded composite rule ({} points): int_0^1 x^(-1/3) = {i:.15} (error {:.2e})",
        graded.points().len(),
        (i - 1.5).abs()
    );

    // two unit edges leaving the origin at a right angle: int int 1 ds dt with a |x - y|^2
    // weight cancels the kernel, so the exact value is 1
    let pair = CommonVertexPair::new(Point2::new(1.0, 0.0), Point2::new(0.0, 1.0))?;
    let m = duffy_points(p);
    let v = pair.integrate(|s, t| s * s + t * t, m)?;
    println!("Duffy common-vertex rule with {m} points per direction: {v:.15} (exact 1)");
    Ok(())
}
