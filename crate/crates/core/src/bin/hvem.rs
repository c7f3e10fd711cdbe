use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hvem::element::{local_operators, operators_csv, LocalElement, StabChoice};
use hvem::mesh::{
    export_mesh, generate_graded_mesh, generate_hexagonal_mesh, generate_square_mesh, import_mesh,
    validate_geometry, GradedFamily, Mesh,
};
use hvem::quadrature::{gauss_legendre, gauss_lobatto};
use hvem::solver::{assign_degrees, solve_dirichlet, DegreeMode};
use hvem::study::{
    computable_error, gnuplot_script, run_h_study, run_hp_study, HpDegrees, MeshFamily,
    ProblemKind, TestProblem,
};
use hvem::{Error, Result};

#[derive(Parser)]
#[command(
    name = "hvem",
    version,
    about = "Harmonic virtual elements for the 2D Laplace equation"
)]
struct Cli {
    /// Print Gauss–Lobatto (p+1 nodes) and Gauss–Legendre (p nodes) rules as CSV and exit.
    #[arg(long, value_name = "P")]
    dump_quadrature: Option<usize>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    A,
    B,
    C,
    Square,
    Hexagonal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    H,
    Hp,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a mesh and write it in the POLYMESH format.
    Mesh {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Grading factor for the L-shape families a, b, c.
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        /// Number of layers (families a, b, c).
        #[arg(long, default_value_t = 4)]
        layers: usize,
        /// Subdivisions per direction (square, hexagonal).
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        /// Print the shape-regularity report with this rho0.
        #[arg(long)]
        report: Option<f64>,
    },
    /// Solve a Dirichlet problem on a mesh file; writes `index,x,y,value` per DoF.
    Solve {
        #[arg(long)]
        mesh: PathBuf,
        /// `uniform:<p>` or `graded`.
        #[arg(long, default_value = "uniform:1")]
        p: DegreeMode,
        #[arg(long, default_value = "l2-lumped")]
        stab: StabChoice,
        /// `exp-sin`, `lshape-singular` or `harmonic:<k>`.
        #[arg(long)]
        problem: TestProblem,
        #[arg(long)]
        out: PathBuf,
        /// Also write every element's local operators as CSV.
        #[arg(long, value_name = "FILE")]
        dump_operators: Option<PathBuf>,
    },
    /// Run an h- or hp-convergence study; writes `n,h,N,sqrtN,error,seconds`.
    Study {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_enum, default_value = "a")]
        family: FamilyArg,
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        /// hp only: `uniform` (p = n+1) or `graded` (p = layer + 1).
        #[arg(long, default_value = "uniform")]
        degrees: HpDegrees,
        /// hp only; defaults to 6 for uniform and 8 for graded degrees.
        #[arg(long)]
        nmax: Option<usize>,
        /// h only: polynomial degree.
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// h only: subdivision counts.
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
        levels: Vec<usize>,
        #[arg(long, default_value = "l2-lumped")]
        stab: StabChoice,
        /// Defaults to `exp-sin` for h and `lshape-singular` for hp.
        #[arg(long)]
        problem: Option<TestProblem>,
        #[arg(long)]
        out: PathBuf,
        /// Write a gnuplot script next to the CSV.
        #[arg(long)]
        emit_gnuplot: bool,
        /// Write 0 in the seconds column so repeated runs give identical files.
        #[arg(long)]
        no_timing: bool,
    },
}

fn graded(f: FamilyArg) -> Option<GradedFamily> {
    match f {
        FamilyArg::A => Some(GradedFamily::A),
        FamilyArg::B => Some(GradedFamily::B),
        FamilyArg::C => Some(GradedFamily::C),
        _ => None,
    }
}

fn quadrature_csv(p: usize) -> Result<String> {
    let mut out = String::from("rule,index,node,weight\n");
    for (name, rule) in [
        ("gauss-lobatto", gauss_lobatto(p)?),
        ("gauss-legendre", gauss_legendre(p)?),
    ] {
        for (i, (x, w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let _ = writeln!(out, "{name},{i},{x:.17e},{w:.17e}");
        }
    }
    Ok(out)
}

fn run_mesh(
    family: FamilyArg,
    sigma: f64,
    layers: usize,
    n: usize,
    out: &Path,
    report: Option<f64>,
) -> Result<()> {
    let mesh = match graded(family) {
        Some(fam) => {
            if layers == 0 {
                return Err(Error::InvalidArgument("--layers must be at least 1".into()));
            }
            generate_graded_mesh(fam, sigma, layers - 1)?
        }
        None if matches!(family, FamilyArg::Square) => generate_square_mesh(n)?,
        None => generate_hexagonal_mesh(n)?,
    };
    export_mesh(&mesh, out)?;
    println!(
        "{} elements, {} vertices, {} edges -> {}",
        mesh.n_elements(),
        mesh.n_vertices(),
        mesh.n_edges(),
        out.display()
    );
    if let Some(rho0) = report {
        let r = validate_geometry(&mesh, rho0)?;
        println!(
            "D1 {} (min rho {:.4}), D2 {} (min edge ratio {:.4}), layers {:?}",
            pass(r.d1_pass),
            r.min_rho(),
            pass(r.d2_pass),
            r.min_edge_ratio(),
            r.layer_counts
        );
        if let (Some(d3), Some(ok)) = (&r.d3, r.d3_pass) {
            println!("D3 {} (size spread {:.3})", pass(ok), d3.spread);
        }
    }
    Ok(())
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn run_solve(
    mesh: &Path,
    mode: DegreeMode,
    stab: StabChoice,
    problem: TestProblem,
    out: &Path,
    dump: Option<&Path>,
) -> Result<()> {
    let mesh: Mesh = import_mesh(mesh)?;
    // harmonic polynomials solve the Laplace equation on any domain
    let problem = match problem.kind {
        ProblemKind::HarmonicPolynomial { degree, .. } => {
            TestProblem::harmonic_polynomial(degree, mesh.domain)?
        }
        _ => problem,
    };
    let degrees = assign_degrees(&mesh, mode)?;
    let solution = solve_dirichlet(&mesh, &degrees, stab, |x| problem.u(x))?;
    std::fs::write(out, solution.to_csv())?;
    let error = if problem.domain == mesh.domain {
        Some(computable_error(&mesh, &solution, &problem)?)
    } else {
        None
    };
    print!(
        "N = {}, solver {:?}",
        solution.n_dofs(),
        solution.report.method
    );
    match error {
        Some(e) => println!(", relative error {e:.6e}"),
        None => println!(" (mesh domain differs from the problem domain, error not computed)"),
    }
    if let Some(path) = dump {
        let mut csv = String::new();
        for e in 0..mesh.n_elements() {
            let el = LocalElement::from_mesh(&mesh, e, degrees.element[e], &degrees.edge)?;
            csv.push_str(&operators_csv(&local_operators(&el, stab)?, e, e == 0));
        }
        std::fs::write(path, csv)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_study(
    kind: Kind,
    family: FamilyArg,
    sigma: f64,
    degrees: HpDegrees,
    nmax: Option<usize>,
    p: usize,
    levels: &[usize],
    stab: StabChoice,
    problem: Option<TestProblem>,
    out: &Path,
    emit_gnuplot: bool,
    timing: bool,
) -> Result<()> {
    let result = match kind {
        Kind::H => {
            let fam = match family {
                FamilyArg::Square => MeshFamily::Square,
                FamilyArg::Hexagonal => MeshFamily::Hexagonal,
                _ => {
                    return Err(Error::InvalidArgument(
                        "h-studies use --family square or hexagonal".into(),
                    ))
                }
            };
            run_h_study(
                &problem.unwrap_or_else(TestProblem::exp_sin),
                fam,
                p,
                levels,
                stab,
            )?
        }
        Kind::Hp => {
            let fam = graded(family).ok_or_else(|| {
                Error::InvalidArgument("hp-studies use --family a, b or c".into())
            })?;
            let n_max = nmax.unwrap_or(match degrees {
                HpDegrees::Uniform => 6,
                HpDegrees::Graded => 8,
            });
            let problem = problem.unwrap_or_else(TestProblem::lshape_singular);
            run_hp_study(&problem, fam, sigma, degrees, n_max, stab)?
        }
    };
    std::fs::write(out, result.to_csv(timing))?;
    for r in &result.rows {
        println!("n={:<3} N={:<6} error={:.4e}", r.level, r.n_dofs, r.error);
    }
    println!(
        "fit: slope {:.4}, intercept {:.4}, R^2 {:.4}",
        result.fit.slope, result.fit.intercept, result.fit.r_squared
    );
    if emit_gnuplot {
        let script = out.with_extension("gp");
        let csv_name = out
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        std::fs::write(&script, gnuplot_script(&csv_name, &result.fit))?;
        println!("gnuplot script -> {}", script.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if let Some(p) = cli.dump_quadrature {
        print!("{}", quadrature_csv(p)?);
        if cli.command.is_none() {
            return Ok(());
        }
    }
    match cli.command {
        None => Err(Error::InvalidArgument(
            "no subcommand given (see --help)".into(),
        )),
        Some(Command::Mesh {
            family,
            sigma,
            layers,
            n,
            out,
            report,
        }) => run_mesh(family, sigma, layers, n, &out, report),
        Some(Command::Solve {
            mesh,
            p,
            stab,
            problem,
            out,
            dump_operators,
        }) => run_solve(&mesh, p, stab, problem, &out, dump_operators.as_deref()),
        Some(Command::Study {
            kind,
            family,
            sigma,
            degrees,
            nmax,
            p,
            levels,
            stab,
            problem,
            out,
            emit_gnuplot,
            no_timing,
        }) => run_study(
            kind,
            family,
            sigma,
            degrees,
            nmax,
            p,
            &levels,
            stab,
            problem,
            &out,
            emit_gnuplot,
            !no_timing,
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
