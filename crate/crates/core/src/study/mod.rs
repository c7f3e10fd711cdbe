//! Model problems, the computable error, and h- / hp-convergence studies.

mod error;
mod fit;
mod problems;

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

pub use error::{computable_error, element_errors, ERROR_EXTRA_POINTS};
pub use fit::{fit, linear_fit, FitKind, FitResult};
pub use problems::{ProblemKind, TestProblem, LSHAPE_ENERGY_NORM};

use crate::element::StabChoice;
use crate::error::{Error, Result};
use crate::mesh::{
    generate_graded_mesh, generate_hexagonal_mesh, generate_square_mesh, DomainTag, GradedFamily,
    Mesh,
};
use crate::solver::{assign_degrees, solve_dirichlet, DegreeMode};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StudyRow {
    /// Subdivision count (h-study) or `n` with `n + 1` layers (hp-study).
    pub level: usize,
    /// Largest element diameter.
    pub h: f64,
    pub n_dofs: usize,
    pub error: f64,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyResult {
    pub rows: Vec<StudyRow>,
    pub fit: FitResult,
}

impl StudyResult {
    /// Columns `n,h,N,sqrtN,error,seconds`; with `timing` off the last column is 0 so that
    /// repeated runs give identical bytes.
    pub fn to_csv(&self, timing: bool) -> String {
        let mut out = String::from("n,h,N,sqrtN,error,seconds\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:e},{},{:e},{:e},{}",
                r.level,
                r.h,
                r.n_dofs,
                (r.n_dofs as f64).sqrt(),
                r.error,
                if timing {
                    format!("{:.6}", r.seconds)
                } else {
                    "0".into()
                }
            );
        }
        out
    }
}

/// Gnuplot script plotting `csv_path` (error against `h` on log-log axes, or against `sqrt(N)`
/// with a logarithmic error axis) together with the fitted line.
pub fn gnuplot_script(csv_path: &str, fit: &FitResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set logscale y");
    let _ = writeln!(s, "set format y '%.0e'");
    let _ = writeln!(s, "set ylabel 'relative energy error'");
    match fit.kind {
        FitKind::Algebraic => {
            let _ = writeln!(s, "set logscale x");
            let _ = writeln!(s, "set xlabel 'h'");
            let _ = writeln!(
                s,
                "fit_line(x) = exp({:.12}) * x**({:.12})",
                fit.intercept, fit.slope
            );
            let _ = writeln!(
                s,
                "plot '{csv_path}' using 2:5 with linespoints title 'error', fit_line(x) title 'rate {:.3}'",
                fit.slope
            );
        }
        FitKind::Exponential => {
            let _ = writeln!(s, "set xlabel 'sqrt(N)'");
            let _ = writeln!(
                s,
                "fit_line(x) = exp({:.12} - {:.12} * x)",
                fit.intercept, fit.slope
            );
            let _ = writeln!(
                s,
                "plot '{csv_path}' using 4:5 with linespoints title 'error', fit_line(x) title 'b = {:.3}'",
                fit.slope
            );
        }
    }
    s
}

/// Quasi-uniform mesh sequences of the unit square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFamily {
    Square,
    Hexagonal,
}

impl MeshFamily {
    pub fn generate(self, n: usize) -> Result<Mesh> {
        match self {
            Self::Square => generate_square_mesh(n),
            Self::Hexagonal => generate_hexagonal_mesh(n),
        }
    }
}

impl FromStr for MeshFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "square" => Ok(Self::Square),
            "hexagonal" | "hex" => Ok(Self::Hexagonal),
            _ => Err(Error::InvalidArgument(format!(
                "unknown mesh family '{s}' (expected square, hexagonal)"
            ))),
        }
    }
}

/// Degree choice in hp-studies: `p = n + 1` everywhere, or `p_E = j + 1` on layer `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HpDegrees {
    Uniform,
    Graded,
}

impl HpDegrees {
    pub fn mode(self, n: usize) -> DegreeMode {
        match self {
            Self::Uniform => DegreeMode::Uniform(n + 1),
            Self::Graded => DegreeMode::LayerGraded,
        }
    }
}

impl FromStr for HpDegrees {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Ok(Self::Uniform),
            "graded" => Ok(Self::Graded),
            _ => Err(Error::InvalidArgument(format!(
                "unknown degree choice '{s}' (expected uniform, graded)"
            ))),
        }
    }
}

/// Solves `problem` on `mesh` and returns the study row for it.
pub fn solve_level(
    mesh: &Mesh,
    mode: DegreeMode,
    stab: StabChoice,
    problem: &TestProblem,
    level: usize,
) -> Result<StudyRow> {
    let start = Instant::now();
    let degrees = assign_degrees(mesh, mode)?;
    let solution = solve_dirichlet(mesh, &degrees, stab, |x| problem.u(x))?;
    let error = computable_error(mesh, &solution, problem)?;
    Ok(StudyRow {
        level,
        h: mesh.max_diameter(),
        n_dofs: solution.n_dofs(),
        error,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn check_domain(problem: &TestProblem, mesh: &Mesh) -> Result<()> {
    if problem.domain != mesh.domain {
        return Err(Error::InvalidArgument(format!(
            "problem {} lives on {:?}, mesh covers {:?}",
            problem.name(),
            problem.domain,
            mesh.domain
        )));
    }
    Ok(())
}

/// Uniform degree `p` on the given meshes, with an algebraic rate fitted against `h`.
pub fn run_h_study_on_meshes(
    problem: &TestProblem,
    meshes: &[Mesh],
    p: usize,
    stab: StabChoice,
) -> Result<StudyResult> {
    if meshes.len() < 2 {
        return Err(Error::Fit(format!(
            "{} levels, an h-study needs at least 2",
            meshes.len()
        )));
    }
    let mut rows = Vec::with_capacity(meshes.len());
    for (i, mesh) in meshes.iter().enumerate() {
        check_domain(problem, mesh)?;
        rows.push(solve_level(mesh, DegreeMode::Uniform(p), stab, problem, i)?);
    }
    let fit = fit(&rows, FitKind::Algebraic)?;
    Ok(StudyResult { rows, fit })
}

/// h-study on generated meshes with `n` subdivisions for each `n` in `levels`.
pub fn run_h_study(
    problem: &TestProblem,
    family: MeshFamily,
    p: usize,
    levels: &[usize],
    stab: StabChoice,
) -> Result<StudyResult> {
    if levels.len() < 2 {
        return Err(Error::Fit(format!(
            "{} levels, an h-study needs at least 2",
            levels.len()
        )));
    }
    let mut rows = Vec::with_capacity(levels.len());
    for &n in levels {
        let mesh = family.generate(n)?;
        check_domain(problem, &mesh)?;
        rows.push(solve_level(
            &mesh,
            DegreeMode::Uniform(p),
            stab,
            problem,
            n,
        )?);
    }
    let fit = fit(&rows, FitKind::Algebraic)?;
    Ok(StudyResult { rows, fit })
}

/// hp-study on graded L-shape meshes with `n + 1` layers for `n = 0..=n_max`, with an
/// exponential slope fitted against `sqrt(N)`.
pub fn run_hp_study(
    problem: &TestProblem,
    family: GradedFamily,
    sigma: f64,
    degrees: HpDegrees,
    n_max: usize,
    stab: StabChoice,
) -> Result<StudyResult> {
    if problem.domain != DomainTag::LShape {
        return Err(Error::InvalidArgument(format!(
            "hp-studies run on the L-shape, problem {} does not",
            problem.name()
        )));
    }
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mesh = generate_graded_mesh(family, sigma, n)?;
        rows.push(solve_level(&mesh, degrees.mode(n), stab, problem, n)?);
    }
    let fit = fit(&rows, FitKind::Exponential)?;
    Ok(StudyResult { rows, fit })
}
