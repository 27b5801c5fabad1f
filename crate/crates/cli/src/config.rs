//! Command-line configuration.

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcfem_core::analysis::{ExampleKind, StudyConfig};
use qcfem_core::assembly_solve::{ProblemParams, QuadratureOrders, SolverKind, SolverOptions};

#[derive(Parser, Debug)]
#[command(name = "qcfem", version, about = "Nonconforming H(gradcurl) cubical elements: verification and convergence studies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Unisolvence, complex exactness, commuting diagrams and the jump property.
    Verify(RunArgs),
    /// Solve on a sequence of uniformly refined meshes and tabulate errors and rates.
    Convergence(RunArgs),
    /// Single solve on the finest requested level; reports error and multiplier norms.
    Solve(RunArgs),
    /// Interpolation errors of R_h and I_h on the exact field.
    InterpStudy(RunArgs),
    /// Write the reference dual basis with exact rational coefficients as JSON.
    ExportBasis(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify(_) => "verify",
            Command::Convergence(_) => "convergence",
            Command::Solve(_) => "solve",
            Command::InterpStudy(_) => "interp-study",
            Command::ExportBasis(_) => "export-basis",
        }
    }

    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Verify(a)
            | Command::Convergence(a)
            | Command::Solve(a)
            | Command::InterpStudy(a)
            | Command::ExportBasis(a) => a,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Example {
    Smooth,
    Layer,
}

impl From<Example> for ExampleKind {
    fn from(e: Example) -> Self {
        match e {
            Example::Smooth => ExampleKind::Smooth,
            Example::Layer => ExampleKind::Layer,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Solver {
    Auto,
    Direct,
    Krylov,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// `a..b` (inclusive) or a single level `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Levels(pub RangeInclusive<u32>);

impl FromStr for Levels {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("bad level `{t}`: {e}"));
        let (a, b) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let a = parse(s)?;
                (a, a)
            }
        };
        if a == 0 || a > b || b > 10 {
            return Err(format!("level range must satisfy 1 <= start <= end <= 10, got {a}..{b}"));
        }
        Ok(Levels(a..=b))
    }
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Polynomial order of the element.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub r: u8,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, value_enum, default_value_t = Example::Smooth)]
    pub example: Example,
    /// Refinement levels; level l has 2^l cells per axis.
    #[arg(long, default_value = "2..4")]
    pub levels: Levels,
    #[arg(long, value_enum, default_value_t = Solver::Auto)]
    pub solver: Solver,
    /// Relative residual tolerance of the linear solver.
    #[arg(long, default_value_t = 1e-10, allow_hyphen_values = true)]
    pub tol: f64,
    /// Gauss points per direction for DOF evaluation and error norms.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u8).range(1..=12))]
    pub quad: u8,
    /// Output path prefix; files are written as <prefix>.csv|.json|.svg.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv,json,svg")]
    pub formats: Vec<Format>,
    /// Leave the seconds column blank so repeated runs give identical files.
    #[arg(long)]
    pub no_timing: bool,
}

impl RunArgs {
    pub fn params(&self) -> Result<ProblemParams, String> {
        ProblemParams::new(self.eps, self.alpha, self.beta).map_err(|e| e.to_string())
    }

    pub fn solver_options(&self) -> Result<SolverOptions, String> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(format!("--tol must lie in (0, 1), got {}", self.tol));
        }
        let kind = match self.solver {
            Solver::Auto => SolverKind::Auto,
            Solver::Direct => SolverKind::Direct,
            Solver::Krylov => SolverKind::Krylov,
        };
        Ok(SolverOptions {
            kind,
            tol: self.tol,
            ..SolverOptions::default()
        })
    }

    pub fn study(&self) -> Result<StudyConfig, String> {
        Ok(StudyConfig {
            example: self.example.into(),
            r: self.r as usize,
            params: self.params()?,
            levels: (*self.levels.0.start(), *self.levels.0.end()),
            solver: self.solver_options()?,
            quad: QuadratureOrders::default(),
            error_quad: self.quad as usize,
        })
    }

    pub fn prefix(&self, command: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(format!("qcfem-{command}")))
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}
