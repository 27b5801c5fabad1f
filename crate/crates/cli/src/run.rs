//! Command execution.

use std::fmt;
use std::path::Path;

use qcfem_core::analysis::verify::run_verification;
use qcfem_core::analysis::{convergence_study, interpolation_study, solve_level};
use qcfem_core::reference_element::{export, shared_dual_basis};
use serde_json::json;

use crate::config::{Command, Format, RunArgs};
use crate::emit::{
    convergence_svg, convergence_table, interpolation_svg, interpolation_table, sci, with_extension, write_file,
    Table,
};

#[derive(Debug)]
pub enum RunError {
    /// Invalid option values that parsing alone cannot catch.
    Usage(String),
    Compute(qcfem_core::Error),
    Io(String, std::io::Error),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Usage(m) => write!(f, "{m}"),
            RunError::Compute(e) => write!(f, "{e}"),
            RunError::Io(p, e) => write!(f, "cannot write {p}: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<qcfem_core::Error> for RunError {
    fn from(e: qcfem_core::Error) -> Self {
        RunError::Compute(e)
    }
}

/// What a command produced: whether every check passed and which files it
/// wrote.
#[derive(Debug, Default)]
pub struct Outcome {
    pub passed: bool,
    pub files: Vec<std::path::PathBuf>,
}

fn write(out: &mut Outcome, prefix: &Path, ext: &str, contents: &str) -> Result<(), RunError> {
    let path = with_extension(prefix, ext);
    write_file(&path, contents).map_err(|e| RunError::Io(path.display().to_string(), e))?;
    out.files.push(path);
    Ok(())
}

fn emit_table(args: &RunArgs, command: &str, table: &Table, svg: impl FnOnce(&Table) -> String) -> Result<Outcome, RunError> {
    let mut out = Outcome {
        passed: true,
        files: Vec::new(),
    };
    let prefix = args.prefix(command);
    if args.wants(Format::Csv) {
        write(&mut out, &prefix, "csv", &table.to_csv())?;
    }
    if args.wants(Format::Json) {
        write(&mut out, &prefix, "json", &table.to_json())?;
    }
    if args.wants(Format::Svg) {
        write(&mut out, &prefix, "svg", &svg(table))?;
    }
    Ok(out)
}

fn title(args: &RunArgs) -> String {
    format!(
        "{:?} example, r = {}, eps = {}, alpha = {}, beta = {}",
        args.example, args.r, args.eps, args.alpha, args.beta
    )
    .to_lowercase()
}

pub fn run(command: &Command) -> Result<Outcome, RunError> {
    let args = command.args();
    match command {
        Command::Verify(_) => verify(args),
        Command::Convergence(_) => {
            let study = args.study().map_err(RunError::Usage)?;
            let records = convergence_study(&study)?;
            let table = convergence_table(&records, !args.no_timing);
            print!("{}", table.to_csv());
            let t = title(args);
            emit_table(args, command.name(), &table, |tb| convergence_svg(&t, tb))
        }
        Command::InterpStudy(_) => {
            let study = args.study().map_err(RunError::Usage)?;
            let records = interpolation_study(&study)?;
            let table = interpolation_table(&records, !args.no_timing);
            print!("{}", table.to_csv());
            let t = format!("interpolation errors, {}", title(args));
            emit_table(args, command.name(), &table, |tb| interpolation_svg(&t, tb))
        }
        Command::Solve(_) => solve(args),
        Command::ExportBasis(_) => {
            let doc = export::to_json(shared_dual_basis(args.r as usize)?);
            let mut out = Outcome {
                passed: true,
                files: Vec::new(),
            };
            match &args.out {
                Some(prefix) => write(&mut out, prefix, "json", &doc)?,
                None => println!("{doc}"),
            }
            Ok(out)
        }
    }
}

fn verify(args: &RunArgs) -> Result<Outcome, RunError> {
    let checks = run_verification(args.r as usize)?;
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let passed = checks.iter().all(|c| c.passed);
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {failed} failed", checks.len());
    let mut out = Outcome {
        passed,
        files: Vec::new(),
    };
    if let Some(prefix) = &args.out {
        if args.wants(Format::Json) {
            let body = serde_json::to_string_pretty(&checks).expect("checks serialize") + "\n";
            write(&mut out, prefix, "json", &body)?;
        }
    }
    Ok(out)
}

fn solve(args: &RunArgs) -> Result<Outcome, RunError> {
    let study = args.study().map_err(RunError::Usage)?;
    let level = study.levels.1;
    let start = std::time::Instant::now();
    let sol = solve_level(&study, level).map_err(|e| qcfem_core::Error::Level {
        level,
        source: Box::new(e),
    })?;
    let seconds = start.elapsed().as_secs_f64();
    let e = &sol.errors;
    let ratio = if sol.f_norm > 0.0 { sol.p_norm / sol.f_norm } else { 0.0 };
    println!("level {level} (h = 1/{}), {} unknowns, {} ({} iterations)", 1u64 << level, sol.stats.unknowns, sol.stats.method, sol.stats.iterations);
    println!("err_l2      {}", sci(e.l2));
    println!("err_curl    {}", sci(e.curl_l2));
    println!("err_curl_h1 {}", sci(e.curl_h1));
    println!("err_energy  {}", sci(e.energy));
    println!("err_gradcurl {}", sci(e.gradcurl));
    println!("p_norm      {}", sci(sol.p_norm));
    println!("f_norm      {}", sci(sol.f_norm));
    println!("p_norm/f_norm {}", sci(ratio));
    println!("relative residual {}", sci(sol.stats.relative_residual));

    let record = qcfem_core::analysis::ConvergenceRecord {
        level,
        h: 1.0 / (1u64 << level) as f64,
        ndofs: sol.stats.unknowns,
        errors: sol.errors,
        rates: None,
        p_norm: sol.p_norm,
        f_norm: sol.f_norm,
        solver: sol.stats.clone(),
        seconds,
    };
    let table = convergence_table(std::slice::from_ref(&record), !args.no_timing);
    let mut out = Outcome {
        passed: true,
        files: Vec::new(),
    };
    let prefix = args.prefix("solve");
    if args.wants(Format::Csv) {
        write(&mut out, &prefix, "csv", &table.to_csv())?;
    }
    if args.wants(Format::Json) {
        let r4 = |x: f64| sci(x).parse::<f64>().unwrap_or(x);
        let body = json!({
            "level": level,
            "h": record.h,
            "ndofs": record.ndofs,
            "err_l2": r4(e.l2),
            "err_curl": r4(e.curl_l2),
            "err_curl_h1": r4(e.curl_h1),
            "err_energy": r4(e.energy),
            "err_gradcurl": r4(e.gradcurl),
            "p_norm": r4(sol.p_norm),
            "f_norm": r4(sol.f_norm),
            "p_over_f": r4(ratio),
            "solver": sol.stats.method,
            "solver_iters": sol.stats.iterations,
            "relative_residual": r4(sol.stats.relative_residual),
        });
        write(&mut out, &prefix, "json", &(serde_json::to_string_pretty(&body).expect("json") + "\n"))?;
    }
    Ok(out)
}
