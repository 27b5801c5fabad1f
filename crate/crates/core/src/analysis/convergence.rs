//! Mesh-refinement studies on the unit cube.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use super::interpolation::{interpolate_i, interpolate_r};
use super::manufactured::{manufactured, ExampleKind, ManufacturedSolution};
use super::norms::{error_norms, scalar_l2_norm, vector_l2_norm, ErrorReport};
use crate::assembly_solve::{
    assemble, solve_saddle, ProblemParams, QuadratureOrders, SolutionField, SolverOptions, SolverStats,
};
use crate::error::{Error, Result};
use crate::fespace::{build_space, SpaceKind};
use crate::mesh::Mesh;

#[derive(Clone, Debug)]
pub struct StudyConfig {
    pub example: ExampleKind,
    pub r: usize,
    pub params: ProblemParams,
    /// Inclusive range of refinement levels; level `ℓ` has `2^ℓ` cells per
    /// axis.
    pub levels: (u32, u32),
    pub solver: SolverOptions,
    pub quad: QuadratureOrders,
    /// Gauss points per direction for error norms and DOF evaluation.
    pub error_quad: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            example: ExampleKind::Smooth,
            r: 1,
            params: ProblemParams::default(),
            levels: (2, 4),
            solver: SolverOptions::default(),
            quad: QuadratureOrders::default(),
            error_quad: 6,
        }
    }
}

impl StudyConfig {
    fn validate(&self) -> Result<()> {
        let (a, b) = self.levels;
        if a == 0 || a > b || b > 10 {
            return Err(Error::InvalidArgument(format!("invalid level range {a}..{b}")));
        }
        crate::reference_element::check_order(self.r)
    }
}

/// Observed orders `log(e_prev / e) / log(h_prev / h)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rates {
    pub l2: f64,
    pub curl: f64,
    pub curl_h1: f64,
    pub energy: f64,
    pub gradcurl: f64,
}

pub fn rate(prev: f64, cur: f64, h_prev: f64, h_cur: f64) -> f64 {
    (prev / cur).ln() / (h_prev / h_cur).ln()
}

impl Rates {
    pub fn between(prev: &ErrorReport, cur: &ErrorReport, h_prev: f64, h_cur: f64) -> Self {
        let r = |a: f64, b: f64| rate(a, b, h_prev, h_cur);
        Rates {
            l2: r(prev.l2, cur.l2),
            curl: r(prev.curl_l2, cur.curl_l2),
            curl_h1: r(prev.curl_h1, cur.curl_h1),
            energy: r(prev.energy, cur.energy),
            gradcurl: r(prev.gradcurl, cur.gradcurl),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRecord {
    pub level: u32,
    /// `1 / 2^level`, the cell edge length.
    pub h: f64,
    /// Unknowns of the saddle system (free field plus multiplier DOFs).
    pub ndofs: usize,
    pub errors: ErrorReport,
    /// Absent on the first level.
    pub rates: Option<Rates>,
    pub p_norm: f64,
    pub f_norm: f64,
    pub solver: SolverStats,
    pub seconds: f64,
}

/// Result of one discrete solve.
#[derive(Clone, Debug)]
pub struct LevelSolution {
    pub mesh: Arc<Mesh>,
    pub exact: ManufacturedSolution,
    pub u: SolutionField,
    pub p: SolutionField,
    pub stats: SolverStats,
    pub errors: ErrorReport,
    pub p_norm: f64,
    pub f_norm: f64,
}

pub fn solve_level(config: &StudyConfig, level: u32) -> Result<LevelSolution> {
    let mesh = Arc::new(Mesh::unit_cube(1usize << level)?);
    let exact = manufactured(config.example, &config.params);
    let v = Arc::new(build_space(mesh.clone(), SpaceKind::V(config.r))?);
    let s = Arc::new(build_space(mesh.clone(), SpaceKind::S(config.r))?);
    let f = |x: [f64; 3]| exact.f(x);
    let sys = assemble(&config.params, v, s, &f, config.quad)?;
    let (u, p, stats) = solve_saddle(&sys, &config.solver)?;
    let errors = error_norms(&exact, &u, &config.params, config.error_quad)?;
    let p_norm = scalar_l2_norm(&p, config.error_quad)?;
    let f_norm = vector_l2_norm(&mesh, &f, config.error_quad);
    Ok(LevelSolution {
        mesh,
        exact,
        u,
        p,
        stats,
        errors,
        p_norm,
        f_norm,
    })
}

pub fn convergence_study(config: &StudyConfig) -> Result<Vec<ConvergenceRecord>> {
    config.validate()?;
    let mut out: Vec<ConvergenceRecord> = Vec::new();
    for level in config.levels.0..=config.levels.1 {
        let start = Instant::now();
        let sol = solve_level(config, level).map_err(|e| Error::Level {
            level,
            source: Box::new(e),
        })?;
        let h = 1.0 / (1u64 << level) as f64;
        let rates = out.last().map(|prev| Rates::between(&prev.errors, &sol.errors, prev.h, h));
        log::info!("level {level}: l2 {:.4e}, curl {:.4e}", sol.errors.l2, sol.errors.curl_l2);
        out.push(ConvergenceRecord {
            level,
            h,
            ndofs: sol.stats.unknowns,
            errors: sol.errors,
            rates,
            p_norm: sol.p_norm,
            f_norm: sol.f_norm,
            solver: sol.stats,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    Ok(out)
}

/// Interpolation errors of `R_h` and `I_h` applied to the exact field.
#[derive(Clone, Debug, Serialize)]
pub struct InterpolationRecord {
    pub level: u32,
    pub h: f64,
    pub ndofs: usize,
    pub r_errors: ErrorReport,
    pub i_errors: ErrorReport,
    pub r_rates: Option<Rates>,
    pub i_rates: Option<Rates>,
    pub seconds: f64,
}

pub fn interpolation_study(config: &StudyConfig) -> Result<Vec<InterpolationRecord>> {
    config.validate()?;
    let exact = manufactured(config.example, &config.params);
    let u = |x: [f64; 3]| exact.u(x);
    let c = |x: [f64; 3]| exact.curl(x);
    let mut out: Vec<InterpolationRecord> = Vec::new();
    for level in config.levels.0..=config.levels.1 {
        let start = Instant::now();
        let run = || -> Result<(usize, ErrorReport, ErrorReport)> {
            let mesh = Arc::new(Mesh::unit_cube(1usize << level)?);
            let v = Arc::new(build_space(mesh.clone(), SpaceKind::V(config.r))?);
            let ned = Arc::new(build_space(mesh, SpaceKind::Ned(config.r))?);
            let ru = interpolate_r(&u, &c, v.clone(), config.error_quad)?;
            let iu = interpolate_i(&u, ned, config.error_quad)?;
            Ok((
                v.ndofs(),
                error_norms(&exact, &ru, &config.params, config.error_quad)?,
                error_norms(&exact, &iu, &config.params, config.error_quad)?,
            ))
        };
        let (ndofs, r_errors, i_errors) = run().map_err(|e| Error::Level {
            level,
            source: Box::new(e),
        })?;
        let h = 1.0 / (1u64 << level) as f64;
        let (r_rates, i_rates) = match out.last() {
            Some(p) => (
                Some(Rates::between(&p.r_errors, &r_errors, p.h, h)),
                Some(Rates::between(&p.i_errors, &i_errors, p.h, h)),
            ),
            None => (None, None),
        };
        out.push(InterpolationRecord {
            level,
            h,
            ndofs,
            r_errors,
            i_errors,
            r_rates,
            i_rates,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    Ok(out)
}
