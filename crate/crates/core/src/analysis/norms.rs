//! Broken error norms by element-wise Gauss quadrature.

use rayon::prelude::*;

use super::interpolation::basis_for;
use super::manufactured::ManufacturedSolution;
use crate::assembly_solve::{ProblemParams, SolutionField};
use crate::error::{Error, Result};
use crate::fespace::{dof_scale, scalar_dof_scale, SpaceKind};
use crate::mesh::Mesh;
use crate::reference_element::quadrature::{gauss_rule, QuadDomain};
use crate::reference_element::shared_serendipity;
use crate::reference_element::table::{tabulate, tabulate_scalar};

/// Errors of a discrete field against an exact one.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ErrorReport {
    /// `‖u − u_h‖`.
    pub l2: f64,
    /// `‖curl u − curl_h u_h‖`.
    pub curl_l2: f64,
    /// `|curl u − curl_h u_h|_{1,h}`.
    pub curl_h1: f64,
    /// `‖u − u_h‖_{a_h}`.
    pub energy: f64,
    /// `‖u − u_h‖_{gradcurl,h}`.
    pub gradcurl: f64,
}

impl ErrorReport {
    pub fn from_squares(l2_sq: f64, curl_sq: f64, h1_sq: f64, params: &ProblemParams) -> Self {
        ErrorReport {
            l2: l2_sq.sqrt(),
            curl_l2: curl_sq.sqrt(),
            curl_h1: h1_sq.sqrt(),
            energy: (params.eps * h1_sq + params.alpha * curl_sq + params.beta * l2_sq).sqrt(),
            gradcurl: (params.eps * h1_sq + curl_sq + l2_sq).sqrt(),
        }
    }
}

/// Point evaluators for the exact field, its curl and curl Jacobian.
pub struct ExactField<'a> {
    pub u: &'a (dyn Fn([f64; 3]) -> [f64; 3] + Sync),
    pub curl: &'a (dyn Fn([f64; 3]) -> [f64; 3] + Sync),
    pub grad_curl: &'a (dyn Fn([f64; 3]) -> [[f64; 3]; 3] + Sync),
}

/// Error norms against a manufactured solution, `n` Gauss points per
/// direction (at least 6 for the trigonometric fields).
pub fn error_norms(
    exact: &ManufacturedSolution,
    u_h: &SolutionField,
    params: &ProblemParams,
    n: usize,
) -> Result<ErrorReport> {
    let u = |x| exact.u(x);
    let c = |x| exact.curl(x);
    let g = |x| exact.grad_curl(x);
    error_norms_against(
        &ExactField {
            u: &u,
            curl: &c,
            grad_curl: &g,
        },
        u_h,
        params,
        n,
    )
}

/// Squared cell contributions `(‖e‖², ‖curl e‖², |curl e|₁²)`.
pub fn cellwise_error_squares(exact: &ExactField<'_>, u_h: &SolutionField, n: usize) -> Result<Vec<[f64; 3]>> {
    let basis = basis_for(&u_h.space)?;
    let table = tabulate(basis, &gauss_rule(n, QuadDomain::Cell));
    let mesh = u_h.space.mesh();
    let nb = table.nbasis;
    Ok((0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let geom = mesh.cell_geometry(c);
            let (h, det) = (geom.half, geom.det());
            // Fold the DOF scaling into the coefficients, sum reference
            // quantities, then map once per point.
            let coeffs: Vec<f64> = u_h
                .space
                .cell_dofs(c)
                .iter()
                .zip(&table.dofs)
                .map(|(&g, d)| u_h.coeffs[g] * dof_scale(&geom, d))
                .collect();
            let mut acc = [0.0; 3];
            for q in 0..table.npoints() {
                let mut v = [0.0; 3];
                let mut w = [0.0; 3];
                let mut gc = [[0.0; 3]; 3];
                for (j, &a) in coeffs.iter().enumerate() {
                    if a == 0.0 {
                        continue;
                    }
                    let k = q * nb + j;
                    let (bv, bc, bg) = (table.values[k], table.curls[k], table.grad_curls[k]);
                    for i in 0..3 {
                        v[i] += a * bv[i];
                        w[i] += a * bc[i];
                        for m in 0..3 {
                            gc[i][m] += a * bg[i][m];
                        }
                    }
                }
                let x = geom.to_physical(table.points[q]);
                let (eu, ec, eg) = ((exact.u)(x), (exact.curl)(x), (exact.grad_curl)(x));
                let wq = table.weights[q] * det;
                for i in 0..3 {
                    let dv = eu[i] - v[i] / h[i];
                    let dc = ec[i] - h[i] * w[i] / det;
                    acc[0] += wq * dv * dv;
                    acc[1] += wq * dc * dc;
                    for m in 0..3 {
                        let dg = eg[i][m] - h[i] * gc[i][m] / (det * h[m]);
                        acc[2] += wq * dg * dg;
                    }
                }
            }
            acc
        })
        .collect())
}

pub fn error_norms_against(
    exact: &ExactField<'_>,
    u_h: &SolutionField,
    params: &ProblemParams,
    n: usize,
) -> Result<ErrorReport> {
    let cells = cellwise_error_squares(exact, u_h, n)?;
    let mut s = [0.0; 3];
    for c in &cells {
        for k in 0..3 {
            s[k] += c[k];
        }
    }
    Ok(ErrorReport::from_squares(s[0], s[1], s[2], params))
}

/// `‖p_h‖` for a serendipity field.
pub fn scalar_l2_norm(p: &SolutionField, n: usize) -> Result<f64> {
    let r = match p.space.kind() {
        SpaceKind::S(r) => r,
        k => return Err(Error::InvalidArgument(format!("expected an S(r) field, got {k:?}"))),
    };
    let ser = shared_serendipity(r)?;
    let table = tabulate_scalar(ser, &gauss_rule(n, QuadDomain::Cell));
    let mesh = p.space.mesh();
    let cells: Vec<f64> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let geom = mesh.cell_geometry(c);
            let coeffs: Vec<f64> = p
                .space
                .cell_dofs(c)
                .iter()
                .zip(&table.dofs)
                .map(|(&g, &d)| p.coeffs[g] * scalar_dof_scale(&geom, d))
                .collect();
            (0..table.weights.len())
                .map(|q| {
                    let v: f64 = coeffs.iter().enumerate().map(|(j, a)| a * table.values[table.at(q, j)]).sum();
                    table.weights[q] * geom.det() * v * v
                })
                .sum()
        })
        .collect();
    Ok(cells.iter().sum::<f64>().sqrt())
}

/// `‖f‖` over the mesh domain by cellwise quadrature.
pub fn vector_l2_norm(mesh: &Mesh, f: &(dyn Fn([f64; 3]) -> [f64; 3] + Sync), n: usize) -> f64 {
    let rule = gauss_rule(n, QuadDomain::Cell);
    let cells: Vec<f64> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let geom = mesh.cell_geometry(c);
            rule.points
                .iter()
                .zip(&rule.weights)
                .map(|(p, w)| {
                    let v = f(geom.to_physical(*p));
                    w * geom.det() * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
                })
                .sum()
        })
        .collect();
    cells.iter().sum::<f64>().sqrt()
}
