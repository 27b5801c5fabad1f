//! Assembly and solution of the mixed system
//!
//! ```text
//! a_h(u_h, v) + (v, ∇p_h) = (f, v)   for all v in V̊_h,
//! (u_h, ∇q)               = 0        for all q in S̊_h,
//! ```
//!
//! with `a_h(u, v) = Σ_K ε(∇curl u, ∇curl v)_K + α(curl u, curl v)_K + β(u, v)_K`.

pub mod minres;

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use faer::prelude::*;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fespace::{pushforward, pushforward_scalar, FESpace, SpaceKind};
use crate::mesh::CellGeometry;
use crate::reference_element::quadrature::{gauss_rule, QuadDomain};
use crate::reference_element::table::{tabulate, tabulate_scalar, ReferenceTable, ScalarTable};
use crate::reference_element::{shared_dual_basis, shared_serendipity};
use crate::sparse::{norm2, CsrMatrix};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProblemParams {
    pub eps: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ProblemParams {
    pub fn new(eps: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidArgument(format!("eps must be finite and >= 0, got {eps}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha must be finite and > 0, got {alpha}")));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidArgument(format!("beta must be finite and >= 0, got {beta}")));
        }
        Ok(ProblemParams { eps, alpha, beta })
    }
}

impl Default for ProblemParams {
    fn default() -> Self {
        ProblemParams {
            eps: 1.0,
            alpha: 1.0,
            beta: 1.0,
        }
    }
}

/// Gauss points per direction for the bilinear forms and the load vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureOrders {
    pub matrix: usize,
    pub load: usize,
}

impl Default for QuadratureOrders {
    fn default() -> Self {
        QuadratureOrders { matrix: 5, load: 6 }
    }
}

/// A point evaluator `x -> f(x)` usable from worker threads.
pub type VectorField<'a> = &'a (dyn Fn([f64; 3]) -> [f64; 3] + Sync);

/// Reference tabulations shared by every cell for a given order.
#[derive(Clone, Debug)]
pub struct ReferenceData {
    pub r: usize,
    pub matrix_table: ReferenceTable,
    pub load_table: ReferenceTable,
    pub scalar_table: ScalarTable,
}

impl ReferenceData {
    pub fn new(r: usize, quad: QuadratureOrders) -> Result<Self> {
        let basis = shared_dual_basis(r)?;
        let ser = shared_serendipity(r)?;
        let rule = gauss_rule(quad.matrix, QuadDomain::Cell);
        Ok(ReferenceData {
            r,
            matrix_table: tabulate(basis, &rule),
            load_table: tabulate(basis, &gauss_rule(quad.load, QuadDomain::Cell)),
            scalar_table: tabulate_scalar(ser, &rule),
        })
    }
}

/// Dense local matrices of one cell shape, row-major.
#[derive(Clone, Debug)]
pub struct LocalMatrices {
    pub nv: usize,
    pub ns: usize,
    /// `a_K(N_j, N_i)`, `nv × nv`.
    pub a: Vec<f64>,
    /// `(N_i, ∇φ_j)_K`, `nv × ns`.
    pub b: Vec<f64>,
    /// `(∇φ_j, ∇φ_j)_K`.
    pub stiffness_diag: Vec<f64>,
}

pub fn local_matrices(data: &ReferenceData, geom: &CellGeometry, params: &ProblemParams) -> LocalMatrices {
    let t = pushforward(geom, &data.matrix_table);
    let s = pushforward_scalar(geom, &data.scalar_table);
    let (nv, ns) = (t.nbasis, s.nbasis);
    let mut a = vec![0.0; nv * nv];
    let mut b = vec![0.0; nv * ns];
    let mut stiffness_diag = vec![0.0; ns];
    for q in 0..t.npoints() {
        let w = t.weights[q];
        for i in 0..nv {
            let (vi, ci, gi) = (t.values[t.at(q, i)], t.curls[t.at(q, i)], t.grad_curls[t.at(q, i)]);
            for j in 0..nv {
                let (vj, cj, gj) = (t.values[t.at(q, j)], t.curls[t.at(q, j)], t.grad_curls[t.at(q, j)]);
                let mut val = params.alpha * dot3(ci, cj) + params.beta * dot3(vi, vj);
                if params.eps != 0.0 {
                    let mut gg = 0.0;
                    for m in 0..3 {
                        gg += dot3(gi[m], gj[m]);
                    }
                    val += params.eps * gg;
                }
                a[i * nv + j] += w * val;
            }
            for j in 0..ns {
                b[i * ns + j] += w * dot3(vi, s.grads[s.at(q, j)]);
            }
        }
        for j in 0..ns {
            let g = s.grads[s.at(q, j)];
            stiffness_diag[j] += w * dot3(g, g);
        }
    }
    LocalMatrices {
        nv,
        ns,
        a,
        b,
        stiffness_diag,
    }
}

#[inline]
fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn geometry_key(g: &CellGeometry) -> [u64; 3] {
    g.half.map(f64::to_bits)
}

/// Local matrices for every distinct cell shape of the mesh.
fn shape_cache(
    data: &ReferenceData,
    space: &FESpace,
    params: &ProblemParams,
) -> (HashMap<[u64; 3], usize>, Vec<LocalMatrices>) {
    let mesh = space.mesh();
    let mut keys = HashMap::new();
    let mut shapes = Vec::new();
    for c in 0..mesh.num_cells() {
        let g = mesh.cell_geometry(c);
        keys.entry(geometry_key(&g)).or_insert_with(|| {
            shapes.push(g);
            shapes.len() - 1
        });
    }
    let mats = shapes.par_iter().map(|g| local_matrices(data, g, params)).collect();
    (keys, mats)
}

/// Global-to-free index map; `usize::MAX` marks constrained DOFs.
fn free_index(space: &FESpace) -> (Vec<usize>, Vec<usize>) {
    let mut map = vec![usize::MAX; space.ndofs()];
    let mut free = Vec::new();
    for d in 0..space.ndofs() {
        if !space.is_boundary(d) {
            map[d] = free.len();
            free.push(d);
        }
    }
    (map, free)
}

/// The operator `a_h` restricted to the free DOFs of a `V(r)` space.
pub fn assemble_operator(params: &ProblemParams, v: &FESpace, quad: QuadratureOrders) -> Result<CsrMatrix> {
    let r = v_order(v)?;
    let data = ReferenceData::new(r, quad)?;
    let (map, free) = free_index(v);
    let (keys, mats) = shape_cache(&data, v, params);
    let mesh = v.mesh();
    let triplets: Vec<Vec<(usize, usize, f64)>> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let lm = &mats[keys[&geometry_key(&mesh.cell_geometry(c))]];
            let dofs = v.cell_dofs(c);
            let mut out = Vec::with_capacity(lm.nv * lm.nv);
            for (i, &gi) in dofs.iter().enumerate() {
                if map[gi] == usize::MAX {
                    continue;
                }
                for (j, &gj) in dofs.iter().enumerate() {
                    if map[gj] != usize::MAX {
                        out.push((map[gi], map[gj], lm.a[i * lm.nv + j]));
                    }
                }
            }
            out
        })
        .collect();
    Ok(CsrMatrix::from_triplets(free.len(), free.len(), triplets.concat()))
}

/// `(f, N_i)` for every free DOF of a `V(r)` space.
pub fn assemble_load(v: &FESpace, f: VectorField<'_>, quad: QuadratureOrders) -> Result<Vec<f64>> {
    let r = v_order(v)?;
    let data = ReferenceData::new(r, quad)?;
    Ok(load_vector(&data, v, f))
}

fn load_vector(data: &ReferenceData, v: &FESpace, f: VectorField<'_>) -> Vec<f64> {
    let (map, free) = free_index(v);
    let mesh = v.mesh();
    let t = &data.load_table;
    let local: Vec<Vec<f64>> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let geom = mesh.cell_geometry(c);
            let scales: Vec<f64> = t.dofs.iter().map(|d| crate::fespace::dof_scale(&geom, d)).collect();
            let det = geom.det();
            let mut out = vec![0.0; t.nbasis];
            for q in 0..t.npoints() {
                let fx = f(geom.to_physical(t.points[q]));
                // Covariant values v = B⁻ᵀ v̂: fold 1/h into the load sample.
                let g: [f64; 3] = std::array::from_fn(|k| t.weights[q] * det * fx[k] / geom.half[k]);
                for (j, o) in out.iter_mut().enumerate() {
                    *o += scales[j] * dot3(g, t.values[t.at(q, j)]);
                }
            }
            out
        })
        .collect();
    let mut rhs = vec![0.0; free.len()];
    for c in 0..mesh.num_cells() {
        for (i, &g) in v.cell_dofs(c).iter().enumerate() {
            if map[g] != usize::MAX {
                rhs[map[g]] += local[c][i];
            }
        }
    }
    rhs
}

fn v_order(v: &FESpace) -> Result<usize> {
    match v.kind() {
        SpaceKind::V(r) => Ok(r),
        k => Err(Error::InvalidArgument(format!("expected a V(r) space, got {k:?}"))),
    }
}

/// Finite element coefficients over all global DOFs of a space; constrained
/// DOFs are zero.
#[derive(Clone, Debug)]
pub struct SolutionField {
    pub space: Arc<FESpace>,
    pub coeffs: Vec<f64>,
}

impl SolutionField {
    pub fn zeros(space: Arc<FESpace>) -> Self {
        let n = space.ndofs();
        SolutionField {
            space,
            coeffs: vec![0.0; n],
        }
    }

    pub fn from_free(space: Arc<FESpace>, free_values: &[f64]) -> Self {
        let mut coeffs = vec![0.0; space.ndofs()];
        let mut k = 0;
        for (d, c) in coeffs.iter_mut().enumerate() {
            if !space.is_boundary(d) {
                *c = free_values[k];
                k += 1;
            }
        }
        assert_eq!(k, free_values.len(), "free value count mismatch");
        SolutionField { space, coeffs }
    }

    pub fn free_values(&self) -> Vec<f64> {
        (0..self.space.ndofs())
            .filter(|&d| !self.space.is_boundary(d))
            .map(|d| self.coeffs[d])
            .collect()
    }

    pub fn cell_coefficients(&self, c: usize) -> Vec<f64> {
        self.space.cell_dofs(c).iter().map(|&d| self.coeffs[d]).collect()
    }
}

/// The assembled saddle-point system on free DOFs.
#[derive(Clone, Debug)]
pub struct SaddleSystem {
    pub params: ProblemParams,
    pub v_space: Arc<FESpace>,
    pub s_space: Arc<FESpace>,
    /// `n_u × n_u`.
    pub a: CsrMatrix,
    /// `n_u × n_p`, `B[i][j] = (N_i, ∇φ_j)`.
    pub b: CsrMatrix,
    pub f: Vec<f64>,
    /// Diagonal of the S̊ stiffness matrix, used by the Krylov preconditioner.
    pub stiffness_diag: Vec<f64>,
}

impl SaddleSystem {
    pub fn num_u(&self) -> usize {
        self.a.nrows()
    }

    pub fn num_p(&self) -> usize {
        self.b.ncols()
    }

    pub fn num_unknowns(&self) -> usize {
        self.num_u() + self.num_p()
    }

    /// `[A B; Bᵀ 0] x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let nu = self.num_u();
        let (u, p) = x.split_at(nu);
        let mut top = self.a.matvec(u);
        for (t, v) in top.iter_mut().zip(self.b.matvec(p)) {
            *t += v;
        }
        top.extend(self.b.transpose_matvec(u));
        top
    }

    pub fn rhs(&self) -> Vec<f64> {
        let mut r = self.f.clone();
        r.resize(self.num_unknowns(), 0.0);
        r
    }

    pub fn saddle_matrix(&self) -> CsrMatrix {
        let nu = self.num_u();
        let mut t: Vec<(usize, usize, f64)> = self.a.triplets().collect();
        for (i, j, v) in self.b.triplets() {
            t.push((i, nu + j, v));
            t.push((nu + j, i, v));
        }
        CsrMatrix::from_triplets(self.num_unknowns(), self.num_unknowns(), t)
    }
}

/// Assembles `A`, `B` and `F` on the free DOFs of `v = V(r)` and `s = S(r)`.
pub fn assemble(
    params: &ProblemParams,
    v: Arc<FESpace>,
    s: Arc<FESpace>,
    f: VectorField<'_>,
    quad: QuadratureOrders,
) -> Result<SaddleSystem> {
    let r = v_order(&v)?;
    if s.kind() != SpaceKind::S(r) {
        return Err(Error::InvalidArgument(format!(
            "pressure space must be S({r}), got {:?}",
            s.kind()
        )));
    }
    if !Arc::ptr_eq(v.mesh_arc(), s.mesh_arc()) && v.mesh().divisions() != s.mesh().divisions() {
        return Err(Error::InvalidArgument("spaces live on different meshes".into()));
    }
    let data = ReferenceData::new(r, quad)?;
    let (vmap, vfree) = free_index(&v);
    let (smap, sfree) = free_index(&s);
    let (keys, mats) = shape_cache(&data, &v, params);
    let mesh = v.mesh();
    type Local = (Vec<(usize, usize, f64)>, Vec<(usize, usize, f64)>, Vec<(usize, f64)>);
    let local: Vec<Local> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let lm = &mats[keys[&geometry_key(&mesh.cell_geometry(c))]];
            let vd = v.cell_dofs(c);
            let sd = s.cell_dofs(c);
            let mut ta = Vec::with_capacity(lm.nv * lm.nv);
            let mut tb = Vec::with_capacity(lm.nv * lm.ns);
            for (i, &gi) in vd.iter().enumerate() {
                let fi = vmap[gi];
                if fi == usize::MAX {
                    continue;
                }
                for (j, &gj) in vd.iter().enumerate() {
                    if vmap[gj] != usize::MAX {
                        ta.push((fi, vmap[gj], lm.a[i * lm.nv + j]));
                    }
                }
                for (j, &gj) in sd.iter().enumerate() {
                    if smap[gj] != usize::MAX {
                        tb.push((fi, smap[gj], lm.b[i * lm.ns + j]));
                    }
                }
            }
            let diag = sd
                .iter()
                .enumerate()
                .filter(|(_, &g)| smap[g] != usize::MAX)
                .map(|(j, &g)| (smap[g], lm.stiffness_diag[j]))
                .collect();
            (ta, tb, diag)
        })
        .collect();
    let mut ta = Vec::new();
    let mut tb = Vec::new();
    let mut stiffness_diag = vec![0.0; sfree.len()];
    for (a, b, d) in local {
        ta.extend(a);
        tb.extend(b);
        for (k, v) in d {
            stiffness_diag[k] += v;
        }
    }
    let f = load_vector(&data, &v, f);
    Ok(SaddleSystem {
        params: *params,
        a: CsrMatrix::from_triplets(vfree.len(), vfree.len(), ta),
        b: CsrMatrix::from_triplets(vfree.len(), sfree.len(), tb),
        f,
        stiffness_diag,
        v_space: v,
        s_space: s,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    /// Direct below [`SolverOptions::direct_limit`] unknowns, Krylov above.
    Auto,
    Direct,
    Krylov,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub kind: SolverKind,
    /// Relative residual target `‖K x − b‖ ≤ tol ‖b‖`.
    pub tol: f64,
    /// Krylov iteration cap; `None` means `20 ×` unknowns.
    pub max_iter: Option<usize>,
    pub direct_limit: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            kind: SolverKind::Auto,
            tol: 1e-10,
            max_iter: None,
            direct_limit: 50_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SolverStats {
    pub method: String,
    pub unknowns: usize,
    pub nnz: usize,
    /// Krylov iterations, or refinement steps plus one for the direct path.
    pub iterations: usize,
    pub relative_residual: f64,
    pub seconds: f64,
}

pub fn solve_saddle(sys: &SaddleSystem, opts: &SolverOptions) -> Result<(SolutionField, SolutionField, SolverStats)> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be > 0, got {}", opts.tol)));
    }
    let start = Instant::now();
    let n = sys.num_unknowns();
    let rhs = sys.rhs();
    let bnorm = norm2(&rhs);
    let direct = match opts.kind {
        SolverKind::Direct => true,
        SolverKind::Krylov => false,
        SolverKind::Auto => n <= opts.direct_limit,
    };
    let (x, iterations, residual, method) = if n == 0 {
        (Vec::new(), 0, 0.0, "empty")
    } else if bnorm == 0.0 {
        (vec![0.0; n], 0, 0.0, if direct { "direct-lu" } else { "minres" })
    } else if direct {
        let (x, it, res) = solve_direct(sys, &rhs, bnorm, opts.tol)?;
        (x, it, res, "direct-lu")
    } else {
        let (x, it, res) = solve_krylov(sys, &rhs, opts)?;
        (x, it, res, "minres")
    };
    let nu = sys.num_u();
    let stats = SolverStats {
        method: method.to_string(),
        unknowns: n,
        nnz: sys.a.nnz() + 2 * sys.b.nnz(),
        iterations,
        relative_residual: residual,
        seconds: start.elapsed().as_secs_f64(),
    };
    log::debug!("{} solve: {} unknowns, residual {:.3e}", stats.method, n, residual);
    let u = SolutionField::from_free(sys.v_space.clone(), &x[..nu.min(x.len())]);
    let p = SolutionField::from_free(sys.s_space.clone(), &x[nu.min(x.len())..]);
    Ok((u, p, stats))
}

fn relative_residual(sys: &SaddleSystem, x: &[f64], rhs: &[f64], bnorm: f64) -> (Vec<f64>, f64) {
    let kx = sys.apply(x);
    let r: Vec<f64> = rhs.iter().zip(&kx).map(|(b, k)| b - k).collect();
    let n = norm2(&r) / bnorm;
    (r, n)
}

fn solve_direct(sys: &SaddleSystem, rhs: &[f64], bnorm: f64, tol: f64) -> Result<(Vec<f64>, usize, f64)> {
    let k = sys.saddle_matrix().to_faer();
    let lu = k
        .sp_lu()
        .map_err(|e| Error::SingularSystem(format!("sparse LU failed: {e:?}")))?;
    let solve = |b: &[f64]| -> Vec<f64> {
        let col = Col::<f64>::from_fn(b.len(), |i| b[i]);
        let x = lu.solve(&col);
        (0..b.len()).map(|i| x[i]).collect()
    };
    let mut x = solve(rhs);
    let mut steps = 1;
    let (mut r, mut res) = relative_residual(sys, &x, rhs, bnorm);
    while !(res <= tol) && steps < 4 && res.is_finite() {
        let dx = solve(&r);
        for (xi, d) in x.iter_mut().zip(dx) {
            *xi += d;
        }
        steps += 1;
        (r, res) = relative_residual(sys, &x, rhs, bnorm);
    }
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::SingularSystem("non-finite solution from the LU factors".into()));
    }
    if !(res <= tol) {
        return Err(Error::NotConverged {
            iterations: steps,
            residual: res,
        });
    }
    Ok((x, steps, res))
}

fn solve_krylov(sys: &SaddleSystem, rhs: &[f64], opts: &SolverOptions) -> Result<(Vec<f64>, usize, f64)> {
    let n = sys.num_unknowns();
    // Block-diagonal preconditioner: diag(A) for the field, and the S̊
    // stiffness diagonal scaled by 1/β (the Schur complement acts like
    // (1/β)·stiffness on gradients) for the multiplier.
    let mut minv: Vec<f64> = sys.a.diagonal().iter().map(|&d| safe_inverse(d)).collect();
    let pscale = if sys.params.beta > 0.0 { 1.0 / sys.params.beta } else { 1.0 };
    minv.extend(sys.stiffness_diag.iter().map(|&d| safe_inverse(pscale * d)));
    let max_iter = opts.max_iter.unwrap_or(20 * n);
    let out = minres::minres(|x| sys.apply(x), rhs, &minv, opts.tol, max_iter);
    if !out.x.iter().all(|v| v.is_finite()) {
        return Err(Error::SingularSystem("Krylov iteration broke down".into()));
    }
    if !out.converged {
        return Err(Error::NotConverged {
            iterations: out.iterations,
            residual: out.residual,
        });
    }
    Ok((out.x, out.iterations, out.residual))
}

fn safe_inverse(d: f64) -> f64 {
    if d.abs() > 0.0 {
        1.0 / d.abs()
    } else {
        1.0
    }
}
