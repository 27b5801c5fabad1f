//! Structural checks: unisolvence, exactness of the discrete complex,
//! commuting interpolations, the jump property and a discrete Poincaré
//! inequality.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::interpolation::interpolate_r;
use crate::assembly_solve::{assemble, assemble_operator, ProblemParams, QuadratureOrders};
use crate::error::Result;
use crate::exact;
use crate::fespace::{build_space, dof_scale, scalar_dof_scale, CellBasis, FESpace, SpaceKind};
use crate::mesh::Mesh;
use crate::polynomials::{curl, div, grad, poincare_p, poincare_p3, rational_to_f64, Poly3, PolyVec3};
use crate::reference_element::quadrature::{gauss_rule, tangential_axes, QuadDomain};
use crate::reference_element::{
    apply_dof, apply_dof_quadrature, face_normal, face_side, integrate_face, shared_dual_basis,
    shared_nedelec_basis, shared_serendipity, w_space_generators, DofKind, NUM_FACES,
};

/// A named pass/fail check with the measured quantity.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UnisolvenceReport {
    pub r: usize,
    pub dimension: usize,
    pub rank: usize,
    pub condition: f64,
    /// Largest deviation of `dof_i(N_j)` from `δ_ij` by quadrature.
    pub duality_error: f64,
}

impl UnisolvenceReport {
    pub fn passed(&self) -> bool {
        self.rank == self.dimension && self.duality_error <= 1e-12
    }
}

pub fn verify_unisolvence(r: usize) -> Result<UnisolvenceReport> {
    let b = shared_dual_basis(r)?;
    let mut worst = 0.0f64;
    for (i, d) in b.dofs.iter().enumerate() {
        for j in 0..b.len() {
            let v = apply_dof_quadrature(d, |x| b.value(j, x), |x| b.curl(j, x), 4);
            worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    Ok(UnisolvenceReport {
        r,
        dimension: b.len(),
        rank: exact::rank(&b.dof_matrix),
        condition: b.condition,
        duality_error: worst,
    })
}

/// Dense matrices of `grad: S → V`, `curl_h: V → W`, `div_h: W → Q` on a
/// mesh, in the global numbering of each space.
#[derive(Clone, Debug)]
pub struct ComplexMatrices {
    pub s: Arc<FESpace>,
    pub v: Arc<FESpace>,
    pub w: Arc<FESpace>,
    pub q: Arc<FESpace>,
    pub grad: DMatrix<f64>,
    pub curl: DMatrix<f64>,
    pub div: DMatrix<f64>,
    /// Largest disagreement between cells sharing a row entity; zero means
    /// the operators are single-valued across interfaces.
    pub conformity_residual: f64,
}

/// Reference tables: `grad_ref[i][j]` = V-DOF `i` of `∇φ̂_j`;
/// `curl_ref[3f+k][j] = ∫_f̂ (curl N̂_j)_k`.
fn reference_complex(r: usize) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let b = shared_dual_basis(r)?;
    let s = shared_serendipity(r)?;
    let grad_ref = b
        .dofs
        .iter()
        .map(|d| s.functions.iter().map(|phi| rational_to_f64(&apply_dof(d, &grad(phi)))).collect())
        .collect();
    let curls: Vec<PolyVec3> = b.functions.iter().map(curl).collect();
    let curl_ref = (0..NUM_FACES)
        .flat_map(|f| (0..3).map(move |k| (f, k)))
        .map(|(f, k)| curls.iter().map(|c| rational_to_f64(&integrate_face(&c.components[k], f))).collect())
        .collect();
    Ok((grad_ref, curl_ref))
}

/// Inserts a cell's row into a dense global matrix, recording disagreement
/// with rows already written by neighbouring cells.
struct RowAssembler {
    m: DMatrix<f64>,
    seen: Vec<bool>,
    residual: f64,
}

impl RowAssembler {
    fn new(rows: usize, cols: usize) -> Self {
        RowAssembler {
            m: DMatrix::zeros(rows, cols),
            seen: vec![false; rows],
            residual: 0.0,
        }
    }

    fn put(&mut self, row: usize, entries: &[(usize, f64)]) {
        let mut dense = vec![0.0; self.m.ncols()];
        for &(c, v) in entries {
            dense[c] += v;
        }
        if self.seen[row] {
            for (c, v) in dense.iter().enumerate() {
                self.residual = self.residual.max((self.m[(row, c)] - v).abs());
            }
        } else {
            for (c, v) in dense.into_iter().enumerate() {
                self.m[(row, c)] = v;
            }
            self.seen[row] = true;
        }
    }
}

pub fn complex_matrices(mesh: Arc<Mesh>, r: usize) -> Result<ComplexMatrices> {
    let s = Arc::new(build_space(mesh.clone(), SpaceKind::S(r))?);
    let v = Arc::new(build_space(mesh.clone(), SpaceKind::V(r))?);
    let w = Arc::new(build_space(mesh.clone(), SpaceKind::W)?);
    let q = Arc::new(build_space(mesh.clone(), SpaceKind::Q)?);
    let b = shared_dual_basis(r)?;
    let ser = shared_serendipity(r)?;
    let (grad_ref, curl_ref) = reference_complex(r)?;
    let mut g = RowAssembler::new(v.ndofs(), s.ndofs());
    let mut c = RowAssembler::new(w.ndofs(), v.ndofs());
    let mut d = RowAssembler::new(q.ndofs(), w.ndofs());
    for cell in 0..mesh.num_cells() {
        let geom = mesh.cell_geometry(cell);
        let (sd, vd, wd) = (s.cell_dofs(cell), v.cell_dofs(cell), w.cell_dofs(cell));
        for (i, &row) in vd.iter().enumerate() {
            let entries: Vec<(usize, f64)> = sd
                .iter()
                .enumerate()
                .map(|(j, &col)| (col, grad_ref[i][j] * scalar_dof_scale(&geom, ser.dofs[j])))
                .collect();
            g.put(row, &entries);
        }
        for (i, &row) in wd.iter().enumerate() {
            let (f, k) = (i / 3, i % 3);
            let n = face_normal(f).index();
            // ∫_f (curl v)_k dA = (h_k / h_n) ∫_f̂ (ĉurl v̂)_k dÂ.
            let factor = geom.half[k] / geom.half[n];
            let entries: Vec<(usize, f64)> = vd
                .iter()
                .enumerate()
                .map(|(j, &col)| (col, factor * dof_scale(&geom, &b.dofs[j]) * curl_ref[i][j]))
                .collect();
            c.put(row, &entries);
        }
        // ∫_K div w = Σ_f ± ∫_f w·n: only the normal moment of each face.
        let entries: Vec<(usize, f64)> = (0..NUM_FACES)
            .map(|f| (wd[3 * f + face_normal(f).index()], face_side(f) as f64))
            .collect();
        d.put(q.cell_dofs(cell)[0], &entries);
    }
    Ok(ComplexMatrices {
        conformity_residual: g.residual.max(c.residual).max(d.residual),
        grad: g.m,
        curl: c.m,
        div: d.m,
        s,
        v,
        w,
        q,
    })
}

/// Numerical rank with threshold `1e-9 σ_max`.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-9 * max).count()
}

fn restrict(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexReport {
    pub r: usize,
    pub with_bc: bool,
    /// `(dim S, dim V, dim W, dim Q)`, or the dimensions of the spaces with
    /// boundary conditions (`Q̊` = zero-mean piecewise constants).
    pub dims: [usize; 4],
    /// Ranks of grad, curl_h, div_h.
    pub ranks: [usize; 3],
    /// Nullities of grad, curl_h, div_h.
    pub nullities: [usize; 3],
    pub curl_grad: f64,
    pub div_curl: f64,
    pub conformity_residual: f64,
    /// `1 − S + V − W + Q` without boundary conditions,
    /// `S̊ − V̊ + W̊ − Q̊` with.
    pub alternating_sum: i64,
    /// `#vertices − #edges + #faces − #cells` of the mesh (equals 1).
    pub euler_characteristic: i64,
    pub checks: Vec<Check>,
}

impl ComplexReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn verify_complex(mesh: Arc<Mesh>, r: usize, with_bc: bool) -> Result<ComplexReport> {
    let cm = complex_matrices(mesh.clone(), r)?;
    let (grad_m, curl_m, div_m) = if with_bc {
        let (sf, vf, wf) = (cm.s.free_dofs(), cm.v.free_dofs(), cm.w.free_dofs());
        let qall: Vec<usize> = (0..cm.q.ndofs()).collect();
        (
            restrict(&cm.grad, &vf, &sf),
            restrict(&cm.curl, &wf, &vf),
            restrict(&cm.div, &qall, &wf),
        )
    } else {
        (cm.grad.clone(), cm.curl.clone(), cm.div.clone())
    };
    let q_dim = if with_bc { cm.q.ndofs() - 1 } else { cm.q.ndofs() };
    let dims = [grad_m.ncols(), grad_m.nrows(), curl_m.nrows(), q_dim];
    let ranks = [numerical_rank(&grad_m), numerical_rank(&curl_m), numerical_rank(&div_m)];
    let nullities = [grad_m.ncols() - ranks[0], curl_m.ncols() - ranks[1], div_m.ncols() - ranks[2]];
    let scale_cg = grad_m.amax().max(1.0) * curl_m.amax().max(1.0);
    let scale_dc = curl_m.amax().max(1.0) * div_m.amax().max(1.0);
    let curl_grad = (&curl_m * &grad_m).amax();
    let div_curl = (&div_m * &curl_m).amax();
    let [ds, dv, dw, dq] = dims.map(|d| d as i64);
    let alternating_sum = if with_bc { ds - dv + dw - dq } else { 1 - ds + dv - dw + dq };
    let euler_characteristic = mesh.num_vertices() as i64 - mesh.num_edges() as i64 + mesh.num_faces() as i64
        - mesh.num_cells() as i64;

    let expected_grad_rank = if with_bc { dims[0] } else { dims[0] - 1 };
    let checks = vec![
        Check::new("curl_h grad = 0", curl_grad <= 1e-12 * scale_cg, format!("{curl_grad:.3e}")),
        Check::new("div_h curl_h = 0", div_curl <= 1e-12 * scale_dc, format!("{div_curl:.3e}")),
        Check::new(
            "single-valued across interfaces",
            cm.conformity_residual <= 1e-12,
            format!("{:.3e}", cm.conformity_residual),
        ),
        Check::new(
            "rank grad",
            ranks[0] == expected_grad_rank,
            format!("{} (expected {expected_grad_rank})", ranks[0]),
        ),
        Check::new(
            "exact at V",
            nullities[1] == ranks[0],
            format!("nullity curl_h {} vs rank grad {}", nullities[1], ranks[0]),
        ),
        Check::new(
            "exact at W",
            nullities[2] == ranks[1],
            format!("nullity div_h {} vs rank curl_h {}", nullities[2], ranks[1]),
        ),
        Check::new(
            "div_h onto Q",
            ranks[2] == dims[3],
            format!("rank div_h {} vs dim {}", ranks[2], dims[3]),
        ),
        Check::new("alternating sum", alternating_sum == 0, format!("{alternating_sum}")),
        Check::new("Euler characteristic", euler_characteristic == 1, format!("{euler_characteristic}")),
    ];
    Ok(ComplexReport {
        r,
        with_bc,
        dims,
        ranks,
        nullities,
        curl_grad,
        div_curl,
        conformity_residual: cm.conformity_residual,
        alternating_sum,
        euler_characteristic,
        checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutingReport {
    pub r: usize,
    pub samples: usize,
    /// `max |Π_h curl u − curl_h R_h u|`.
    pub curl: f64,
    /// `max |𝒫_h div w − div_h Π_h w|`.
    pub div: f64,
    /// `max |R_h grad s − grad π_h s|`.
    pub grad: f64,
}

impl CommutingReport {
    pub fn max_residual(&self) -> f64 {
        self.curl.max(self.div).max(self.grad)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() <= 1e-10
    }
}

/// Random polynomial of total degree `≤ 3` with small integer coefficients.
pub fn random_cubic(rng: &mut ChaCha8Rng) -> Poly3 {
    let mut terms = Vec::new();
    for a in 0..=3u32 {
        for b in 0..=(3 - a) {
            for c in 0..=(3 - a - b) {
                terms.push(([a, b, c], rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3)));
            }
        }
    }
    Poly3::from_terms(&terms)
}

/// `Π_h w`: face moments `∫_f w_k dA` in W numbering.
pub fn face_moments(w_space: &FESpace, w: &dyn Fn([f64; 3]) -> [f64; 3], n: usize) -> Vec<f64> {
    let mesh = w_space.mesh();
    let rule = gauss_rule(n, QuadDomain::Face);
    let mut out = vec![0.0; w_space.ndofs()];
    for f in 0..mesh.num_faces() {
        let (normal, center, half) = mesh.face_geometry(f);
        let (a, b) = tangential_axes(normal);
        let jac = half[a.index()] * half[b.index()];
        for (p, wt) in rule.points.iter().zip(&rule.weights) {
            let mut x = center;
            x[a.index()] += half[a.index()] * p[0];
            x[b.index()] += half[b.index()] * p[1];
            let v = w(x);
            for k in 0..3 {
                out[3 * f + k] += wt * jac * v[k];
            }
        }
    }
    out
}

/// `𝒫_h s`: cell moments `∫_K s dV`.
pub fn cell_moments(q_space: &FESpace, s: &dyn Fn([f64; 3]) -> f64, n: usize) -> Vec<f64> {
    let mesh = q_space.mesh();
    let rule = gauss_rule(n, QuadDomain::Cell);
    (0..mesh.num_cells())
        .map(|c| {
            let g = mesh.cell_geometry(c);
            rule.points
                .iter()
                .zip(&rule.weights)
                .map(|(p, w)| w * g.det() * s(g.to_physical(*p)))
                .sum()
        })
        .collect()
}

/// `π_h^r s`: vertex values, plus `∫_e s ds` for `r = 2`.
pub fn serendipity_interpolate(s_space: &FESpace, s: &dyn Fn([f64; 3]) -> f64, n: usize) -> Vec<f64> {
    let mesh = s_space.mesh();
    let mut out: Vec<f64> = (0..mesh.num_vertices()).map(|v| s(mesh.vertex_point(v))).collect();
    if s_space.kind() == SpaceKind::S(2) {
        let rule = gauss_rule(n, QuadDomain::Edge);
        for e in 0..mesh.num_edges() {
            let (axis, start, len) = mesh.edge_geometry(e);
            let moment: f64 = rule
                .points
                .iter()
                .zip(&rule.weights)
                .map(|(p, w)| {
                    let mut x = start;
                    x[axis.index()] += 0.5 * len * (p[0] + 1.0);
                    w * 0.5 * len * s(x)
                })
                .sum();
            out.push(moment);
        }
    }
    out
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Checks the three commuting identities on `samples` random cubic fields.
pub fn verify_commuting(mesh: Arc<Mesh>, r: usize, samples: usize, seed: u64) -> Result<CommutingReport> {
    let cm = complex_matrices(mesh, r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CommutingReport {
        r,
        samples,
        curl: 0.0,
        div: 0.0,
        grad: 0.0,
    };
    let n = 4;
    let matvec = |m: &DMatrix<f64>, x: &[f64]| -> Vec<f64> { (m * nalgebra::DVector::from_column_slice(x)).as_slice().to_vec() };
    for _ in 0..samples {
        let u = PolyVec3::new(random_cubic(&mut rng), random_cubic(&mut rng), random_cubic(&mut rng));
        let (uf, cf) = (u.to_float(), curl(&u).to_float());
        let ru = interpolate_r(&|x| uf.evaluate(x), &|x| cf.evaluate(x), cm.v.clone(), n)?;
        let lhs = face_moments(&cm.w, &|x| cf.evaluate(x), n);
        report.curl = report.curl.max(max_diff(&lhs, &matvec(&cm.curl, &ru.coeffs)));

        let dvf = div(&u).to_float();
        let lhs = cell_moments(&cm.q, &|x| dvf.evaluate(x), n);
        let pw = face_moments(&cm.w, &|x| uf.evaluate(x), n);
        report.div = report.div.max(max_diff(&lhs, &matvec(&cm.div, &pw)));

        let s = random_cubic(&mut rng);
        let (sf, gf) = (s.to_float(), grad(&s).to_float());
        let rg = interpolate_r(&|x| gf.evaluate(x), &|_| [0.0; 3], cm.v.clone(), n)?;
        let ps = serendipity_interpolate(&cm.s, &|x| sf.evaluate(x), n);
        report.grad = report.grad.max(max_diff(&rg.coeffs, &matvec(&cm.grad, &ps)));
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct JumpReport {
    pub r: usize,
    /// `max |∫_{∂K} q·(v_h − I_h v_h)×n dA|` over cells, basis functions
    /// and constant directions `q`.
    pub residual: f64,
    /// The same with `I_h` replaced by zero; shows the check is not vacuous.
    pub residual_without_interpolant: f64,
}

pub fn verify_jump_property(r: usize, mesh: &Mesh) -> Result<JumpReport> {
    let b = shared_dual_basis(r)?;
    let ned = shared_nedelec_basis(r)?;
    let rule = gauss_rule(4, QuadDomain::Face);
    let mut with_i = 0.0f64;
    let mut without_i = 0.0f64;
    for c in 0..mesh.num_cells() {
        let geom = mesh.cell_geometry(c);
        let cb = CellBasis::new(b, geom);
        let cn = CellBasis::new(ned, geom);
        for j in 0..b.len() {
            // Edge DOFs come first in both bases, in the same order.
            let is_edge = matches!(b.dofs[j].kind, DofKind::EdgeMoment { .. });
            let mut total = [0.0; 3];
            let mut bare = [0.0; 3];
            for f in 0..NUM_FACES {
                let normal = face_normal(f);
                let (ta, tb) = tangential_axes(normal);
                let mut nvec = [0.0; 3];
                nvec[normal.index()] = face_side(f) as f64;
                let jac = geom.half[ta.index()] * geom.half[tb.index()];
                for (p, w) in rule.points.iter().zip(&rule.weights) {
                    let mut xr = [0.0; 3];
                    xr[normal.index()] = face_side(f) as f64;
                    xr[ta.index()] = p[0];
                    xr[tb.index()] = p[1];
                    let x = geom.to_physical(xr);
                    let v = cb.value(j, x);
                    let iv = if is_edge { cn.value(j, x) } else { [0.0; 3] };
                    let d: [f64; 3] = std::array::from_fn(|k| v[k] - iv[k]);
                    let cross = cross3(d, nvec);
                    let cross_bare = cross3(v, nvec);
                    for k in 0..3 {
                        total[k] += w * jac * cross[k];
                        bare[k] += w * jac * cross_bare[k];
                    }
                }
            }
            for k in 0..3 {
                with_i = with_i.max(total[k].abs());
                without_i = without_i.max(bare[k].abs());
            }
        }
    }
    Ok(JumpReport {
        r,
        residual: with_i,
        residual_without_interpolant: without_i,
    })
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `min ‖curl_h v‖² / ‖v‖²` over `v ∈ V̊_h` with `(v, ∇q) = 0` for all
/// `q ∈ S̊_h`, by a dense generalized eigenvalue computation.
pub fn discrete_poincare_eigenvalue(mesh: Arc<Mesh>, r: usize) -> Result<f64> {
    let v = Arc::new(build_space(mesh.clone(), SpaceKind::V(r))?);
    let s = Arc::new(build_space(mesh, SpaceKind::S(r))?);
    let quad = QuadratureOrders::default();
    let c = assemble_operator(&ProblemParams { eps: 0.0, alpha: 1.0, beta: 0.0 }, &v, quad)?;
    let m = assemble_operator(&ProblemParams { eps: 0.0, alpha: 1.0, beta: 1.0 }, &v, quad)?;
    let sys = assemble(&ProblemParams::default(), v, s, &|_| [0.0; 3], quad)?;
    let to_dense = |a: &crate::sparse::CsrMatrix| {
        let d = a.to_dense();
        DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| d[i][j])
    };
    let cd = to_dense(&c);
    // m holds curl + mass; subtract the curl part to get the mass matrix.
    let md = to_dense(&m) - &cd;
    let bd = to_dense(&sys.b);
    let nu = bd.nrows();
    if nu == 0 {
        return Ok(f64::INFINITY);
    }
    // Kernel of Bᵀ from the eigenvectors of B Bᵀ.
    let bbt = &bd * bd.transpose();
    let eig = SymmetricEigen::new(bbt);
    let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max).max(1e-300);
    let kernel: Vec<usize> = (0..nu).filter(|&i| eig.eigenvalues[i] <= 1e-10 * top).collect();
    let z = DMatrix::from_fn(nu, kernel.len(), |i, j| eig.eigenvectors[(i, kernel[j])]);
    let cz = z.transpose() * &cd * &z;
    let mz = z.transpose() * &md * &z;
    let chol = nalgebra::Cholesky::new(mz).ok_or_else(|| {
        crate::Error::SingularSystem("mass matrix on the discrete kernel is not positive definite".into())
    })?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| crate::Error::SingularSystem("singular Cholesky factor".into()))?;
    let sym = &linv * cz * linv.transpose();
    let sym = (&sym + sym.transpose()) * 0.5;
    let ev = SymmetricEigen::new(sym).eigenvalues;
    Ok(ev.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// Exact check of `curl 𝔭w + 𝔭³ div w = w` in rational arithmetic.
#[derive(Clone, Debug, Serialize)]
pub struct PoincareIdentityReport {
    pub fields: usize,
    pub failures: usize,
}

impl PoincareIdentityReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn poincare_identity_holds(w: &PolyVec3) -> bool {
    &curl(&poincare_p(w)) + &poincare_p3(&div(w)) == *w
}

/// The identity on every Stokes generator and on `samples` random fields
/// with cubic components.
pub fn verify_poincare_identity(samples: usize, seed: u64) -> PoincareIdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fields = w_space_generators();
    for _ in 0..samples {
        fields.push(PolyVec3::new(random_cubic(&mut rng), random_cubic(&mut rng), random_cubic(&mut rng)));
    }
    PoincareIdentityReport {
        fields: fields.len(),
        failures: fields.iter().filter(|w| !poincare_identity_holds(w)).count(),
    }
}

/// Every structural check for order `r`: unisolvence, complex exactness on
/// 2³ and 3³ meshes with and without boundary conditions, commuting
/// diagrams and the jump property.
pub fn run_verification(r: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let uni = verify_unisolvence(r)?;
    checks.push(Check::new(
        format!("r={r} unisolvence"),
        uni.passed(),
        format!("rank {}/{}, duality error {:.3e}", uni.rank, uni.dimension, uni.duality_error),
    ));
    let pi = verify_poincare_identity(50, 7);
    checks.push(Check::new(
        "Poincaré identity",
        pi.passed(),
        format!("{} of {} fields fail", pi.failures, pi.fields),
    ));
    for n in [2, 3] {
        let mesh = Arc::new(Mesh::unit_cube(n)?);
        for bc in [false, true] {
            let rep = verify_complex(mesh.clone(), r, bc)?;
            let tag = if bc { "with BC" } else { "no BC" };
            for c in rep.checks {
                checks.push(Check::new(format!("r={r} {n}^3 {tag}: {}", c.name), c.passed, c.detail));
            }
        }
    }
    let mesh = Arc::new(Mesh::unit_cube(2)?);
    let com = verify_commuting(mesh.clone(), r, 20, 11)?;
    checks.push(Check::new(
        format!("r={r} commuting diagrams"),
        com.passed(),
        format!("curl {:.3e}, div {:.3e}, grad {:.3e}", com.curl, com.div, com.grad),
    ));
    let jump = verify_jump_property(r, &mesh)?;
    checks.push(Check::new(
        format!("r={r} jump property"),
        jump.residual <= 1e-12,
        format!("{:.3e} (without I_h {:.3e})", jump.residual, jump.residual_without_interpolant),
    ));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_box_mesh;

    #[test]
    fn unisolvence_both_orders() {
        for (r, dim) in [(1, 24), (2, 36)] {
            let rep = verify_unisolvence(r).unwrap();
            assert_eq!(rep.dimension, dim);
            assert!(rep.passed(), "{rep:?}");
            assert!(rep.condition.is_finite() && rep.condition >= 1.0);
        }
    }

    #[test]
    fn complex_two_cubed_with_bc() {
        let m = Arc::new(Mesh::unit_cube(2).unwrap());
        let rep = verify_complex(m, 1, true).unwrap();
        assert_eq!(rep.dims, [1, 30, 36, 7]);
        assert_eq!(rep.alternating_sum, 0);
        assert!(rep.passed(), "{:#?}", rep.checks);
    }

    #[test]
    fn complex_two_cubed_without_bc() {
        let m = Arc::new(Mesh::unit_cube(2).unwrap());
        let rep = verify_complex(m, 1, false).unwrap();
        assert_eq!(rep.dims, [27, 126, 108, 8]);
        assert_eq!(rep.euler_characteristic, 1);
        assert!(rep.passed(), "{:#?}", rep.checks);
    }

    #[test]
    fn complex_on_anisotropic_mesh() {
        let m = Arc::new(build_box_mesh([0.0; 3], [1.0, 0.5, 2.0], [2, 3, 2]).unwrap());
        for r in [1, 2] {
            for bc in [false, true] {
                let rep = verify_complex(m.clone(), r, bc).unwrap();
                assert!(rep.passed(), "r={r} bc={bc}: {:#?}", rep.checks);
            }
        }
    }

    #[test]
    fn commuting_identities() {
        let m = Arc::new(build_box_mesh([0.0; 3], [1.0, 1.0, 1.0], [2, 2, 2]).unwrap());
        for r in [1, 2] {
            let rep = verify_commuting(m.clone(), r, 5, 17).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn commuting_for_curl_free_field() {
        // u = (yz, zx, xy) has zero curl, so curl_h R_h u = 0 = Π_h curl u.
        let m = Arc::new(Mesh::unit_cube(2).unwrap());
        let cm = complex_matrices(m, 1).unwrap();
        let u = |x: [f64; 3]| [x[1] * x[2], x[2] * x[0], x[0] * x[1]];
        let ru = interpolate_r(&u, &|_| [0.0; 3], cm.v.clone(), 4).unwrap();
        let cu = &cm.curl * nalgebra::DVector::from_column_slice(&ru.coeffs);
        assert!(cu.amax() < 1e-12);
    }

    #[test]
    fn jump_property_holds_and_is_not_vacuous() {
        let m = Mesh::unit_cube(2).unwrap();
        for r in [1, 2] {
            let rep = verify_jump_property(r, &m).unwrap();
            assert!(rep.residual <= 1e-12, "{rep:?}");
            assert!(rep.residual_without_interpolant > 1e-2, "{rep:?}");
        }
    }

    #[test]
    fn poincare_eigenvalue_positive_and_stable() {
        for r in [1, 2] {
            let l2 = discrete_poincare_eigenvalue(Arc::new(Mesh::unit_cube(2).unwrap()), r).unwrap();
            let l3 = discrete_poincare_eigenvalue(Arc::new(Mesh::unit_cube(3).unwrap()), r).unwrap();
            assert!(l2 > 0.0 && l3 > 0.0);
            assert!(l3 >= 0.8 * l2, "r={r}: {l2} -> {l3}");
        }
    }

    #[test]
    fn poincare_identity_exact() {
        let rep = verify_poincare_identity(50, 3);
        assert_eq!(rep.fields, 68);
        assert!(rep.passed());
        // (x, 0, 0) needs the 𝔭³ div term: curl 𝔭 alone misses it.
        let w = w_space_generators()[1].clone();
        assert!(!div(&w).is_zero());
        assert!(curl(&poincare_p(&w)) != w);
    }
}
