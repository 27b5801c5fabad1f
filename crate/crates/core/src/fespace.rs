//! Global spaces on a structured mesh and the physical pushforward of
//! reference tabulations.

use std::sync::Arc;

use crate::mesh::{CellGeometry, Mesh};
use crate::reference_element::table::{ReferenceTable, ScalarTable};
use crate::reference_element::{
    self, face_normal, face_tangent, DofDescriptor, DofKind, ReferenceElementBasis, ScalarDof,
    NUM_EDGES, NUM_FACES,
};

/// Which space a [`FESpace`] discretizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// The nonconforming H(grad curl) space with `12 r + 12` local DOFs.
    V(usize),
    /// Serendipity space with vertex values and, for `r = 2`, edge moments.
    S(usize),
    /// Nonconforming Stokes space, three face moments per face.
    W,
    /// Piecewise constants.
    Q,
    /// Edge-moment subspace of `V(r)` used by the `I_h` interpolation.
    Ned(usize),
}

#[derive(Clone, Debug)]
pub struct FESpace {
    kind: SpaceKind,
    mesh: Arc<Mesh>,
    ndofs: usize,
    cell_dofs: Vec<Vec<usize>>,
    boundary: Vec<bool>,
}

impl FESpace {
    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn mesh_arc(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn ndofs(&self) -> usize {
        self.ndofs
    }

    pub fn cell_dofs(&self, c: usize) -> &[usize] {
        &self.cell_dofs[c]
    }

    pub fn local_size(&self) -> usize {
        self.cell_dofs.first().map_or(0, Vec::len)
    }

    pub fn is_boundary(&self, dof: usize) -> bool {
        self.boundary[dof]
    }

    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary
    }

    /// Unconstrained DOFs in increasing order.
    pub fn free_dofs(&self) -> Vec<usize> {
        (0..self.ndofs).filter(|&d| !self.boundary[d]).collect()
    }

    pub fn num_free(&self) -> usize {
        self.boundary.iter().filter(|&&b| !b).count()
    }

    /// Order `r` for `V`, `S` and `Ned` spaces.
    pub fn order(&self) -> Option<usize> {
        match self.kind {
            SpaceKind::V(r) | SpaceKind::S(r) | SpaceKind::Ned(r) => Some(r),
            SpaceKind::W | SpaceKind::Q => None,
        }
    }
}

/// Builds a space with deterministic global numbering: for `V(r)` all edge
/// DOFs (by edge, then moment order) come before face DOFs (by face, then
/// direction).
pub fn build_space(mesh: Arc<Mesh>, kind: SpaceKind) -> crate::Result<FESpace> {
    let (ne, nf, nv) = (mesh.num_edges(), mesh.num_faces(), mesh.num_vertices());
    let ncells = mesh.num_cells();
    let mut cell_dofs = Vec::with_capacity(ncells);
    let (ndofs, boundary): (usize, Vec<bool>) = match kind {
        SpaceKind::V(r) | SpaceKind::Ned(r) => {
            reference_element::check_order(r)?;
            let with_faces = matches!(kind, SpaceKind::V(_));
            for c in 0..ncells {
                let mut dofs = Vec::with_capacity(12 * r + 12);
                for &e in mesh.cell_edges(c) {
                    dofs.extend((0..r).map(|q| e * r + q));
                }
                if with_faces {
                    for &f in mesh.cell_faces(c) {
                        dofs.extend((0..2).map(|d| r * ne + 2 * f + d));
                    }
                }
                cell_dofs.push(dofs);
            }
            let mut bd: Vec<bool> = (0..ne)
                .flat_map(|e| std::iter::repeat(mesh.is_boundary_edge(e)).take(r))
                .collect();
            if with_faces {
                bd.extend((0..nf).flat_map(|f| std::iter::repeat(mesh.is_boundary_face(f)).take(2)));
            }
            (bd.len(), bd)
        }
        SpaceKind::S(r) => {
            reference_element::check_order(r)?;
            for c in 0..ncells {
                let mut dofs: Vec<usize> = mesh.cell_vertices(c).to_vec();
                if r == 2 {
                    dofs.extend(mesh.cell_edges(c).iter().map(|&e| nv + e));
                }
                cell_dofs.push(dofs);
            }
            let mut bd: Vec<bool> = (0..nv).map(|v| mesh.is_boundary_vertex(v)).collect();
            if r == 2 {
                bd.extend((0..ne).map(|e| mesh.is_boundary_edge(e)));
            }
            (bd.len(), bd)
        }
        SpaceKind::W => {
            for c in 0..ncells {
                cell_dofs.push(
                    mesh.cell_faces(c)
                        .iter()
                        .flat_map(|&f| (0..3).map(move |k| 3 * f + k))
                        .collect(),
                );
            }
            let bd = (0..nf)
                .flat_map(|f| std::iter::repeat(mesh.is_boundary_face(f)).take(3))
                .collect::<Vec<_>>();
            (bd.len(), bd)
        }
        SpaceKind::Q => {
            cell_dofs.extend((0..ncells).map(|c| vec![c]));
            (ncells, vec![false; ncells])
        }
    };
    Ok(FESpace {
        kind,
        mesh,
        ndofs,
        cell_dofs,
        boundary,
    })
}

/// Scale turning a pushed-forward reference dual function into the physical
/// dual function for the same DOF. Edge moments in the centred coordinate
/// are invariant; a face DOF with normal `n` and tangent `t` picks up
/// `h_t / h_n` under the map, so its dual function is rescaled by the
/// inverse.
pub fn dof_scale(geom: &CellGeometry, d: &DofDescriptor) -> f64 {
    match d.kind {
        DofKind::EdgeMoment { .. } => 1.0,
        DofKind::FaceCurlTangential { direction } => {
            let n = face_normal(d.entity).index();
            let t = face_tangent(d.entity, direction).index();
            geom.half[n] / geom.half[t]
        }
    }
}

/// Scale for the serendipity dual functions: vertex values are invariant,
/// `∫_e u ds` picks up the half-length of the edge.
pub fn scalar_dof_scale(geom: &CellGeometry, d: ScalarDof) -> f64 {
    match d {
        ScalarDof::Vertex(_) => 1.0,
        ScalarDof::EdgeMoment(e) => 1.0 / geom.half[reference_element::edge_axis(e).index()],
    }
}

/// Scale for the Stokes dual functions (componentwise map): a face moment
/// picks up the face area factor `h_a h_b`.
pub fn face_moment_scale(geom: &CellGeometry, local_face: usize) -> f64 {
    let n = face_normal(local_face).index();
    geom.half[n] / geom.det()
}

/// Physical values, curls and curl Jacobians of the dual basis of one cell
/// at the mapped quadrature points. Entry `(q, j)` is at `q * nbasis + j`.
#[derive(Clone, Debug)]
pub struct PhysicalCellTable {
    pub nbasis: usize,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub values: Vec<[f64; 3]>,
    pub curls: Vec<[f64; 3]>,
    pub grad_curls: Vec<[[f64; 3]; 3]>,
}

impl PhysicalCellTable {
    pub fn npoints(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn at(&self, q: usize, j: usize) -> usize {
        q * self.nbasis + j
    }
}

#[inline]
fn map_value(h: &[f64; 3], s: f64, v: [f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| s * v[i] / h[i])
}

#[inline]
fn map_curl(h: &[f64; 3], det: f64, s: f64, c: [f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| s * h[i] * c[i] / det)
}

#[inline]
fn map_grad_curl(h: &[f64; 3], det: f64, s: f64, g: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|k| s * h[i] * g[i][k] / (det * h[k])))
}

/// Covariant pushforward `v = B⁻ᵀ v̂`, with curl `det(B)⁻¹ B ĉurl` and curl
/// Jacobian `det(B)⁻¹ B Ĝ B⁻¹`, followed by the DOF rescaling of
/// [`dof_scale`].
pub fn pushforward(geom: &CellGeometry, table: &ReferenceTable) -> PhysicalCellTable {
    let h = &geom.half;
    let det = geom.det();
    let nb = table.nbasis;
    let scales: Vec<f64> = table.dofs.iter().map(|d| dof_scale(geom, d)).collect();
    let n = table.values.len();
    let mut values = Vec::with_capacity(n);
    let mut curls = Vec::with_capacity(n);
    let mut grad_curls = Vec::with_capacity(n);
    for idx in 0..n {
        let s = scales[idx % nb];
        values.push(map_value(h, s, table.values[idx]));
        curls.push(map_curl(h, det, s, table.curls[idx]));
        grad_curls.push(map_grad_curl(h, det, s, table.grad_curls[idx]));
    }
    PhysicalCellTable {
        nbasis: nb,
        points: table.points.iter().map(|&x| geom.to_physical(x)).collect(),
        weights: table.weights.iter().map(|w| w * det).collect(),
        values,
        curls,
        grad_curls,
    }
}

/// Physical values and gradients of the serendipity dual basis of a cell.
#[derive(Clone, Debug)]
pub struct PhysicalScalarTable {
    pub nbasis: usize,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
    pub grads: Vec<[f64; 3]>,
}

impl PhysicalScalarTable {
    #[inline]
    pub fn at(&self, q: usize, j: usize) -> usize {
        q * self.nbasis + j
    }
}

pub fn pushforward_scalar(geom: &CellGeometry, table: &ScalarTable) -> PhysicalScalarTable {
    let h = &geom.half;
    let nb = table.nbasis;
    let scales: Vec<f64> = table.dofs.iter().map(|&d| scalar_dof_scale(geom, d)).collect();
    PhysicalScalarTable {
        nbasis: nb,
        points: table.points.iter().map(|&x| geom.to_physical(x)).collect(),
        weights: table.weights.iter().map(|w| w * geom.det()).collect(),
        values: table
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| scales[i % nb] * v)
            .collect(),
        grads: table
            .grads
            .iter()
            .enumerate()
            .map(|(i, g)| map_value(h, scales[i % nb], *g))
            .collect(),
    }
}

/// Point evaluation of the physical dual basis of one cell.
#[derive(Clone, Debug)]
pub struct CellBasis<'a> {
    pub basis: &'a ReferenceElementBasis,
    pub geom: CellGeometry,
    scales: Vec<f64>,
}

impl<'a> CellBasis<'a> {
    pub fn new(basis: &'a ReferenceElementBasis, geom: CellGeometry) -> Self {
        let scales = basis.dofs.iter().map(|d| dof_scale(&geom, d)).collect();
        CellBasis {
            basis,
            geom,
            scales,
        }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn value(&self, j: usize, x: [f64; 3]) -> [f64; 3] {
        map_value(&self.geom.half, self.scales[j], self.basis.value(j, self.geom.to_reference(x)))
    }

    pub fn curl(&self, j: usize, x: [f64; 3]) -> [f64; 3] {
        let c = self.basis.curl(j, self.geom.to_reference(x));
        map_curl(&self.geom.half, self.geom.det(), self.scales[j], c)
    }

    pub fn grad_curl(&self, j: usize, x: [f64; 3]) -> [[f64; 3]; 3] {
        let g = self.basis.grad_curl(j, self.geom.to_reference(x));
        map_grad_curl(&self.geom.half, self.geom.det(), self.scales[j], g)
    }
}

/// Applies a physical DOF functional of a cell by Gauss quadrature with `n`
/// points per direction on the physical edge or face.
pub fn apply_physical_dof(
    geom: &CellGeometry,
    d: &DofDescriptor,
    value: impl Fn([f64; 3]) -> [f64; 3],
    curl_value: impl Fn([f64; 3]) -> [f64; 3],
    n: usize,
) -> f64 {
    match d.kind {
        DofKind::EdgeMoment { .. } => {
            let a = reference_element::edge_axis(d.entity).index();
            // ds = h_a dŝ and τ is the unit axis vector.
            geom.half[a]
                * reference_element::apply_dof_quadrature(
                    d,
                    |xr| value(geom.to_physical(xr)),
                    |_| [0.0; 3],
                    n,
                )
        }
        DofKind::FaceCurlTangential { .. } => {
            let nrm = face_normal(d.entity).index();
            // dA = det(B) / h_n dÂ.
            geom.det() / geom.half[nrm]
                * reference_element::apply_dof_quadrature(
                    d,
                    |_| [0.0; 3],
                    |xr| curl_value(geom.to_physical(xr)),
                    n,
                )
        }
    }
}

/// Local entity counts, for callers sizing per-cell buffers.
pub const LOCAL_EDGES: usize = NUM_EDGES;
pub const LOCAL_FACES: usize = NUM_FACES;
