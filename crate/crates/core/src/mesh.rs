//! Structured axis-aligned cuboid meshes of a box.
//!
//! Global entities are numbered lexicographically (x index fastest). Edges
//! are grouped by direction (x, y, z) and faces by normal direction; every
//! global tangent and normal points along the positive axis, matching the
//! reference-element convention, so shared DOFs need no sign correction.

use crate::error::{Error, Result};
use crate::polynomials::Axis;
use crate::reference_element::{self, quadrature::tangential_axes};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellGeometry {
    /// `b_K`.
    pub center: [f64; 3],
    /// `(h1, h2, h3)`, the diagonal of `B_K`.
    pub half: [f64; 3],
}

impl CellGeometry {
    pub fn det(&self) -> f64 {
        self.half[0] * self.half[1] * self.half[2]
    }

    /// `F_K(x̂) = B_K x̂ + b_K`.
    pub fn to_physical(&self, xr: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|k| self.half[k] * xr[k] + self.center[k])
    }

    pub fn to_reference(&self, x: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|k| (x[k] - self.center[k]) / self.half[k])
    }

    pub fn diameter(&self) -> f64 {
        self.half.iter().map(|h| h * h).sum::<f64>().sqrt()
    }
}

#[derive(Clone, Debug)]
pub struct Mesh {
    lower: [f64; 3],
    upper: [f64; 3],
    divisions: [usize; 3],
    edge_offsets: [usize; 4],
    face_offsets: [usize; 4],
    cell_vertices: Vec<[usize; 8]>,
    cell_edges: Vec<[usize; 12]>,
    cell_faces: Vec<[usize; 6]>,
    vertex_boundary: Vec<bool>,
    edge_boundary: Vec<bool>,
    face_boundary: Vec<bool>,
}

/// Boundary entities of a mesh, as sorted id lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundaryEntities {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub faces: Vec<usize>,
}

impl Mesh {
    pub fn unit_cube(n: usize) -> Result<Mesh> {
        build_box_mesh([0.0; 3], [1.0; 3], [n; 3])
    }

    pub fn divisions(&self) -> [usize; 3] {
        self.divisions
    }

    pub fn bounds(&self) -> ([f64; 3], [f64; 3]) {
        (self.lower, self.upper)
    }

    pub fn num_vertices(&self) -> usize {
        let [a, b, c] = self.divisions;
        (a + 1) * (b + 1) * (c + 1)
    }

    pub fn num_edges(&self) -> usize {
        self.edge_offsets[3]
    }

    pub fn num_faces(&self) -> usize {
        self.face_offsets[3]
    }

    pub fn num_cells(&self) -> usize {
        self.divisions.iter().product()
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        let (a, b) = (self.lower[axis], self.upper[axis]);
        a + (b - a) * i as f64 / self.divisions[axis] as f64
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        (self.upper[axis] - self.lower[axis]) / self.divisions[axis] as f64
    }

    /// Largest cell diameter `sqrt(h1² + h2² + h3²)` in half-extent units,
    /// i.e. `max h_K`.
    pub fn mesh_size(&self) -> f64 {
        (0..3).map(|k| (self.spacing(k) / 2.0).powi(2)).sum::<f64>().sqrt()
    }

    fn vertex_dims(&self) -> [usize; 3] {
        self.divisions.map(|n| n + 1)
    }

    fn edge_dims(&self, axis: usize) -> [usize; 3] {
        let mut d = self.vertex_dims();
        d[axis] = self.divisions[axis];
        d
    }

    fn face_dims(&self, axis: usize) -> [usize; 3] {
        let mut d = self.divisions;
        d[axis] += 1;
        d
    }

    pub fn vertex_id(&self, idx: [usize; 3]) -> usize {
        let d = self.vertex_dims();
        idx[0] + d[0] * (idx[1] + d[1] * idx[2])
    }

    pub fn edge_id(&self, axis: usize, idx: [usize; 3]) -> usize {
        let d = self.edge_dims(axis);
        self.edge_offsets[axis] + idx[0] + d[0] * (idx[1] + d[1] * idx[2])
    }

    pub fn face_id(&self, axis: usize, idx: [usize; 3]) -> usize {
        let d = self.face_dims(axis);
        self.face_offsets[axis] + idx[0] + d[0] * (idx[1] + d[1] * idx[2])
    }

    pub fn cell_id(&self, idx: [usize; 3]) -> usize {
        let d = self.divisions;
        idx[0] + d[0] * (idx[1] + d[1] * idx[2])
    }

    pub fn cell_index(&self, c: usize) -> [usize; 3] {
        unravel(c, self.divisions)
    }

    pub fn vertex_index(&self, v: usize) -> [usize; 3] {
        unravel(v, self.vertex_dims())
    }

    /// `(axis, multi-index)` of an edge.
    pub fn edge_index(&self, e: usize) -> (usize, [usize; 3]) {
        let axis = (0..3).rev().find(|&a| e >= self.edge_offsets[a]).unwrap();
        (axis, unravel(e - self.edge_offsets[axis], self.edge_dims(axis)))
    }

    /// `(normal axis, multi-index)` of a face.
    pub fn face_index(&self, f: usize) -> (usize, [usize; 3]) {
        let axis = (0..3).rev().find(|&a| f >= self.face_offsets[a]).unwrap();
        (axis, unravel(f - self.face_offsets[axis], self.face_dims(axis)))
    }

    pub fn vertex_point(&self, v: usize) -> [f64; 3] {
        let idx = self.vertex_index(v);
        std::array::from_fn(|k| self.coordinate(k, idx[k]))
    }

    /// `(axis, start point, length)` of an edge.
    pub fn edge_geometry(&self, e: usize) -> (Axis, [f64; 3], f64) {
        let (axis, idx) = self.edge_index(e);
        let start = std::array::from_fn(|k| self.coordinate(k, idx[k]));
        (Axis::from_index(axis), start, self.spacing(axis))
    }

    /// `(normal axis, center, half extents)` of a face; the half extent
    /// along the normal is zero.
    pub fn face_geometry(&self, f: usize) -> (Axis, [f64; 3], [f64; 3]) {
        let (axis, idx) = self.face_index(f);
        let mut center = [0.0; 3];
        let mut half = [0.0; 3];
        for k in 0..3 {
            if k == axis {
                center[k] = self.coordinate(k, idx[k]);
            } else {
                center[k] = self.coordinate(k, idx[k]) + 0.5 * self.spacing(k);
                half[k] = 0.5 * self.spacing(k);
            }
        }
        (Axis::from_index(axis), center, half)
    }

    pub fn cell_vertices(&self, c: usize) -> &[usize; 8] {
        &self.cell_vertices[c]
    }

    pub fn cell_edges(&self, c: usize) -> &[usize; 12] {
        &self.cell_edges[c]
    }

    pub fn cell_faces(&self, c: usize) -> &[usize; 6] {
        &self.cell_faces[c]
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.vertex_boundary[v]
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_boundary[e]
    }

    pub fn is_boundary_face(&self, f: usize) -> bool {
        self.face_boundary[f]
    }

    pub fn cell_geometry(&self, c: usize) -> CellGeometry {
        let idx = self.cell_index(c);
        let half: [f64; 3] = std::array::from_fn(|k| 0.5 * self.spacing(k));
        CellGeometry {
            center: std::array::from_fn(|k| self.coordinate(k, idx[k]) + half[k]),
            half,
        }
    }

    pub fn boundary_entities(&self) -> BoundaryEntities {
        boundary_entities(self)
    }
}

fn unravel(i: usize, d: [usize; 3]) -> [usize; 3] {
    [i % d[0], (i / d[0]) % d[1], i / (d[0] * d[1])]
}

pub fn build_box_mesh(lower: [f64; 3], upper: [f64; 3], divisions: [usize; 3]) -> Result<Mesh> {
    for k in 0..3 {
        if divisions[k] == 0 {
            return Err(Error::InvalidMesh(format!("zero divisions along axis {k}")));
        }
        if !(upper[k] > lower[k]) || !lower[k].is_finite() || !upper[k].is_finite() {
            return Err(Error::InvalidMesh(format!(
                "degenerate extent [{}, {}] along axis {k}",
                lower[k], upper[k]
            )));
        }
    }
    let mut mesh = Mesh {
        lower,
        upper,
        divisions,
        edge_offsets: [0; 4],
        face_offsets: [0; 4],
        cell_vertices: Vec::new(),
        cell_edges: Vec::new(),
        cell_faces: Vec::new(),
        vertex_boundary: Vec::new(),
        edge_boundary: Vec::new(),
        face_boundary: Vec::new(),
    };
    for a in 0..3 {
        mesh.edge_offsets[a + 1] = mesh.edge_offsets[a] + mesh.edge_dims(a).iter().product::<usize>();
        mesh.face_offsets[a + 1] = mesh.face_offsets[a] + mesh.face_dims(a).iter().product::<usize>();
    }

    let n = divisions;
    let on_bd = |k: usize, i: usize| i == 0 || i == n[k];
    mesh.vertex_boundary = (0..mesh.num_vertices())
        .map(|v| {
            let idx = mesh.vertex_index(v);
            (0..3).any(|k| on_bd(k, idx[k]))
        })
        .collect();
    mesh.edge_boundary = (0..mesh.num_edges())
        .map(|e| {
            let (axis, idx) = mesh.edge_index(e);
            (0..3).filter(|&k| k != axis).any(|k| on_bd(k, idx[k]))
        })
        .collect();
    mesh.face_boundary = (0..mesh.num_faces())
        .map(|f| {
            let (axis, idx) = mesh.face_index(f);
            on_bd(axis, idx[axis])
        })
        .collect();

    for c in 0..mesh.num_cells() {
        let [i, j, k] = mesh.cell_index(c);
        let verts = std::array::from_fn(|v| {
            let b = reference_element::vertex_bits(v);
            mesh.vertex_id([i + b[0], j + b[1], k + b[2]])
        });
        let edges = std::array::from_fn(|e| {
            let axis = reference_element::edge_axis(e).index();
            let b = reference_element::edge_fixed_bits(e);
            mesh.edge_id(axis, [i + b[0], j + b[1], k + b[2]])
        });
        let faces = std::array::from_fn(|f| {
            let axis = reference_element::face_normal(f).index();
            let mut idx = [i, j, k];
            idx[axis] += f % 2;
            mesh.face_id(axis, idx)
        });
        mesh.cell_vertices.push(verts);
        mesh.cell_edges.push(edges);
        mesh.cell_faces.push(faces);
    }
    Ok(mesh)
}

pub fn boundary_entities(m: &Mesh) -> BoundaryEntities {
    BoundaryEntities {
        vertices: (0..m.num_vertices()).filter(|&v| m.is_boundary_vertex(v)).collect(),
        edges: (0..m.num_edges()).filter(|&e| m.is_boundary_edge(e)).collect(),
        faces: (0..m.num_faces()).filter(|&f| m.is_boundary_face(f)).collect(),
    }
}

pub fn cell_geometry(m: &Mesh, cell: usize) -> CellGeometry {
    m.cell_geometry(cell)
}

/// Tangential axes of a face with the given normal, in increasing order.
pub fn face_tangents(normal: Axis) -> (Axis, Axis) {
    tangential_axes(normal)
}
