//! Shape spaces, degrees of freedom and dual bases on the reference cube
//! `(-1,1)^3`.
//!
//! Local numbering:
//! * vertices `ix + 2 iy + 4 iz` (x fastest), coordinate `-1 + 2 i`;
//! * edges grouped by direction, x-parallel `0..4`, y-parallel `4..8`,
//!   z-parallel `8..12`; within a group the two fixed coordinates are
//!   enumerated lexicographically with the smaller axis fastest;
//! * faces `x-, x+, y-, y+, z-, z+`; the two tangential directions of a
//!   face are the positive coordinate axes spanning it, in increasing order.
//!
//! Every edge tangent and face normal points along a positive axis, so the
//! same convention can be used globally on axis-aligned meshes without any
//! orientation signs.

pub mod export;
pub mod quadrature;
mod serendipity;
mod stokes;
pub mod table;

pub use serendipity::{build_serendipity, ScalarDof, SerendipityElement};
pub use stokes::{build_stokes, StokesElement};

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, RationalMatrix};
use crate::polynomials::{
    curl, grad, poincare_p, rational, Axis, FloatPoly3, FloatPolyVec3, Poly3, PolyVec3,
};
use quadrature::{embed_edge_point, embed_face_point, gauss_rule, tangential_axes, QuadDomain};

pub const NUM_VERTICES: usize = 8;
pub const NUM_EDGES: usize = 12;
pub const NUM_FACES: usize = 6;

pub fn check_order(r: usize) -> Result<()> {
    if r == 1 || r == 2 {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder(r))
    }
}

/// `(ix, iy, iz)` bits of a local vertex.
pub fn vertex_bits(v: usize) -> [usize; 3] {
    [v & 1, (v >> 1) & 1, (v >> 2) & 1]
}

pub fn vertex_coords(v: usize) -> [f64; 3] {
    vertex_bits(v).map(|b| -1.0 + 2.0 * b as f64)
}

pub fn edge_axis(e: usize) -> Axis {
    Axis::from_index(e / 4)
}

/// Bits of the two fixed coordinates of an edge, indexed by axis (the entry
/// of the edge's own axis is zero).
pub fn edge_fixed_bits(e: usize) -> [usize; 3] {
    let axis = edge_axis(e).index();
    let j = e % 4;
    let others: Vec<usize> = (0..3).filter(|&k| k != axis).collect();
    let mut bits = [0; 3];
    bits[others[0]] = j & 1;
    bits[others[1]] = (j >> 1) & 1;
    bits
}

pub fn edge_fixed_coords(e: usize) -> [f64; 3] {
    let axis = edge_axis(e).index();
    let mut c = edge_fixed_bits(e).map(|b| -1.0 + 2.0 * b as f64);
    c[axis] = 0.0;
    c
}

/// `(start, end)` vertices of an edge, oriented along the positive axis.
pub fn edge_vertices(e: usize) -> (usize, usize) {
    let axis = edge_axis(e).index();
    let bits = edge_fixed_bits(e);
    let start = bits[0] + 2 * bits[1] + 4 * bits[2];
    (start, start + (1 << axis))
}

pub fn face_normal(f: usize) -> Axis {
    Axis::from_index(f / 2)
}

/// `-1` or `+1`: the coordinate value of the face plane.
pub fn face_side(f: usize) -> i64 {
    if f % 2 == 0 {
        -1
    } else {
        1
    }
}

/// Tangential axis for face direction `0` (τ¹) or `1` (τ²).
pub fn face_tangent(f: usize, direction: usize) -> Axis {
    let (a, b) = tangential_axes(face_normal(f));
    if direction == 0 {
        a
    } else {
        b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DofKind {
    /// `∫_e v·τ_e s^order ds`, `s ∈ (-1,1)` the centred edge coordinate.
    EdgeMoment { order: usize },
    /// `∫_f curl v·τ_f^{direction+1} dA`.
    FaceCurlTangential { direction: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DofDescriptor {
    pub kind: DofKind,
    /// Local edge index for edge moments, local face index for face DOFs.
    pub entity: usize,
}

/// DOF list of the 24/36-dimensional element: edges (by edge, then moment
/// order) followed by faces (by face, then direction).
pub fn dof_descriptors(r: usize) -> Vec<DofDescriptor> {
    let mut dofs = edge_dof_descriptors(r);
    for f in 0..NUM_FACES {
        for direction in 0..2 {
            dofs.push(DofDescriptor {
                kind: DofKind::FaceCurlTangential { direction },
                entity: f,
            });
        }
    }
    dofs
}

pub fn edge_dof_descriptors(r: usize) -> Vec<DofDescriptor> {
    let mut dofs = Vec::with_capacity(NUM_EDGES * r);
    for e in 0..NUM_EDGES {
        for order in 0..r {
            dofs.push(DofDescriptor {
                kind: DofKind::EdgeMoment { order },
                entity: e,
            });
        }
    }
    dofs
}

/// Superlinear degree of a monomial: total degree ignoring linear variables.
pub fn superlinear_degree(exp: [u32; 3]) -> u32 {
    exp.iter().filter(|&&a| a >= 2).sum()
}

/// Monomials spanning the serendipity space of superlinear degree `≤ r`.
///
/// Ordered by total degree, then lexicographically by exponent.
pub fn serendipity_monomials(r: usize) -> Result<Vec<Poly3>> {
    check_order(r)?;
    let mut exps: Vec<[u32; 3]> = Vec::new();
    // exponents are ≤ r, and at most three variables enter linearly
    for total in 0..=(r as u32 + 3) {
        for a in 0..=total {
            for b in 0..=(total - a) {
                let c = total - a - b;
                let e = [a, b, c];
                if superlinear_degree(e) <= r as u32 && e.iter().all(|&k| k <= r as u32) {
                    exps.push(e);
                }
            }
        }
    }
    Ok(exps.into_iter().map(|e| Poly3::mono(e[0], e[1], e[2])).collect())
}

/// The 18 generators of the local Stokes space: `[P_1]^3` followed by the
/// six quadratic fields.
pub fn w_space_generators() -> Vec<PolyVec3> {
    let mut gens = Vec::with_capacity(18);
    for axis in Axis::ALL {
        gens.push(PolyVec3::along(axis, Poly3::one()));
        for v in Axis::ALL {
            gens.push(PolyVec3::along(axis, Poly3::var(v)));
        }
    }
    let sq = |a: Axis| {
        let mut e = [0; 3];
        e[a.index()] = 2;
        Poly3::monomial(e, BigRational::one())
    };
    gens.push(PolyVec3::along(Axis::X, sq(Axis::Y)));
    gens.push(PolyVec3::along(Axis::X, sq(Axis::Z)));
    gens.push(PolyVec3::along(Axis::Y, sq(Axis::X)));
    gens.push(PolyVec3::along(Axis::Y, sq(Axis::Z)));
    gens.push(PolyVec3::along(Axis::Z, sq(Axis::X)));
    gens.push(PolyVec3::along(Axis::Z, sq(Axis::Y)));
    gens
}

/// `(0,0,z)`, dropped before applying the Poincaré operator: together with
/// `(x,0,0)` and `(0,y,0)` it sums to the radial field in its kernel.
fn radial_representative() -> PolyVec3 {
    PolyVec3::along(Axis::Z, Poly3::var(Axis::Z))
}

fn gradient_part(r: usize) -> Result<Vec<PolyVec3>> {
    Ok(serendipity_monomials(r)?
        .iter()
        .filter(|m| m.degree() != Some(0))
        .map(grad)
        .collect())
}

/// Spanning set `grad S^r ⊕ p W` of the shape space (24 or 36 fields).
pub fn build_generators(r: usize) -> Result<Vec<PolyVec3>> {
    let mut gens = gradient_part(r)?;
    let drop = radial_representative();
    gens.extend(
        w_space_generators()
            .iter()
            .filter(|w| **w != drop)
            .map(poincare_p),
    );
    let expected = if r == 1 { 24 } else { 36 };
    let rank = exact::field_rank(&gens);
    if gens.len() != expected || rank != expected {
        return Err(Error::RankDeficient { rank, expected });
    }
    Ok(gens)
}

/// Spanning set of the H(curl)-conforming edge subspace
/// `grad S^r ⊕ p[Q_{1,0,0} × Q_{0,1,0} × Q_{0,0,1}]` (12 or 24 fields).
pub fn build_nedelec_generators(r: usize) -> Result<Vec<PolyVec3>> {
    let mut gens = gradient_part(r)?;
    for axis in [Axis::X, Axis::Y, Axis::Z] {
        gens.push(poincare_p(&PolyVec3::along(axis, Poly3::one())));
        if axis != Axis::Z {
            gens.push(poincare_p(&PolyVec3::along(axis, Poly3::var(axis))));
        }
    }
    let expected = 12 * r;
    let rank = exact::field_rank(&gens);
    if gens.len() != expected || rank != expected {
        return Err(Error::RankDeficient { rank, expected });
    }
    Ok(gens)
}

/// Exact value of a DOF functional on a polynomial field.
pub fn apply_dof(d: &DofDescriptor, v: &PolyVec3) -> BigRational {
    match d.kind {
        DofKind::EdgeMoment { order } => {
            let axis = edge_axis(d.entity);
            let bits = edge_fixed_bits(d.entity);
            let mut p = v.component(axis).clone();
            for other in Axis::ALL {
                if other != axis {
                    p = p.restrict(other, 2 * bits[other.index()] as i64 - 1);
                }
            }
            let mut weight = Poly3::one();
            for _ in 0..order {
                weight = &weight * &Poly3::var(axis);
            }
            (&p * &weight).integrate_reference(&[axis]).constant_term()
        }
        DofKind::FaceCurlTangential { direction } => {
            let normal = face_normal(d.entity);
            let t = face_tangent(d.entity, direction);
            let (a, b) = tangential_axes(normal);
            curl(v)
                .component(t)
                .restrict(normal, face_side(d.entity))
                .integrate_reference(&[a, b])
                .constant_term()
        }
    }
}

/// The same functional evaluated by Gauss quadrature from point evaluators
/// of the field and of its curl, on the reference cube.
pub fn apply_dof_quadrature(
    d: &DofDescriptor,
    value: impl Fn([f64; 3]) -> [f64; 3],
    curl_value: impl Fn([f64; 3]) -> [f64; 3],
    n: usize,
) -> f64 {
    match d.kind {
        DofKind::EdgeMoment { order } => {
            let axis = edge_axis(d.entity);
            let fixed = edge_fixed_coords(d.entity);
            let rule = gauss_rule(n, QuadDomain::Edge);
            rule.points
                .iter()
                .zip(&rule.weights)
                .map(|(p, w)| {
                    let x = embed_edge_point(p[0], axis, fixed);
                    w * value(x)[axis.index()] * p[0].powi(order as i32)
                })
                .sum()
        }
        DofKind::FaceCurlTangential { direction } => {
            let normal = face_normal(d.entity);
            let t = face_tangent(d.entity, direction);
            let rule = gauss_rule(n, QuadDomain::Face);
            rule.points
                .iter()
                .zip(&rule.weights)
                .map(|(p, w)| {
                    let x = embed_face_point([p[0], p[1]], normal, face_side(d.entity) as f64);
                    w * curl_value(x)[t.index()]
                })
                .sum()
        }
    }
}

/// Dual basis data of either the full element or its edge-only subspace.
#[derive(Clone, Debug)]
pub struct ReferenceElementBasis {
    pub r: usize,
    pub generators: Vec<PolyVec3>,
    /// `dual[k][j]`: coefficient of generator `k` in dual function `j`.
    pub dual: RationalMatrix,
    pub dofs: Vec<DofDescriptor>,
    /// Dual basis functions, `functions[j] = Σ_k dual[k][j] generators[k]`.
    pub functions: Vec<PolyVec3>,
    /// DOF matrix `G[i][j] = dof_i(generator_j)`.
    pub dof_matrix: RationalMatrix,
    /// 2-norm condition number of the DOF matrix.
    pub condition: f64,
    float_values: Vec<FloatPolyVec3>,
    float_curls: Vec<FloatPolyVec3>,
    float_grad_curls: Vec<[[FloatPoly3; 3]; 3]>,
}

impl ReferenceElementBasis {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn value(&self, j: usize, x: [f64; 3]) -> [f64; 3] {
        self.float_values[j].evaluate(x)
    }

    pub fn curl(&self, j: usize, x: [f64; 3]) -> [f64; 3] {
        self.float_curls[j].evaluate(x)
    }

    /// `G[i][k] = ∂_k (curl N_j)_i`.
    pub fn grad_curl(&self, j: usize, x: [f64; 3]) -> [[f64; 3]; 3] {
        let g = &self.float_grad_curls[j];
        std::array::from_fn(|i| std::array::from_fn(|k| g[i][k].evaluate(x)))
    }
}

fn dualize(
    r: usize,
    generators: Vec<PolyVec3>,
    dofs: Vec<DofDescriptor>,
) -> Result<ReferenceElementBasis> {
    let n = generators.len();
    let g: RationalMatrix = dofs
        .iter()
        .map(|d| generators.iter().map(|v| apply_dof(d, v)).collect())
        .collect();
    let c = exact::inverse(&g).ok_or_else(|| Error::SingularDofMatrix {
        rank: exact::rank(&g),
        size: n,
    })?;
    let functions: Vec<PolyVec3> = (0..n)
        .map(|j| {
            let mut f = PolyVec3::zero();
            for (k, gen) in generators.iter().enumerate() {
                if !c[k][j].is_zero() {
                    f += &gen.scale(&c[k][j]);
                }
            }
            f
        })
        .collect();
    let condition = condition_number(&exact::to_f64(&g));
    let float_values = functions.iter().map(PolyVec3::to_float).collect();
    let curls: Vec<PolyVec3> = functions.iter().map(curl).collect();
    let float_curls = curls.iter().map(PolyVec3::to_float).collect();
    let float_grad_curls = curls
        .iter()
        .map(|c| {
            let jac = crate::polynomials::jacobian(c);
            std::array::from_fn(|i| std::array::from_fn(|k| jac[i][k].to_float()))
        })
        .collect();
    Ok(ReferenceElementBasis {
        r,
        generators,
        dual: c,
        dofs,
        functions,
        dof_matrix: g,
        condition,
        float_values,
        float_curls,
        float_grad_curls,
    })
}

pub fn condition_number(m: &[Vec<f64>]) -> f64 {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let dm = nalgebra::DMatrix::from_fn(rows, cols, |i, j| m[i][j]);
    let sv = dm.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}

/// Dual basis of the 24-DOF (`r = 1`) or 36-DOF (`r = 2`) element.
pub fn build_dual_basis(r: usize) -> Result<ReferenceElementBasis> {
    check_order(r)?;
    dualize(r, build_generators(r)?, dof_descriptors(r))
}

/// Dual basis of the edge-only subspace with respect to the edge moments.
pub fn build_nedelec_basis(r: usize) -> Result<ReferenceElementBasis> {
    check_order(r)?;
    dualize(r, build_nedelec_generators(r)?, edge_dof_descriptors(r))
}

/// `∫_e v·τ q ds` weights used on physical edges: `s^order` in the centred
/// coordinate.
pub fn edge_weight(order: usize, s: f64) -> f64 {
    s.powi(order as i32)
}

/// Exact `∫_{K̂} p dV`.
pub fn integrate_cell(p: &Poly3) -> BigRational {
    p.integrate_reference(&Axis::ALL).constant_term()
}

/// Exact `∫_{f̂} p dA` over a reference face.
pub fn integrate_face(p: &Poly3, f: usize) -> BigRational {
    let normal = face_normal(f);
    let (a, b) = tangential_axes(normal);
    p.restrict(normal, face_side(f))
        .integrate_reference(&[a, b])
        .constant_term()
}

/// Exact `∫_{ê} p ds` over a reference edge.
pub fn integrate_edge(p: &Poly3, e: usize) -> BigRational {
    let axis = edge_axis(e);
    let bits = edge_fixed_bits(e);
    let mut q = p.clone();
    for other in Axis::ALL {
        if other != axis {
            q = q.restrict(other, 2 * bits[other.index()] as i64 - 1);
        }
    }
    q.integrate_reference(&[axis]).constant_term()
}

/// Exact value at a reference vertex.
pub fn evaluate_vertex(p: &Poly3, v: usize) -> BigRational {
    let b = vertex_bits(v);
    p.evaluate_exact(&b.map(|bit| rational(2 * bit as i64 - 1, 1)))
}

static DUAL_BASES: [OnceLock<ReferenceElementBasis>; 2] = [OnceLock::new(), OnceLock::new()];
static NEDELEC_BASES: [OnceLock<ReferenceElementBasis>; 2] = [OnceLock::new(), OnceLock::new()];
static SERENDIPITY: [OnceLock<SerendipityElement>; 2] = [OnceLock::new(), OnceLock::new()];
static STOKES: OnceLock<StokesElement> = OnceLock::new();

/// Process-wide copy of [`build_dual_basis`].
pub fn shared_dual_basis(r: usize) -> Result<&'static ReferenceElementBasis> {
    check_order(r)?;
    Ok(DUAL_BASES[r - 1].get_or_init(|| build_dual_basis(r).expect("reference element is unisolvent")))
}

/// Process-wide copy of [`build_nedelec_basis`].
pub fn shared_nedelec_basis(r: usize) -> Result<&'static ReferenceElementBasis> {
    check_order(r)?;
    Ok(NEDELEC_BASES[r - 1].get_or_init(|| build_nedelec_basis(r).expect("edge subspace is unisolvent")))
}

pub fn shared_serendipity(r: usize) -> Result<&'static SerendipityElement> {
    check_order(r)?;
    Ok(SERENDIPITY[r - 1].get_or_init(|| build_serendipity(r).expect("serendipity element is unisolvent")))
}

pub fn shared_stokes() -> &'static StokesElement {
    STOKES.get_or_init(|| build_stokes().expect("Stokes element is unisolvent"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{div, poincare_p1};

    #[test]
    fn topology_conventions() {
        assert_eq!(vertex_coords(0), [-1.0, -1.0, -1.0]);
        assert_eq!(vertex_coords(5), [1.0, -1.0, 1.0]);
        assert_eq!(edge_vertices(0), (0, 1));
        assert_eq!(edge_vertices(5), (1, 3)); // y-edge at x=+1, z=-1
        assert_eq!(edge_vertices(11), (3, 7));
        assert_eq!(face_tangent(0, 0), Axis::Y);
        assert_eq!(face_tangent(2, 1), Axis::Z);
        assert_eq!(face_tangent(5, 0), Axis::X);
        for e in 0..NUM_EDGES {
            let (s, t) = edge_vertices(e);
            let (a, b) = (vertex_coords(s), vertex_coords(t));
            let axis = edge_axis(e).index();
            assert_eq!(b[axis] - a[axis], 2.0);
        }
    }

    #[test]
    fn serendipity_counts() {
        let s1 = serendipity_monomials(1).unwrap();
        assert_eq!(s1.len(), 8);
        let s2 = serendipity_monomials(2).unwrap();
        assert_eq!(s2.len(), 20);
        assert!(s2.contains(&Poly3::mono(1, 2, 1)));
        assert!(s2.contains(&Poly3::mono(2, 1, 1)));
        assert!(!s2.contains(&Poly3::mono(2, 2, 0)));
        assert_eq!(superlinear_degree([1, 1, 2]), 2);
        assert_eq!(superlinear_degree([2, 1, 3]), 5);
        assert!(matches!(serendipity_monomials(3), Err(Error::UnsupportedOrder(3))));
        assert!(matches!(serendipity_monomials(0), Err(Error::UnsupportedOrder(0))));
    }

    #[test]
    fn w_generators() {
        let w = w_space_generators();
        assert_eq!(w.len(), 18);
        assert!(w.contains(&PolyVec3::along(Axis::X, Poly3::mono(0, 2, 0))));
        assert!(w.iter().all(|g| g.components.iter().all(|c| c.max_partial_degree() <= 2)));
        assert_eq!(exact::field_rank(&w), 18);
        let images: Vec<PolyVec3> = w.iter().map(poincare_p).collect();
        assert_eq!(exact::field_rank(&images), 17);
    }

    #[test]
    fn single_dependency_among_poincare_images() {
        let s = &(&poincare_p(&PolyVec3::along(Axis::X, Poly3::var(Axis::X)))
            + &poincare_p(&PolyVec3::along(Axis::Y, Poly3::var(Axis::Y))))
            + &poincare_p(&PolyVec3::along(Axis::Z, Poly3::var(Axis::Z)));
        assert!(s.is_zero());
    }

    #[test]
    fn generator_counts() {
        assert_eq!(build_generators(1).unwrap().len(), 24);
        assert_eq!(build_generators(2).unwrap().len(), 36);
        assert_eq!(build_nedelec_generators(1).unwrap().len(), 12);
        assert_eq!(build_nedelec_generators(2).unwrap().len(), 24);
    }

    #[test]
    fn edge_moment_of_constant_tangential_field() {
        let d = DofDescriptor {
            kind: DofKind::EdgeMoment { order: 0 },
            entity: 4,
        };
        let v = PolyVec3::along(Axis::Y, Poly3::constant(rational(3, 1)));
        assert_eq!(apply_dof(&d, &v), rational(6, 1));
    }

    #[test]
    fn face_dofs_vanish_on_gradients() {
        let q = Poly3::mono(2, 1, 1);
        for d in dof_descriptors(2) {
            if let DofKind::FaceCurlTangential { .. } = d.kind {
                assert!(apply_dof(&d, &grad(&q)).is_zero());
            }
        }
    }

    #[test]
    fn dual_basis_is_dual() {
        for r in [1, 2] {
            let b = build_dual_basis(r).unwrap();
            assert_eq!(b.len(), 12 * r + 12);
            for (i, d) in b.dofs.iter().enumerate() {
                for (j, f) in b.functions.iter().enumerate() {
                    let expected = if i == j { BigRational::one() } else { BigRational::zero() };
                    assert_eq!(apply_dof(d, f), expected, "r={r} dof {i} fn {j}");
                }
            }
            assert!(b.condition.is_finite() && b.condition > 1.0);
        }
    }

    #[test]
    fn quadrature_dofs_agree_with_exact() {
        let b = build_dual_basis(2).unwrap();
        for (i, d) in b.dofs.iter().enumerate() {
            for j in [0, 7, 20, 35] {
                let q = apply_dof_quadrature(d, |x| b.value(j, x), |x| b.curl(j, x), 5);
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((q - expected).abs() < 1e-13, "dof {i} fn {j}: {q}");
            }
        }
    }

    #[test]
    fn curls_lie_in_stokes_space() {
        let w = w_space_generators();
        for r in [1, 2] {
            let b = build_dual_basis(r).unwrap();
            for f in &b.functions {
                let mut set = w.clone();
                set.push(curl(f));
                assert_eq!(exact::field_rank(&set), 18);
            }
        }
    }

    #[test]
    fn low_degree_fields_are_reproduced() {
        for r in [1usize, 2] {
            let b = build_dual_basis(r).unwrap();
            let mut fields = Vec::new();
            for axis in Axis::ALL {
                fields.push(PolyVec3::along(axis, Poly3::one()));
                if r == 2 {
                    for v in Axis::ALL {
                        fields.push(PolyVec3::along(axis, Poly3::var(v)));
                    }
                }
            }
            for v in fields {
                let mut rebuilt = PolyVec3::zero();
                for (d, f) in b.dofs.iter().zip(&b.functions) {
                    rebuilt += &f.scale(&apply_dof(d, &v));
                }
                assert_eq!(rebuilt, v);
            }
        }
    }

    #[test]
    fn direct_sum_components_intersect_trivially() {
        // A generator combination with zero curl and zero p¹ must vanish:
        // the gradient part is exactly the curl-free part, and p¹ of the
        // Poincaré part is zero, so the two parts are independent.
        for r in [1, 2] {
            let gens = build_generators(r).unwrap();
            let ngrad = gens.iter().filter(|g| curl(g).is_zero()).count();
            assert_eq!(ngrad, if r == 1 { 7 } else { 19 });
            for g in gens.iter().skip(ngrad) {
                assert!(poincare_p1(g).is_zero());
            }
            let curls: Vec<PolyVec3> = gens[ngrad..].iter().map(curl).collect();
            assert_eq!(exact::field_rank(&curls), 17);
        }
    }

    #[test]
    fn curl_of_poincare_part_is_divergence_free_part() {
        for w in w_space_generators() {
            if div(&w).is_zero() {
                assert_eq!(curl(&poincare_p(&w)), w);
            }
        }
    }

    #[test]
    fn nedelec_lowest_order_function() {
        let b = build_nedelec_basis(1).unwrap();
        let one = Poly3::one();
        let x = Poly3::var(Axis::X);
        let z = Poly3::var(Axis::Z);
        let expected = PolyVec3::along(
            Axis::Y,
            (&(&one - &z) * &(&one + &x)).scale(&rational(1, 8)),
        );
        assert_eq!(b.functions[5], expected);
    }
}
