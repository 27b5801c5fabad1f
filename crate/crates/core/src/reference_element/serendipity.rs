use num_traits::Zero;

use super::{evaluate_vertex, integrate_edge, serendipity_monomials, NUM_EDGES, NUM_VERTICES};
use crate::error::{Error, Result};
use crate::exact;
use crate::polynomials::{grad, FloatPoly3, FloatPolyVec3, Poly3};

/// Serendipity DOFs: vertex values, plus `∫_e u ds` on each edge for `r = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarDof {
    Vertex(usize),
    EdgeMoment(usize),
}

#[derive(Clone, Debug)]
pub struct SerendipityElement {
    pub r: usize,
    pub monomials: Vec<Poly3>,
    pub dofs: Vec<ScalarDof>,
    pub functions: Vec<Poly3>,
    float_values: Vec<FloatPoly3>,
    float_grads: Vec<FloatPolyVec3>,
}

impl SerendipityElement {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn value(&self, j: usize, x: [f64; 3]) -> f64 {
        self.float_values[j].evaluate(x)
    }

    pub fn grad(&self, j: usize, x: [f64; 3]) -> [f64; 3] {
        self.float_grads[j].evaluate(x)
    }

    pub fn apply_dof(d: ScalarDof, p: &Poly3) -> num_rational::BigRational {
        match d {
            ScalarDof::Vertex(v) => evaluate_vertex(p, v),
            ScalarDof::EdgeMoment(e) => integrate_edge(p, e),
        }
    }
}

pub fn build_serendipity(r: usize) -> Result<SerendipityElement> {
    let monomials = serendipity_monomials(r)?;
    let mut dofs: Vec<ScalarDof> = (0..NUM_VERTICES).map(ScalarDof::Vertex).collect();
    if r == 2 {
        dofs.extend((0..NUM_EDGES).map(ScalarDof::EdgeMoment));
    }
    let g: exact::RationalMatrix = dofs
        .iter()
        .map(|&d| monomials.iter().map(|m| SerendipityElement::apply_dof(d, m)).collect())
        .collect();
    let c = exact::inverse(&g).ok_or_else(|| Error::SingularDofMatrix {
        rank: exact::rank(&g),
        size: g.len(),
    })?;
    let functions: Vec<Poly3> = (0..monomials.len())
        .map(|j| {
            let mut f = Poly3::zero();
            for (k, m) in monomials.iter().enumerate() {
                if !c[k][j].is_zero() {
                    f += &m.scale(&c[k][j]);
                }
            }
            f
        })
        .collect();
    Ok(SerendipityElement {
        r,
        float_values: functions.iter().map(Poly3::to_float).collect(),
        float_grads: functions.iter().map(|f| grad(f).to_float()).collect(),
        monomials,
        dofs,
        functions,
    })
}
