//! Basis tabulation at reference quadrature points.

use super::quadrature::{QuadDomain, QuadratureRule};
use super::{DofDescriptor, ReferenceElementBasis, ScalarDof, SerendipityElement};

/// Values, curls and curl Jacobians of every dual basis function at every
/// cell quadrature point. Entry `(q, j)` is stored at `q * nbasis + j`.
#[derive(Clone, Debug)]
pub struct ReferenceTable {
    pub nbasis: usize,
    pub dofs: Vec<DofDescriptor>,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub values: Vec<[f64; 3]>,
    pub curls: Vec<[f64; 3]>,
    pub grad_curls: Vec<[[f64; 3]; 3]>,
}

impl ReferenceTable {
    pub fn npoints(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn at(&self, q: usize, j: usize) -> usize {
        q * self.nbasis + j
    }
}

pub fn tabulate(basis: &ReferenceElementBasis, rule: &QuadratureRule) -> ReferenceTable {
    assert_eq!(rule.domain, QuadDomain::Cell, "tabulation needs a cell rule");
    let nb = basis.len();
    let mut values = Vec::with_capacity(nb * rule.len());
    let mut curls = Vec::with_capacity(nb * rule.len());
    let mut grad_curls = Vec::with_capacity(nb * rule.len());
    for &x in &rule.points {
        for j in 0..nb {
            values.push(basis.value(j, x));
            curls.push(basis.curl(j, x));
            grad_curls.push(basis.grad_curl(j, x));
        }
    }
    ReferenceTable {
        nbasis: nb,
        dofs: basis.dofs.clone(),
        points: rule.points.clone(),
        weights: rule.weights.clone(),
        values,
        curls,
        grad_curls,
    }
}

/// Values and gradients of the serendipity basis at cell quadrature points.
#[derive(Clone, Debug)]
pub struct ScalarTable {
    pub nbasis: usize,
    pub dofs: Vec<ScalarDof>,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
    pub grads: Vec<[f64; 3]>,
}

impl ScalarTable {
    #[inline]
    pub fn at(&self, q: usize, j: usize) -> usize {
        q * self.nbasis + j
    }
}

pub fn tabulate_scalar(element: &SerendipityElement, rule: &QuadratureRule) -> ScalarTable {
    assert_eq!(rule.domain, QuadDomain::Cell, "tabulation needs a cell rule");
    let nb = element.len();
    let mut values = Vec::with_capacity(nb * rule.len());
    let mut grads = Vec::with_capacity(nb * rule.len());
    for &x in &rule.points {
        for j in 0..nb {
            values.push(element.value(j, x));
            grads.push(element.grad(j, x));
        }
    }
    ScalarTable {
        nbasis: nb,
        dofs: element.dofs.clone(),
        points: rule.points.clone(),
        weights: rule.weights.clone(),
        values,
        grads,
    }
}
