use num_traits::Zero;

use super::{integrate_face, w_space_generators, NUM_FACES};
use crate::error::{Error, Result};
use crate::exact;
use crate::polynomials::{div, FloatPoly3, FloatPolyVec3, PolyVec3};

/// Nonconforming Stokes element: 18 shape functions dual to the face
/// moments `∫_f w_k dA`, DOF index `3 f + k`.
#[derive(Clone, Debug)]
pub struct StokesElement {
    pub generators: Vec<PolyVec3>,
    pub functions: Vec<PolyVec3>,
    float_values: Vec<FloatPolyVec3>,
    float_divs: Vec<FloatPoly3>,
}

impl StokesElement {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn value(&self, j: usize, x: [f64; 3]) -> [f64; 3] {
        self.float_values[j].evaluate(x)
    }

    pub fn divergence(&self, j: usize, x: [f64; 3]) -> f64 {
        self.float_divs[j].evaluate(x)
    }

    /// Exact face moments of a field, ordered like the DOFs.
    pub fn face_moments(v: &PolyVec3) -> Vec<num_rational::BigRational> {
        (0..NUM_FACES)
            .flat_map(|f| (0..3).map(move |k| (f, k)))
            .map(|(f, k)| integrate_face(&v.components[k], f))
            .collect()
    }
}

pub fn build_stokes() -> Result<StokesElement> {
    let generators = w_space_generators();
    let cols: Vec<Vec<num_rational::BigRational>> =
        generators.iter().map(StokesElement::face_moments).collect();
    let n = generators.len();
    let g: exact::RationalMatrix = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
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
    Ok(StokesElement {
        float_values: functions.iter().map(PolyVec3::to_float).collect(),
        float_divs: functions.iter().map(|f| div(f).to_float()).collect(),
        generators,
        functions,
    })
}
