//! Exact calculus on trigonometric polynomials
//! `Σ c ∏_i sin^{a_i}(π x_i) cos^{b_i}(π x_i)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::{Add, Neg, Sub};

/// Exponents `[a_x, b_x, a_y, b_y, a_z, b_z]` of sine and cosine per axis.
pub type TrigExponent = [u32; 6];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigPoly {
    terms: BTreeMap<TrigExponent, f64>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(coef: f64, exp: TrigExponent) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coef);
        p
    }

    /// `coef · ∏_i sin^{s_i}(π x_i) cos^{c_i}(π x_i)`.
    pub fn product(coef: f64, sines: [u32; 3], cosines: [u32; 3]) -> Self {
        Self::term(
            coef,
            [sines[0], cosines[0], sines[1], cosines[1], sines[2], cosines[2]],
        )
    }

    pub fn add_term(&mut self, exp: TrigExponent, coef: f64) {
        if coef == 0.0 {
            return;
        }
        let e = self.terms.entry(exp).or_insert(0.0);
        *e += coef;
        if *e == 0.0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut p = Self::zero();
        for (e, v) in &self.terms {
            p.add_term(*e, c * v);
        }
        p
    }

    /// Product rule on `sin^a cos^b (π x)`:
    /// `π (a sin^{a-1} cos^{b+1} − b sin^{a+1} cos^{b-1})`.
    pub fn derivative(&self, axis: usize) -> Self {
        let (si, ci) = (2 * axis, 2 * axis + 1);
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let (a, b) = (e[si], e[ci]);
            if a > 0 {
                let mut ne = *e;
                ne[si] -= 1;
                ne[ci] += 1;
                out.add_term(ne, PI * a as f64 * c);
            }
            if b > 0 {
                let mut ne = *e;
                ne[si] += 1;
                ne[ci] -= 1;
                out.add_term(ne, -PI * b as f64 * c);
            }
        }
        out
    }

    pub fn evaluate(&self, x: [f64; 3]) -> f64 {
        let s: [f64; 3] = std::array::from_fn(|k| (PI * x[k]).sin());
        let c: [f64; 3] = std::array::from_fn(|k| (PI * x[k]).cos());
        self.terms
            .iter()
            .map(|(e, coef)| {
                coef * s[0].powi(e[0] as i32)
                    * c[0].powi(e[1] as i32)
                    * s[1].powi(e[2] as i32)
                    * c[1].powi(e[3] as i32)
                    * s[2].powi(e[4] as i32)
                    * c[2].powi(e[5] as i32)
            })
            .sum()
    }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(*e, *c);
        }
        p
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self + &(-rhs)
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        self.scale(-1.0)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigVec3 {
    pub components: [TrigPoly; 3],
}

impl TrigVec3 {
    pub fn new(x: TrigPoly, y: TrigPoly, z: TrigPoly) -> Self {
        TrigVec3 {
            components: [x, y, z],
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scale(&self, c: f64) -> Self {
        TrigVec3 {
            components: std::array::from_fn(|k| self.components[k].scale(c)),
        }
    }

    pub fn evaluate(&self, x: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|k| self.components[k].evaluate(x))
    }

    pub fn curl(&self) -> TrigVec3 {
        let d = |i: usize, k: usize| self.components[i].derivative(k);
        TrigVec3::new(&d(2, 1) - &d(1, 2), &d(0, 2) - &d(2, 0), &d(1, 0) - &d(0, 1))
    }

    pub fn div(&self) -> TrigPoly {
        let mut p = self.components[0].derivative(0);
        p = &p + &self.components[1].derivative(1);
        &p + &self.components[2].derivative(2)
    }

    /// `J[i][k] = ∂_k v_i`.
    pub fn jacobian(&self) -> [[TrigPoly; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|k| self.components[i].derivative(k)))
    }

    /// Componentwise Laplacian.
    pub fn laplacian(&self) -> TrigVec3 {
        TrigVec3 {
            components: std::array::from_fn(|i| {
                let mut p = TrigPoly::zero();
                for k in 0..3 {
                    p = &p + &self.components[i].derivative(k).derivative(k);
                }
                p
            }),
        }
    }
}

impl Add for &TrigVec3 {
    type Output = TrigVec3;
    fn add(self, rhs: &TrigVec3) -> TrigVec3 {
        TrigVec3 {
            components: std::array::from_fn(|k| &self.components[k] + &rhs.components[k]),
        }
    }
}

impl Sub for &TrigVec3 {
    type Output = TrigVec3;
    fn sub(self, rhs: &TrigVec3) -> TrigVec3 {
        TrigVec3 {
            components: std::array::from_fn(|k| &self.components[k] - &rhs.components[k]),
        }
    }
}
