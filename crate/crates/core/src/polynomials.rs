//! Exact polynomial algebra in three variables.
//!
//! Coefficients are arbitrary-precision rationals so that the reference
//! element construction (dual basis inversion, Poincaré identities) is exact.
//! [`FloatPoly3`] is the evaluation-only counterpart used at tabulation time.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exponent triple `(a, b, c)` of the monomial `x^a y^b z^c`.
pub type Exponent = [u32; 3];

/// Coordinate axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        match i {
            0 => Axis::X,
            1 => Axis::Y,
            2 => Axis::Z,
            _ => panic!("axis index {i} out of range"),
        }
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    // Ratio<BigInt>::to_f64 handles huge numerators/denominators gracefully.
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Scalar polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored, so the zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly3 {
    terms: BTreeMap<Exponent, BigRational>,
}

impl Poly3 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(exp: Exponent, coef: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coef);
        p
    }

    /// The monomial `x^a y^b z^c` with unit coefficient.
    pub fn mono(a: u32, b: u32, c: u32) -> Self {
        Self::monomial([a, b, c], BigRational::one())
    }

    pub fn var(axis: Axis) -> Self {
        let mut e = [0; 3];
        e[axis.index()] = 1;
        Self::monomial(e, BigRational::one())
    }

    /// Builds a polynomial from `(exponent, numerator, denominator)` triples.
    pub fn from_terms(terms: &[(Exponent, i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, n, d) in terms {
            p.add_term(e, rational(n, d));
        }
        p
    }

    pub fn add_term(&mut self, exp: Exponent, coef: BigRational) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exp: Exponent) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[0] + e[1] + e[2]).max()
    }

    /// Largest exponent of a single variable.
    pub fn max_partial_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (*e, v * c))
                .collect(),
        }
    }

    pub fn derivative(&self, axis: Axis) -> Self {
        let k = axis.index();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut ne = *e;
            ne[k] -= 1;
            out.add_term(ne, c * BigRational::from_integer(BigInt::from(e[k])));
        }
        out
    }

    /// Part of the polynomial that is homogeneous of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[0] + e[1] + e[2] == d)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Multiplies every degree-`d` homogeneous part by `f(d)`.
    fn scale_by_degree(&self, f: impl Fn(u32) -> BigRational) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * f(e[0] + e[1] + e[2]));
        }
        out
    }

    pub fn evaluate(&self, p: [f64; 3]) -> f64 {
        self.to_float().evaluate(p)
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate_exact(&self, p: &[BigRational; 3]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for k in 0..3 {
                for _ in 0..e[k] {
                    t *= &p[k];
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `axis = value` with `value` an integer, leaving a polynomial
    /// in the remaining variables (the substituted exponent becomes zero).
    pub fn restrict(&self, axis: Axis, value: i64) -> Self {
        let k = axis.index();
        let v = BigInt::from(value);
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut ne = *e;
            ne[k] = 0;
            let factor = num_traits::pow(v.clone(), e[k] as usize);
            out.add_term(ne, c * BigRational::from_integer(factor));
        }
        out
    }

    /// Exact integral over `(-1,1)` in each of the listed axes; the other
    /// variables remain symbolic.
    pub fn integrate_reference(&self, axes: &[Axis]) -> Self {
        let mut out = Self::zero();
        'terms: for (e, c) in &self.terms {
            let mut coef = c.clone();
            let mut ne = *e;
            for a in axes {
                let k = e[a.index()];
                if k % 2 == 1 {
                    continue 'terms;
                }
                coef *= rational(2, k as i64 + 1);
                ne[a.index()] = 0;
            }
            out.add_term(ne, coef);
        }
        out
    }

    /// Constant term (value at the origin).
    pub fn constant_term(&self) -> BigRational {
        self.coefficient([0, 0, 0])
    }

    pub fn to_float(&self) -> FloatPoly3 {
        FloatPoly3 {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, rational_to_f64(c)))
                .collect(),
        }
    }
}

impl fmt::Debug for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            let is_const = e == &[0, 0, 0];
            if !a.is_one() || is_const {
                write!(f, "{a}")?;
            }
            for (k, name) in ["x", "y", "z"].iter().enumerate() {
                match e[k] {
                    0 => {}
                    1 => write!(f, "{name}")?,
                    n => write!(f, "{name}^{n}")?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &Poly3 {
    type Output = Poly3;
    fn add(self, rhs: &Poly3) -> Poly3 {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Poly3> for Poly3 {
    fn add_assign(&mut self, rhs: &Poly3) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Sub for &Poly3 {
    type Output = Poly3;
    fn sub(self, rhs: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &Poly3 {
    type Output = Poly3;
    fn neg(self) -> Poly3 {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &Poly3 {
    type Output = Poly3;
    fn mul(self, rhs: &Poly3) -> Poly3 {
        let mut out = Poly3::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        out
    }
}

/// Vector field with three [`Poly3`] components.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PolyVec3 {
    pub components: [Poly3; 3],
}

impl fmt::Debug for PolyVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            self.components[0], self.components[1], self.components[2]
        )
    }
}

impl PolyVec3 {
    pub fn new(x: Poly3, y: Poly3, z: Poly3) -> Self {
        Self {
            components: [x, y, z],
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The field with `p` in component `axis` and zeros elsewhere.
    pub fn along(axis: Axis, p: Poly3) -> Self {
        let mut v = Self::zero();
        v.components[axis.index()] = p;
        v
    }

    /// Position field `(x, y, z)`.
    pub fn position() -> Self {
        Self::new(Poly3::var(Axis::X), Poly3::var(Axis::Y), Poly3::var(Axis::Z))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly3::is_zero)
    }

    pub fn component(&self, axis: Axis) -> &Poly3 {
        &self.components[axis.index()]
    }

    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(Poly3::degree).max()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            components: [
                self.components[0].scale(c),
                self.components[1].scale(c),
                self.components[2].scale(c),
            ],
        }
    }

    pub fn dot(&self, other: &PolyVec3) -> Poly3 {
        let mut out = Poly3::zero();
        for k in 0..3 {
            out += &(&self.components[k] * &other.components[k]);
        }
        out
    }

    pub fn cross(&self, other: &PolyVec3) -> PolyVec3 {
        let [a0, a1, a2] = &self.components;
        let [b0, b1, b2] = &other.components;
        PolyVec3::new(
            &(a1 * b2) - &(a2 * b1),
            &(a2 * b0) - &(a0 * b2),
            &(a0 * b1) - &(a1 * b0),
        )
    }

    pub fn times_scalar(&self, p: &Poly3) -> PolyVec3 {
        PolyVec3::new(
            &self.components[0] * p,
            &self.components[1] * p,
            &self.components[2] * p,
        )
    }

    pub fn evaluate(&self, p: [f64; 3]) -> [f64; 3] {
        [
            self.components[0].evaluate(p),
            self.components[1].evaluate(p),
            self.components[2].evaluate(p),
        ]
    }

    pub fn to_float(&self) -> FloatPolyVec3 {
        FloatPolyVec3 {
            components: [
                self.components[0].to_float(),
                self.components[1].to_float(),
                self.components[2].to_float(),
            ],
        }
    }

    /// Collects all (component, exponent, coefficient) triples, sorted.
    pub fn coefficients(&self) -> Vec<(usize, Exponent, BigRational)> {
        let mut out = Vec::new();
        for (k, c) in self.components.iter().enumerate() {
            for (e, v) in c.terms() {
                out.push((k, *e, v.clone()));
            }
        }
        out
    }
}

impl Add for &PolyVec3 {
    type Output = PolyVec3;
    fn add(self, rhs: &PolyVec3) -> PolyVec3 {
        PolyVec3::new(
            &self.components[0] + &rhs.components[0],
            &self.components[1] + &rhs.components[1],
            &self.components[2] + &rhs.components[2],
        )
    }
}

impl AddAssign<&PolyVec3> for PolyVec3 {
    fn add_assign(&mut self, rhs: &PolyVec3) {
        for k in 0..3 {
            self.components[k] += &rhs.components[k];
        }
    }
}

impl Sub for &PolyVec3 {
    type Output = PolyVec3;
    fn sub(self, rhs: &PolyVec3) -> PolyVec3 {
        PolyVec3::new(
            &self.components[0] - &rhs.components[0],
            &self.components[1] - &rhs.components[1],
            &self.components[2] - &rhs.components[2],
        )
    }
}

impl Neg for &PolyVec3 {
    type Output = PolyVec3;
    fn neg(self) -> PolyVec3 {
        self.scale(&-BigRational::one())
    }
}

pub fn differentiate(p: &Poly3, axis: Axis) -> Poly3 {
    p.derivative(axis)
}

pub fn grad(p: &Poly3) -> PolyVec3 {
    PolyVec3::new(
        p.derivative(Axis::X),
        p.derivative(Axis::Y),
        p.derivative(Axis::Z),
    )
}

pub fn div(v: &PolyVec3) -> Poly3 {
    let mut out = v.components[0].derivative(Axis::X);
    out += &v.components[1].derivative(Axis::Y);
    out += &v.components[2].derivative(Axis::Z);
    out
}

pub fn curl(v: &PolyVec3) -> PolyVec3 {
    let [vx, vy, vz] = &v.components;
    PolyVec3::new(
        &vz.derivative(Axis::Y) - &vy.derivative(Axis::Z),
        &vx.derivative(Axis::Z) - &vz.derivative(Axis::X),
        &vy.derivative(Axis::X) - &vx.derivative(Axis::Y),
    )
}

/// Jacobian `J[i][j] = d v_i / d x_j`.
pub fn jacobian(v: &PolyVec3) -> [[Poly3; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| v.components[i].derivative(Axis::from_index(j))))
}

/// `p v = -x × ∫₀¹ t v(tx) dt`, applied per homogeneous degree `d` as
/// `-(1/(d+2)) x × v_d`.
pub fn poincare_p(v: &PolyVec3) -> PolyVec3 {
    let scaled = PolyVec3 {
        components: std::array::from_fn(|k| {
            v.components[k].scale_by_degree(|d| rational(1, d as i64 + 2))
        }),
    };
    -&PolyVec3::position().cross(&scaled)
}

/// `p³ s = x ∫₀¹ t² s(tx) dt`, per degree `(1/(d+3)) x s_d`.
pub fn poincare_p3(s: &Poly3) -> PolyVec3 {
    let scaled = s.scale_by_degree(|d| rational(1, d as i64 + 3));
    PolyVec3::position().times_scalar(&scaled)
}

/// `p¹ v = ∫₀¹ v(tx)·x dt`, per degree `(1/(d+1)) v_d·x`.
pub fn poincare_p1(v: &PolyVec3) -> Poly3 {
    let scaled = PolyVec3 {
        components: std::array::from_fn(|k| {
            v.components[k].scale_by_degree(|d| rational(1, d as i64 + 1))
        }),
    };
    scaled.dot(&PolyVec3::position())
}

/// Floating-point polynomial for fast repeated evaluation.
#[derive(Clone, Debug, Default)]
pub struct FloatPoly3 {
    terms: Vec<(Exponent, f64)>,
}

impl FloatPoly3 {
    pub fn evaluate(&self, p: [f64; 3]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            acc += c * p[0].powi(e[0] as i32) * p[1].powi(e[1] as i32) * p[2].powi(e[2] as i32);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug, Default)]
pub struct FloatPolyVec3 {
    pub components: [FloatPoly3; 3],
}

impl FloatPolyVec3 {
    pub fn evaluate(&self, p: [f64; 3]) -> [f64; 3] {
        [
            self.components[0].evaluate(p),
            self.components[1].evaluate(p),
            self.components[2].evaluate(p),
        ]
    }
}
