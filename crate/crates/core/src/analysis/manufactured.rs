//! Closed-form test solutions on the unit cube.

use std::f64::consts::PI;

use super::trig::{TrigPoly, TrigVec3};
use crate::assembly_solve::ProblemParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExampleKind {
    /// Smooth divergence-free solution satisfying both boundary conditions.
    Smooth,
    /// Reduced (`ε = 0`) solution of a problem with a boundary layer.
    Layer,
}

impl ExampleKind {
    pub fn name(self) -> &'static str {
        match self {
            ExampleKind::Smooth => "smooth",
            ExampleKind::Layer => "layer",
        }
    }
}

/// A field `u` with its derivatives and the matching source `f`, all as
/// exact trigonometric polynomials.
#[derive(Clone, Debug)]
pub struct ManufacturedSolution {
    pub kind: ExampleKind,
    pub params: ProblemParams,
    pub divergence_free: bool,
    pub u: TrigVec3,
    pub curl: TrigVec3,
    /// `grad_curl[i][k] = ∂_k (curl u)_i`.
    pub grad_curl: [[TrigPoly; 3]; 3],
    pub curl_curl: TrigVec3,
    pub curl_laplace_curl: TrigVec3,
    pub f: TrigVec3,
}

impl ManufacturedSolution {
    fn from_field(kind: ExampleKind, params: ProblemParams, u: TrigVec3, with_eps: bool) -> Self {
        let curl = u.curl();
        let grad_curl = curl.jacobian();
        let curl_curl = curl.curl();
        let curl_laplace_curl = curl.laplacian().curl();
        let mut f = &curl_curl.scale(params.alpha) + &u.scale(params.beta);
        if with_eps && params.eps != 0.0 {
            f = &f - &curl_laplace_curl.scale(params.eps);
        }
        ManufacturedSolution {
            kind,
            params,
            divergence_free: true,
            u,
            curl,
            grad_curl,
            curl_curl,
            curl_laplace_curl,
            f,
        }
    }

    pub fn u(&self, x: [f64; 3]) -> [f64; 3] {
        self.u.evaluate(x)
    }

    pub fn curl(&self, x: [f64; 3]) -> [f64; 3] {
        self.curl.evaluate(x)
    }

    pub fn grad_curl(&self, x: [f64; 3]) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|k| self.grad_curl[i][k].evaluate(x)))
    }

    pub fn curl_curl(&self, x: [f64; 3]) -> [f64; 3] {
        self.curl_curl.evaluate(x)
    }

    pub fn curl_laplace_curl(&self, x: [f64; 3]) -> [f64; 3] {
        self.curl_laplace_curl.evaluate(x)
    }

    pub fn f(&self, x: [f64; 3]) -> [f64; 3] {
        self.f.evaluate(x)
    }
}

/// `u = (s³ₓs²ᵧs²_z cᵧc_z, s³ᵧs²_zs²ₓ c_zcₓ, −2 s³_zs²ₓs²ᵧ cₓcᵧ)` with
/// `sₓ = sin πx`, `cₓ = cos πx`, and
/// `f = −ε curl Δ curl u + α curl curl u + β u`.
pub fn manufactured_smooth(params: &ProblemParams) -> ManufacturedSolution {
    let u = TrigVec3::new(
        TrigPoly::product(1.0, [3, 2, 2], [0, 1, 1]),
        TrigPoly::product(1.0, [2, 3, 2], [1, 0, 1]),
        TrigPoly::product(-2.0, [2, 2, 3], [1, 1, 0]),
    );
    ManufacturedSolution::from_field(ExampleKind::Smooth, *params, u, true)
}

/// `ũ = (2π cᵧ s²ₓ sᵧ s²_z, −2π cₓ sₓ s²ᵧ s²_z, 0)` with
/// `f = α curl curl ũ + β ũ`; `ε` does not enter the source, and errors
/// are measured against `ũ`.
pub fn manufactured_layer(params: &ProblemParams) -> ManufacturedSolution {
    let u = TrigVec3::new(
        TrigPoly::product(2.0 * PI, [2, 1, 2], [0, 1, 0]),
        TrigPoly::product(-2.0 * PI, [1, 2, 2], [1, 0, 0]),
        TrigPoly::zero(),
    );
    ManufacturedSolution::from_field(ExampleKind::Layer, *params, u, false)
}

pub fn manufactured(kind: ExampleKind, params: &ProblemParams) -> ManufacturedSolution {
    match kind {
        ExampleKind::Smooth => manufactured_smooth(params),
        ExampleKind::Layer => manufactured_layer(params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Independent closed forms, written out by hand.
    fn smooth_u(x: [f64; 3]) -> [f64; 3] {
        let s = |t: f64| (PI * t).sin();
        let c = |t: f64| (PI * t).cos();
        let (a, b, d) = (x[0], x[1], x[2]);
        [
            s(a).powi(3) * s(b).powi(2) * s(d).powi(2) * c(b) * c(d),
            s(b).powi(3) * s(d).powi(2) * s(a).powi(2) * c(d) * c(a),
            -2.0 * s(d).powi(3) * s(a).powi(2) * s(b).powi(2) * c(a) * c(b),
        ]
    }

    fn layer_u(x: [f64; 3]) -> [f64; 3] {
        let s = |t: f64| (PI * t).sin();
        let c = |t: f64| (PI * t).cos();
        let (a, b, d) = (x[0], x[1], x[2]);
        [
            2.0 * PI * c(b) * s(a).powi(2) * s(b) * s(d).powi(2),
            -2.0 * PI * c(a) * s(a) * s(b).powi(2) * s(d).powi(2),
            0.0,
        ]
    }

    fn fd_div(u: impl Fn([f64; 3]) -> [f64; 3], x: [f64; 3], h: f64) -> f64 {
        (0..3)
            .map(|k| {
                let mut xp = x;
                let mut xm = x;
                xp[k] += h;
                xm[k] -= h;
                (u(xp)[k] - u(xm)[k]) / (2.0 * h)
            })
            .sum()
    }

    #[test]
    fn fields_match_hand_written_forms() {
        let p = ProblemParams::default();
        let sm = manufactured_smooth(&p);
        let ly = manufactured_layer(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let x: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0.0..1.0));
            let (a, b) = (sm.u(x), smooth_u(x));
            let (c, d) = (ly.u(x), layer_u(x));
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() < 1e-14);
                assert!((c[k] - d[k]).abs() < 1e-13);
            }
            assert_eq!(c[2], 0.0);
        }
    }

    #[test]
    fn divergence_free_by_finite_differences() {
        let p = ProblemParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for sol in [manufactured_smooth(&p), manufactured_layer(&p)] {
            assert!(sol.divergence_free);
            for _ in 0..100 {
                let x: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0.05..0.95));
                assert!(fd_div(|y| sol.u(y), x, 1e-5).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn boundary_conditions_hold() {
        let p = ProblemParams::default();
        let sm = manufactured_smooth(&p);
        let ly = manufactured_layer(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let axis = rng.gen_range(0..3);
            let mut x: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0.0..1.0));
            x[axis] = if rng.gen_bool(0.5) { 0.0 } else { 1.0 };
            let (u, c, ut) = (sm.u(x), sm.curl(x), ly.u(x));
            for k in 0..3 {
                if k != axis {
                    assert!(u[k].abs() < 1e-14);
                    assert!(ut[k].abs() < 1e-13);
                }
                assert!(c[k].abs() < 1e-12, "curl u = {c:?} at {x:?}");
            }
        }
    }

    #[test]
    fn sources_are_consistent() {
        let p = ProblemParams::new(1e-3, 2.0, 0.5).unwrap();
        let sm = manufactured_smooth(&p);
        let ly = manufactured_layer(&p);
        let x = [0.3, 0.6, 0.45];
        let (f, u, cc, clc) = (sm.f(x), sm.u(x), sm.curl_curl(x), sm.curl_laplace_curl(x));
        for k in 0..3 {
            let expect = -1e-3 * clc[k] + 2.0 * cc[k] + 0.5 * u[k];
            assert!((f[k] - expect).abs() < 1e-10 * (1.0 + expect.abs()));
        }
        let (f, u, cc) = (ly.f(x), ly.u(x), ly.curl_curl(x));
        for k in 0..3 {
            assert!((f[k] - (2.0 * cc[k] + 0.5 * u[k])).abs() < 1e-10 * (1.0 + f[k].abs()));
        }
    }
}
