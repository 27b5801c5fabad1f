//! Tensor-product Gauss-Legendre rules on the reference cube `(-1,1)^3`
//! and its edges and faces.

use crate::polynomials::Axis;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadDomain {
    Edge,
    Face,
    Cell,
}

impl QuadDomain {
    pub fn dim(self) -> usize {
        match self {
            QuadDomain::Edge => 1,
            QuadDomain::Face => 2,
            QuadDomain::Cell => 3,
        }
    }
}

/// Points are stored in the intrinsic coordinates of the domain: one
/// coordinate for an edge, two for a face, three for the cell. Unused
/// trailing coordinates are zero.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub domain: QuadDomain,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Gauss-Legendre nodes and weights on `(-1,1)`.
pub fn gauss_legendre_1d(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one quadrature point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess, refined by Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor Gauss rule with `n` points per direction.
pub fn gauss_rule(n: usize, domain: QuadDomain) -> QuadratureRule {
    let (x, w) = gauss_legendre_1d(n);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    match domain {
        QuadDomain::Edge => {
            for i in 0..n {
                points.push([x[i], 0.0, 0.0]);
                weights.push(w[i]);
            }
        }
        QuadDomain::Face => {
            for j in 0..n {
                for i in 0..n {
                    points.push([x[i], x[j], 0.0]);
                    weights.push(w[i] * w[j]);
                }
            }
        }
        QuadDomain::Cell => {
            for k in 0..n {
                for j in 0..n {
                    for i in 0..n {
                        points.push([x[i], x[j], x[k]]);
                        weights.push(w[i] * w[j] * w[k]);
                    }
                }
            }
        }
    }
    QuadratureRule {
        domain,
        points,
        weights,
    }
}

/// Embeds an edge-rule coordinate into the reference cube for an edge along
/// `axis` whose other two coordinates are `fixed` (indexed by axis; the
/// entry for `axis` is ignored).
pub fn embed_edge_point(t: f64, axis: Axis, fixed: [f64; 3]) -> [f64; 3] {
    let mut p = fixed;
    p[axis.index()] = t;
    p
}

/// Embeds a face-rule point `(s, t)` into the face with normal `normal` at
/// coordinate `value`; `s` runs along the smaller tangential axis.
pub fn embed_face_point(st: [f64; 2], normal: Axis, value: f64) -> [f64; 3] {
    let (a, b) = tangential_axes(normal);
    let mut p = [0.0; 3];
    p[normal.index()] = value;
    p[a.index()] = st[0];
    p[b.index()] = st[1];
    p
}

/// The two axes spanning a face with the given normal, in increasing order.
pub fn tangential_axes(normal: Axis) -> (Axis, Axis) {
    match normal {
        Axis::X => (Axis::Y, Axis::Z),
        Axis::Y => (Axis::X, Axis::Z),
        Axis::Z => (Axis::X, Axis::Y),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weights_sum_to_measure() {
        for n in 1..=8 {
            let e: f64 = gauss_rule(n, QuadDomain::Edge).weights.iter().sum();
            let f: f64 = gauss_rule(n, QuadDomain::Face).weights.iter().sum();
            let c: f64 = gauss_rule(n, QuadDomain::Cell).weights.iter().sum();
            assert_relative_eq!(e, 2.0, epsilon = 1e-14);
            assert_relative_eq!(f, 4.0, epsilon = 1e-13);
            assert_relative_eq!(c, 8.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn two_point_cell_rule_integrates_x2y2z2() {
        let rule = gauss_rule(2, QuadDomain::Cell);
        let s: f64 = rule
            .points
            .iter()
            .zip(&rule.weights)
            .map(|(p, w)| w * (p[0] * p[1] * p[2]).powi(2))
            .sum();
        assert_relative_eq!(s, 8.0 / 27.0, epsilon = 1e-14);
    }

    #[test]
    fn one_point_edge_rule_is_exact_for_constants() {
        let rule = gauss_rule(1, QuadDomain::Edge);
        assert_eq!(rule.len(), 1);
        assert_relative_eq!(rule.weights[0] * 3.5, 7.0);
    }

    #[test]
    fn exact_up_to_degree_2n_minus_1() {
        for n in 1..=8usize {
            let (x, w) = gauss_legendre_1d(n);
            for k in 0..(2 * n) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} k={k} q={q} exact={exact}");
            }
        }
    }

    #[test]
    fn nodes_are_symmetric_and_sorted() {
        let (x, _) = gauss_legendre_1d(6);
        for i in 0..6 {
            assert_relative_eq!(x[i], -x[5 - i], epsilon = 1e-15);
        }
        assert!(x.windows(2).all(|w| w[0] < w[1]));
    }
}
