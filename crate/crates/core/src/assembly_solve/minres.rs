//! Preconditioned MINRES for symmetric (possibly indefinite) systems.

use crate::sparse::{dot, norm2};

#[derive(Clone, Debug)]
pub struct MinresOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// True relative residual `‖b − K x‖ / ‖b‖` at exit.
    pub residual: f64,
    pub converged: bool,
}

/// Solves `K x = b` with a symmetric positive definite diagonal
/// preconditioner given by its inverse `minv`. Stops once the true relative
/// residual drops below `tol` or after `max_iter` iterations.
pub fn minres(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    minv: &[f64],
    tol: f64,
    max_iter: usize,
) -> MinresOutcome {
    let n = b.len();
    let bnorm = norm2(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return MinresOutcome {
            x,
            iterations: 0,
            residual: 0.0,
            converged: true,
        };
    }
    let precond = |r: &[f64]| -> Vec<f64> { r.iter().zip(minv).map(|(a, m)| a * m).collect() };
    let true_residual = |x: &[f64]| -> f64 {
        let kx = apply(x);
        norm2(&b.iter().zip(&kx).map(|(a, c)| a - c).collect::<Vec<_>>()) / bnorm
    };

    let mut r1 = b.to_vec();
    let mut y = precond(&r1);
    let beta1 = dot(&r1, &y).sqrt();
    let mut r2 = r1.clone();
    let mut oldb = 0.0;
    let mut beta = beta1;
    let mut dbar = 0.0;
    let mut epsln = 0.0;
    let mut phibar = beta1;
    let mut cs = -1.0;
    let mut sn = 0.0;
    let mut w = vec![0.0; n];
    let mut w2 = vec![0.0; n];
    let mut last_check = 0;
    let mut residual = 1.0;

    for itn in 1..=max_iter {
        let s = 1.0 / beta;
        let v: Vec<f64> = y.iter().map(|a| s * a).collect();
        y = apply(&v);
        if itn >= 2 {
            let c = beta / oldb;
            for (yi, ri) in y.iter_mut().zip(&r1) {
                *yi -= c * ri;
            }
        }
        let alfa = dot(&v, &y);
        let c = alfa / beta;
        for (yi, ri) in y.iter_mut().zip(&r2) {
            *yi -= c * ri;
        }
        std::mem::swap(&mut r1, &mut r2);
        r2.clone_from(&y);
        y = precond(&r2);
        oldb = beta;
        beta = dot(&r2, &y).max(0.0).sqrt();

        let oldeps = epsln;
        let delta = cs * dbar + sn * alfa;
        let gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        let gamma = gbar.hypot(beta).max(f64::EPSILON);
        cs = gbar / gamma;
        sn = beta / gamma;
        let phi = cs * phibar;
        phibar *= sn;

        let w1 = std::mem::replace(&mut w2, std::mem::take(&mut w));
        w = v
            .iter()
            .zip(&w1)
            .zip(&w2)
            .map(|((vi, a), b)| (vi - oldeps * a - delta * b) / gamma)
            .collect();
        for (xi, wi) in x.iter_mut().zip(&w) {
            *xi += phi * wi;
        }

        // The recurrence tracks the residual in the preconditioned norm;
        // confirm with the true residual before stopping.
        let estimate_small = phibar <= tol * beta1;
        if estimate_small || itn - last_check >= 200 || beta == 0.0 {
            last_check = itn;
            residual = true_residual(&x);
            if residual <= tol {
                return MinresOutcome {
                    x,
                    iterations: itn,
                    residual,
                    converged: true,
                };
            }
            if beta == 0.0 {
                break;
            }
        }
    }
    if last_check != max_iter {
        residual = true_residual(&x);
    }
    MinresOutcome {
        converged: residual <= tol,
        x,
        iterations: max_iter,
        residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::CsrMatrix;

    #[test]
    fn solves_indefinite_saddle_system() {
        // [[2, 0, 1], [0, 3, 1], [1, 1, 0]]
        let k = CsrMatrix::from_triplets(
            3,
            3,
            vec![(0, 0, 2.0), (1, 1, 3.0), (0, 2, 1.0), (2, 0, 1.0), (1, 2, 1.0), (2, 1, 1.0)],
        );
        let b = vec![1.0, 2.0, 3.0];
        let out = minres(|x| k.matvec(x), &b, &[0.5, 1.0 / 3.0, 1.0], 1e-12, 50);
        assert!(out.converged);
        let kx = k.matvec(&out.x);
        for i in 0..3 {
            assert!((kx[i] - b[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn laplacian_1d() {
        let n = 60;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        let k = CsrMatrix::from_triplets(n, n, t);
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let out = minres(|x| k.matvec(x), &b, &vec![0.5; n], 1e-10, 10 * n);
        assert!(out.converged, "{}", out.residual);
        assert!(out.residual <= 1e-10);
    }

    #[test]
    fn zero_rhs() {
        let out = minres(|x| x.to_vec(), &[0.0; 4], &[1.0; 4], 1e-10, 10);
        assert_eq!(out.x, vec![0.0; 4]);
        assert_eq!(out.iterations, 0);
    }
}
