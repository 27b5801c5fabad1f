//! Dense linear algebra over exact rationals: inversion and rank.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::polynomials::{Exponent, Poly3, PolyVec3};

pub type RationalMatrix = Vec<Vec<BigRational>>;

/// Row-reduces `m` in place and returns its rank.
fn row_reduce(m: &mut RationalMatrix) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = BigRational::one() / m[rank][col].clone();
        for j in col..cols {
            m[rank][j] = &m[rank][j] * &inv;
        }
        for i in 0..rows {
            if i == rank || m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].clone();
            for j in col..cols {
                let delta = &factor * &m[rank][j];
                m[i][j] -= delta;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn rank(m: &RationalMatrix) -> usize {
    let mut work = m.clone();
    row_reduce(&mut work)
}

/// Exact inverse by Gauss-Jordan elimination; `None` when singular.
pub fn inverse(m: &RationalMatrix) -> Option<RationalMatrix> {
    let n = m.len();
    let mut aug: RationalMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    // Reduce only over the left block so the rank reflects `m` itself.
    let mut rank = 0;
    for col in 0..n {
        let pivot = (rank..n).find(|&i| !aug[i][col].is_zero())?;
        aug.swap(rank, pivot);
        let inv = BigRational::one() / aug[rank][col].clone();
        for j in 0..2 * n {
            aug[rank][j] = &aug[rank][j] * &inv;
        }
        for i in 0..n {
            if i == rank || aug[i][col].is_zero() {
                continue;
            }
            let factor = aug[i][col].clone();
            for j in 0..2 * n {
                let delta = &factor * &aug[rank][j];
                aug[i][j] -= delta;
            }
        }
        rank += 1;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn multiply(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = BigRational::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn to_f64(m: &RationalMatrix) -> Vec<Vec<f64>> {
    m.iter()
        .map(|r| r.iter().map(crate::polynomials::rational_to_f64).collect())
        .collect()
}

/// Coefficient matrix of vector fields over the union of their monomials:
/// one row per field.
pub fn field_coefficients(fields: &[PolyVec3]) -> RationalMatrix {
    let mut keys: BTreeMap<(usize, Exponent), usize> = BTreeMap::new();
    for f in fields {
        for (k, e, _) in f.coefficients() {
            let next = keys.len();
            keys.entry((k, e)).or_insert(next);
        }
    }
    fields
        .iter()
        .map(|f| {
            let mut row = vec![BigRational::zero(); keys.len()];
            for (k, e, c) in f.coefficients() {
                row[keys[&(k, e)]] = c;
            }
            row
        })
        .collect()
}

pub fn scalar_coefficients(polys: &[Poly3]) -> RationalMatrix {
    let fields: Vec<PolyVec3> = polys
        .iter()
        .map(|p| PolyVec3::new(p.clone(), Poly3::zero(), Poly3::zero()))
        .collect();
    field_coefficients(&fields)
}

pub fn field_rank(fields: &[PolyVec3]) -> usize {
    rank(&field_coefficients(fields))
}
