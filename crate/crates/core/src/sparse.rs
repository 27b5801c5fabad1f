//! Compressed sparse row matrices with deterministic assembly.

use faer::sparse::{SparseColMat, Triplet};

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<f64>,
}

impl CsrMatrix {
    /// Duplicates are summed in the order they appear in `triplets`, so the
    /// result depends only on the input order.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|&(i, j, _)| (i, j));
        let mut indptr = vec![0; nrows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut data: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet ({i},{j}) out of bounds");
            if last == Some((i, j)) {
                *data.last_mut().unwrap() += v;
            } else {
                indices.push(j);
                data.push(v);
                indptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..nrows {
            indptr[i + 1] += indptr[i];
        }
        CsrMatrix {
            nrows,
            ncols,
            indptr,
            indices,
            data,
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self::from_triplets(nrows, ncols, Vec::new())
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.indptr[i]..self.indptr[i + 1];
        self.indices[range.clone()].iter().copied().zip(self.data[range].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.indptr[i]..self.indptr[i + 1];
        match self.indices[range.clone()].binary_search(&j) {
            Ok(k) => self.data[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    /// `y = Aᵀ x`.
    pub fn transpose_matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.nrows);
        let mut y = vec![0.0; self.ncols];
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                y[j] += v * x[i];
            }
        }
        y
    }

    pub fn transpose(&self) -> CsrMatrix {
        CsrMatrix::from_triplets(self.ncols, self.nrows, self.triplets().map(|(i, j, v)| (j, i, v)).collect())
    }

    /// `max |A - Aᵀ|`.
    pub fn asymmetry(&self) -> f64 {
        self.triplets().fold(0.0, |m, (i, j, v)| m.max((v - self.get(j, i)).abs()))
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(self.matvec(y)).map(|(a, b)| a * b).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.ncols]; self.nrows];
        for (i, j, v) in self.triplets() {
            m[i][j] += v;
        }
        m
    }

    pub fn to_faer(&self) -> SparseColMat<usize, f64> {
        let t: Vec<Triplet<usize, usize, f64>> = self.triplets().map(|(i, j, v)| Triplet::new(i, j, v)).collect();
        SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &t).expect("valid CSR triplets")
    }
}

pub fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn duplicates_are_summed() {
        let m = CsrMatrix::from_triplets(2, 3, vec![(1, 2, 1.0), (0, 0, 2.0), (1, 2, 0.5), (0, 1, -1.0)]);
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(1, 2), 1.5);
        assert_eq!(m.get(1, 0), 0.0);
        assert_eq!(m.matvec(&[1.0, 1.0, 2.0]), vec![1.0, 3.0]);
        assert_eq!(m.transpose_matvec(&[1.0, 2.0]), vec![2.0, -1.0, 3.0]);
        assert_eq!(m.to_dense(), vec![vec![2.0, -1.0, 0.0], vec![0.0, 0.0, 1.5]]);
    }

    proptest! {
        #[test]
        fn transpose_matvec_is_adjoint(
            entries in proptest::collection::vec((0usize..6, 0usize..4, -5.0f64..5.0), 0..30),
            x in proptest::collection::vec(-1.0f64..1.0, 4),
            y in proptest::collection::vec(-1.0f64..1.0, 6),
        ) {
            let m = CsrMatrix::from_triplets(6, 4, entries);
            let lhs = dot(&y, &m.matvec(&x));
            let rhs = dot(&m.transpose_matvec(&y), &x);
            prop_assert!((lhs - rhs).abs() < 1e-12);
            prop_assert_eq!(m.transpose().transpose(), m);
        }
    }
}
