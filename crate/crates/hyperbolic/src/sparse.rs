//! Compressed-row sparse matrices assembled from triplets with a fixed
//! summation order, and thin wrappers around faer's sparse factorizations.

use faer::linalg::solvers::SolveCore;
use faer::sparse::linalg::solvers::{Llt, Lu};
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use rayon::prelude::*;

use crate::HyperbolicError;

/// CSR matrix. `symmetric` is set only when the stored pattern and values
/// are exactly symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSymmetricMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
    pub symmetric: bool,
}

impl SparseSymmetricMatrix {
    /// Sums duplicates in the order they appear in `triplets`, so the result
    /// is bit-reproducible for a fixed input order.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len() / 2);
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len() / 2);
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) outside {nrows}x{ncols}");
            if last == Some((r, c)) {
                *values.last_mut().expect("previous entry") += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        let mut m = Self { nrows, ncols, row_ptr, col_idx, values, symmetric: false };
        m.symmetric = m.symmetry_defect() == 0.0;
        m
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self::from_triplets(d.len(), d.len(), d.iter().enumerate().map(|(i, &v)| (i, i, v)).collect())
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&c) {
            Ok(i) => self.values[span.start + i],
            Err(_) => 0.0,
        }
    }

    /// `max |A_ij − A_ji|`, or infinity for a non-square matrix.
    pub fn symmetry_defect(&self) -> f64 {
        if self.nrows != self.ncols {
            return f64::INFINITY;
        }
        (0..self.nrows).flat_map(|r| self.row(r).map(move |(c, v)| (r, c, v))).map(|(r, c, v)| (v - self.get(c, r)).abs()).fold(0.0, f64::max)
    }

    /// Rows are independent, so the parallel product is deterministic.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows).into_par_iter().map(|r| self.row(r).map(|(c, v)| v * x[c]).sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        let triplets = (0..self.nrows).flat_map(|r| self.row(r).map(move |(c, v)| (c, r, v))).collect();
        Self::from_triplets(self.ncols, self.nrows, triplets)
    }

    /// Sparse product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows);
        let rows: Vec<Vec<(usize, f64)>> = (0..self.nrows)
            .into_par_iter()
            .map(|r| {
                let mut acc: Vec<(usize, f64)> = Vec::new();
                for (k, a) in self.row(r) {
                    acc.extend(other.row(k).map(|(c, b)| (c, a * b)));
                }
                acc.sort_by_key(|e| e.0);
                let mut merged: Vec<(usize, f64)> = Vec::with_capacity(acc.len());
                for (c, v) in acc {
                    match merged.last_mut() {
                        Some(last) if last.0 == c => last.1 += v,
                        _ => merged.push((c, v)),
                    }
                }
                merged
            })
            .collect();
        let triplets = rows.into_iter().enumerate().flat_map(|(r, row)| row.into_iter().map(move |(c, v)| (r, c, v))).collect();
        Self::from_triplets(self.nrows, other.ncols, triplets)
    }

    /// `diag(d) · self`.
    pub fn scale_rows(&self, d: &[f64]) -> Self {
        let mut m = self.clone();
        for r in 0..m.nrows {
            for v in &mut m.values[m.row_ptr[r]..m.row_ptr[r + 1]] {
                *v *= d[r];
            }
        }
        m.symmetric = m.symmetry_defect() == 0.0;
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut t: Vec<(usize, usize, f64)> = (0..self.nrows).flat_map(|r| self.row(r).map(move |(c, v)| (r, c, v))).collect();
        t.extend((0..other.nrows).flat_map(|r| other.row(r).map(move |(c, v)| (r, c, v))));
        Self::from_triplets(self.nrows, self.ncols, t)
    }

    /// Largest absolute entry, a cheap scale for tolerances.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut d = nalgebra::DMatrix::zeros(self.nrows, self.ncols);
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                d[(r, c)] = v;
            }
        }
        d
    }

    pub fn to_faer(&self) -> Result<SparseColMat<usize, f64>, HyperbolicError> {
        let triplets: Vec<Triplet<usize, usize, f64>> =
            (0..self.nrows).flat_map(|r| self.row(r).map(move |(c, v)| Triplet::new(r, c, v))).collect();
        SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &triplets)
            .map_err(|e| HyperbolicError::Factorization(format!("{e:?}")))
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A factorized square matrix that solves `A x = b`.
pub enum Factor {
    Cholesky(Llt<usize, f64>),
    Lu(Box<Lu<usize, f64>>),
}

impl Factor {
    /// Sparse Cholesky of a symmetric positive definite matrix.
    pub fn cholesky(a: &SparseSymmetricMatrix) -> Result<Self, HyperbolicError> {
        // Sequential kernels keep every solve bit-reproducible.
        faer::set_global_parallelism(faer::Par::Seq);
        let m = a.to_faer()?;
        m.sp_cholesky(Side::Lower).map(Factor::Cholesky).map_err(|e| HyperbolicError::Factorization(format!("{e:?}")))
    }

    pub fn lu(a: &SparseSymmetricMatrix) -> Result<Self, HyperbolicError> {
        faer::set_global_parallelism(faer::Par::Seq);
        let m = a.to_faer()?;
        m.sp_lu().map(|f| Factor::Lu(Box::new(f))).map_err(|e| HyperbolicError::Factorization(format!("{e:?}")))
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = Mat::<f64>::from_fn(b.len(), 1, |i, _| b[i]);
        match self {
            Factor::Cholesky(f) => f.solve_in_place_with_conj(faer::Conj::No, x.as_mut()),
            Factor::Lu(f) => f.solve_in_place_with_conj(faer::Conj::No, x.as_mut()),
        }
        (0..b.len()).map(|i| x[(i, 0)]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> SparseSymmetricMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        SparseSymmetricMatrix::from_triplets(n, n, t)
    }

    #[test]
    fn duplicates_are_summed_and_symmetry_detected() {
        let m = SparseSymmetricMatrix::from_triplets(2, 2, vec![(0, 1, 1.0), (1, 0, 0.5), (1, 0, 0.5), (0, 0, 3.0)]);
        assert_eq!(m.get(1, 0), 1.0);
        assert!(m.symmetric);
        assert_eq!(m.nnz(), 3);
        let n = SparseSymmetricMatrix::from_triplets(2, 2, vec![(0, 1, 1.0)]);
        assert!(!n.symmetric);
        assert_eq!(n.transpose().get(1, 0), 1.0);
    }

    #[test]
    fn factorizations_solve() {
        let a = laplacian_1d(50);
        let b: Vec<f64> = (0..50).map(|i| (i as f64).sin()).collect();
        for f in [Factor::cholesky(&a).unwrap(), Factor::lu(&a).unwrap()] {
            let x = f.solve(&b);
            let r = a.matvec(&x);
            assert!(r.iter().zip(&b).all(|(p, q)| (p - q).abs() < 1e-10));
        }
    }

    #[test]
    fn product_matches_dense() {
        let a = laplacian_1d(7);
        let p = a.mul(&a.transpose());
        assert!((p.to_dense() - a.to_dense() * a.to_dense()).norm() < 1e-14);
        assert!(Factor::cholesky(&SparseSymmetricMatrix::diagonal(&[1.0, -1.0])).is_err());
    }
}
