//! Minimal dense square matrices over any field, used for the `2n x 2n`
//! structure matrices of a compatible triple. Kept generic so exact
//! rational triples work; large numerical matrices go through nalgebra.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::Num;

use crate::scalar::Scalar;

/// Field elements that Gaussian elimination can pivot on.
pub trait Pivot: Clone + Num {
    /// Approximate magnitude, used to rank pivot candidates.
    fn magnitude(&self) -> f64;
    /// True when the entry must be treated as zero.
    fn negligible(&self) -> bool;
}

macro_rules! real_pivot {
    ($($t:ty),*) => {$(
        impl Pivot for $t {
            fn magnitude(&self) -> f64 {
                Scalar::approx_f64(&num_traits::Signed::abs(self))
            }
            fn negligible(&self) -> bool {
                num_traits::Signed::abs(self) <= <$t as Scalar>::tolerance()
            }
        }
    )*};
}

real_pivot!(f32, f64, num_rational::Ratio<i128>, num_rational::BigRational);

impl<T: Scalar> Pivot for Complex<T> {
    fn magnitude(&self) -> f64 {
        self.re.abs().approx_f64() + self.im.abs().approx_f64()
    }
    fn negligible(&self) -> bool {
        self.re.abs() <= T::tolerance() && self.im.abs() <= T::tolerance()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<F> {
    dim: usize,
    data: Vec<F>,
}

impl<F: Clone + Num> Mat<F> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![F::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = F::one();
        }
        m
    }

    /// Builds from row-major rows; `None` if the rows are not square.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(Self { dim, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<F>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::from_fn(self.dim, |i, j| {
            (0..self.dim).fold(F::zero(), |acc, l| acc + self[(i, l)].clone() * other[(l, j)].clone())
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)].clone() - other[(i, j)].clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)].clone() + other[(i, j)].clone())
    }

    pub fn map<G: Clone + Num>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat { dim: self.dim, data: self.data.iter().map(f).collect() }
    }

    pub fn entries(&self) -> impl Iterator<Item = &F> {
        self.data.iter()
    }

    /// Leading principal submatrix of size `m`.
    pub fn leading(&self, m: usize) -> Self {
        Self::from_fn(m, |i, j| self[(i, j)].clone())
    }
}

impl<F: Pivot> Mat<F> {
    /// Determinant by partial-pivot elimination.
    pub fn det(&self) -> F {
        let n = self.dim;
        let mut a = self.clone();
        let mut det = F::one();
        for col in 0..n {
            let Some(p) = pick_pivot(&a, col, col) else {
                return F::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = F::zero() - det;
            }
            let piv = a[(col, col)].clone();
            det = det * piv.clone();
            for r in col + 1..n {
                let f = a[(r, col)].clone() / piv.clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = a[(r, c)].clone() - f.clone() * a[(col, c)].clone();
                    a[(r, c)] = v;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse; `None` when a pivot is negligible.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = pick_pivot(&a, col, col)?;
            a.swap_rows(p, col);
            inv.swap_rows(p, col);
            let piv = a[(col, col)].clone();
            for c in 0..n {
                a[(col, c)] = a[(col, c)].clone() / piv.clone();
                inv[(col, c)] = inv[(col, c)].clone() / piv.clone();
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)].clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = a[(r, c)].clone() - f.clone() * a[(col, c)].clone();
                    a[(r, c)] = v;
                    let w = inv[(r, c)].clone() - f.clone() * inv[(col, c)].clone();
                    inv[(r, c)] = w;
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.dim {
            self.data.swap(a * self.dim + c, b * self.dim + c);
        }
    }

    /// Largest entry magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(Pivot::magnitude).fold(0.0, f64::max)
    }
}

fn pick_pivot<F: Pivot>(a: &Mat<F>, col: usize, from: usize) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for r in from..a.dim {
        let v = &a[(r, col)];
        if v.negligible() {
            continue;
        }
        let m = v.magnitude();
        if best.is_none_or(|(_, bm)| m > bm) {
            best = Some((r, m));
        }
    }
    best.map(|(r, _)| r)
}

impl<F> Index<(usize, usize)> for Mat<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.dim + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Mat<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.dim + j]
    }
}

/// Picks up to `count` rows by complete pivoting: each step takes the
/// remaining row with the largest entry after elimination against the rows
/// already taken. Nearly dependent rows are therefore picked last.
pub fn pivoted_rows<F: Pivot>(rows: &[Vec<F>], count: usize) -> Vec<usize> {
    let mut work: Vec<Vec<F>> = rows.to_vec();
    let mut keep = Vec::new();
    let mut free: Vec<usize> = (0..rows.len()).collect();
    while keep.len() < count {
        let best = free
            .iter()
            .enumerate()
            .flat_map(|(slot, &r)| work[r].iter().enumerate().map(move |(c, x)| (slot, r, c, x.magnitude())))
            .filter(|&(_, r, c, _)| !work[r][c].negligible())
            // Ties go to the earliest row and column.
            .max_by(|a, b| a.3.total_cmp(&b.3).then(b.1.cmp(&a.1)).then(b.2.cmp(&a.2)));
        let Some((slot, r, pc, _)) = best else { break };
        free.remove(slot);
        keep.push(r);
        let basis = work[r].clone();
        for &o in &free {
            let f = work[o][pc].clone() / basis[pc].clone();
            if f.is_zero() {
                continue;
            }
            for (x, b) in work[o].iter_mut().zip(&basis) {
                *x = x.clone() - f.clone() * b.clone();
            }
        }
    }
    keep
}
