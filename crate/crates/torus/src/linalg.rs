//! Rank-revealing helpers on small dense complex matrices.

use llab_core::analysis::CMat;

/// Largest singular value, zero for an empty matrix.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.iter().copied().fold(0.0, f64::max)
}

/// Orthonormal basis (columns) of `ker m`; singular values below
/// `rel_tol · max(1, σ_max)` count as zero.
pub fn null_space(m: &CMat, rel_tol: f64) -> CMat {
    let cols = m.ncols();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    // The thin SVD only returns a full V when rows >= cols.
    let padded = if m.nrows() < cols { m.clone().resize_vertically(cols, Default::default()) } else { m.clone() };
    let svd = padded.svd(false, true);
    let v = svd.v_t.expect("requested").adjoint();
    let scale = svd.singular_values.iter().copied().fold(1.0, f64::max);
    let kernel: Vec<_> =
        (0..cols).filter(|&i| svd.singular_values[i] <= rel_tol * scale).map(|i| v.column(i).into_owned()).collect();
    if kernel.is_empty() {
        CMat::zeros(cols, 0)
    } else {
        CMat::from_columns(&kernel)
    }
}

/// Orthonormal basis (columns) of the column space of `m`.
pub fn range_basis(m: &CMat, rel_tol: f64) -> CMat {
    let rows = m.nrows();
    if m.ncols() == 0 || rows == 0 {
        return CMat::zeros(rows, 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested");
    let scale = svd.singular_values.iter().copied().fold(1.0, f64::max);
    let cols: Vec<_> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > rel_tol * scale)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        CMat::zeros(rows, 0)
    } else {
        CMat::from_columns(&cols)
    }
}

/// Vertical concatenation of blocks sharing a column count.
pub fn stack(blocks: &[CMat]) -> CMat {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        assert_eq!(b.ncols(), cols, "stacked blocks need equal widths");
        out.view_mut((at, 0), (b.nrows(), cols)).copy_from(b);
        at += b.nrows();
    }
    out
}

/// Largest principal cosine between two orthonormal column sets.
pub fn max_cosine(a: &CMat, b: &CMat) -> f64 {
    if a.ncols() == 0 || b.ncols() == 0 {
        return 0.0;
    }
    spectral_norm(&(a.adjoint() * b))
}

/// Worst relative distance of the columns of `x` from the span of the
/// orthonormal columns of `q`.
pub fn projection_residual(q: &CMat, x: &CMat) -> f64 {
    let mut worst: f64 = 0.0;
    for c in x.column_iter() {
        let nc = c.norm();
        if nc == 0.0 {
            continue;
        }
        let rest = if q.ncols() == 0 { c.into_owned() } else { c - q * (q.adjoint() * c) };
        worst = worst.max(rest.norm() / nc);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn wide_matrix_null_space() {
        let m = CMat::from_row_slice(1, 3, &[c(1.0), c(1.0), c(0.0)]);
        let k = null_space(&m, 1e-12);
        assert_eq!(k.ncols(), 2);
        assert!((&m * &k).norm() < 1e-14);
        assert!((k.adjoint() * &k - CMat::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn range_and_residual() {
        let m = CMat::from_row_slice(3, 2, &[c(1.0), c(2.0), c(0.0), c(0.0), c(0.0), c(0.0)]);
        let q = range_basis(&m, 1e-12);
        assert_eq!(q.ncols(), 1);
        let x = CMat::from_row_slice(3, 1, &[c(3.0), c(0.0), c(4.0)]);
        assert!((projection_residual(&q, &x) - 0.8).abs() < 1e-14);
        let stacked = stack(&[m.clone(), m]);
        assert_eq!(stacked.shape(), (6, 2));
    }
}
