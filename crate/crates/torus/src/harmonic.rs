//! Harmonic spaces of the Fourier complex and their bidegree and Lefschetz
//! refinements.

use llab_core::analysis::CMat;
use llab_core::bigraded::type_range;
use llab_core::lefschetz::level_range;
use serde::{Deserialize, Serialize};

use crate::complex::FourierComplex;
use crate::linalg::{max_cosine, null_space, projection_residual, range_basis, stack};
use crate::TorusError;

/// Relative singular-value threshold for kernels of per-mode operators.
pub const KERNEL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeDim {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelDim {
    pub r: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicSpaceReport {
    pub n: usize,
    pub k: usize,
    pub cutoff: usize,
    pub mode_count: usize,
    pub total_dim: usize,
    /// Modes whose block of `Δ_d` has a kernel.
    pub harmonic_modes: Vec<Vec<i32>>,
    pub bidegree_dims: Vec<TypeDim>,
    pub lefschetz_dims: Vec<LevelDim>,
    /// `ker d ∩ ker d*`, which must coincide with `ker Δ_d`.
    pub closed_coclosed_dim: usize,
    /// Real dimensions of the `J`-invariant and anti-invariant harmonic
    /// 2-forms; `None` off degree 2.
    pub invariant_dim: Option<usize>,
    pub anti_invariant_dim: Option<usize>,
}

impl HarmonicSpaceReport {
    /// The dimension bookkeeping identities every report must satisfy.
    pub fn is_consistent(&self) -> bool {
        let by_type: usize = self.bidegree_dims.iter().map(|t| t.dim).sum();
        let by_level: usize = self.lefschetz_dims.iter().map(|l| l.dim).sum();
        let split = match (self.invariant_dim, self.anti_invariant_dim) {
            (Some(a), Some(b)) => a + b == self.total_dim,
            (None, None) => true,
            _ => false,
        };
        by_type == self.total_dim && by_level == self.total_dim && self.closed_coclosed_dim == self.total_dim && split
    }
}

fn check_degree(fc: &FourierComplex, k: usize) -> Result<(), TorusError> {
    let top = 2 * fc.n();
    if k > top {
        return Err(TorusError::DegreeRange { k, top });
    }
    Ok(())
}

fn complement(p: &CMat) -> CMat {
    CMat::identity(p.nrows(), p.ncols()) - p
}

/// `dim(ker Δ ∩ ker c)` for a constraint `c`, given `ker Δ` is nontrivial.
fn constrained_kernel(delta: &CMat, constraint: CMat) -> usize {
    null_space(&stack(&[delta.clone(), constraint]), KERNEL_TOL).ncols()
}

/// Kernel of `Δ_d` on every mode, refined by type, Lefschetz level and,
/// in degree 2, by the `J`-action.
pub fn harmonic_space(fc: &FourierComplex, k: usize) -> Result<HarmonicSpaceReport, TorusError> {
    check_degree(fc, k)?;
    let n = fc.n();
    let ki = k as isize;
    let ops = fc.pointwise().degree(k);
    let per_mode = fc.map_modes(|xi| {
        let delta = fc.laplacian(xi, ki);
        let h = null_space(&delta, KERNEL_TOL).ncols();
        let closed = null_space(&stack(&[fc.d(xi, ki), fc.d_star(xi, ki)]), KERNEL_TOL).ncols();
        if h == 0 {
            return (closed, None);
        }
        let types: Vec<usize> =
            type_range(n, k).map(|p| constrained_kernel(&delta, complement(ops.type_projector(p).expect("type")))).collect();
        let levels: Vec<usize> = level_range(n, k)
            .map(|r| constrained_kernel(&delta, complement(ops.level_projector(r).expect("level"))))
            .collect();
        let split = (k == 2).then(|| {
            let id = CMat::identity(ops.dim, ops.dim);
            (constrained_kernel(&delta, &id - &ops.j), constrained_kernel(&delta, &id + &ops.j))
        });
        (closed, Some((xi.clone(), h, types, levels, split)))
    });

    let mut report = HarmonicSpaceReport {
        n,
        k,
        cutoff: fc.cutoff(),
        mode_count: fc.mode_count(),
        total_dim: 0,
        harmonic_modes: Vec::new(),
        bidegree_dims: type_range(n, k).map(|p| TypeDim { p, q: k - p, dim: 0 }).collect(),
        lefschetz_dims: level_range(n, k).map(|r| LevelDim { r, dim: 0 }).collect(),
        closed_coclosed_dim: 0,
        invariant_dim: (k == 2).then_some(0),
        anti_invariant_dim: (k == 2).then_some(0),
    };
    for (closed, rest) in per_mode {
        report.closed_coclosed_dim += closed;
        let Some((xi, h, types, levels, split)) = rest else { continue };
        report.harmonic_modes.push(xi);
        report.total_dim += h;
        for (slot, d) in report.bidegree_dims.iter_mut().zip(types) {
            slot.dim += d;
        }
        for (slot, d) in report.lefschetz_dims.iter_mut().zip(levels) {
            slot.dim += d;
        }
        if let Some((inv, anti)) = split {
            *report.invariant_dim.as_mut().expect("degree 2") += inv;
            *report.anti_invariant_dim.as_mut().expect("degree 2") += anti;
        }
    }
    Ok(report)
}

/// Per-degree dimensions of the Hodge decomposition summed over modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HodgeDims {
    pub k: usize,
    pub harmonic: usize,
    pub exact: usize,
    pub coexact: usize,
    pub total: usize,
}

pub fn hodge_decomposition_dims(fc: &FourierComplex, k: usize) -> Result<HodgeDims, TorusError> {
    check_degree(fc, k)?;
    let ki = k as isize;
    let parts = fc.map_modes(|xi| {
        let h = null_space(&fc.laplacian(xi, ki), KERNEL_TOL).ncols();
        let exact = range_basis(&fc.d(xi, ki - 1), KERNEL_TOL).ncols();
        let coexact = range_basis(&fc.d_star(xi, ki + 1), KERNEL_TOL).ncols();
        (h, exact, coexact)
    });
    let (harmonic, exact, coexact) = parts.into_iter().fold((0, 0, 0), |acc, x| (acc.0 + x.0, acc.1 + x.1, acc.2 + x.2));
    Ok(HodgeDims { k, harmonic, exact, coexact, total: fc.dim(ki) * fc.mode_count() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockCosine {
    pub r1: usize,
    pub r2: usize,
    pub cosine: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct P7Report {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub harmonic_dim: usize,
    /// `dim L^r Pℋ^{p-r,q-r}` per level.
    pub level_dims: Vec<LevelDim>,
    pub sum_dim: usize,
    /// Worst distance of a harmonic `(p,q)`-form from the span of the blocks.
    pub span_residual: f64,
    /// Worst distance of a block vector from `ℋ^{p,q}`.
    pub containment_residual: f64,
    /// Largest principal cosine between distinct `L^r` blocks.
    pub block_cosines: Vec<BlockCosine>,
}

impl P7Report {
    pub fn passes(&self, tol: f64) -> bool {
        self.sum_dim == self.harmonic_dim && self.span_residual < tol && self.containment_residual < tol
    }
}

/// Compares `ℋ^{p,q}` with `⊕_r L^r Pℋ^{p-r,q-r}` mode by mode, in
/// metric-orthonormal coordinates.
pub fn verify_p7_decomposition(fc: &FourierComplex, p: usize, q: usize) -> Result<P7Report, TorusError> {
    let n = fc.n();
    let k = p + q;
    if p > n || q > n {
        return Err(TorusError::TypeRange { p, q, dim: 2 * n });
    }
    let pw = fc.pointwise();
    let levels: Vec<usize> = (k.saturating_sub(n)..=p.min(q)).collect();
    let metric = &pw.degree(k).metric;

    let per_mode = fc.map_modes(|xi| {
        let delta = fc.laplacian(xi, k as isize);
        if null_space(&delta, KERNEL_TOL).ncols() == 0 {
            return None;
        }
        let h = null_space(&stack(&[delta, complement(pw.degree(k).type_projector(p).expect("type"))]), KERNEL_TOL);
        let h = range_basis(&(metric * h), KERNEL_TOL);
        let blocks: Vec<CMat> = levels
            .iter()
            .map(|&r| {
                let m = k - 2 * r;
                let ops = pw.degree(m);
                let prim = null_space(
                    &stack(&[
                        fc.laplacian(xi, m as isize),
                        complement(ops.type_projector(p - r).expect("type")),
                        fc.lambda(m as isize),
                    ]),
                    KERNEL_TOL,
                );
                let mut lifted = prim;
                for s in 0..r {
                    lifted = fc.l((m + 2 * s) as isize) * lifted;
                }
                range_basis(&(metric * lifted), KERNEL_TOL)
            })
            .collect();
        Some((h, blocks))
    });

    let mut report = P7Report {
        n,
        p,
        q,
        harmonic_dim: 0,
        level_dims: levels.iter().map(|&r| LevelDim { r, dim: 0 }).collect(),
        sum_dim: 0,
        span_residual: 0.0,
        containment_residual: 0.0,
        block_cosines: Vec::new(),
    };
    let mut cosines = vec![vec![0.0f64; levels.len()]; levels.len()];
    for (h, blocks) in per_mode.into_iter().flatten() {
        report.harmonic_dim += h.ncols();
        let rows = h.nrows();
        let mut cols = Vec::new();
        for (i, b) in blocks.iter().enumerate() {
            report.level_dims[i].dim += b.ncols();
            report.sum_dim += b.ncols();
            cols.extend(b.column_iter().map(|c| c.into_owned()));
            for (j, b2) in blocks.iter().enumerate().skip(i + 1) {
                cosines[i][j] = cosines[i][j].max(max_cosine(b, b2));
            }
        }
        let combined = if cols.is_empty() { CMat::zeros(rows, 0) } else { range_basis(&CMat::from_columns(&cols), KERNEL_TOL) };
        report.span_residual = report.span_residual.max(projection_residual(&combined, &h));
        for b in &blocks {
            report.containment_residual = report.containment_residual.max(projection_residual(&h, b));
        }
    }
    for i in 0..levels.len() {
        for j in i + 1..levels.len() {
            report.block_cosines.push(BlockCosine { r1: levels[i], r2: levels[j], cosine: cosines[i][j] });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use llab_core::Triple;

    #[test]
    fn t2_harmonic_dims() {
        let fc = FourierComplex::new(1, 1, Triple::standard(1).unwrap()).unwrap();
        let dims: Vec<usize> = (0..=2).map(|k| harmonic_space(&fc, k).unwrap().total_dim).collect();
        assert_eq!(dims, vec![1, 2, 1]);
        let r = harmonic_space(&fc, 1).unwrap();
        assert_eq!(r.harmonic_modes, vec![vec![0, 0]]);
        assert!(r.is_consistent());
    }

    #[test]
    fn p7_on_t4_middle_types() {
        let fc = FourierComplex::new(2, 1, Triple::standard(2).unwrap()).unwrap();
        let r = verify_p7_decomposition(&fc, 1, 1).unwrap();
        assert_eq!(r.harmonic_dim, 4);
        assert_eq!(r.level_dims, vec![LevelDim { r: 0, dim: 3 }, LevelDim { r: 1, dim: 1 }]);
        assert!(r.passes(1e-10), "{r:?}");
        let r = verify_p7_decomposition(&fc, 0, 0).unwrap();
        assert_eq!((r.harmonic_dim, r.sum_dim), (1, 1));
        assert!(verify_p7_decomposition(&fc, 3, 0).is_err());
    }

    #[test]
    fn degree_out_of_range() {
        let fc = FourierComplex::new(1, 0, Triple::standard(1).unwrap()).unwrap();
        assert!(matches!(harmonic_space(&fc, 3), Err(TorusError::DegreeRange { .. })));
    }
}
