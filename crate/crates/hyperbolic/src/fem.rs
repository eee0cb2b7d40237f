//! Finite-element assembly of Dirichlet Hodge Laplacians.
//!
//! Degree 0 uses P1 nodal elements, degree 1 lowest-order Whitney edge
//! elements, degree 2 piecewise constants paired with Whitney 1-forms in a
//! mixed formulation. In dimension two the Dirichlet energy of functions and
//! the L² norm of 1-forms are conformally invariant, so stiffness matrices
//! and the 1-form mass matrix are Euclidean. Only the 0-form mass (weight
//! `λ²`) and the 2-form mass (weight `λ⁻²`) see the metric.
//!
//! Elements are processed in parallel and the per-element contributions are
//! reduced in triangle order, so the result is bit-reproducible.

use rayon::prelude::*;

use crate::geometry::{barycentric_gradients, barycentric_point, signed_area, DUNAVANT7};
use crate::mesh::{DiscMesh, EdgeTable};
use crate::sparse::SparseSymmetricMatrix;
use crate::HyperbolicError;

/// Map from global to reduced indices; `None` for eliminated entities.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub map: Vec<Option<usize>>,
    pub count: usize,
}

impl Reduction {
    pub fn keep(mask: impl Iterator<Item = bool>) -> Self {
        let mut count = 0;
        let map = mask
            .map(|k| {
                k.then(|| {
                    count += 1;
                    count - 1
                })
            })
            .collect();
        Self { map, count }
    }

    /// Scatters a reduced vector back to global numbering with zeros.
    pub fn expand(&self, x: &[f64]) -> Vec<f64> {
        self.map.iter().map(|m| m.map_or(0.0, |i| x[i])).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Assembled {
    pub degree: usize,
    pub stiffness: SparseSymmetricMatrix,
    pub mass: SparseSymmetricMatrix,
    pub dofs: Reduction,
}

fn check_triangles(mesh: &DiscMesh) -> Result<(), HyperbolicError> {
    let floor = 1e-14 * mesh.h * mesh.h;
    for t in 0..mesh.triangle_count() {
        let p = mesh.corners(t);
        // Compare metric areas so the test is scale free near the boundary.
        if signed_area(p) * mesh.weight(barycentric_point(p, [1.0 / 3.0; 3])) <= floor {
            return Err(HyperbolicError::DegenerateTriangle(t));
        }
    }
    Ok(())
}

/// Collects local `m × m` blocks with upper entries mirrored, so the
/// assembled matrix is exactly symmetric.
fn reduce_blocks<const M: usize>(
    blocks: &[([Option<usize>; M], [[f64; M]; M])],
    n: usize,
    signs: Option<&[[f64; M]]>,
) -> SparseSymmetricMatrix {
    let mut t = Vec::with_capacity(blocks.len() * M * M);
    for (b, (idx, local)) in blocks.iter().enumerate() {
        let s = signs.map_or([1.0; M], |s| s[b]);
        for i in 0..M {
            let Some(gi) = idx[i] else { continue };
            for j in i..M {
                let Some(gj) = idx[j] else { continue };
                let v = s[i] * s[j] * local[i][j];
                t.push((gi, gj, v));
                if i != j {
                    t.push((gj, gi, v));
                }
            }
        }
    }
    SparseSymmetricMatrix::from_triplets(n, n, t)
}

/// P1 stiffness and metric mass on interior vertices.
pub fn assemble_scalar(mesh: &DiscMesh) -> Result<Assembled, HyperbolicError> {
    check_triangles(mesh)?;
    let dofs = Reduction::keep(mesh.boundary.iter().map(|b| !b));
    let local: Vec<([[f64; 3]; 3], [[f64; 3]; 3])> = (0..mesh.triangle_count())
        .into_par_iter()
        .map(|t| {
            let p = mesh.corners(t);
            let area = signed_area(p);
            let g = barycentric_gradients(p);
            let mut k = [[0.0; 3]; 3];
            let mut m = [[0.0; 3]; 3];
            for (b, w) in DUNAVANT7 {
                let wt = w * area * mesh.weight(barycentric_point(p, b));
                for i in 0..3 {
                    for j in i..3 {
                        m[i][j] += wt * b[i] * b[j];
                    }
                }
            }
            for i in 0..3 {
                for j in i..3 {
                    k[i][j] = area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
                }
            }
            (k, m)
        })
        .collect();
    let idx = |t: usize| mesh.triangles[t].map(|v| dofs.map[v]);
    let kb: Vec<_> = local.iter().enumerate().map(|(t, l)| (idx(t), l.0)).collect();
    let mb: Vec<_> = local.iter().enumerate().map(|(t, l)| (idx(t), l.1)).collect();
    Ok(Assembled { degree: 0, stiffness: reduce_blocks(&kb, dofs.count, None), mass: reduce_blocks(&mb, dofs.count, None), dofs })
}

/// Discrete de Rham complex restricted to interior entities:
/// `grad` (interior edges × interior vertices) and `curl` (triangles ×
/// interior edges), with `curl · grad = 0` exactly.
#[derive(Clone, Debug)]
pub struct WhitneyComplex {
    pub edges: EdgeTable,
    pub vertex_dofs: Reduction,
    pub edge_dofs: Reduction,
    pub grad: SparseSymmetricMatrix,
    pub curl: SparseSymmetricMatrix,
    /// Euclidean Whitney 1-form mass on interior edges.
    pub mass1: SparseSymmetricMatrix,
    /// Diagonal 2-form mass `(1/A²) ∫_T λ⁻²`.
    pub mass2: Vec<f64>,
    /// Row-sum lumped metric 0-form mass on interior vertices.
    pub mass0_lumped: Vec<f64>,
}

/// Local Whitney mass `∫_T W_a · W_b` for the edges opposite each vertex.
fn whitney_local(p: [[f64; 2]; 3]) -> [[f64; 3]; 3] {
    let area = signed_area(p);
    let g = barycentric_gradients(p);
    let dotg = |i: usize, j: usize| g[i][0] * g[j][0] + g[i][1] * g[j][1];
    // ∫ λ_i λ_k = A(1 + δ_ik)/12.
    let ll = |i: usize, k: usize| area * if i == k { 2.0 } else { 1.0 } / 12.0;
    // Edge opposite vertex a runs from a+1 to a+2: W = λ_i∇λ_j − λ_j∇λ_i.
    let ends = |a: usize| ((a + 1) % 3, (a + 2) % 3);
    let mut m = [[0.0; 3]; 3];
    for a in 0..3 {
        let (i, j) = ends(a);
        for b in a..3 {
            let (k, l) = ends(b);
            m[a][b] = ll(i, k) * dotg(j, l) - ll(i, l) * dotg(j, k) - ll(j, k) * dotg(i, l) + ll(j, l) * dotg(i, k);
        }
    }
    m
}

pub fn whitney_complex(mesh: &DiscMesh, eliminate_boundary: bool) -> Result<WhitneyComplex, HyperbolicError> {
    check_triangles(mesh)?;
    let edges = mesh.edge_table();
    let vertex_dofs = Reduction::keep(mesh.boundary.iter().map(|b| !eliminate_boundary || !b));
    let edge_dofs = Reduction::keep(edges.boundary.iter().map(|b| !eliminate_boundary || !b));
    let mut gt = Vec::new();
    for (e, [a, b]) in edges.edges.iter().enumerate() {
        let Some(re) = edge_dofs.map[e] else { continue };
        if let Some(rb) = vertex_dofs.map[*b] {
            gt.push((re, rb, 1.0));
        }
        if let Some(ra) = vertex_dofs.map[*a] {
            gt.push((re, ra, -1.0));
        }
    }
    let grad = SparseSymmetricMatrix::from_triplets(edge_dofs.count, vertex_dofs.count, gt);
    let mut ct = Vec::new();
    for (t, te) in edges.tri_edges.iter().enumerate() {
        for &(e, s) in te {
            if let Some(re) = edge_dofs.map[e] {
                ct.push((t, re, s));
            }
        }
    }
    let curl = SparseSymmetricMatrix::from_triplets(mesh.triangle_count(), edge_dofs.count, ct);

    let local: Vec<([[f64; 3]; 3], f64, [f64; 3])> = (0..mesh.triangle_count())
        .into_par_iter()
        .map(|t| {
            let p = mesh.corners(t);
            let area = signed_area(p);
            let mut inv = 0.0;
            let mut lump = [0.0; 3];
            for (b, w) in DUNAVANT7 {
                let wt = mesh.weight(barycentric_point(p, b));
                inv += w * area / wt;
                for i in 0..3 {
                    lump[i] += w * area * wt * b[i];
                }
            }
            (whitney_local(p), inv / (area * area), lump)
        })
        .collect();
    let blocks: Vec<([Option<usize>; 3], [[f64; 3]; 3])> =
        local.iter().zip(&edges.tri_edges).map(|(l, te)| (te.map(|(e, _)| edge_dofs.map[e]), l.0)).collect();
    let signs: Vec<[f64; 3]> = edges.tri_edges.iter().map(|te| te.map(|(_, s)| s)).collect();
    let mass1 = reduce_blocks(&blocks, edge_dofs.count, Some(&signs));
    let mass2 = local.iter().map(|l| l.1).collect();
    let mut mass0_lumped = vec![0.0; vertex_dofs.count];
    for (t, l) in local.iter().enumerate() {
        for (i, &v) in mesh.triangles[t].iter().enumerate() {
            if let Some(r) = vertex_dofs.map[v] {
                mass0_lumped[r] += l.2[i];
            }
        }
    }
    Ok(WhitneyComplex { edges, vertex_dofs, edge_dofs, grad, curl, mass1, mass2, mass0_lumped })
}

/// Whitney Hodge Laplacian on 1-forms with vanishing tangential trace:
/// `K = Cᵀ M₂ C + M₁ G M₀⁻¹ Gᵀ M₁`, where the codifferential is realized
/// through the lumped 0-form mass.
pub fn assemble_one_forms(mesh: &DiscMesh) -> Result<(Assembled, WhitneyComplex), HyperbolicError> {
    let w = whitney_complex(mesh, true)?;
    let m2c = w.curl.scale_rows(&w.mass2);
    let curl_part = w.curl.transpose().mul(&m2c);
    let inv0: Vec<f64> = w.mass0_lumped.iter().map(|m| 1.0 / m).collect();
    let m1g = w.mass1.mul(&w.grad);
    let div_part = m1g.mul(&m1g.transpose().scale_rows(&inv0));
    let stiffness = symmetrize(curl_part.add(&div_part));
    let a = Assembled { degree: 1, stiffness, mass: w.mass1.clone(), dofs: w.edge_dofs.clone() };
    Ok((a, w))
}

/// Products of symmetric factors are symmetric only up to rounding; this
/// replaces `A` by `(A + Aᵀ)/2`, which is exactly symmetric.
pub fn symmetrize(a: SparseSymmetricMatrix) -> SparseSymmetricMatrix {
    let t = a.transpose();
    let mut s = a.add(&t);
    for v in &mut s.values {
        *v *= 0.5;
    }
    s.symmetric = s.symmetry_defect() == 0.0;
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_disc_mesh, build_square_mesh, Model};

    #[test]
    fn scalar_matrices_are_exactly_symmetric() {
        let m = build_disc_mesh(Model::Hyperbolic, 2.0, 0.3).unwrap();
        let a = assemble_scalar(&m).unwrap();
        assert!(a.stiffness.symmetric && a.mass.symmetric);
        assert_eq!(a.stiffness.nrows, m.interior_count());
    }

    #[test]
    fn mass_integrates_the_metric() {
        // Without boundary elimination, 1ᵀ M 1 is the metric area.
        let m = build_disc_mesh(Model::Hyperbolic, 1.5, 0.2).unwrap();
        let w = whitney_complex(&m, false).unwrap();
        let total: f64 = w.mass0_lumped.iter().sum();
        assert!((total - m.total_area()).abs() < 1e-10 * total);
        let exact = crate::mesh::ball_area(Model::Hyperbolic, 1.5);
        assert!((total - exact).abs() < 0.02 * exact, "{total} vs {exact}");
    }

    #[test]
    fn curl_of_grad_vanishes_and_whitney_mass_is_positive() {
        let m = build_square_mesh(1.0, 0.25).unwrap();
        let w = whitney_complex(&m, true).unwrap();
        let cg = w.curl.mul(&w.grad);
        assert!(cg.max_abs() == 0.0);
        assert!(w.mass1.symmetric);
        let d = w.mass1.to_dense();
        assert!(d.symmetric_eigenvalues().min() > 0.0);
    }

    #[test]
    fn one_form_laplacian_is_symmetric() {
        let m = build_disc_mesh(Model::Hyperbolic, 1.0, 0.3).unwrap();
        let (a, _) = assemble_one_forms(&m).unwrap();
        assert!(a.stiffness.symmetric);
        assert!(a.stiffness.to_dense().symmetric_eigenvalues().min() > 0.0);
    }
}
