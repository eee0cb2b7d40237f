//! Triangulations of geodesic discs (Poincaré disc or Euclidean) and of the
//! Euclidean unit square, plus a versioned binary cache.
//!
//! Disc meshes are built ring by ring in geodesic polar coordinates: ring
//! spacing `Δρ = R / ceil(R/h)` and `max(6, round(C(ρ)/h))` vertices on the
//! ring of circumference `C(ρ)`. Alternate rings are rotated by half a step
//! and consecutive rings are zipped together, which keeps every angle well
//! away from zero. Coordinates are stored in the unit disc.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{angles_deg, conformal_factor, disc_radius, distance_from_origin, signed_area, Point, DUNAVANT7};
use crate::HyperbolicError;

pub const VERTEX_BUDGET: usize = 2_000_000;
pub const MIN_ANGLE_DEG: f64 = 15.0;

const MAGIC: &[u8; 8] = b"LLABMESH";
const CACHE_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    /// Curvature −1, metric `4|dz|²/(1 − |z|²)²`.
    Hyperbolic,
    Euclidean,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    /// Ball of the given radius (geodesic for the hyperbolic model).
    Disc { radius: f64 },
    /// `[0, side]²`, Euclidean model only.
    Square { side: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscMesh {
    pub model: Model,
    pub domain: Domain,
    pub h: f64,
    pub vertices: Vec<Point>,
    /// Counter-clockwise index triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshQuality {
    pub min_angle_deg: f64,
    pub min_area: f64,
    pub max_distance: f64,
    /// Worst `|dist(v) − R|` over boundary vertices.
    pub boundary_deviation: f64,
}

/// Edge list with `a < b` and, per triangle, the three edges opposite each
/// local vertex together with their orientation relative to `a → b`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeTable {
    pub edges: Vec<[usize; 2]>,
    pub boundary: Vec<bool>,
    /// `tri_edges[t][i]` is the edge from local vertex `i+1` to `i+2`.
    pub tri_edges: Vec<[(usize, f64); 3]>,
}

fn circumference(model: Model, rho: f64) -> f64 {
    match model {
        Model::Hyperbolic => 2.0 * std::f64::consts::PI * rho.sinh(),
        Model::Euclidean => 2.0 * std::f64::consts::PI * rho,
    }
}

/// Area of the ball, used for the vertex budget check.
pub fn ball_area(model: Model, radius: f64) -> f64 {
    match model {
        Model::Hyperbolic => 2.0 * std::f64::consts::PI * (radius.cosh() - 1.0),
        Model::Euclidean => std::f64::consts::PI * radius * radius,
    }
}

/// Geodesic disc mesh of radius `radius` and target edge length `h`.
pub fn build_disc_mesh(model: Model, radius: f64, h: f64) -> Result<DiscMesh, HyperbolicError> {
    if !(h > 0.0 && h < radius && radius <= 12.0) {
        return Err(HyperbolicError::InvalidParameters(format!("need 0 < h < R <= 12, got R = {radius}, h = {h}")));
    }
    let rings = (radius / h).ceil() as usize;
    let dr = radius / rings as f64;
    let counts: Vec<usize> = (0..=rings)
        .map(|i| if i == 0 { 1 } else { ((circumference(model, i as f64 * dr) / h).round() as usize).max(6) })
        .collect();
    let needed: usize = counts.iter().sum();
    if needed > VERTEX_BUDGET {
        return Err(HyperbolicError::VertexBudget { needed, cap: VERTEX_BUDGET });
    }
    let mut vertices = Vec::with_capacity(needed);
    let mut starts = Vec::with_capacity(rings + 1);
    let mut angles: Vec<Vec<f64>> = Vec::with_capacity(rings + 1);
    for (i, &count) in counts.iter().enumerate() {
        starts.push(vertices.len());
        let rho = i as f64 * dr;
        let r = match model {
            Model::Hyperbolic => disc_radius(rho),
            Model::Euclidean => rho,
        };
        let offset = if i % 2 == 1 { 0.5 } else { 0.0 };
        let ring: Vec<f64> = (0..count).map(|j| std::f64::consts::TAU * (j as f64 + offset) / count as f64).collect();
        for &a in &ring {
            vertices.push(if i == 0 { [0.0, 0.0] } else { [r * a.cos(), r * a.sin()] });
        }
        angles.push(ring);
    }
    let mut triangles = Vec::with_capacity(2 * needed);
    for j in 0..counts[1] {
        triangles.push([0, starts[1] + j, starts[1] + (j + 1) % counts[1]]);
    }
    for i in 1..rings {
        zip_rings(&angles[i], starts[i], &angles[i + 1], starts[i + 1], &mut triangles);
    }
    for t in &mut triangles {
        if signed_area([vertices[t[0]], vertices[t[1]], vertices[t[2]]]) < 0.0 {
            t.swap(1, 2);
        }
    }
    let mut boundary = vec![false; vertices.len()];
    for b in &mut boundary[starts[rings]..] {
        *b = true;
    }
    Ok(DiscMesh { model, domain: Domain::Disc { radius }, h, vertices, triangles, boundary })
}

/// Triangulates the band between an inner and an outer ring by always
/// advancing along whichever ring has the smaller next angle. Both rings
/// start within one step of angle zero.
fn zip_rings(inner: &[f64], si: usize, outer: &[f64], so: usize, out: &mut Vec<[usize; 3]>) {
    let (ni, no) = (inner.len(), outer.len());
    let unwrap = |ring: &[f64], k: usize| ring[k % ring.len()] + std::f64::consts::TAU * (k / ring.len()) as f64;
    let (mut a, mut b) = (0usize, 0usize);
    while a < ni || b < no {
        let (ia, ob) = (si + a % ni, so + b % no);
        if b == no || (a < ni && unwrap(inner, a + 1) <= unwrap(outer, b + 1)) {
            out.push([ia, si + (a + 1) % ni, ob]);
            a += 1;
        } else {
            out.push([ia, ob, so + (b + 1) % no]);
            b += 1;
        }
    }
}

/// Euclidean square `[0, side]²` with `ceil(side/h)` cells per side and
/// alternating diagonals.
pub fn build_square_mesh(side: f64, h: f64) -> Result<DiscMesh, HyperbolicError> {
    if !(h > 0.0 && h < side) {
        return Err(HyperbolicError::InvalidParameters(format!("need 0 < h < side, got side = {side}, h = {h}")));
    }
    let m = (side / h).ceil() as usize;
    if (m + 1) * (m + 1) > VERTEX_BUDGET {
        return Err(HyperbolicError::VertexBudget { needed: (m + 1) * (m + 1), cap: VERTEX_BUDGET });
    }
    let step = side / m as f64;
    let idx = |i: usize, j: usize| j * (m + 1) + i;
    let mut vertices = Vec::with_capacity((m + 1) * (m + 1));
    let mut boundary = Vec::with_capacity((m + 1) * (m + 1));
    for j in 0..=m {
        for i in 0..=m {
            vertices.push([i as f64 * step, j as f64 * step]);
            boundary.push(i == 0 || j == 0 || i == m || j == m);
        }
    }
    let mut triangles = Vec::with_capacity(2 * m * m);
    for j in 0..m {
        for i in 0..m {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            if (i + j) % 2 == 0 {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            } else {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            }
        }
    }
    Ok(DiscMesh { model: Model::Euclidean, domain: Domain::Square { side }, h, vertices, triangles, boundary })
}

impl DiscMesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Square of the conformal factor; identically 1 in the Euclidean model.
    pub fn weight(&self, z: Point) -> f64 {
        match self.model {
            Model::Hyperbolic => conformal_factor(z).powi(2),
            Model::Euclidean => 1.0,
        }
    }

    /// Distance from the centre of the domain.
    pub fn distance(&self, z: Point) -> f64 {
        match self.model {
            Model::Hyperbolic => distance_from_origin(z),
            Model::Euclidean => (z[0] * z[0] + z[1] * z[1]).sqrt(),
        }
    }

    pub fn radius(&self) -> f64 {
        match self.domain {
            Domain::Disc { radius } => radius,
            Domain::Square { side } => side / std::f64::consts::SQRT_2,
        }
    }

    /// Metric area of triangle `t` by seven-point quadrature.
    pub fn triangle_area(&self, t: usize) -> f64 {
        let p = self.corners(t);
        let a = signed_area(p);
        DUNAVANT7.iter().map(|(b, w)| w * self.weight(crate::geometry::barycentric_point(p, *b))).sum::<f64>() * a
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn interior_count(&self) -> usize {
        self.boundary.iter().filter(|b| !**b).count()
    }

    /// Angles are measured in disc coordinates; the metric is conformal so
    /// they agree with metric angles up to `O(h)`.
    pub fn quality(&self) -> MeshQuality {
        let mut min_angle_deg = f64::INFINITY;
        let mut min_area = f64::INFINITY;
        for t in 0..self.triangles.len() {
            let p = self.corners(t);
            min_angle_deg = angles_deg(p).into_iter().fold(min_angle_deg, f64::min);
            min_area = min_area.min(self.triangle_area(t));
        }
        let max_distance = self.vertices.iter().map(|&z| self.distance(z)).fold(0.0, f64::max);
        let boundary_deviation = match self.domain {
            Domain::Disc { radius } => self
                .vertices
                .iter()
                .zip(&self.boundary)
                .filter(|(_, b)| **b)
                .map(|(&z, _)| (self.distance(z) - radius).abs())
                .fold(0.0, f64::max),
            Domain::Square { .. } => 0.0,
        };
        MeshQuality { min_angle_deg, min_area, max_distance, boundary_deviation }
    }

    /// Checks positivity, the angle floor and the radial extent.
    pub fn validate(&self) -> Result<MeshQuality, HyperbolicError> {
        let q = self.quality();
        for t in 0..self.triangles.len() {
            if signed_area(self.corners(t)) <= 1e-14 * self.h * self.h / self.weight(self.corners(t)[0]) {
                return Err(HyperbolicError::DegenerateTriangle(t));
            }
        }
        if q.min_angle_deg <= MIN_ANGLE_DEG {
            return Err(HyperbolicError::InvalidParameters(format!("minimum angle {:.2} deg", q.min_angle_deg)));
        }
        if let Domain::Disc { radius } = self.domain {
            if q.max_distance > radius + self.h || q.boundary_deviation > self.h {
                return Err(HyperbolicError::InvalidParameters("vertices outside the ball".into()));
            }
        }
        Ok(q)
    }

    pub fn edge_table(&self) -> EdgeTable {
        let mut keyed: Vec<([usize; 2], usize, usize)> = Vec::with_capacity(3 * self.triangles.len());
        for (t, tri) in self.triangles.iter().enumerate() {
            for i in 0..3 {
                let (a, b) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
                keyed.push(([a.min(b), a.max(b)], t, i));
            }
        }
        keyed.sort_unstable();
        let mut edges: Vec<[usize; 2]> = Vec::new();
        let mut uses: Vec<usize> = Vec::new();
        let mut tri_edges = vec![[(0usize, 0.0f64); 3]; self.triangles.len()];
        for (e, t, i) in keyed {
            if edges.last() != Some(&e) {
                edges.push(e);
                uses.push(0);
            }
            let id = edges.len() - 1;
            *uses.last_mut().expect("pushed") += 1;
            let tri = self.triangles[t];
            let sign = if tri[(i + 1) % 3] == e[0] { 1.0 } else { -1.0 };
            tri_edges[t][i] = (id, sign);
        }
        EdgeTable { boundary: uses.iter().map(|&u| u == 1).collect(), edges, tri_edges }
    }

    pub fn write_cache(&self, path: &Path) -> Result<(), HyperbolicError> {
        let io = |e: std::io::Error| HyperbolicError::Cache(e.to_string());
        let mut buf = Vec::with_capacity(64 + 16 * self.vertices.len() + 24 * self.triangles.len());
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        buf.push(match self.model {
            Model::Hyperbolic => 0,
            Model::Euclidean => 1,
        });
        let (kind, size) = match self.domain {
            Domain::Disc { radius } => (0u8, radius),
            Domain::Square { side } => (1u8, side),
        };
        buf.push(kind);
        buf.extend_from_slice(&size.to_le_bytes());
        buf.extend_from_slice(&self.h.to_le_bytes());
        buf.extend_from_slice(&(self.vertices.len() as u64).to_le_bytes());
        buf.extend_from_slice(&(self.triangles.len() as u64).to_le_bytes());
        for v in &self.vertices {
            buf.extend_from_slice(&v[0].to_le_bytes());
            buf.extend_from_slice(&v[1].to_le_bytes());
        }
        for t in &self.triangles {
            for &i in t {
                buf.extend_from_slice(&(i as u64).to_le_bytes());
            }
        }
        buf.extend(self.boundary.iter().map(|&b| u8::from(b)));
        std::fs::File::create(path).and_then(|mut f| f.write_all(&buf)).map_err(io)
    }

    pub fn read_cache(path: &Path) -> Result<Self, HyperbolicError> {
        let bad = |m: &str| HyperbolicError::Cache(m.to_string());
        let mut buf = Vec::new();
        std::fs::File::open(path).and_then(|mut f| f.read_to_end(&mut buf)).map_err(|e| bad(&e.to_string()))?;
        let mut cur = Cursor { buf: &buf, pos: 0 };
        if cur.take(8).ok_or_else(|| bad("truncated header"))? != MAGIC {
            return Err(bad("bad magic"));
        }
        let version = u32::from_le_bytes(cur.array().ok_or_else(|| bad("truncated header"))?);
        if version != CACHE_VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let model = match cur.take(1).ok_or_else(|| bad("truncated header"))?[0] {
            0 => Model::Hyperbolic,
            1 => Model::Euclidean,
            m => return Err(bad(&format!("unknown model {m}"))),
        };
        let kind = cur.take(1).ok_or_else(|| bad("truncated header"))?[0];
        let size = cur.f64().ok_or_else(|| bad("truncated header"))?;
        let domain = match kind {
            0 => Domain::Disc { radius: size },
            1 => Domain::Square { side: size },
            d => return Err(bad(&format!("unknown domain {d}"))),
        };
        let h = cur.f64().ok_or_else(|| bad("truncated header"))?;
        let nv = cur.u64().ok_or_else(|| bad("truncated header"))? as usize;
        let nt = cur.u64().ok_or_else(|| bad("truncated header"))? as usize;
        if buf.len() != cur.pos + 16 * nv + 24 * nt + nv {
            return Err(bad("size does not match header"));
        }
        let vertices = (0..nv).map(|_| [cur.f64().expect("sized"), cur.f64().expect("sized")]).collect();
        let mut triangles = Vec::with_capacity(nt);
        for _ in 0..nt {
            let t = [0; 3].map(|_: usize| cur.u64().expect("sized") as usize);
            if t.iter().any(|&i| i >= nv) {
                return Err(bad("triangle index out of range"));
            }
            triangles.push(t);
        }
        let boundary = cur.take(nv).expect("sized").iter().map(|&b| b != 0).collect();
        Ok(Self { model, domain, h, vertices, triangles, boundary })
    }
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let s = self.buf.get(self.pos..self.pos + n)?;
        self.pos += n;
        Some(s)
    }

    fn array<const N: usize>(&mut self) -> Option<[u8; N]> {
        self.take(N).map(|s| s.try_into().expect("length N"))
    }

    fn f64(&mut self) -> Option<f64> {
        self.array().map(f64::from_le_bytes)
    }

    fn u64(&mut self) -> Option<u64> {
        self.array().map(u64::from_le_bytes)
    }
}
