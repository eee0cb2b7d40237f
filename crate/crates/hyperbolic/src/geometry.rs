//! Poincaré disc metric `g = λ(z)²|dz|²` with `λ = 2/(1 − |z|²)`, the
//! Cayley map to the upper half-plane, and quadrature rules.

use nalgebra::Complex;

pub type Point = [f64; 2];

/// Conformal factor `λ(z)`; the metric is `λ² (da² + db²)`.
pub fn conformal_factor(z: Point) -> f64 {
    2.0 / (1.0 - (z[0] * z[0] + z[1] * z[1]))
}

/// Geodesic distance from the origin, `2 artanh |z|`.
pub fn distance_from_origin(z: Point) -> f64 {
    2.0 * (z[0] * z[0] + z[1] * z[1]).sqrt().atanh()
}

/// Euclidean disc radius of the geodesic circle of radius `rho`.
pub fn disc_radius(rho: f64) -> f64 {
    (rho / 2.0).tanh()
}

/// Cayley map `w = i(1 + z)/(1 − z)` onto the upper half-plane, and `w'(z)`.
pub fn cayley(z: Point) -> (Complex<f64>, Complex<f64>) {
    let z = Complex::new(z[0], z[1]);
    let one = Complex::new(1.0, 0.0);
    let i = Complex::new(0.0, 1.0);
    let w = i * (one + z) / (one - z);
    let dw = 2.0 * i / ((one - z) * (one - z));
    (w, dw)
}

/// Degree-5 seven-point rule on a triangle: barycentric points and weights
/// summing to one.
pub const DUNAVANT7: [([f64; 3], f64); 7] = {
    const A1: f64 = 0.059_715_871_789_770;
    const B1: f64 = 0.470_142_064_105_115;
    const W1: f64 = 0.132_394_152_788_506;
    const A2: f64 = 0.797_426_985_353_087;
    const B2: f64 = 0.101_286_507_323_456;
    const W2: f64 = 0.125_939_180_544_827;
    [
        ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 0.225),
        ([A1, B1, B1], W1),
        ([B1, A1, B1], W1),
        ([B1, B1, A1], W1),
        ([A2, B2, B2], W2),
        ([B2, A2, B2], W2),
        ([B2, B2, A2], W2),
    ]
};

/// Five-point Gauss-Legendre rule on `[0, 1]`.
pub const GAUSS5: [(f64, f64); 5] = [
    (0.046_910_077_030_668, 0.118_463_442_528_095),
    (0.230_765_344_947_158, 0.239_314_335_249_683),
    (0.5, 0.284_444_444_444_444),
    (0.769_234_655_052_842, 0.239_314_335_249_683),
    (0.953_089_922_969_332, 0.118_463_442_528_095),
];

pub fn barycentric_point(p: [Point; 3], b: [f64; 3]) -> Point {
    [b[0] * p[0][0] + b[1] * p[1][0] + b[2] * p[2][0], b[0] * p[0][1] + b[1] * p[1][1] + b[2] * p[2][1]]
}

/// Signed area, positive for counter-clockwise vertices.
pub fn signed_area(p: [Point; 3]) -> f64 {
    0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]))
}

/// Gradients of the barycentric coordinates.
pub fn barycentric_gradients(p: [Point; 3]) -> [[f64; 2]; 3] {
    let a2 = 2.0 * signed_area(p);
    let mut g = [[0.0; 2]; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        g[i] = [(p[j][1] - p[k][1]) / a2, (p[k][0] - p[j][0]) / a2];
    }
    g
}

/// Interior angles in degrees.
pub fn angles_deg(p: [Point; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let u = [p[j][0] - p[i][0], p[j][1] - p[i][1]];
        let v = [p[k][0] - p[i][0], p[k][1] - p[i][1]];
        let c = (u[0] * v[0] + u[1] * v[1]) / ((u[0] * u[0] + u[1] * u[1]).sqrt() * (v[0] * v[0] + v[1] * v[1]).sqrt());
        out[i] = c.clamp(-1.0, 1.0).acos().to_degrees();
    }
    out
}
