//! Small fixed-size vector helpers.
//!
//! Points live in `[f64; 3]` regardless of the ambient dimension; planar
//! shapes keep the third component at zero so that dot products and norms
//! work uniformly for n = 2 and n = 3.

/// A point or vector in R^2 or R^3 (third component zero in the plane).
pub type Point = [f64; 3];

pub const ORIGIN: Point = [0.0, 0.0, 0.0];

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn scale(a: Point, s: f64) -> Point {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn norm(a: Point) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    norm(sub(a, b))
}

#[inline]
pub fn normalize(a: Point) -> Point {
    let n = norm(a);
    scale(a, 1.0 / n)
}

/// Embeds a slice of length 2 or 3 into a `Point`.
pub fn from_slice(v: &[f64]) -> Point {
    match v.len() {
        2 => [v[0], v[1], 0.0],
        3 => [v[0], v[1], v[2]],
        _ => panic!("point slice must have length 2 or 3"),
    }
}

/// Returns the first `dim` coordinates as a vector.
pub fn to_vec(p: Point, dim: usize) -> Vec<f64> {
    p[..dim].to_vec()
}

/// Volume of the unit ball in dimension `n` (n = 2 or 3).
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        2 => std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI / 3.0,
        _ => panic!("dimension must be 2 or 3"),
    }
}

/// Perimeter of the unit ball in dimension `n`, i.e. n * omega_n.
pub fn unit_ball_perimeter(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}
