//! Simple polygons: measure-theoretic primitives and exact disk clipping.

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// A simple, positively oriented polygon given by its vertex loop.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
}

impl Polygon {
    /// Validates and wraps a counterclockwise vertex loop.
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidShape(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidShape("non-finite vertex coordinate".into()));
        }
        let area = signed_area(&vertices);
        if area.abs() < 1e-14 {
            return Err(Error::Degenerate("polygon has zero area".into()));
        }
        if area < 0.0 {
            return Err(Error::InvalidShape(
                "polygon is clockwise; expected positive orientation".into(),
            ));
        }
        if !is_simple(&vertices) {
            return Err(Error::InvalidShape("polygon is self-intersecting".into()));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Enclosed area by the shoelace formula (exact for the polygon).
    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Sum of edge lengths.
    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| hypot2(a, b)).sum()
    }

    /// Area centroid.
    pub fn centroid(&self) -> [f64; 2] {
        let mut cx = 0.0;
        let mut cy = 0.0;
        for (a, b) in self.edges() {
            let w = a[0] * b[1] - b[0] * a[1];
            cx += (a[0] + b[0]) * w;
            cy += (a[1] + b[1]) * w;
        }
        let a6 = 6.0 * self.area();
        [cx / a6, cy / a6]
    }

    pub fn edges(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Translated copy; pure vertex arithmetic.
    pub fn translated(&self, v: [f64; 2]) -> Self {
        Self {
            vertices: self
                .vertices
                .iter()
                .map(|p| [p[0] + v[0], p[1] + v[1]])
                .collect(),
        }
    }

    /// Scaled copy about the origin.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            vertices: self.vertices.iter().map(|p| [p[0] * s, p[1] * s]).collect(),
        }
    }

    /// Rotated copy about the origin.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            vertices: self
                .vertices
                .iter()
                .map(|p| [c * p[0] - s * p[1], s * p[0] + c * p[1]])
                .collect(),
        }
    }

    /// Per-edge Gauss–Legendre boundary rule with outward unit normals.
    ///
    /// `n` is the total node budget; each edge receives ceil(n / edges)
    /// points, so the weight sum reproduces the perimeter exactly.
    pub fn boundary_rule(&self, n: usize) -> (Vec<[f64; 2]>, Vec<[f64; 2]>, Vec<f64>) {
        let m = self.vertices.len();
        let q = n.div_ceil(m).max(1);
        let (gx, gw) = gauss_legendre(q);
        let mut points = Vec::with_capacity(m * q);
        let mut normals = Vec::with_capacity(m * q);
        let mut weights = Vec::with_capacity(m * q);
        for (a, b) in self.edges() {
            let ex = b[0] - a[0];
            let ey = b[1] - a[1];
            let len = (ex * ex + ey * ey).sqrt();
            // outward normal of a CCW loop
            let nx = ey / len;
            let ny = -ex / len;
            for (x, w) in gx.iter().zip(&gw) {
                let t = 0.5 * (x + 1.0);
                points.push([a[0] + t * ex, a[1] + t * ey]);
                normals.push([nx, ny]);
                weights.push(0.5 * len * w);
            }
        }
        (points, normals, weights)
    }

    /// Exact area of the intersection with the disk of radius `r` at `c`.
    ///
    /// Green's theorem accumulated edge by edge: chord sub-segments inside
    /// the disk contribute triangle areas, sub-segments outside contribute
    /// the circular sector between the same rays.
    pub fn disk_intersection_area(&self, c: [f64; 2], r: f64) -> f64 {
        let mut total = 0.0;
        for (a, b) in self.edges() {
            let pa = [a[0] - c[0], a[1] - c[1]];
            let pb = [b[0] - c[0], b[1] - c[1]];
            total += edge_disk_contribution(pa, pb, r);
        }
        total
    }
}

fn signed_area(vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        s += a[0] * b[1] - b[0] * a[1];
    }
    0.5 * s
}

fn hypot2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (b[0] - a[0]).hypot(b[1] - a[1])
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Signed Green's contribution of one edge to the polygon/disk overlap.
fn edge_disk_contribution(a: [f64; 2], b: [f64; 2], r: f64) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    // |a + t d|^2 = r^2  =>  |d|^2 t^2 + 2 (a.d) t + |a|^2 - r^2 = 0
    let qa = d[0] * d[0] + d[1] * d[1];
    if qa == 0.0 {
        return 0.0;
    }
    let qb = a[0] * d[0] + a[1] * d[1];
    let qc = a[0] * a[0] + a[1] * a[1] - r * r;
    let disc = qb * qb - qa * qc;
    let mut cuts = [0.0f64, 1.0, 1.0, 1.0];
    let mut ncuts = 1;
    if disc > 0.0 {
        let sq = disc.sqrt();
        for t in [(-qb - sq) / qa, (-qb + sq) / qa] {
            if t > 0.0 && t < 1.0 {
                cuts[ncuts] = t;
                ncuts += 1;
            }
        }
        cuts[ncuts] = 1.0;
        ncuts += 1;
    } else {
        cuts[1] = 1.0;
        ncuts = 2;
    }
    let at = |t: f64| [a[0] + t * d[0], a[1] + t * d[1]];
    let mut total = 0.0;
    for w in cuts[..ncuts].windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 <= t0 {
            continue;
        }
        let p0 = at(t0);
        let p1 = at(t1);
        let pm = at(0.5 * (t0 + t1));
        if pm[0] * pm[0] + pm[1] * pm[1] <= r * r {
            total += 0.5 * cross(p0, p1);
        } else {
            let ang = cross(p0, p1).atan2(p0[0] * p1[0] + p0[1] * p1[1]);
            total += 0.5 * r * r * ang;
        }
    }
    total
}

/// Simplicity test: no two non-adjacent edges intersect. Edges are hashed
/// into a uniform grid so dense loops stay near-linear.
fn is_simple(vertices: &[[f64; 2]]) -> bool {
    let n = vertices.len();
    let edge = |i: usize| (vertices[i], vertices[(i + 1) % n]);
    // consecutive duplicate vertices degenerate an edge
    for i in 0..n {
        let (a, b) = edge(i);
        if a == b {
            return false;
        }
    }
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    let mut total_len = 0.0;
    for i in 0..n {
        let (a, b) = edge(i);
        xmin = xmin.min(a[0]);
        xmax = xmax.max(a[0]);
        ymin = ymin.min(a[1]);
        ymax = ymax.max(a[1]);
        total_len += hypot2(a, b);
    }
    let cell = (total_len / n as f64).max(1e-12 * (xmax - xmin + ymax - ymin).max(1e-300));
    let gx = |x: f64| ((x - xmin) / cell).floor() as i64;
    let gy = |y: f64| ((y - ymin) / cell).floor() as i64;
    let mut buckets: std::collections::HashMap<(i64, i64), Vec<usize>> =
        std::collections::HashMap::new();
    for i in 0..n {
        let (a, b) = edge(i);
        let (x0, x1) = (gx(a[0].min(b[0])), gx(a[0].max(b[0])));
        let (y0, y1) = (gy(a[1].min(b[1])), gy(a[1].max(b[1])));
        for cx in x0..=x1 {
            for cy in y0..=y1 {
                buckets.entry((cx, cy)).or_default().push(i);
            }
        }
    }
    let adjacent = |i: usize, j: usize| {
        let d = (i as i64 - j as i64).rem_euclid(n as i64);
        d == 1 || d == n as i64 - 1
    };
    for ids in buckets.values() {
        for (k, &i) in ids.iter().enumerate() {
            for &j in &ids[k + 1..] {
                if i == j || adjacent(i, j) {
                    continue;
                }
                let (a, b) = edge(i);
                let (c, d) = edge(j);
                if segments_intersect(a, b, c, d) {
                    return false;
                }
            }
        }
    }
    true
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}
