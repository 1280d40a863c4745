//! Shape representations and measure-theoretic primitives.
//!
//! Three concrete representations of a set of finite perimeter are
//! supported: a simple polygon, a planar radial graph with Fourier modes,
//! and a radial graph over the unit sphere on a lat–long grid. Everything
//! downstream (deficit, asymmetry indices, Riesz potentials) is built from
//! the boundary quadratures and set operations defined here.

pub mod polygon;
pub mod radial2d;
pub mod radial3d;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{self, Point};

pub use polygon::Polygon;
pub use radial2d::Fourier;
pub use radial3d::SphereGrid;

/// Sampled reduced boundary: points, outward unit normals, weights.
#[derive(Debug, Clone)]
pub struct BoundaryQuadrature {
    pub dim: usize,
    pub points: Vec<Point>,
    pub normals: Vec<Point>,
    pub weights: Vec<f64>,
}

impl BoundaryQuadrature {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Σ w, which approximates the perimeter.
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Σ w·ν, zero for a closed boundary.
    pub fn weighted_normal_sum(&self) -> Point {
        let mut s = [0.0; 3];
        for (n, w) in self.normals.iter().zip(&self.weights) {
            s[0] += w * n[0];
            s[1] += w * n[1];
            s[2] += w * n[2];
        }
        s
    }

    /// Largest deviation of |ν| from 1.
    pub fn max_normal_defect(&self) -> f64 {
        self.normals
            .iter()
            .map(|n| (point::norm(*n) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Distance from `y` to the nearest node.
    pub fn min_node_distance(&self, y: Point) -> f64 {
        self.points
            .iter()
            .map(|p| point::dist(*p, y))
            .fold(f64::MAX, f64::min)
    }
}

/// A ball B_r(y), usually volume-matched to a shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSpec {
    pub center: Point,
    pub radius: f64,
}

impl BallSpec {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if radius.is_nan() || radius <= 0.0 {
            return Err(Error::InvalidShape(format!("ball radius {radius} <= 0")));
        }
        Ok(Self { center, radius })
    }

    /// The ball with |B_r| = |E| centered at `center`.
    pub fn volume_matched(shape: &ShapeRep, center: Point) -> Self {
        Self {
            center,
            radius: shape.volume_radius(),
        }
    }

    pub fn volume(&self, dim: usize) -> f64 {
        point::unit_ball_volume(dim) * self.radius.powi(dim as i32)
    }
}

/// Conversion controls for translations that change representation.
#[derive(Debug, Clone, Copy)]
pub struct TranslateOptions {
    /// Boundary sample count for the polygonal conversion; `None` picks a
    /// dense default.
    pub resolution: Option<usize>,
    /// Permitted volume/perimeter drift introduced by the conversion.
    pub tol: f64,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        Self {
            resolution: None,
            tol: 1e-8,
        }
    }
}

/// A discretized set of finite perimeter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawShape", into = "RawShape")]
pub enum ShapeRep {
    Polygon2D(Polygon),
    RadialGraph2D(Fourier),
    RadialGraph3D(SphereGrid),
}

impl ShapeRep {
    pub fn dim(&self) -> usize {
        match self {
            ShapeRep::Polygon2D(_) | ShapeRep::RadialGraph2D(_) => 2,
            ShapeRep::RadialGraph3D(_) => 3,
        }
    }

    /// Lebesgue measure |E|.
    pub fn volume(&self) -> f64 {
        match self {
            ShapeRep::Polygon2D(p) => p.area(),
            ShapeRep::RadialGraph2D(f) => f.area(),
            ShapeRep::RadialGraph3D(g) => g.volume(),
        }
    }

    /// Perimeter P(E).
    pub fn perimeter(&self) -> f64 {
        match self {
            ShapeRep::Polygon2D(p) => p.perimeter(),
            ShapeRep::RadialGraph2D(f) => f.arc_length(),
            ShapeRep::RadialGraph3D(g) => g.surface_area(),
        }
    }

    /// Radius of the volume-matched ball, (|E|/ω_n)^(1/n).
    pub fn volume_radius(&self) -> f64 {
        (self.volume() / point::unit_ball_volume(self.dim())).powf(1.0 / self.dim() as f64)
    }

    /// Volume centroid (1/|E|)∫_E x dx.
    pub fn barycenter(&self) -> Point {
        match self {
            ShapeRep::Polygon2D(p) => {
                let c = p.centroid();
                [c[0], c[1], 0.0]
            }
            ShapeRep::RadialGraph2D(f) => {
                let c = f.centroid();
                [c[0], c[1], 0.0]
            }
            ShapeRep::RadialGraph3D(g) => g.centroid(),
        }
    }

    /// Boundary quadrature with roughly `n` nodes (`n >= 16`).
    ///
    /// Polygons get per-edge Gauss points, planar radial graphs a uniform
    /// composite rule; 3D radial graphs always use their native grid.
    pub fn boundary_quadrature(&self, n: usize) -> Result<BoundaryQuadrature> {
        if n < 16 {
            return Err(Error::ResolutionTooLow { got: n, min: 16 });
        }
        let (pts2, nrm2, w) = match self {
            ShapeRep::Polygon2D(p) => p.boundary_rule(n),
            ShapeRep::RadialGraph2D(f) => f.boundary_rule(n),
            ShapeRep::RadialGraph3D(g) => {
                let (points, normals, weights) = g.boundary_rule();
                return Ok(BoundaryQuadrature {
                    dim: 3,
                    points,
                    normals,
                    weights,
                });
            }
        };
        Ok(BoundaryQuadrature {
            dim: 2,
            points: pts2.into_iter().map(|p| [p[0], p[1], 0.0]).collect(),
            normals: nrm2.into_iter().map(|p| [p[0], p[1], 0.0]).collect(),
            weights: w,
        })
    }

    /// Rescales about the origin so that |E| = ω_n; returns the factor λ.
    pub fn rescale_to_unit_volume(&self) -> (ShapeRep, f64) {
        let lambda = (point::unit_ball_volume(self.dim()) / self.volume())
            .powf(1.0 / self.dim() as f64);
        (self.scaled(lambda), lambda)
    }

    /// Dilation about the origin by `s > 0`; exact in every representation.
    pub fn scaled(&self, s: f64) -> ShapeRep {
        match self {
            ShapeRep::Polygon2D(p) => ShapeRep::Polygon2D(p.scaled(s)),
            ShapeRep::RadialGraph2D(f) => ShapeRep::RadialGraph2D(f.scaled(s)),
            ShapeRep::RadialGraph3D(g) => ShapeRep::RadialGraph3D(g.scaled(s)),
        }
    }

    /// Rotation about the origin (2D representations only).
    pub fn rotated(&self, angle: f64) -> Result<ShapeRep> {
        match self {
            ShapeRep::Polygon2D(p) => Ok(ShapeRep::Polygon2D(p.rotated(angle))),
            ShapeRep::RadialGraph2D(f) => Ok(ShapeRep::RadialGraph2D(f.rotated(angle))),
            ShapeRep::RadialGraph3D(_) => Err(Error::InvalidConfig(
                "rotation is only implemented for planar shapes".into(),
            )),
        }
    }

    /// Translation by `v` with default conversion options.
    pub fn translate(&self, v: Point) -> Result<ShapeRep> {
        self.translate_with(v, TranslateOptions::default())
    }

    /// Translation by `v`.
    ///
    /// Polygons translate exactly. A planar radial graph is converted to a
    /// dense polygon first (the representation is origin-anchored); a 3D
    /// radial graph is re-sampled as a radial graph about the origin. Both
    /// conversions are checked against the requested tolerance and rejected
    /// when the volume or perimeter drift exceeds it.
    pub fn translate_with(&self, v: Point, opts: TranslateOptions) -> Result<ShapeRep> {
        match self {
            ShapeRep::Polygon2D(p) => Ok(ShapeRep::Polygon2D(p.translated([v[0], v[1]]))),
            ShapeRep::RadialGraph2D(f) => {
                let m = opts.resolution.unwrap_or(1 << 16);
                let poly = Polygon::new(f.polygonize(m))?;
                let dv = (poly.area() - f.area()).abs();
                let dp = (poly.perimeter() - f.arc_length()).abs();
                let achieved = dv.max(dp);
                if achieved > opts.tol {
                    return Err(Error::ConversionAccuracy {
                        achieved,
                        tol: opts.tol,
                    });
                }
                Ok(ShapeRep::Polygon2D(poly.translated([v[0], v[1]])))
            }
            ShapeRep::RadialGraph3D(g) => {
                let t = g.translated_refit(v)?;
                let dv = (t.volume() - g.volume()).abs();
                let dp = (t.surface_area() - g.surface_area()).abs();
                let achieved = dv.max(dp);
                if achieved > opts.tol {
                    return Err(Error::ConversionAccuracy {
                        achieved,
                        tol: opts.tol,
                    });
                }
                Ok(ShapeRep::RadialGraph3D(t))
            }
        }
    }

    /// |E Δ B_r(y)|.
    ///
    /// Polygon–disk overlap is clipped exactly; radial graphs integrate the
    /// per-ray interval symmetric difference over directions.
    pub fn sym_diff_with_ball(&self, ball: &BallSpec) -> f64 {
        match self {
            ShapeRep::Polygon2D(p) => {
                let r = ball.radius;
                let inter = p.disk_intersection_area([ball.center[0], ball.center[1]], r);
                p.area() + std::f64::consts::PI * r * r - 2.0 * inter
            }
            ShapeRep::RadialGraph2D(f) => RadialRays::planar(f).sym_diff(ball),
            ShapeRep::RadialGraph3D(g) => RadialRays::spherical(g).sym_diff(ball),
        }
    }
}

/// Precomputed boundary rays of a radial graph: directions, radii and
/// angular weights. Lets center searches evaluate many symmetric
/// differences without resampling the graph.
#[derive(Debug, Clone)]
pub struct RadialRays {
    dim: usize,
    dirs: Vec<Point>,
    radii: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialRays {
    pub fn planar(f: &Fourier) -> Self {
        let n = (2 * f.dense_n()).max(8192);
        let mut dirs = Vec::with_capacity(n);
        let mut radii = Vec::with_capacity(n);
        let w = 2.0 * std::f64::consts::PI / n as f64;
        for j in 0..n {
            let t = j as f64 * w;
            dirs.push([t.cos(), t.sin(), 0.0]);
            radii.push(f.radius(t));
        }
        Self {
            dim: 2,
            dirs,
            radii,
            weights: vec![w; n],
        }
    }

    pub fn spherical(g: &SphereGrid) -> Self {
        let (nodes, gw) = crate::quadrature::gauss_legendre(g.nlat());
        let wl = 2.0 * std::f64::consts::PI / g.nlon() as f64;
        let mut dirs = Vec::with_capacity(g.nlat() * g.nlon());
        let mut radii = Vec::with_capacity(g.nlat() * g.nlon());
        let mut weights = Vec::with_capacity(g.nlat() * g.nlon());
        for i in 0..g.nlat() {
            let x = nodes[i];
            let s = (1.0 - x * x).sqrt();
            for j in 0..g.nlon() {
                let lam = wl * j as f64;
                dirs.push([s * lam.cos(), s * lam.sin(), x]);
                radii.push(1.0 + g.value(i, j));
                weights.push(gw[i] * wl);
            }
        }
        Self {
            dim: 3,
            dirs,
            radii,
            weights,
        }
    }

    /// |E Δ B_r(y)| by per-ray interval comparison.
    pub fn sym_diff(&self, ball: &BallSpec) -> f64 {
        let mut total = 0.0;
        for ((dir, re), w) in self.dirs.iter().zip(&self.radii).zip(&self.weights) {
            total += w * ray_sym_diff(*re, *dir, ball.center, ball.radius, self.dim);
        }
        total
    }
}

impl ShapeRep {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("shape serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<ShapeRep> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Radial density of the symmetric difference along one ray: compares the
/// set interval [0, re] with the chord of B_r(y) along the ray, in the
/// measure ρ^(n-1) dρ.
fn ray_sym_diff(re: f64, dir: Point, y: Point, r: f64, dim: usize) -> f64 {
    let mu = |a: f64, b: f64| -> f64 {
        if b <= a {
            return 0.0;
        }
        match dim {
            2 => 0.5 * (b * b - a * a),
            _ => (b * b * b - a * a * a) / 3.0,
        }
    };
    let proj = point::dot(dir, y);
    let disc = proj * proj - (point::dot(y, y) - r * r);
    let (blo, bhi) = if disc <= 0.0 {
        (0.0, 0.0)
    } else {
        let sq = disc.sqrt();
        ((proj - sq).max(0.0), (proj + sq).max(0.0))
    };
    let inter = mu(blo.max(0.0), bhi.min(re));
    mu(0.0, re) + mu(blo, bhi) - 2.0 * inter
}

// ---------------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum RawShape {
    #[serde(rename = "polygon2d")]
    Polygon2D { vertices: Vec<[f64; 2]> },
    #[serde(rename = "radial2d")]
    Radial2D { fourier: RawFourier },
    #[serde(rename = "radial3d")]
    Radial3D { grid: RawGrid },
}

#[derive(Serialize, Deserialize)]
struct RawFourier {
    a0: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawGrid {
    nlat: usize,
    nlon: usize,
    values: Vec<f64>,
}

impl From<ShapeRep> for RawShape {
    fn from(s: ShapeRep) -> RawShape {
        match s {
            ShapeRep::Polygon2D(p) => RawShape::Polygon2D {
                vertices: p.vertices().to_vec(),
            },
            ShapeRep::RadialGraph2D(f) => RawShape::Radial2D {
                fourier: RawFourier {
                    a0: f.a0,
                    a: f.a.clone(),
                    b: f.b.clone(),
                },
            },
            ShapeRep::RadialGraph3D(g) => RawShape::Radial3D {
                grid: RawGrid {
                    nlat: g.nlat(),
                    nlon: g.nlon(),
                    values: g.values().to_vec(),
                },
            },
        }
    }
}

impl TryFrom<RawShape> for ShapeRep {
    type Error = Error;

    fn try_from(raw: RawShape) -> Result<ShapeRep> {
        match raw {
            RawShape::Polygon2D { vertices } => Ok(ShapeRep::Polygon2D(Polygon::new(vertices)?)),
            RawShape::Radial2D { fourier } => Ok(ShapeRep::RadialGraph2D(Fourier::new(
                fourier.a0, fourier.a, fourier.b,
            )?)),
            RawShape::Radial3D { grid } => Ok(ShapeRep::RadialGraph3D(SphereGrid::new(
                grid.nlat,
                grid.nlon,
                grid.values,
            )?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_disk() -> ShapeRep {
        ShapeRep::RadialGraph2D(Fourier::zero())
    }

    #[test]
    fn quadrature_rejects_low_resolution() {
        let e = unit_disk().boundary_quadrature(8);
        assert!(matches!(e, Err(Error::ResolutionTooLow { .. })));
    }

    #[test]
    fn disk_quadrature_identities() {
        let q = unit_disk().boundary_quadrature(256).unwrap();
        assert!((q.total_weight() - 2.0 * PI).abs() < 1e-10);
        assert!(q.max_normal_defect() < 1e-12);
        let s = q.weighted_normal_sum();
        assert!(point::norm(s) < 1e-12);
        for (p, n) in q.points.iter().zip(&q.normals) {
            assert!(point::dist(*p, *n) < 1e-12); // ν = x/|x| on the circle
        }
    }

    #[test]
    fn sym_diff_ball_with_itself_vanishes() {
        let d = unit_disk();
        let b = BallSpec::new(point::ORIGIN, 1.0).unwrap();
        assert!(d.sym_diff_with_ball(&b).abs() < 1e-12);
    }

    #[test]
    fn rescale_reports_lambda() {
        let two = unit_disk().scaled(2.0);
        let (unit, lambda) = two.rescale_to_unit_volume();
        assert!((lambda - 0.5).abs() < 1e-12);
        assert!((unit.volume() - PI).abs() < 1e-10);
    }

    #[test]
    fn shape_json_round_trip() {
        let s = ShapeRep::RadialGraph2D(Fourier::new(0.01, vec![0.05], vec![0.0]).unwrap());
        let js = serde_json::to_string(&s).unwrap();
        assert!(js.contains("\"kind\":\"radial2d\""));
        let back = ShapeRep::from_json_str(&js).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn shape_json_rejects_invalid() {
        let js = r#"{"kind":"radial2d","fourier":{"a0":0.0,"a":[2.0],"b":[0.0]}}"#;
        assert!(ShapeRep::from_json_str(js).is_err());
    }
}
