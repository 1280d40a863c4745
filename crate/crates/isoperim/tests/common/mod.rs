//! Independent oracles for the integration suites.
//!
//! Everything here recomputes the quantities under test through a different
//! route than the library: closed forms per edge-wedge, grid counting,
//! dense polar quadrature, and finite differences. These functions must not
//! call into the boundary-quadrature implementation they check.

#![allow(dead_code)]

use isoperim::geometry::{Polygon, ShapeRep};
use isoperim::point::Point;

pub const PI: f64 = std::f64::consts::PI;

// Frozen golden values for the area-π square and regular hexagon, computed
// from the closed forms below and cross-checked by grid counting.
pub const SQUARE_PERIMETER: f64 = 7.089_815_403_622_064;
pub const SQUARE_DEFICIT: f64 = 0.806_630_096_442_477_3;
pub const SQUARE_GAMMA: f64 = 6.248_776_033_596_787;
pub const SQUARE_BETA_SQ: f64 = 0.841_039_370_025_276_5;
pub const SQUARE_ALPHA: f64 = 0.568_917_100_819_604_1;
pub const SQUARE_SP_SLACK: f64 = 0.025_302_949_150_269_094;

pub const HEX_PERIMETER: f64 = 6.597_816_664_747_606;
pub const HEX_DEFICIT: f64 = 0.314_631_357_568_019_96;
pub const HEX_GAMMA: f64 = 6.277_335_313_660_581;
pub const HEX_BETA_SQ: f64 = 0.320_481_351_087_025_25;
pub const HEX_ALPHA: f64 = 0.233_941_067_463_272_92;
pub const HEX_ASYMMETRY_AT_ORIGIN: f64 = 1.034_542_530_223_646_8;
pub const HEX_SP_SLACK: f64 = 0.004_310_215_636_951_165;

/// Fraenkel-only lower bound for the main constant, 32/(3π).
pub const MODE2_ALPHA_SQ_OVER_D: f64 = 3.395_305_452_627_100_7;

/// The area-π square as a polygon.
pub fn square_pi() -> ShapeRep {
    let h = PI.sqrt() / 2.0;
    ShapeRep::Polygon2D(Polygon::new(vec![[h, -h], [h, h], [-h, h], [-h, -h]]).unwrap())
}

/// The area-π regular hexagon.
pub fn hexagon_pi() -> ShapeRep {
    regular_ngon_pi(6)
}

/// Regular n-gon with area π (circumradius from the apothem closed form).
pub fn regular_ngon_pi(sides: usize) -> ShapeRep {
    let a = ngon_apothem(sides);
    let circum = a / (PI / sides as f64).cos();
    let verts = (0..sides)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / sides as f64 + PI / sides as f64;
            [circum * t.cos(), circum * t.sin()]
        })
        .collect();
    ShapeRep::Polygon2D(Polygon::new(verts).unwrap())
}

/// Apothem of the regular n-gon with area π.
pub fn ngon_apothem(sides: usize) -> f64 {
    (PI / (sides as f64 * (PI / sides as f64).tan())).sqrt()
}

/// Closed-form perimeter of the regular n-gon with area π:
/// P = 2·√(π·N·tan(π/N)).
pub fn ngon_perimeter(sides: usize) -> f64 {
    2.0 * (PI * sides as f64 * (PI / sides as f64).tan()).sqrt()
}

/// Closed-form Riesz potential of the regular area-π n-gon at its center:
/// 2·N·a·ln(sec(π/N) + tan(π/N)).
pub fn ngon_gamma(sides: usize) -> f64 {
    let a = ngon_apothem(sides);
    let t = PI / sides as f64;
    2.0 * sides as f64 * a * (1.0 / t.cos() + t.tan()).ln()
}

/// Closed-form |E Δ B_1| for the regular area-π n-gon and the unit disk at
/// the center: 2N circular segments beyond the apothem.
pub fn ngon_sym_diff_unit_ball(sides: usize) -> f64 {
    let a = ngon_apothem(sides);
    2.0 * sides as f64 * (a.acos() - a * (1.0 - a * a).sqrt())
}

/// Exact ∫_E |x−y|⁻¹ dx over a polygon: signed apex-wedge closed form,
/// d·asinh per edge. Valid for y inside, outside, or near the boundary
/// (not on an edge line segment itself).
pub fn polygon_riesz_volume(poly: &Polygon, y: [f64; 2]) -> f64 {
    let mut total = 0.0;
    for (a, b) in poly.edges() {
        let ax = a[0] - y[0];
        let ay = a[1] - y[1];
        let bx = b[0] - y[0];
        let by = b[1] - y[1];
        let c = ax * by - ay * bx;
        if c == 0.0 {
            continue;
        }
        let ex = bx - ax;
        let ey = by - ay;
        let len = (ex * ex + ey * ey).sqrt();
        let (ux, uy) = (ex / len, ey / len);
        let ta = ax * ux + ay * uy;
        let tb = bx * ux + by * uy;
        let d = c.abs() / len;
        total += c.signum() * d * ((tb / d).asinh() - (ta / d).asinh());
    }
    total
}

/// Dense polar-quadrature Riesz oracle for a convex polygon and interior y:
/// ∫_E |x−y|⁻¹ dx = ∫ ρ(θ) dθ with ρ the ray length to the boundary.
pub fn polygon_riesz_polar(poly: &Polygon, y: [f64; 2], n: usize) -> f64 {
    let mut sum = 0.0;
    for j in 0..n {
        let t = 2.0 * PI * j as f64 / n as f64;
        let (s, c) = t.sin_cos();
        let mut rho = f64::MAX;
        for (a, b) in poly.edges() {
            // ray y + r(c,s) against segment ab
            let ex = b[0] - a[0];
            let ey = b[1] - a[1];
            let det = c * (-ey) - s * (-ex);
            if det.abs() < 1e-15 {
                continue;
            }
            let qx = a[0] - y[0];
            let qy = a[1] - y[1];
            let r = (qx * (-ey) + ex * qy) / det;
            let u = (c * qy - s * qx) / det;
            if r > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&u) {
                rho = rho.min(r);
            }
        }
        assert!(rho < f64::MAX, "polar oracle needs y inside the polygon");
        sum += rho;
    }
    sum * 2.0 * PI / n as f64
}

/// Grid-counting area of |E Δ B_r(c)| over a bounding box; O(h) accurate,
/// a coarse-tolerance cross-check for the exact clipping routes.
pub fn grid_sym_diff(shape: &ShapeRep, center: [f64; 2], radius: f64, cells: usize) -> f64 {
    let (mut lo, mut hi) = ([f64::MAX; 2], [f64::MIN; 2]);
    let mut grow = |x: f64, y: f64| {
        lo[0] = lo[0].min(x);
        lo[1] = lo[1].min(y);
        hi[0] = hi[0].max(x);
        hi[1] = hi[1].max(y);
    };
    match shape {
        ShapeRep::Polygon2D(p) => {
            for v in p.vertices() {
                grow(v[0], v[1]);
            }
        }
        _ => {
            grow(-3.0, -3.0);
            grow(3.0, 3.0);
        }
    }
    grow(center[0] - radius, center[1] - radius);
    grow(center[0] + radius, center[1] + radius);
    let h = ((hi[0] - lo[0]).max(hi[1] - lo[1]) / cells as f64) * 1.0000001;
    let nx = ((hi[0] - lo[0]) / h).ceil() as usize + 1;
    let ny = ((hi[1] - lo[1]) / h).ceil() as usize + 1;
    let mut area = 0.0;
    for i in 0..nx {
        let x = lo[0] + (i as f64 + 0.5) * h;
        for j in 0..ny {
            let y = lo[1] + (j as f64 + 0.5) * h;
            let in_ball = (x - center[0]).powi(2) + (y - center[1]).powi(2) <= radius * radius;
            let in_shape = point_in_shape(shape, x, y);
            if in_ball != in_shape {
                area += h * h;
            }
        }
    }
    area
}

fn point_in_shape(shape: &ShapeRep, x: f64, y: f64) -> bool {
    match shape {
        ShapeRep::Polygon2D(p) => {
            // even-odd ray crossing
            let v = p.vertices();
            let mut inside = false;
            let n = v.len();
            for i in 0..n {
                let (a, b) = (v[i], v[(i + 1) % n]);
                if (a[1] > y) != (b[1] > y) {
                    let t = (y - a[1]) / (b[1] - a[1]);
                    if x < a[0] + t * (b[0] - a[0]) {
                        inside = !inside;
                    }
                }
            }
            inside
        }
        ShapeRep::RadialGraph2D(f) => {
            let r = x.hypot(y);
            r <= f.radius(y.atan2(x))
        }
        ShapeRep::RadialGraph3D(_) => unimplemented!("2D oracle"),
    }
}

/// Numeric outward normal of θ ↦ (1+u(θ))·e(θ): central-difference tangent
/// rotated by −90° and normalized.
pub fn fd_normal_2d(radius: impl Fn(f64) -> f64, theta: f64) -> Point {
    let h = 1e-6;
    let at = |t: f64| {
        let r = radius(t);
        [r * t.cos(), r * t.sin()]
    };
    let p = at(theta + h);
    let m = at(theta - h);
    let tx = (p[0] - m[0]) / (2.0 * h);
    let ty = (p[1] - m[1]) / (2.0 * h);
    let n = (tx * tx + ty * ty).sqrt();
    [ty / n, -tx / n, 0.0]
}

/// Relative difference helper.
pub fn rel_err(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1e-300)
}
