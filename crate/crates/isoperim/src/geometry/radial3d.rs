//! Radial graphs over the unit sphere on a Gauss–Legendre × uniform grid.
//!
//! Row i of the grid sits at colatitude acos(x_i), where x_i is the i-th
//! Gauss–Legendre node on (-1, 1) in ascending order; column j sits at
//! longitude 2πj/nlon. With x = cos φ the surface measure is dσ = dx dλ, so
//! the GL weights integrate over the sphere directly.

use crate::error::{Error, Result};
use crate::point::Point;
use crate::quadrature::gauss_legendre;

#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    nlat: usize,
    nlon: usize,
    /// u values, row-major: values[i * nlon + j].
    values: Vec<f64>,
    /// GL nodes (x = cos colatitude) and weights, ascending.
    nodes: Vec<f64>,
    gl_weights: Vec<f64>,
}

impl SphereGrid {
    pub fn new(nlat: usize, nlon: usize, values: Vec<f64>) -> Result<Self> {
        if nlat < 4 || nlon < 8 {
            return Err(Error::ResolutionTooLow {
                got: nlat.min(nlon),
                min: 4,
            });
        }
        if values.len() != nlat * nlon {
            return Err(Error::InvalidShape(format!(
                "grid wants {} values, got {}",
                nlat * nlon,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidShape("non-finite grid value".into()));
        }
        if values.iter().any(|v| 1.0 + v <= 0.0) {
            return Err(Error::InvalidShape(
                "radial graph is not star-shaped: 1 + u <= 0 on the grid".into(),
            ));
        }
        let (nodes, gl_weights) = gauss_legendre(nlat);
        Ok(Self {
            nlat,
            nlon,
            values,
            nodes,
            gl_weights,
        })
    }

    /// Constant-zero grid (the unit sphere).
    pub fn unit(nlat: usize, nlon: usize) -> Self {
        Self::new(nlat, nlon, vec![0.0; nlat * nlon]).expect("valid grid dimensions")
    }

    pub fn nlat(&self) -> usize {
        self.nlat
    }

    pub fn nlon(&self) -> usize {
        self.nlon
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.nlon + j]
    }

    /// Unit direction of grid node (i, j).
    pub fn direction(&self, i: usize, j: usize) -> Point {
        let x = self.nodes[i];
        let s = (1.0 - x * x).sqrt();
        let lam = 2.0 * std::f64::consts::PI * j as f64 / self.nlon as f64;
        [s * lam.cos(), s * lam.sin(), x]
    }

    fn lon_weight(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.nlon as f64
    }

    /// Mean of a grid row; stands in for the (virtual) pole value.
    fn row_mean(&self, i: usize) -> f64 {
        let row = &self.values[i * self.nlon..(i + 1) * self.nlon];
        row.iter().sum::<f64>() / self.nlon as f64
    }

    /// Tangential gradient components (u_phi, u_lambda / sin(phi)) at a node,
    /// by centered finite differences with pole averaging at the extreme rows.
    pub fn grad_components(&self, i: usize, j: usize) -> (f64, f64) {
        let phi = |i: usize| self.nodes[i].acos();
        // longitude: periodic centered difference
        let jm = (j + self.nlon - 1) % self.nlon;
        let jp = (j + 1) % self.nlon;
        let dlam = self.lon_weight();
        let ulam = (self.value(i, jp) - self.value(i, jm)) / (2.0 * dlam);
        let x = self.nodes[i];
        let sin_phi = (1.0 - x * x).sqrt();
        // colatitude: non-uniform 3-point stencil; rows at the ends borrow a
        // virtual pole node holding the adjacent row mean.
        let (t1, f1, t3, f3) = if i == 0 {
            (std::f64::consts::PI, self.row_mean(0), phi(1), self.value(1, j))
        } else if i == self.nlat - 1 {
            (
                phi(self.nlat - 2),
                self.value(self.nlat - 2, j),
                0.0,
                self.row_mean(self.nlat - 1),
            )
        } else {
            (phi(i - 1), self.value(i - 1, j), phi(i + 1), self.value(i + 1, j))
        };
        let t2 = phi(i);
        let f2 = self.value(i, j);
        // Lagrange three-point derivative at t2 (any node ordering)
        let uphi = f1 * (t2 - t3) / ((t1 - t2) * (t1 - t3))
            + f2 * (2.0 * t2 - t1 - t3) / ((t2 - t1) * (t2 - t3))
            + f3 * (t2 - t1) / ((t3 - t1) * (t3 - t2));
        (uphi, ulam / sin_phi)
    }

    /// Outward unit normal at a grid node.
    pub fn normal(&self, i: usize, j: usize) -> Point {
        let z = self.direction(i, j);
        let r = 1.0 + self.value(i, j);
        let (uphi, ulam_s) = self.grad_components(i, j);
        let x = self.nodes[i];
        let sin_phi = (1.0 - x * x).sqrt();
        let lam = 2.0 * std::f64::consts::PI * j as f64 / self.nlon as f64;
        let (sl, cl) = lam.sin_cos();
        // e_phi = d z / d phi, e_lam unit longitude direction
        let e_phi = [x * cl, x * sl, -sin_phi];
        let e_lam = [-sl, cl, 0.0];
        let gx = uphi * e_phi[0] + ulam_s * e_lam[0];
        let gy = uphi * e_phi[1] + ulam_s * e_lam[1];
        let gz = uphi * e_phi[2] + ulam_s * e_lam[2];
        let nn = (r * r + uphi * uphi + ulam_s * ulam_s).sqrt();
        [
            (r * z[0] - gx) / nn,
            (r * z[1] - gy) / nn,
            (r * z[2] - gz) / nn,
        ]
    }

    /// Enclosed volume, (1/3)∫ (1+u)³ dσ.
    pub fn volume(&self) -> f64 {
        let wl = self.lon_weight();
        let mut v = 0.0;
        for i in 0..self.nlat {
            for j in 0..self.nlon {
                let r = 1.0 + self.value(i, j);
                v += self.gl_weights[i] * wl * r * r * r / 3.0;
            }
        }
        v
    }

    /// Surface area, ∫ (1+u)·√((1+u)² + |∇_τ u|²) dσ.
    pub fn surface_area(&self) -> f64 {
        let wl = self.lon_weight();
        let mut p = 0.0;
        for i in 0..self.nlat {
            for j in 0..self.nlon {
                let r = 1.0 + self.value(i, j);
                let (uphi, ulam_s) = self.grad_components(i, j);
                p += self.gl_weights[i] * wl * r * (r * r + uphi * uphi + ulam_s * ulam_s).sqrt();
            }
        }
        p
    }

    pub fn centroid(&self) -> Point {
        let wl = self.lon_weight();
        let v = self.volume();
        let mut c = [0.0; 3];
        for i in 0..self.nlat {
            for j in 0..self.nlon {
                let z = self.direction(i, j);
                let r = 1.0 + self.value(i, j);
                let w = self.gl_weights[i] * wl * r * r * r * r / 4.0;
                c[0] += w * z[0];
                c[1] += w * z[1];
                c[2] += w * z[2];
            }
        }
        [c[0] / v, c[1] / v, c[2] / v]
    }

    /// Boundary rule on the native grid: points, outward normals, and
    /// area-element weights.
    pub fn boundary_rule(&self) -> (Vec<Point>, Vec<Point>, Vec<f64>) {
        let wl = self.lon_weight();
        let n = self.nlat * self.nlon;
        let mut points = Vec::with_capacity(n);
        let mut normals = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..self.nlat {
            for j in 0..self.nlon {
                let z = self.direction(i, j);
                let r = 1.0 + self.value(i, j);
                let (uphi, ulam_s) = self.grad_components(i, j);
                points.push([r * z[0], r * z[1], r * z[2]]);
                normals.push(self.normal(i, j));
                weights.push(self.gl_weights[i] * wl * r * (r * r + uphi * uphi + ulam_s * ulam_s).sqrt());
            }
        }
        (points, normals, weights)
    }

    /// Evaluates u at an arbitrary unit direction by bilinear interpolation
    /// in (cos colatitude, longitude), with row means at the poles.
    pub fn eval_dir(&self, z: Point) -> f64 {
        let x = z[2].clamp(-1.0, 1.0);
        let lam = z[1].atan2(z[0]).rem_euclid(2.0 * std::f64::consts::PI);
        let fj = lam / self.lon_weight();
        let j0 = (fj.floor() as usize) % self.nlon;
        let j1 = (j0 + 1) % self.nlon;
        let tj = fj - fj.floor();
        let at = |i: usize| (1.0 - tj) * self.value(i, j0) + tj * self.value(i, j1);
        if x <= self.nodes[0] {
            let t = (x + 1.0) / (self.nodes[0] + 1.0);
            return (1.0 - t) * self.row_mean(0) + t * at(0);
        }
        if x >= self.nodes[self.nlat - 1] {
            let t = (x - self.nodes[self.nlat - 1]) / (1.0 - self.nodes[self.nlat - 1]);
            return (1.0 - t) * at(self.nlat - 1) + t * self.row_mean(self.nlat - 1);
        }
        let i1 = self.nodes.partition_point(|n| *n <= x).min(self.nlat - 1);
        let i0 = i1 - 1;
        let t = (x - self.nodes[i0]) / (self.nodes[i1] - self.nodes[i0]);
        (1.0 - t) * at(i0) + t * at(i1)
    }

    pub fn max_radius(&self) -> f64 {
        1.0 + self.values.iter().cloned().fold(f64::MIN, f64::max)
    }

    pub fn min_radius(&self) -> f64 {
        1.0 + self.values.iter().cloned().fold(f64::MAX, f64::min)
    }

    /// sup |u| and a finite-difference sup |∇_τ u| over the grid.
    pub fn sup_norms(&self) -> (f64, f64) {
        let mut su = 0.0f64;
        let mut sg = 0.0f64;
        for i in 0..self.nlat {
            for j in 0..self.nlon {
                su = su.max(self.value(i, j).abs());
                let (up, ul) = self.grad_components(i, j);
                sg = sg.max((up * up + ul * ul).sqrt());
            }
        }
        (su, sg)
    }

    /// Pointwise exact rescaling about the origin.
    pub fn scaled(&self, s: f64) -> Self {
        let values = self.values.iter().map(|u| s * (1.0 + u) - 1.0).collect();
        Self {
            values,
            ..self.clone()
        }
    }

    /// Adds a constant to u (used by volume normalization).
    pub fn shifted(&self, da: f64) -> Result<Self> {
        Self::new(
            self.nlat,
            self.nlon,
            self.values.iter().map(|u| u + da).collect(),
        )
    }

    /// Re-expresses the set translated by `v` as a radial graph about the
    /// origin, re-solving the boundary radius along every grid direction.
    pub fn translated_refit(&self, v: Point) -> Result<Self> {
        let mut values = Vec::with_capacity(self.values.len());
        for i in 0..self.nlat {
            for j in 0..self.nlon {
                let z = self.direction(i, j);
                values.push(self.ray_radius_translated(v, z)? - 1.0);
            }
        }
        Self::new(self.nlat, self.nlon, values)
    }

    fn ray_radius_translated(&self, v: Point, z: Point) -> Result<f64> {
        let g = |rho: f64| {
            let p = [rho * z[0] - v[0], rho * z[1] - v[1], rho * z[2] - v[2]];
            let rr = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            if rr < 1e-300 {
                return -1.0;
            }
            let dir = [p[0] / rr, p[1] / rr, p[2] / rr];
            rr - (1.0 + self.eval_dir(dir))
        };
        let vnorm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let (mut lo, mut hi) = (0.0, self.max_radius() + vnorm + 1.0);
        if g(lo) >= 0.0 {
            return Err(Error::InvalidShape(
                "translated set does not contain the origin".into(),
            ));
        }
        let mut x = (1.0 + self.eval_dir(z) + v[0] * z[0] + v[1] * z[1] + v[2] * z[2])
            .clamp(1e-12, hi);
        for _ in 0..80 {
            let gx = g(x);
            if gx.abs() < 1e-13 {
                return Ok(x);
            }
            if gx < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let h = 1e-7 * x.max(1e-3);
            let d = (g(x + h) - g(x - h)) / (2.0 * h);
            let mut next = if d.abs() > 1e-12 { x - gx / d } else { x };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() < 1e-15 * x.max(1.0) {
                return Ok(next);
            }
            x = next;
        }
        Ok(x)
    }
}
