//! Planar radial graphs r(θ) = 1 + u(θ) with u in a truncated Fourier basis.

use crate::error::{Error, Result};

/// Truncated Fourier series u(θ) = a0 + Σ_k a_k cos kθ + b_k sin kθ.
#[derive(Debug, Clone, PartialEq)]
pub struct Fourier {
    pub a0: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl Fourier {
    pub fn new(a0: f64, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidShape(format!(
                "cosine/sine coefficient counts differ: {} vs {}",
                a.len(),
                b.len()
            )));
        }
        if !a0.is_finite() || a.iter().chain(&b).any(|c| !c.is_finite()) {
            return Err(Error::InvalidShape("non-finite Fourier coefficient".into()));
        }
        let f = Self { a0, a, b };
        let min_r = f.min_radius();
        if min_r <= 0.0 {
            return Err(Error::InvalidShape(format!(
                "radial graph is not star-shaped: min(1+u) = {min_r:.6}"
            )));
        }
        Ok(f)
    }

    /// Single perturbation mode t·cos(kθ), no volume correction.
    pub fn mode(k: usize, t: f64) -> Result<Self> {
        let mut a = vec![0.0; k];
        a[k - 1] = t;
        Self::new(0.0, a, vec![0.0; k])
    }

    pub fn zero() -> Self {
        Self {
            a0: 0.0,
            a: Vec::new(),
            b: Vec::new(),
        }
    }

    pub fn max_mode(&self) -> usize {
        self.a.len()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut u = self.a0;
        for (k, (a, b)) in self.a.iter().zip(&self.b).enumerate() {
            let kt = (k + 1) as f64 * theta;
            u += a * kt.cos() + b * kt.sin();
        }
        u
    }

    pub fn deriv(&self, theta: f64) -> f64 {
        let mut d = 0.0;
        for (k, (a, b)) in self.a.iter().zip(&self.b).enumerate() {
            let kf = (k + 1) as f64;
            let kt = kf * theta;
            d += kf * (b * kt.cos() - a * kt.sin());
        }
        d
    }

    pub fn radius(&self, theta: f64) -> f64 {
        1.0 + self.eval(theta)
    }

    /// Number of sample points that resolves all stored modes comfortably.
    pub fn dense_n(&self) -> usize {
        (16 * (self.max_mode() + 1)).max(2048)
    }

    pub fn min_radius(&self) -> f64 {
        let n = (32 * (self.max_mode() + 1)).max(512);
        (0..n)
            .map(|j| self.radius(2.0 * std::f64::consts::PI * j as f64 / n as f64))
            .fold(f64::MAX, f64::min)
    }

    pub fn max_radius(&self) -> f64 {
        let n = (32 * (self.max_mode() + 1)).max(512);
        (0..n)
            .map(|j| self.radius(2.0 * std::f64::consts::PI * j as f64 / n as f64))
            .fold(f64::MIN, f64::max)
    }

    /// sup |u| and sup |u'| by dense sampling.
    pub fn sup_norms(&self) -> (f64, f64) {
        let n = (64 * (self.max_mode() + 1)).max(1024);
        let mut su = 0.0f64;
        let mut sd = 0.0f64;
        for j in 0..n {
            let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            su = su.max(self.eval(t).abs());
            sd = sd.max(self.deriv(t).abs());
        }
        (su, sd)
    }

    /// Area enclosed by the curve, ½∫ r² dθ on a rule that is exact for the
    /// band-limited integrand.
    pub fn area(&self) -> f64 {
        self.area_at(self.dense_n())
    }

    /// Area on an explicit rule; exact once `n` exceeds twice the top mode.
    pub fn area_at(&self, n: usize) -> f64 {
        crate::quadrature::periodic_trapezoid(n, |t| {
            let r = self.radius(t);
            0.5 * r * r
        })
    }

    /// Arc length at a given angular resolution.
    pub fn arc_length_at(&self, n: usize) -> f64 {
        crate::quadrature::periodic_trapezoid(n, |t| {
            let r = self.radius(t);
            let dr = self.deriv(t);
            (r * r + dr * dr).sqrt()
        })
    }

    pub fn arc_length(&self) -> f64 {
        self.arc_length_at(self.dense_n())
    }

    pub fn centroid(&self) -> [f64; 2] {
        let n = self.dense_n();
        let v = self.area();
        let cx = crate::quadrature::periodic_trapezoid(n, |t| {
            let r = self.radius(t);
            r * r * r / 3.0 * t.cos()
        });
        let cy = crate::quadrature::periodic_trapezoid(n, |t| {
            let r = self.radius(t);
            r * r * r / 3.0 * t.sin()
        });
        [cx / v, cy / v]
    }

    /// Boundary rule on uniform angles: points, outward normals, arc-length
    /// weights. The normal of θ ↦ r e(θ) is (r e − r' e⊥)/√(r² + r'²).
    pub fn boundary_rule(&self, n: usize) -> (Vec<[f64; 2]>, Vec<[f64; 2]>, Vec<f64>) {
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let mut points = Vec::with_capacity(n);
        let mut normals = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for j in 0..n {
            let t = j as f64 * h;
            let (s, c) = t.sin_cos();
            let r = self.radius(t);
            let dr = self.deriv(t);
            let speed = (r * r + dr * dr).sqrt();
            points.push([r * c, r * s]);
            normals.push([(r * c + dr * s) / speed, (r * s - dr * c) / speed]);
            weights.push(speed * h);
        }
        (points, normals, weights)
    }

    /// Exact rescaling about the origin: λ(1+u) = 1 + (λ-1+λu).
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            a0: s * (1.0 + self.a0) - 1.0,
            a: self.a.iter().map(|c| c * s).collect(),
            b: self.b.iter().map(|c| c * s).collect(),
        }
    }

    /// Exact rotation: phase shift of every mode.
    pub fn rotated(&self, angle: f64) -> Self {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        for k in 0..a.len() {
            let (s, c) = ((k + 1) as f64 * angle).sin_cos();
            let (ak, bk) = (self.a[k], self.b[k]);
            a[k] = ak * c - bk * s;
            b[k] = ak * s + bk * c;
        }
        Self { a0: self.a0, a, b }
    }

    /// Polygonal sampling of the boundary at `m` uniform angles.
    pub fn polygonize(&self, m: usize) -> Vec<[f64; 2]> {
        (0..m)
            .map(|j| {
                let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                let r = self.radius(t);
                [r * t.cos(), r * t.sin()]
            })
            .collect()
    }

    /// Projects samples of a radial function onto modes 0..=k_max.
    ///
    /// `samples[j]` holds u(2πj/m); m must exceed 2·k_max for the discrete
    /// projection to be aliasing-safe on smooth data.
    pub fn fit(samples: &[f64], k_max: usize) -> Result<Self> {
        let m = samples.len();
        if m <= 2 * k_max {
            return Err(Error::ResolutionTooLow {
                got: m,
                min: 2 * k_max + 1,
            });
        }
        let a0 = samples.iter().sum::<f64>() / m as f64;
        let mut a = vec![0.0; k_max];
        let mut b = vec![0.0; k_max];
        for k in 1..=k_max {
            let mut ca = 0.0;
            let mut cb = 0.0;
            for (j, s) in samples.iter().enumerate() {
                let t = 2.0 * std::f64::consts::PI * (j as f64) * (k as f64) / m as f64;
                ca += s * t.cos();
                cb += s * t.sin();
            }
            a[k - 1] = 2.0 * ca / m as f64;
            b[k - 1] = 2.0 * cb / m as f64;
        }
        Self::new(a0, a, b)
    }

    /// Re-expresses the curve translated by `v` as a radial graph about the
    /// origin, sampling `m` rays and refitting modes 0..=k_max.
    ///
    /// Fails if the translated set is no longer star-shaped about the origin.
    pub fn translated_refit(&self, v: [f64; 2], m: usize, k_max: usize) -> Result<Self> {
        let mut samples = Vec::with_capacity(m);
        for j in 0..m {
            let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            let rho = self.ray_radius_translated(v, t)?;
            samples.push(rho - 1.0);
        }
        Self::fit(&samples, k_max)
    }

    /// Distance from the origin to the translated boundary along direction θ:
    /// solves |ρ e(θ) - v| = r(arg(ρ e(θ) - v)) by Newton with bisection
    /// safeguarding. The translation moves the curve by +v, so the original
    /// point is ρ e(θ) - v.
    fn ray_radius_translated(&self, v: [f64; 2], theta: f64) -> Result<f64> {
        let (s, c) = theta.sin_cos();
        let g = |rho: f64| {
            let x = rho * c - v[0];
            let y = rho * s - v[1];
            let rr = (x * x + y * y).sqrt();
            rr - self.radius(y.atan2(x))
        };
        // bracket the root: g(0) < 0 iff the origin is interior
        let hi0 = self.max_radius() + (v[0] * v[0] + v[1] * v[1]).sqrt() + 1.0;
        let (mut lo, mut hi) = (0.0, hi0);
        if g(lo) >= 0.0 {
            return Err(Error::InvalidShape(
                "translated set does not contain the origin".into(),
            ));
        }
        if g(hi) <= 0.0 {
            return Err(Error::InvalidShape(
                "could not bracket the translated boundary".into(),
            ));
        }
        let mut x = self.radius(theta) + v[0] * c + v[1] * s;
        x = x.clamp(1e-12, hi0);
        for _ in 0..80 {
            let gx = g(x);
            if gx.abs() < 1e-14 {
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

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_circle_measures() {
        let f = Fourier::zero();
        assert!((f.area() - PI).abs() < 1e-13);
        assert!((f.arc_length() - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_star_shaped() {
        let r = Fourier::new(0.0, vec![1.2], vec![0.0]);
        assert!(matches!(r, Err(Error::InvalidShape(_))));
    }

    #[test]
    fn rotation_preserves_measures() {
        let f = Fourier::new(0.01, vec![0.05, 0.02], vec![0.0, -0.03]).unwrap();
        let g = f.rotated(0.7);
        assert!((f.area() - g.area()).abs() < 1e-13);
        assert!((f.arc_length() - g.arc_length()).abs() < 1e-13);
    }

    #[test]
    fn fit_round_trips_band_limited_data() {
        let f = Fourier::new(-0.02, vec![0.1, 0.0, 0.04], vec![0.02, 0.0, 0.0]).unwrap();
        let m = 64;
        let samples: Vec<f64> = (0..m)
            .map(|j| f.eval(2.0 * PI * j as f64 / m as f64))
            .collect();
        let g = Fourier::fit(&samples, 3).unwrap();
        assert!((f.a0 - g.a0).abs() < 1e-14);
        for k in 0..3 {
            assert!((f.a[k] - g.a[k]).abs() < 1e-14);
            assert!((f.b[k] - g.b[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn translated_refit_recovers_shifted_circle() {
        let f = Fourier::zero();
        let g = f.translated_refit([0.3, -0.1], 512, 24).unwrap();
        // area and perimeter are translation invariant
        assert!((g.area() - PI).abs() < 1e-10);
        assert!((g.arc_length() - 2.0 * PI).abs() < 1e-10);
        // the recentered circle's centroid sits at the translation vector
        let c = g.centroid();
        assert!((c[0] - 0.3).abs() < 1e-8 && (c[1] + 0.1).abs() < 1e-8);
    }
}
