//! Nearly spherical sets: boundary graphs u on the unit sphere, volume and
//! barycenter normalization, Sobolev norms, and the deficit-vs-norm ratios
//! behind the quantitative stability estimates.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::functionals::{self, Params};
use crate::geometry::{Fourier, ShapeRep, SphereGrid};
use crate::point::{self, Point};

/// Default smallness threshold for the W^(1,∞) norm.
pub const DEFAULT_EPS0: f64 = 0.1;

/// A scalar field u on the unit sphere: Fourier modes in the plane, a
/// lat–long grid in space.
#[derive(Debug, Clone, PartialEq)]
pub enum SphericalFunction {
    Fourier(Fourier),
    Grid(SphereGrid),
}

impl SphericalFunction {
    pub fn dim(&self) -> usize {
        match self {
            SphericalFunction::Fourier(_) => 2,
            SphericalFunction::Grid(_) => 3,
        }
    }

    pub fn to_shape(&self) -> ShapeRep {
        match self {
            SphericalFunction::Fourier(f) => ShapeRep::RadialGraph2D(f.clone()),
            SphericalFunction::Grid(g) => ShapeRep::RadialGraph3D(g.clone()),
        }
    }

    /// u at a unit direction.
    pub fn eval(&self, z: Point) -> f64 {
        match self {
            SphericalFunction::Fourier(f) => f.eval(z[1].atan2(z[0])),
            SphericalFunction::Grid(g) => g.eval_dir(z),
        }
    }

    /// W^(1,∞) norm max(sup |u|, sup |∇_τ u|) by dense sampling.
    pub fn w1_inf(&self) -> f64 {
        match self {
            SphericalFunction::Fourier(f) => {
                let (su, sd) = f.sup_norms();
                su.max(sd)
            }
            SphericalFunction::Grid(g) => {
                let (su, sg) = g.sup_norms();
                su.max(sg)
            }
        }
    }
}

/// L², H¹-seminorm and W^(1,∞) norms of u (norms, not squares).
#[derive(Debug, Clone, Copy)]
pub struct SobolevNorms {
    pub l2: f64,
    pub h1_semi: f64,
    pub w1_inf: f64,
}

impl SobolevNorms {
    /// ‖u‖²_W12 = ‖u‖²_L2 + ‖∇_τ u‖²_L2.
    pub fn w12_sq(&self) -> f64 {
        self.l2 * self.l2 + self.h1_semi * self.h1_semi
    }
}

/// Sobolev norms; exact Parseval sums in the Fourier case.
pub fn sobolev_norms(u: &SphericalFunction) -> SobolevNorms {
    match u {
        SphericalFunction::Fourier(f) => {
            let pi = std::f64::consts::PI;
            let mut l2 = 2.0 * pi * f.a0 * f.a0;
            let mut h1 = 0.0;
            for (k, (a, b)) in f.a.iter().zip(&f.b).enumerate() {
                let kf = (k + 1) as f64;
                let m = a * a + b * b;
                l2 += pi * m;
                h1 += pi * kf * kf * m;
            }
            let (su, sd) = f.sup_norms();
            SobolevNorms {
                l2: l2.sqrt(),
                h1_semi: h1.sqrt(),
                w1_inf: su.max(sd),
            }
        }
        SphericalFunction::Grid(g) => {
            let (_, weights) = crate::quadrature::gauss_legendre(g.nlat());
            let wl = 2.0 * std::f64::consts::PI / g.nlon() as f64;
            let mut l2 = 0.0;
            let mut h1 = 0.0;
            for i in 0..g.nlat() {
                for j in 0..g.nlon() {
                    let v = g.value(i, j);
                    let (up, ul) = g.grad_components(i, j);
                    l2 += weights[i] * wl * v * v;
                    h1 += weights[i] * wl * (up * up + ul * ul);
                }
            }
            let (su, sg) = g.sup_norms();
            SobolevNorms {
                l2: l2.sqrt(),
                h1_semi: h1.sqrt(),
                w1_inf: su.max(sg),
            }
        }
    }
}

/// Outward unit normal of the radial graph at direction `z`.
///
/// Planar graphs are evaluated exactly from the Fourier series; 3D grids
/// return the finite-difference normal of the nearest grid node.
pub fn normal_vector(u: &SphericalFunction, z: Point) -> Point {
    match u {
        SphericalFunction::Fourier(f) => {
            let theta = z[1].atan2(z[0]);
            let r = f.radius(theta);
            let dr = f.deriv(theta);
            let (s, c) = theta.sin_cos();
            let speed = (r * r + dr * dr).sqrt();
            [(r * c + dr * s) / speed, (r * s - dr * c) / speed, 0.0]
        }
        SphericalFunction::Grid(g) => {
            let mut best = (f64::MAX, 0usize, 0usize);
            for i in 0..g.nlat() {
                for j in 0..g.nlon() {
                    let d = point::dist(g.direction(i, j), z);
                    if d < best.0 {
                        best = (d, i, j);
                    }
                }
            }
            g.normal(best.1, best.2)
        }
    }
}

/// A spherical function meeting the |E| = ω_n, barycenter-at-origin gauge.
#[derive(Debug, Clone)]
pub struct NormalizedSphericalSet {
    pub u: SphericalFunction,
    pub volume: f64,
    pub barycenter: Point,
    pub newton_iters: usize,
    pub recenter_iters: usize,
}

impl NormalizedSphericalSet {
    pub fn shape(&self) -> ShapeRep {
        self.u.to_shape()
    }
}

/// Enforces the normalization: the constant mode fixes the volume (1D
/// Newton), geometric recentering (translate and re-sample the graph) fixes
/// the barycenter. Rejects inputs too far from the sphere for the Newton
/// iteration or the re-sampling to converge.
pub fn normalize(u: &SphericalFunction) -> Result<NormalizedSphericalSet> {
    let diverged = || Error::NormalizationDiverged { w1inf: 0.0 };
    let mut newton_total = 0usize;
    let mut recenter = 0usize;
    let mut cur = u.clone();
    for _outer in 0..12 {
        newton_total += fix_volume(&mut cur).map_err(|_| Error::NormalizationDiverged {
            w1inf: u.w1_inf(),
        })?;
        let shape = cur.to_shape();
        let b = shape.barycenter();
        if point::norm(b) <= 1e-9 {
            let volume = shape.volume();
            return Ok(NormalizedSphericalSet {
                u: cur,
                volume,
                barycenter: b,
                newton_iters: newton_total,
                recenter_iters: recenter,
            });
        }
        recenter += 1;
        cur = recenter_once(&cur, b)?;
    }
    Err(diverged())
}

/// One translate-and-resample pass moving the barycenter to the origin.
fn recenter_once(u: &SphericalFunction, barycenter: Point) -> Result<SphericalFunction> {
    match u {
        SphericalFunction::Fourier(f) => {
            let k_out = (f.max_mode().max(16)) + 8;
            let m = (8 * (k_out + 1)).max(256);
            let v = [-barycenter[0], -barycenter[1]];
            Ok(SphericalFunction::Fourier(f.translated_refit(v, m, k_out)?))
        }
        SphericalFunction::Grid(g) => {
            let v = point::scale(barycenter, -1.0);
            Ok(SphericalFunction::Grid(g.translated_refit(v)?))
        }
    }
}

/// Newton on the constant mode until | |E| − ω_n | ≤ 1e−12.
fn fix_volume(u: &mut SphericalFunction) -> Result<usize> {
    let n = u.dim();
    let target = point::unit_ball_volume(n);
    for it in 0..60 {
        let shape = u.to_shape();
        let v = shape.volume();
        if (v - target).abs() <= 1e-12 {
            return Ok(it);
        }
        // dV/d(constant shift) = ∫ (1+u)^(n-1) dσ
        let dv = match &*u {
            SphericalFunction::Fourier(f) => {
                crate::quadrature::periodic_trapezoid(f.dense_n(), |t| f.radius(t))
            }
            SphericalFunction::Grid(g) => {
                let (_, w) = crate::quadrature::gauss_legendre(g.nlat());
                let wl = 2.0 * std::f64::consts::PI / g.nlon() as f64;
                let mut s = 0.0;
                for i in 0..g.nlat() {
                    for j in 0..g.nlon() {
                        let r = 1.0 + g.value(i, j);
                        s += w[i] * wl * r * r;
                    }
                }
                s
            }
        };
        if dv.is_nan() || dv <= 1e-12 {
            return Err(Error::NormalizationDiverged { w1inf: u.w1_inf() });
        }
        let da = (target - v) / dv;
        *u = match &*u {
            SphericalFunction::Fourier(f) => SphericalFunction::Fourier(Fourier::new(
                f.a0 + da,
                f.a.clone(),
                f.b.clone(),
            )?),
            SphericalFunction::Grid(g) => SphericalFunction::Grid(g.shifted(da)?),
        };
    }
    Err(Error::NormalizationDiverged { w1inf: u.w1_inf() })
}

/// D(E) against ‖u‖²_W12 for a normalized set.
#[derive(Debug, Clone, Copy)]
pub struct FugledeRatio {
    pub deficit: f64,
    pub norm_sq: f64,
    /// D / ‖u‖²; `None` for u = 0.
    pub ratio: Option<f64>,
    /// Whether ‖u‖_W1∞ ≤ ε₀; the ratio is still computed when violated.
    pub smallness_ok: bool,
}

pub fn fuglede_ratio(ns: &NormalizedSphericalSet, eps0: f64) -> FugledeRatio {
    let shape = ns.shape();
    let d = functionals::deficit(&shape);
    let norms = sobolev_norms(&ns.u);
    let norm_sq = norms.w12_sq();
    FugledeRatio {
        deficit: d,
        norm_sq,
        ratio: (norm_sq > 0.0).then(|| d / norm_sq),
        smallness_ok: norms.w1_inf <= eps0,
    }
}

/// One row of the sharpness table along u_t = t·cos 2θ.
#[derive(Debug, Clone, Copy)]
pub struct SharpnessRow {
    pub t: f64,
    pub alpha: f64,
    pub deficit: f64,
    pub beta_sq: f64,
    pub asym_sq: f64,
    /// D / ‖u‖²_W12.
    pub ratio: f64,
}

/// Evaluates α, D, β², A² along the mode-2 family u_t = t·cos 2θ.
pub fn sharpness_family(t_values: &[f64], params: &Params) -> Result<Vec<SharpnessRow>> {
    t_values
        .iter()
        .map(|&t| {
            let u = SphericalFunction::Fourier(Fourier::mode(2, t)?);
            let ns = normalize(&u)?;
            let shape = ns.shape();
            let d = functionals::deficit(&shape);
            let beta = functionals::beta(&shape, params)?;
            let fr = functionals::fraenkel(&shape, params)?;
            let asym = functionals::asymmetry(&shape, params)?;
            let norm_sq = sobolev_norms(&ns.u).w12_sq();
            Ok(SharpnessRow {
                t,
                alpha: fr.alpha,
                deficit: d,
                beta_sq: beta.beta_sq,
                asym_sq: asym.asymmetry * asym.asymmetry,
                ratio: d / norm_sq,
            })
        })
        .collect()
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// β² ≤ A² ≤ C₀·D chain on one normalized set.
#[derive(Debug, Clone, Copy)]
pub struct ChainCheck {
    pub beta_sq: f64,
    pub asym_sq: f64,
    pub deficit: f64,
    /// A²/D, the empirical C₀ sample; `None` when D is numerically zero.
    pub c0_ratio: Option<f64>,
    /// β² ≤ A² with numerical slack.
    pub ordering_ok: bool,
}

pub fn fuglede_chain_check(ns: &NormalizedSphericalSet, params: &Params) -> Result<ChainCheck> {
    let shape = ns.shape();
    let d = functionals::deficit(&shape);
    let beta = functionals::beta(&shape, params)?;
    let asym = functionals::asymmetry(&shape, params)?;
    let a2 = asym.asymmetry * asym.asymmetry;
    Ok(ChainCheck {
        beta_sq: beta.beta_sq,
        asym_sq: a2,
        deficit: d,
        c0_ratio: (d > 1e-12).then(|| a2 / d),
        ordering_ok: beta.beta_sq <= a2 + 1e-10,
    })
}

/// Reproducible random spherical functions for constant estimation:
/// independent Gaussian coefficients with standard deviation k^(−2) on the
/// given mode band (first modes excluded), rescaled to the target W^(1,∞)
/// norm. Every sample gets its own counter-seeded generator, so the family
/// does not depend on evaluation order.
pub fn random_family(
    seed: u64,
    count: usize,
    modes: (usize, usize),
    target_w1inf: f64,
) -> Vec<Fourier> {
    assert!(modes.0 >= 2, "first modes are excluded from random families");
    assert!(modes.1 >= modes.0);
    (0..count)
        .map(|i| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let kmax = modes.1;
            let mut a = vec![0.0; kmax];
            let mut b = vec![0.0; kmax];
            for k in modes.0..=modes.1 {
                let sd = (k as f64).powi(-2);
                let normal = Normal::new(0.0, sd).expect("valid std dev");
                a[k - 1] = normal.sample(&mut rng);
                b[k - 1] = normal.sample(&mut rng);
            }
            // scale the raw draw to the target sup norm before validating:
            // w1inf is positively homogeneous in the coefficients; sample on
            // the same grid sup_norms uses so the scaled norm matches exactly
            let w = {
                let m = (64 * (kmax + 1)).max(1024);
                let mut su = 0.0f64;
                let mut sd = 0.0f64;
                for j in 0..m {
                    let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                    let mut u = 0.0;
                    let mut du = 0.0;
                    for k in 1..=kmax {
                        let (sk, ck) = (k as f64 * t).sin_cos();
                        u += a[k - 1] * ck + b[k - 1] * sk;
                        du += k as f64 * (b[k - 1] * ck - a[k - 1] * sk);
                    }
                    su = su.max(u.abs());
                    sd = sd.max(du.abs());
                }
                su.max(sd)
            };
            let s = if w > 0.0 { target_w1inf / w } else { 0.0 };
            Fourier::new(
                0.0,
                a.iter().map(|c| c * s).collect(),
                b.iter().map(|c| c * s).collect(),
            )
            .expect("scaled sample is star-shaped")
        })
        .collect()
}
