//! The deficit D, Riesz potential γ (with center finding), oscillation
//! index β, Fraenkel asymmetry α and combined index A, together with the
//! identity and inequality checks relating them.
//!
//! Conventions: β is evaluated in the |E| = ω_n gauge (it is scale
//! invariant); γ and the boundary integrals are evaluated on the shape as
//! given. Center searches are derivative-free simplex runs with a
//! deterministic multistart fan.

pub mod report;

pub use report::FunctionalReport;

use crate::error::{Error, Result};
use crate::geometry::{BallSpec, BoundaryQuadrature, ShapeRep};
use crate::optim::{self, NmOptions};
use crate::point::{self, Point};

/// Evaluation parameters shared by the center-dependent functionals.
#[derive(Debug, Clone, Copy)]
pub struct Params {
    /// Boundary node budget for 2D shapes (3D radial graphs use their grid).
    pub quadrature_n: usize,
    /// Simplex options for every center search.
    pub nm: NmOptions,
    /// Multistart fan radius as a fraction of the volume radius.
    pub seed_radius_frac: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            quadrature_n: 4096,
            nm: NmOptions::default(),
            seed_radius_frac: 0.25,
        }
    }
}

impl Params {
    pub fn with_quadrature_n(n: usize) -> Self {
        Self {
            quadrature_n: n,
            ..Self::default()
        }
    }
}

/// Isoperimetric deficit D(E) = (P(E) − P(B_r)) / r^(n−1), |B_r| = |E|.
pub fn deficit(shape: &ShapeRep) -> f64 {
    let n = shape.dim();
    let r = shape.volume_radius();
    shape.perimeter() / r.powi(n as i32 - 1) - point::unit_ball_perimeter(n)
}

/// Boundary form of the Riesz potential: ∫ ν·(x−y)/|x−y| dH^(n−1), which
/// equals (n−1)·∫_E |x−y|^(−1) dx by the divergence theorem. The integrand
/// is bounded by one, so no singular quadrature is needed, but `y` must not
/// collide with a node.
pub fn riesz_boundary(q: &BoundaryQuadrature, y: Point) -> Result<f64> {
    let mut s = 0.0;
    for ((p, nu), w) in q.points.iter().zip(&q.normals).zip(&q.weights) {
        let d = point::sub(*p, y);
        let dist = point::norm(d);
        if dist < 1e-12 {
            return Err(Error::NodeCollision);
        }
        s += w * point::dot(*nu, d) / dist;
    }
    Ok(s)
}

/// Normal-field oscillation about y: ∫ (1 − ν·(x−y)/|x−y|) dH^(n−1).
pub fn oscillation(q: &BoundaryQuadrature, y: Point) -> Result<f64> {
    Ok(q.total_weight() - riesz_boundary(q, y)?)
}

/// Riesz boundary integral with a deterministic nudge away from node
/// collisions, for use inside center searches.
fn riesz_for_search(q: &BoundaryQuadrature, y: Point, scale: f64) -> f64 {
    let mut yy = y;
    for _ in 0..4 {
        match riesz_boundary(q, yy) {
            Ok(v) => return v,
            Err(_) => {
                yy = point::add(yy, [1e-9 * scale, 1.3e-9 * scale, 0.0]);
            }
        }
    }
    f64::NEG_INFINITY
}

/// Result of the γ maximization.
#[derive(Debug, Clone)]
pub struct CenterResult {
    /// Best center found.
    pub y_star: Point,
    /// γ(E) = ∫_E |x − y*|^(−1) dx.
    pub gamma: f64,
    /// Multistart seeds used.
    pub restarts: usize,
    /// Final simplex diameter of the winning run.
    pub final_diameter: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Other local maxima within 1e−6 of the best value.
    pub other_centers: Vec<Point>,
}

impl CenterResult {
    pub fn multiplicity(&self) -> bool {
        !self.other_centers.is_empty()
    }
}

fn center_search(shape: &ShapeRep, q: &BoundaryQuadrature, params: &Params) -> CenterResult {
    let n = shape.dim();
    let r = shape.volume_radius();
    let bary = shape.barycenter();
    let seeds = optim::axis_seeds(&bary[..n], params.seed_radius_frac * r);
    let opts = NmOptions {
        step: 0.05 * r,
        ..params.nm
    };
    let ms = optim::multistart(
        |y| -riesz_for_search(q, point::from_slice(y), r),
        &seeds,
        &opts,
    );
    let y_star = point::from_slice(&ms.best.x);
    let gamma = -ms.best.value / (n as f64 - 1.0);
    let other = ms
        .near_optimal_distinct(1e-6, 1e-4 * r)
        .into_iter()
        .map(|x| point::from_slice(&x))
        .collect();
    CenterResult {
        y_star,
        gamma,
        restarts: seeds.len(),
        final_diameter: ms.best.diameter,
        evaluations: ms.runs.iter().map(|r| r.evaluations).sum(),
        converged: ms.best.converged,
        other_centers: other,
    }
}

/// Maximizes the Riesz potential over centers: γ(E) = max_y ∫_E |x−y|^(−1).
///
/// Seeded at the barycenter plus an axis fan; the barycenter is always an
/// admissible candidate, so the result is at least the barycenter value.
pub fn gamma(shape: &ShapeRep, params: &Params) -> Result<CenterResult> {
    let q = shape.boundary_quadrature(params.quadrature_n)?;
    Ok(center_search(shape, &q, params))
}

/// β(E) both ways: via the identity β² = P − (n−1)γ (primary) and as the
/// direct oscillation integral at the same center. Evaluated in the
/// |E| = ω_n gauge.
#[derive(Debug, Clone)]
pub struct BetaResult {
    pub beta: f64,
    pub beta_sq: f64,
    pub beta_direct: f64,
    pub beta_direct_sq: f64,
    pub y_star: Point,
    /// |β_identity² − β_direct²|, a quadrature-error estimate.
    pub residual: f64,
    /// Set when the identity value was clamped from below −1e−8.
    pub clamped: bool,
    pub center: CenterResult,
}

pub fn beta(shape: &ShapeRep, params: &Params) -> Result<BetaResult> {
    let (unit, _) = shape.rescale_to_unit_volume();
    let q = unit.boundary_quadrature(params.quadrature_n)?;
    let center = center_search(&unit, &q, params);
    beta_from_parts(&unit, &q, center)
}

fn beta_from_parts(
    unit: &ShapeRep,
    q: &BoundaryQuadrature,
    center: CenterResult,
) -> Result<BetaResult> {
    let n = unit.dim() as f64;
    let p = unit.perimeter();
    let identity = p - (n - 1.0) * center.gamma;
    let clamped = identity < -1e-8;
    let beta_sq = identity.max(0.0);
    let direct_sq = oscillation(q, center.y_star)?.max(0.0);
    Ok(BetaResult {
        beta: beta_sq.sqrt(),
        beta_sq,
        beta_direct: direct_sq.sqrt(),
        beta_direct_sq: direct_sq,
        y_star: center.y_star,
        residual: (identity - direct_sq).abs(),
        clamped,
        center,
    })
}

/// Fraenkel asymmetry α(E) = min_y |E Δ B_r(y)| / r^n.
#[derive(Debug, Clone)]
pub struct FraenkelResult {
    pub alpha: f64,
    pub y_alpha: Point,
    pub converged: bool,
}

pub fn fraenkel(shape: &ShapeRep, params: &Params) -> Result<FraenkelResult> {
    let center = gamma(shape, params)?;
    Ok(fraenkel_seeded(shape, center.y_star, params))
}

/// Per-shape symmetric-difference evaluator; radial graphs precompute their
/// boundary rays once so center searches stay cheap.
fn sym_diff_fn(shape: &ShapeRep) -> Box<dyn Fn(&BallSpec) -> f64 + '_> {
    match shape {
        ShapeRep::RadialGraph2D(f) => {
            let rays = crate::geometry::RadialRays::planar(f);
            Box::new(move |b| rays.sym_diff(b))
        }
        ShapeRep::RadialGraph3D(g) => {
            let rays = crate::geometry::RadialRays::spherical(g);
            Box::new(move |b| rays.sym_diff(b))
        }
        poly => Box::new(move |b| poly.sym_diff_with_ball(b)),
    }
}

fn fraenkel_seeded(shape: &ShapeRep, gamma_center: Point, params: &Params) -> FraenkelResult {
    let n = shape.dim();
    let r = shape.volume_radius();
    let rn = r.powi(n as i32);
    let sym_diff = sym_diff_fn(shape);
    let bary = shape.barycenter();
    let mut seeds = optim::axis_seeds(&bary[..n], params.seed_radius_frac * r);
    seeds.push(gamma_center[..n].to_vec());
    let opts = NmOptions {
        step: 0.05 * r,
        ..params.nm
    };
    let ms = optim::multistart(
        |y| {
            let ball = BallSpec {
                center: point::from_slice(y),
                radius: r,
            };
            sym_diff(&ball) / rn
        },
        &seeds,
        &opts,
    );
    FraenkelResult {
        alpha: ms.best.value,
        y_alpha: point::from_slice(&ms.best.x),
        converged: ms.best.converged,
    }
}

/// Combined index A(E): the Fraenkel term and the (unhalved) oscillation
/// term minimized jointly over a single center.
#[derive(Debug, Clone)]
pub struct AsymmetryResult {
    pub asymmetry: f64,
    pub y_asymmetry: Point,
    /// Decoupled cross-check: min(S(y_α), S(y*)), never below the minimum.
    pub upper_bound: f64,
    pub converged: bool,
}

pub fn asymmetry(shape: &ShapeRep, params: &Params) -> Result<AsymmetryResult> {
    let q = shape.boundary_quadrature(params.quadrature_n)?;
    let center = center_search(shape, &q, params);
    let fr = fraenkel_seeded(shape, center.y_star, params);
    Ok(asymmetry_seeded(shape, &q, center.y_star, fr.y_alpha, params))
}

fn asymmetry_seeded(
    shape: &ShapeRep,
    q: &BoundaryQuadrature,
    gamma_center: Point,
    fraenkel_center: Point,
    params: &Params,
) -> AsymmetryResult {
    let n = shape.dim();
    let r = shape.volume_radius();
    let rn = r.powi(n as i32);
    let rn1 = r.powi(n as i32 - 1);
    let p_quad = q.total_weight();
    let sym_diff = sym_diff_fn(shape);
    let objective = |y: &[f64]| {
        let yy = point::from_slice(y);
        let ball = BallSpec {
            center: yy,
            radius: r,
        };
        let sd = sym_diff(&ball) / rn;
        let osc = (p_quad - riesz_for_search(q, yy, r)).max(0.0);
        sd + (2.0 * osc / rn1).sqrt()
    };
    let bary = shape.barycenter();
    let seeds = vec![
        fraenkel_center[..n].to_vec(),
        gamma_center[..n].to_vec(),
        bary[..n].to_vec(),
    ];
    let upper = objective(&seeds[0]).min(objective(&seeds[1]));
    let opts = NmOptions {
        step: 0.05 * r,
        ..params.nm
    };
    let ms = optim::multistart(objective, &seeds, &opts);
    AsymmetryResult {
        asymmetry: ms.best.value,
        y_asymmetry: point::from_slice(&ms.best.x),
        upper_bound: upper,
        converged: ms.best.converged,
    }
}

/// Uniform-concavity constant c_n = ((n−1)/(4n²))·2^(−(n+1)/n).
pub fn concavity_constant(n: usize) -> f64 {
    let nf = n as f64;
    (nf - 1.0) / (4.0 * nf * nf) * 2f64.powf(-(nf + 1.0) / nf)
}

/// Annulus gap n·ω_n·(2 − (1 + a/ω_n)^((n−1)/n) − (1 − a/ω_n)^((n−1)/n)),
/// the exact lower-order term behind the strong Poincaré bound.
pub fn annulus_gap(n: usize, a: f64) -> f64 {
    let w = point::unit_ball_volume(n);
    let e = (n as f64 - 1.0) / n as f64;
    n as f64 * w * (2.0 - (1.0 + a / w).powf(e) - (1.0 - a / w).powf(e))
}

/// Strong Poincaré check: β² ≥ D + (8 n c_n / ω_n) a² with a = |E \ B_1|
/// for the unit ball at the γ-center, in the |E| = ω_n gauge.
#[derive(Debug, Clone)]
pub struct PoincareCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// a = |E \ B_1(y*)| = ½|E Δ B_1(y*)|.
    pub half_sym_diff: f64,
    pub center: Point,
    pub converged: bool,
}

pub fn strong_poincare_check(shape: &ShapeRep, params: &Params) -> Result<PoincareCheck> {
    let (unit, _) = shape.rescale_to_unit_volume();
    let q = unit.boundary_quadrature(params.quadrature_n)?;
    let center = center_search(&unit, &q, params);
    let beta = beta_from_parts(&unit, &q, center.clone())?;
    Ok(poincare_from_parts(&unit, &center, beta))
}

fn poincare_from_parts(unit: &ShapeRep, center: &CenterResult, beta: BetaResult) -> PoincareCheck {
    let n = unit.dim();
    let d = deficit(unit);
    let ball = BallSpec {
        center: center.y_star,
        radius: 1.0,
    };
    let a = 0.5 * unit.sym_diff_with_ball(&ball);
    let cn = concavity_constant(n);
    let rhs = d + 8.0 * n as f64 * cn / point::unit_ball_volume(n) * a * a;
    PoincareCheck {
        lhs: beta.beta_sq,
        rhs,
        slack: beta.beta_sq - rhs,
        half_sym_diff: a,
        center: center.y_star,
        converged: center.converged,
    }
}

/// |y*| for a shape already close to the unit ball: used to watch centers
/// collapse to the origin as |E Δ B_1| shrinks.
pub fn center_stability_check(shape: &ShapeRep, delta: f64, params: &Params) -> Result<f64> {
    let (unit, _) = shape.rescale_to_unit_volume();
    let ball = BallSpec {
        center: point::ORIGIN,
        radius: 1.0,
    };
    let sd = unit.sym_diff_with_ball(&ball);
    if sd >= delta {
        return Err(Error::InvalidConfig(format!(
            "|E Δ B_1| = {sd:.6} is not below δ = {delta:.6}"
        )));
    }
    let center = gamma(&unit, params)?;
    Ok(point::norm(center.y_star))
}

/// Non-schema diagnostics produced alongside a `FunctionalReport`.
#[derive(Debug, Clone, Default)]
pub struct PanelFlags {
    pub center_converged: bool,
    pub alpha_converged: bool,
    pub asymmetry_converged: bool,
    pub beta_clamped: bool,
    pub center_multiplicity: bool,
}

/// Fills the full per-shape panel in the |E| = ω_n gauge.
pub fn inequality_panel(shape: &ShapeRep, params: &Params) -> Result<(FunctionalReport, PanelFlags)> {
    let dim = shape.dim();
    let (unit, _) = shape.rescale_to_unit_volume();
    let q = unit.boundary_quadrature(params.quadrature_n)?;
    let center = center_search(&unit, &q, params);
    let beta = beta_from_parts(&unit, &q, center.clone())?;
    let fr = fraenkel_seeded(&unit, center.y_star, params);
    let asym = asymmetry_seeded(&unit, &q, center.y_star, fr.y_alpha, params);
    let sp = poincare_from_parts(&unit, &center, beta.clone());

    let p = unit.perimeter();
    let v = unit.volume();
    let d = deficit(&unit);
    let a_val = asym.asymmetry;

    let guard_d = d > 1e-12;
    let report = FunctionalReport {
        perimeter: p,
        volume: v,
        deficit: d,
        gamma: center.gamma,
        y_star: point::to_vec(center.y_star, dim),
        beta: beta.beta,
        beta_direct: beta.beta_direct,
        alpha: fr.alpha,
        y_alpha: point::to_vec(fr.y_alpha, dim),
        asymmetry: a_val,
        y_asymmetry: point::to_vec(asym.y_asymmetry, dim),
        res_identity: beta.residual,
        ratio_a2_d: guard_d.then(|| a_val * a_val / d),
        ratio_b2_d: guard_d.then(|| beta.beta_sq / d),
        ratio_prop: (guard_d && beta.beta > 1e-12)
            .then(|| (a_val + d.sqrt()) / beta.beta),
        sp_lhs: sp.lhs,
        sp_rhs: sp.rhs,
    };
    report.validate()?;
    let flags = PanelFlags {
        center_converged: center.converged,
        alpha_converged: fr.converged,
        asymmetry_converged: asym.converged,
        beta_clamped: beta.clamped,
        center_multiplicity: center.multiplicity(),
    };
    Ok((report, flags))
}

/// Parameter-free assertions every panel must satisfy; returns the list of
/// violations (empty means the row passes).
pub fn assertion_failures(report: &FunctionalReport) -> Vec<String> {
    let mut out = Vec::new();
    if !report.is_finite() {
        out.push("non-finite entry in report".into());
    }
    if report.deficit < -1e-9 {
        out.push(format!("deficit {} below -1e-9", report.deficit));
    }
    if report.asymmetry < 2f64.sqrt() * report.beta - 1e-8 {
        out.push(format!(
            "ordering violated: A = {} < sqrt(2)·beta = {}",
            report.asymmetry,
            2f64.sqrt() * report.beta
        ));
    }
    if report.sp_lhs - report.sp_rhs < -1e-6 {
        out.push(format!(
            "strong Poincare violated: lhs {} rhs {}",
            report.sp_lhs, report.sp_rhs
        ));
    }
    if report.res_identity > 1e-6 * report.perimeter {
        out.push(format!(
            "identity residual {} exceeds 1e-6·P",
            report.res_identity
        ));
    }
    out
}
