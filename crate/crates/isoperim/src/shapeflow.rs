//! Descent on the penalized perimeter functional
//! P(E) + Λ·||E| − ω_n| + ¼·|β(E)² − ε| over radial graphs.
//!
//! The scheme is projected gradient descent on the graph coefficients:
//! central finite differences of the smooth terms (P, |E|, β²) and the
//! subgradient convention sign(0) = 0 for the absolute values, a projection
//! of every trial iterate back onto the |E| = ω_n manifold through the
//! constant mode, and a backtracking line search on the total energy.
//! Confinement in B_R0 is enforced by rejecting violating steps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{self, Params};
use crate::geometry::{Fourier, ShapeRep, SphereGrid};
use crate::nearly_spherical::SphericalFunction;
use crate::optim::{self, NmOptions};
use crate::point::{self, Point};

/// Configuration of one descent run.
#[derive(Debug, Clone, Copy)]
pub struct FlowConfig {
    pub dim: usize,
    /// Penalty weight Λ; must exceed the dimension.
    pub lambda: f64,
    /// Target oscillation level ε (squared-β units); `None` drops the term.
    pub eps: Option<f64>,
    /// Confinement radius R₀ > 1.
    pub r0: f64,
    /// Initial line-search step.
    pub eta: f64,
    pub max_iters: usize,
    /// Stop when the accepted step norm falls below this.
    pub tol: f64,
    /// Boundary node budget for flow energies.
    pub quadrature_n: usize,
    /// Central-difference step per coefficient.
    pub fd_step: f64,
    /// Run the two-step gradient agreement check at the initial point.
    pub check_gradient: bool,
    /// Mode cutoff of the Fourier search space: inits are zero-padded up to
    /// this mode count. `None` keeps the init's own coefficient span.
    pub max_modes: Option<usize>,
}

impl FlowConfig {
    pub fn new(dim: usize, lambda: f64) -> Self {
        Self {
            dim,
            lambda,
            eps: None,
            r0: 2.0,
            eta: 0.1,
            max_iters: 2000,
            tol: 1e-7,
            quadrature_n: 1024,
            fd_step: 1e-5,
            check_gradient: false,
            max_modes: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim != 2 && self.dim != 3 {
            return Err(Error::InvalidConfig("dimension must be 2 or 3".into()));
        }
        if self.lambda.is_nan() || self.lambda <= self.dim as f64 {
            return Err(Error::InvalidConfig(format!(
                "lambda = {} must exceed n = {}",
                self.lambda, self.dim
            )));
        }
        if self.r0.is_nan() || self.r0 <= 1.0 {
            return Err(Error::InvalidConfig(format!("R0 = {} must exceed 1", self.r0)));
        }
        if let Some(e) = self.eps {
            if e.is_nan() || e < 0.0 {
                return Err(Error::InvalidConfig(format!("eps = {e} must be >= 0")));
            }
        }
        Ok(())
    }
}

/// The three energy terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct EnergyTerms {
    pub perimeter: f64,
    pub volume_penalty: f64,
    pub oscillation_penalty: f64,
}

impl EnergyTerms {
    pub fn total(&self) -> f64 {
        self.perimeter + self.volume_penalty + self.oscillation_penalty
    }
}

/// Penalized energy of an arbitrary shape, with a fresh multistart center
/// solve for the oscillation term.
pub fn penalized_energy(
    shape: &ShapeRep,
    cfg: &FlowConfig,
    params: &Params,
) -> Result<(f64, EnergyTerms)> {
    cfg.validate()?;
    if max_extent(shape) >= cfg.r0 {
        return Err(Error::ConfinementViolated {
            max_radius: max_extent(shape),
            r0: cfg.r0,
        });
    }
    let n = shape.dim();
    let p = shape.perimeter();
    let v = shape.volume();
    let vol_pen = cfg.lambda * (v - point::unit_ball_volume(n)).abs();
    let osc_pen = match cfg.eps {
        None => 0.0,
        Some(eps) => {
            let beta = functionals::beta(shape, params)?;
            0.25 * (beta.beta_sq - eps).abs()
        }
    };
    let terms = EnergyTerms {
        perimeter: p,
        volume_penalty: vol_pen,
        oscillation_penalty: osc_pen,
    };
    Ok((terms.total(), terms))
}

fn max_extent(shape: &ShapeRep) -> f64 {
    match shape {
        ShapeRep::Polygon2D(p) => p
            .vertices()
            .iter()
            .map(|v| v[0].hypot(v[1]))
            .fold(0.0, f64::max),
        ShapeRep::RadialGraph2D(f) => f.max_radius(),
        ShapeRep::RadialGraph3D(g) => g.max_radius(),
    }
}

/// One iterate of the descent. The JSON-lines serialization carries the six
/// schema fields; the coefficient vector stays in-process.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowState {
    pub iteration: usize,
    pub energy: f64,
    #[serde(rename = "P")]
    pub perimeter: f64,
    #[serde(rename = "volPen")]
    pub volume_penalty: f64,
    #[serde(rename = "oscPen")]
    pub oscillation_penalty: f64,
    #[serde(rename = "stepNorm")]
    pub step_norm: f64,
    #[serde(skip)]
    pub coefficients: Vec<f64>,
}

/// A full descent run.
#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub states: Vec<FlowState>,
    pub final_u: SphericalFunction,
    pub converged: bool,
    /// Steps rejected because they left B_R0 or broke star-shapedness.
    pub confinement_rejections: usize,
    /// Worst relative disagreement of the two-step gradient check, if run.
    pub gradient_check: Option<f64>,
    /// min over iterates of P − n·ω_n^(1/n)·|E|^((n−1)/n).
    pub min_isoperimetric_gap: f64,
}

impl FlowTrajectory {
    pub fn final_state(&self) -> &FlowState {
        self.states.last().expect("trajectory has at least one state")
    }

    pub fn write_jsonl<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        for s in &self.states {
            serde_json::to_writer(&mut w, s)?;
            writeln!(w)?;
        }
        Ok(())
    }
}

// Coefficient-vector view of a spherical function.
fn get_coeffs(u: &SphericalFunction) -> Vec<f64> {
    match u {
        SphericalFunction::Fourier(f) => {
            let mut c = Vec::with_capacity(1 + 2 * f.a.len());
            c.push(f.a0);
            c.extend_from_slice(&f.a);
            c.extend_from_slice(&f.b);
            c
        }
        SphericalFunction::Grid(g) => g.values().to_vec(),
    }
}

fn from_coeffs(proto: &SphericalFunction, c: &[f64]) -> Result<SphericalFunction> {
    match proto {
        SphericalFunction::Fourier(f) => {
            let k = f.a.len();
            Ok(SphericalFunction::Fourier(Fourier::new(
                c[0],
                c[1..1 + k].to_vec(),
                c[1 + k..].to_vec(),
            )?))
        }
        SphericalFunction::Grid(g) => Ok(SphericalFunction::Grid(SphereGrid::new(
            g.nlat(),
            g.nlon(),
            c.to_vec(),
        )?)),
    }
}

struct Evaluator<'a> {
    cfg: &'a FlowConfig,
    proto: SphericalFunction,
    /// Warm-start center for the oscillation term.
    warm: Point,
    confinement_rejections: usize,
}

#[derive(Clone, Copy)]
struct Terms {
    p: f64,
    v: f64,
    beta_sq: f64,
}

impl<'a> Evaluator<'a> {
    /// Perimeter and volume on flow-sized rules (exact area, spectral P).
    fn p_v(&self, u: &SphericalFunction) -> (f64, f64) {
        match u {
            SphericalFunction::Fourier(f) => {
                let nv = (4 * f.max_mode() + 8).max(64);
                (f.arc_length_at(self.cfg.quadrature_n), f.area_at(nv))
            }
            SphericalFunction::Grid(g) => (g.surface_area(), g.volume()),
        }
    }

    fn volume_of(&self, u: &SphericalFunction) -> f64 {
        match u {
            SphericalFunction::Fourier(f) => f.area_at((4 * f.max_mode() + 8).max(64)),
            SphericalFunction::Grid(g) => g.volume(),
        }
    }

    /// Smooth term values, or `None` for infeasible coefficients.
    fn terms(&mut self, c: &[f64]) -> Option<Terms> {
        let u = from_coeffs(&self.proto, c).ok()?;
        let shape = u.to_shape();
        if max_extent(&shape) >= self.cfg.r0 {
            self.confinement_rejections += 1;
            return None;
        }
        let (p, v) = self.p_v(&u);
        let beta_sq = if self.cfg.eps.is_some() {
            let q = shape.boundary_quadrature(self.cfg.quadrature_n).ok()?;
            let n = shape.dim() as f64;
            let r = shape.volume_radius();
            // warm-started center solve; the center moves continuously
            let opts = NmOptions {
                max_iters: 200,
                tol: 1e-9,
                step: 1e-3,
            };
            let dimu = shape.dim();
            let ms = optim::multistart(
                |y| {
                    let yy = point::from_slice(y);
                    -q.points
                        .iter()
                        .zip(&q.normals)
                        .zip(&q.weights)
                        .map(|((pt, nu), w)| {
                            let d = point::sub(*pt, yy);
                            let dist = point::norm(d).max(1e-12);
                            w * point::dot(*nu, d) / dist
                        })
                        .sum::<f64>()
                },
                &[self.warm[..dimu].to_vec()],
                &opts,
            );
            self.warm = point::from_slice(&ms.best.x);
            let gamma = -ms.best.value / (n - 1.0);
            ((p - (n - 1.0) * gamma) / r.powf(n - 1.0)).max(0.0)
        } else {
            0.0
        };
        Some(Terms { p, v, beta_sq })
    }

    fn energy(&self, t: Terms) -> f64 {
        let n = self.cfg.dim;
        let mut e = t.p + self.cfg.lambda * (t.v - point::unit_ball_volume(n)).abs();
        if let Some(eps) = self.cfg.eps {
            e += 0.25 * (t.beta_sq - eps).abs();
        }
        e
    }

    /// Projects the constant mode so that |E| = ω_n exactly.
    fn project_volume(&self, c: &[f64]) -> Option<Vec<f64>> {
        let mut u = from_coeffs(&self.proto, c).ok()?;
        let target = point::unit_ball_volume(self.cfg.dim);
        for _ in 0..60 {
            let v = self.volume_of(&u);
            if (v - target).abs() <= 1e-12 {
                return Some(get_coeffs(&u));
            }
            let dv = match &u {
                SphericalFunction::Fourier(f) => {
                    let n = (4 * f.max_mode() + 8).max(64);
                    crate::quadrature::periodic_trapezoid(n, |t| f.radius(t))
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
                return None;
            }
            let da = (target - v) / dv;
            u = match &u {
                SphericalFunction::Fourier(f) => SphericalFunction::Fourier(
                    Fourier::new(f.a0 + da, f.a.clone(), f.b.clone()).ok()?,
                ),
                SphericalFunction::Grid(g) => SphericalFunction::Grid(g.shifted(da).ok()?),
            };
        }
        None
    }
}

fn sign0(x: f64) -> f64 {
    if x.abs() <= 1e-11 {
        0.0
    } else {
        x.signum()
    }
}

/// Two-step agreement of the finite-difference directional derivative of the
/// total energy along random directions: returns the worst relative
/// deviation between the h and h/2 estimates.
pub fn gradient_check(
    u: &SphericalFunction,
    cfg: &FlowConfig,
    directions: usize,
    seed: u64,
) -> Result<f64> {
    cfg.validate()?;
    let c0 = get_coeffs(u);
    let mut ev = Evaluator {
        cfg,
        proto: u.clone(),
        warm: u.to_shape().barycenter(),
        confinement_rejections: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..directions {
        let mut d: Vec<f64> = (0..c0.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let nd = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        d.iter_mut().for_each(|x| *x /= nd);
        let slope = |h: f64, ev: &mut Evaluator| -> Option<f64> {
            let cp: Vec<f64> = c0.iter().zip(&d).map(|(c, d)| c + h * d).collect();
            let cm: Vec<f64> = c0.iter().zip(&d).map(|(c, d)| c - h * d).collect();
            let tp = ev.terms(&cp)?;
            let tm = ev.terms(&cm)?;
            Some((ev.energy(tp) - ev.energy(tm)) / (2.0 * h))
        };
        let g1 = slope(cfg.fd_step, &mut ev);
        let g2 = slope(0.5 * cfg.fd_step, &mut ev);
        if let (Some(g1), Some(g2)) = (g1, g2) {
            let denom = g1.abs().max(g2.abs()).max(1e-8);
            worst = worst.max((g1 - g2).abs() / denom);
        }
    }
    Ok(worst)
}

/// Runs the projected descent from `init`.
pub fn minimize(init: &SphericalFunction, cfg: &FlowConfig) -> Result<FlowTrajectory> {
    cfg.validate()?;
    if init.dim() != cfg.dim {
        return Err(Error::InvalidConfig(format!(
            "shape dimension {} does not match config dimension {}",
            init.dim(),
            cfg.dim
        )));
    }
    let padded;
    let init = match (cfg.max_modes, init) {
        (Some(k), SphericalFunction::Fourier(f)) => {
            if f.max_mode() > k {
                return Err(Error::InvalidConfig(format!(
                    "init has mode {} above the cutoff {k}",
                    f.max_mode()
                )));
            }
            let mut a = f.a.clone();
            let mut b = f.b.clone();
            a.resize(k, 0.0);
            b.resize(k, 0.0);
            padded = SphericalFunction::Fourier(Fourier::new(f.a0, a, b)?);
            &padded
        }
        _ => init,
    };
    let gradient_deviation = if cfg.check_gradient {
        Some(gradient_check(init, cfg, 10, 0x5eed)?)
    } else {
        None
    };

    let mut ev = Evaluator {
        cfg,
        proto: init.clone(),
        warm: init.to_shape().barycenter(),
        confinement_rejections: 0,
    };
    let mut c = ev
        .project_volume(&get_coeffs(init))
        .ok_or_else(|| Error::NormalizationDiverged {
            w1inf: init.w1_inf(),
        })?;
    let mut t = ev.terms(&c).ok_or(Error::ConfinementViolated {
        max_radius: max_extent(&init.to_shape()),
        r0: cfg.r0,
    })?;
    let mut energy = ev.energy(t);

    let n = cfg.dim;
    let iso_gap = |t: &Terms| {
        t.p - n as f64 * point::unit_ball_volume(n).powf(1.0 / n as f64)
            * t.v.powf((n as f64 - 1.0) / n as f64)
    };
    let mut min_iso_gap = iso_gap(&t);

    let mut states = vec![FlowState {
        iteration: 0,
        energy,
        perimeter: t.p,
        volume_penalty: energy_vol_pen(cfg, t.v),
        oscillation_penalty: energy_osc_pen(cfg, t.beta_sq),
        step_norm: 0.0,
        coefficients: c.clone(),
    }];
    let mut eta = cfg.eta;
    let mut converged = false;
    let omega = point::unit_ball_volume(n);

    for iteration in 1..=cfg.max_iters {
        // term-wise central differences
        let sv = sign0(t.v - omega);
        let sb = cfg.eps.map(|e| sign0(t.beta_sq - e)).unwrap_or(0.0);
        let mut grad = vec![0.0; c.len()];
        let mut dvol = vec![0.0; c.len()];
        let mut degenerate = false;
        for i in 0..c.len() {
            let mut cp = c.clone();
            cp[i] += cfg.fd_step;
            let mut cm = c.clone();
            cm[i] -= cfg.fd_step;
            let (tp, tm) = match (ev.terms(&cp), ev.terms(&cm)) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    degenerate = true;
                    break;
                }
            };
            let dp = (tp.p - tm.p) / (2.0 * cfg.fd_step);
            let dv = (tp.v - tm.v) / (2.0 * cfg.fd_step);
            let db = (tp.beta_sq - tm.beta_sq) / (2.0 * cfg.fd_step);
            dvol[i] = dv;
            grad[i] = dp + cfg.lambda * sv * dv + 0.25 * sb * db;
        }
        if degenerate {
            converged = false;
            break;
        }

        // project out the volume-normal component: iterates live on the
        // |E| = ω_n manifold, so only the tangential gradient drives descent
        if sv == 0.0 {
            let gn = dot_slice(&grad, &dvol);
            let vv = dot_slice(&dvol, &dvol);
            if vv > 0.0 {
                for (g, dv) in grad.iter_mut().zip(&dvol) {
                    *g -= gn / vv * dv;
                }
            }
        }

        // backtracking line search on the projected trial point
        let mut eta_try = (2.0 * eta).min(cfg.eta);
        let mut accepted: Option<(Vec<f64>, Terms, f64)> = None;
        for _ in 0..40 {
            let trial: Vec<f64> = c.iter().zip(&grad).map(|(ci, gi)| ci - eta_try * gi).collect();
            if let Some(proj) = ev.project_volume(&trial) {
                if let Some(tt) = ev.terms(&proj) {
                    let e = ev.energy(tt);
                    if e < energy {
                        accepted = Some((proj, tt, e));
                        break;
                    }
                }
            }
            eta_try *= 0.5;
        }

        let Some((cn, tn, en)) = accepted else {
            // no descent step: converged if the gradient is tangentially zero
            let gn = dot_slice(&grad, &dvol);
            let vv = dot_slice(&dvol, &dvol);
            let mut proj_norm_sq = 0.0;
            for i in 0..c.len() {
                let pg = grad[i] - if vv > 0.0 { gn / vv * dvol[i] } else { 0.0 };
                proj_norm_sq += pg * pg;
            }
            converged = proj_norm_sq.sqrt() < 1e-5;
            break;
        };

        let step_norm = c
            .iter()
            .zip(&cn)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        c = cn;
        t = tn;
        energy = en;
        eta = eta_try;
        min_iso_gap = min_iso_gap.min(iso_gap(&t));
        states.push(FlowState {
            iteration,
            energy,
            perimeter: t.p,
            volume_penalty: energy_vol_pen(cfg, t.v),
            oscillation_penalty: energy_osc_pen(cfg, t.beta_sq),
            step_norm,
            coefficients: c.clone(),
        });
        if step_norm < cfg.tol {
            converged = true;
            break;
        }
    }

    let final_u = from_coeffs(init, &c)?;
    Ok(FlowTrajectory {
        states,
        final_u,
        converged,
        confinement_rejections: ev.confinement_rejections,
        gradient_check: gradient_deviation,
        min_isoperimetric_gap: min_iso_gap,
    })
}

fn energy_vol_pen(cfg: &FlowConfig, v: f64) -> f64 {
    cfg.lambda * (v - point::unit_ball_volume(cfg.dim)).abs()
}

fn energy_osc_pen(cfg: &FlowConfig, beta_sq: f64) -> f64 {
    match cfg.eps {
        None => 0.0,
        Some(e) => 0.25 * (beta_sq - e).abs(),
    }
}

fn dot_slice(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Summary of one random-seed flow run.
#[derive(Debug, Clone, Serialize)]
pub struct FlowRunSummary {
    pub seed_index: usize,
    pub converged: bool,
    pub iterations: usize,
    pub final_deficit: f64,
    pub final_volume_gap: f64,
    pub final_energy: f64,
    pub min_energy: f64,
    /// min over iterates of P − n·ω_n^(1/n)·|E|^((n−1)/n).
    pub min_isoperimetric_gap: f64,
    pub gradient_check: Option<f64>,
}

/// Multi-seed report for the ball-uniqueness experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub lambda: f64,
    pub r0: f64,
    pub seeds: usize,
    /// Fraction of runs reaching final deficit <= 1e-3.
    pub fraction_converged: f64,
    pub max_final_volume_gap: f64,
    pub min_energy: f64,
    pub runs: Vec<FlowRunSummary>,
}

/// Random mode-band initial conditions for the flows.
pub fn random_flow_seeds(
    count: usize,
    seed: u64,
    modes: (usize, usize),
    max_amplitude: f64,
) -> Vec<Fourier> {
    (0..count)
        .map(|i| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let amp = rng.gen_range(0.3 * max_amplitude..max_amplitude);
            let mut a = vec![0.0; modes.1];
            let mut b = vec![0.0; modes.1];
            for k in modes.0..=modes.1 {
                a[k - 1] = rng.gen_range(-1.0..1.0);
                b[k - 1] = rng.gen_range(-1.0..1.0);
            }
            // rescale the raw draw to the target sup norm before validating
            let m = 64 * (modes.1 + 1);
            let mut sup = 0.0f64;
            for j in 0..m {
                let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                let mut u = 0.0;
                for k in 1..=modes.1 {
                    let (sk, ck) = (k as f64 * t).sin_cos();
                    u += a[k - 1] * ck + b[k - 1] * sk;
                }
                sup = sup.max(u.abs());
            }
            let s = amp / sup.max(1e-12);
            Fourier::new(
                0.0,
                a.iter().map(|c| c * s).collect(),
                b.iter().map(|c| c * s).collect(),
            )
            .expect("scaled seed is star-shaped")
        })
        .collect()
}

/// Runs `seeds` random flows with the oscillation term disabled and reports
/// how many reach the ball. Runs execute in parallel and merge by index.
pub fn ball_uniqueness_experiment(
    cfg: &FlowConfig,
    seeds: usize,
    rng_seed: u64,
) -> Result<ExperimentReport> {
    let mut cfg = *cfg;
    cfg.eps = None;
    cfg.validate()?;
    let inits = random_flow_seeds(seeds, rng_seed, (2, 6), 0.15);
    let runs: Vec<FlowRunSummary> = inits
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let traj = minimize(&SphericalFunction::Fourier(f.clone()), &cfg)
                .expect("flow seeds are feasible");
            let shape = traj.final_u.to_shape();
            let d = functionals::deficit(&shape);
            let vgap = (shape.volume() - point::unit_ball_volume(cfg.dim)).abs();
            let min_energy = traj
                .states
                .iter()
                .map(|s| s.energy)
                .fold(f64::MAX, f64::min);
            FlowRunSummary {
                seed_index: i,
                converged: traj.converged,
                iterations: traj.states.last().map(|s| s.iteration).unwrap_or(0),
                final_deficit: d,
                final_volume_gap: vgap,
                final_energy: traj.final_state().energy,
                min_energy,
                min_isoperimetric_gap: traj.min_isoperimetric_gap,
                gradient_check: traj.gradient_check,
            }
        })
        .collect();
    let reached = runs.iter().filter(|r| r.final_deficit <= 1e-3).count();
    Ok(ExperimentReport {
        lambda: cfg.lambda,
        r0: cfg.r0,
        seeds,
        fraction_converged: reached as f64 / seeds.max(1) as f64,
        max_final_volume_gap: runs
            .iter()
            .map(|r| r.final_volume_gap)
            .fold(0.0, f64::max),
        min_energy: runs.iter().map(|r| r.min_energy).fold(f64::MAX, f64::min),
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn config_validation() {
        assert!(FlowConfig::new(2, 3.0).validate().is_ok());
        assert!(FlowConfig::new(2, 2.0).validate().is_err());
        let mut c = FlowConfig::new(2, 3.0);
        c.r0 = 0.9;
        assert!(c.validate().is_err());
    }

    #[test]
    fn ball_energy_is_perimeter() {
        let mut cfg = FlowConfig::new(2, 3.0);
        cfg.eps = Some(0.0);
        let ball = ShapeRep::RadialGraph2D(Fourier::zero());
        let (e, terms) = penalized_energy(&ball, &cfg, &Params::default()).unwrap();
        assert!((e - 2.0 * PI).abs() < 1e-7);
        assert!(terms.volume_penalty.abs() < 1e-12);
        assert!(terms.oscillation_penalty.abs() < 1e-7);
    }

    #[test]
    fn confinement_is_rejected() {
        let cfg = FlowConfig::new(2, 3.0);
        let big = ShapeRep::RadialGraph2D(Fourier::zero()).scaled(2.5);
        assert!(matches!(
            penalized_energy(&big, &cfg, &Params::default()),
            Err(Error::ConfinementViolated { .. })
        ));
    }

    #[test]
    fn ball_is_critical_at_iteration_zero() {
        let cfg = FlowConfig::new(2, 3.0);
        let traj = minimize(&SphericalFunction::Fourier(Fourier::zero()), &cfg).unwrap();
        assert!(traj.converged);
        assert_eq!(traj.final_state().iteration, 0);
        assert!((traj.final_state().energy - 2.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn mode_cutoff_pads_and_rejects() {
        let mut cfg = FlowConfig::new(2, 3.0);
        cfg.max_modes = Some(4);
        let init = SphericalFunction::Fourier(Fourier::mode(2, 0.1).unwrap());
        let traj = minimize(&init, &cfg).unwrap();
        let SphericalFunction::Fourier(f) = &traj.final_u else {
            panic!()
        };
        assert_eq!(f.max_mode(), 4);

        let too_wide = SphericalFunction::Fourier(Fourier::mode(6, 0.05).unwrap());
        assert!(matches!(
            minimize(&too_wide, &cfg),
            Err(Error::InvalidConfig(_))
        ));
    }
}
