//! Derivative-free simplex minimization with deterministic multistart.
//!
//! One optimizer serves the center searches of the Riesz potential, the
//! Fraenkel asymmetry and the combined index: the objectives are cheap,
//! low-dimensional (R² or R³) and not reliably differentiable, so standard
//! Nelder–Mead with a simplex-diameter stop is a good fit.

/// Options for a single Nelder–Mead run.
#[derive(Debug, Clone, Copy)]
pub struct NmOptions {
    pub max_iters: usize,
    /// Stop when the simplex diameter falls below this.
    pub tol: f64,
    /// Edge length of the initial simplex.
    pub step: f64,
}

impl Default for NmOptions {
    fn default() -> Self {
        Self {
            max_iters: 600,
            tol: 1e-8,
            step: 0.1,
        }
    }
}

/// Outcome of one simplex run.
#[derive(Debug, Clone)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub diameter: f64,
    pub converged: bool,
}

/// Minimizes `f` from `x0`. Non-finite objective values are treated as +∞.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    opts: &NmOptions,
) -> NmResult {
    let d = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    let v0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += opts.step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| {
            a.1.total_cmp(&b.1).then_with(|| {
                a.0.iter()
                    .zip(&b.0)
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
        })
    };
    let diameter = |s: &[(Vec<f64>, f64)]| -> f64 {
        let best = &s[0].0;
        s[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(best)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    };

    let mut iterations = 0;
    let mut converged = false;
    loop {
        order(&mut simplex);
        let diam = diameter(&simplex);
        if diam < opts.tol {
            converged = true;
            break;
        }
        if iterations >= opts.max_iters {
            break;
        }
        iterations += 1;

        // centroid of all but the worst
        let mut c = vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for (ci, xi) in c.iter_mut().zip(x) {
                *ci += xi / d as f64;
            }
        }
        let worst = simplex[d].clone();
        let second_worst = simplex[d - 1].1;
        let best = simplex[0].1;

        let lerp = |t: f64| -> Vec<f64> {
            c.iter()
                .zip(&worst.0)
                .map(|(ci, wi)| ci + t * (ci - wi))
                .collect()
        };

        let xr = lerp(1.0);
        let vr = eval(&xr, &mut evals);
        if vr < best {
            let xe = lerp(2.0);
            let ve = eval(&xe, &mut evals);
            simplex[d] = if ve < vr { (xe, ve) } else { (xr, vr) };
            continue;
        }
        if vr < second_worst {
            simplex[d] = (xr, vr);
            continue;
        }
        let xc = if vr < worst.1 { lerp(0.5) } else { lerp(-0.5) };
        let vc = eval(&xc, &mut evals);
        if vc < vr.min(worst.1) {
            simplex[d] = (xc, vc);
            continue;
        }
        // shrink toward the best vertex
        let best_x = simplex[0].0.clone();
        for (x, v) in simplex.iter_mut().skip(1) {
            for (xi, bi) in x.iter_mut().zip(&best_x) {
                *xi = bi + 0.5 * (*xi - bi);
            }
            *v = eval(x, &mut evals);
        }
    }

    order(&mut simplex);
    let diam = diameter(&simplex);
    NmResult {
        x: simplex[0].0.clone(),
        value: simplex[0].1,
        iterations,
        evaluations: evals,
        diameter: diam,
        converged,
    }
}

/// Multistart outcome: the best run plus everything else, merged
/// deterministically (value first, then lexicographic position).
#[derive(Debug, Clone)]
pub struct MultistartResult {
    pub best: NmResult,
    pub runs: Vec<NmResult>,
}

impl MultistartResult {
    /// Positions of runs whose value ties the best within `value_tol` but
    /// whose minimizer is at least `sep` away: candidate distinct optima.
    pub fn near_optimal_distinct(&self, value_tol: f64, sep: f64) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for r in &self.runs {
            if (r.value - self.best.value).abs() > value_tol {
                continue;
            }
            let far = |x: &[f64], y: &[f64]| {
                x.iter()
                    .zip(y)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
                    > sep
            };
            if far(&r.x, &self.best.x) && out.iter().all(|o| far(&r.x, o)) {
                out.push(r.x.clone());
            }
        }
        out
    }
}

/// Runs Nelder–Mead from every seed and merges deterministically.
pub fn multistart<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    seeds: &[Vec<f64>],
    opts: &NmOptions,
) -> MultistartResult {
    assert!(!seeds.is_empty(), "multistart needs at least one seed");
    let runs: Vec<NmResult> = seeds
        .iter()
        .map(|s| nelder_mead(&mut f, s, opts))
        .collect();
    let mut best_idx = 0;
    for (i, r) in runs.iter().enumerate().skip(1) {
        let b = &runs[best_idx];
        let better = r
            .value
            .total_cmp(&b.value)
            .then_with(|| {
                r.x.iter()
                    .zip(&b.x)
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .is_lt();
        if better {
            best_idx = i;
        }
    }
    let best = runs[best_idx].clone();
    MultistartResult { best, runs }
}

/// Axis-perturbed seed fan around a base point: the base plus 2·dim points
/// displaced by ±h along each axis.
pub fn axis_seeds(base: &[f64], h: f64) -> Vec<Vec<f64>> {
    let mut seeds = vec![base.to_vec()];
    for i in 0..base.len() {
        for s in [h, -h] {
            let mut x = base.to_vec();
            x[i] += s;
            seeds.push(x);
        }
    }
    seeds
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic_bowl() {
        let r = nelder_mead(
            |x| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.25).powi(2),
            &[0.0, 0.0],
            &NmOptions::default(),
        );
        assert!(r.converged);
        assert!((r.x[0] - 1.5).abs() < 1e-7);
        assert!((r.x[1] + 0.25).abs() < 1e-7);
    }

    #[test]
    fn handles_nonsmooth_objective() {
        let r = nelder_mead(
            |x| (x[0] - 0.3).abs() + (x[1] - 0.7).abs(),
            &[-1.0, -1.0],
            &NmOptions::default(),
        );
        assert!((r.x[0] - 0.3).abs() < 1e-6);
        assert!((r.x[1] - 0.7).abs() < 1e-6);
    }

    #[test]
    fn multistart_is_deterministic() {
        let f = |x: &[f64]| (x[0] * x[0] - 1.0).powi(2) + x[1] * x[1];
        let seeds = axis_seeds(&[0.0, 0.0], 0.5);
        let a = multistart(f, &seeds, &NmOptions::default());
        let b = multistart(f, &seeds, &NmOptions::default());
        assert_eq!(a.best.x, b.best.x);
        // two symmetric optima at x = ±1: the deterministic merge picks the
        // lexicographically smaller one on ties
        assert!((a.best.x[0].abs() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn infinite_values_are_avoided() {
        let r = nelder_mead(
            |x| {
                if x[0] < 0.0 {
                    f64::NAN
                } else {
                    (x[0] - 0.5).powi(2)
                }
            },
            &[1.0],
            &NmOptions::default(),
        );
        assert!((r.x[0] - 0.5).abs() < 1e-7);
    }
}
