//! One-dimensional quadrature rules.

/// Gauss–Legendre nodes and weights on [-1, 1].
///
/// Nodes are found by Newton iteration on the Legendre polynomial with the
/// usual Chebyshev-like initial guesses; accurate to machine precision for
/// the orders used here (up to a few thousand points).
pub fn gauss_legendre(q: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(q >= 1, "at least one quadrature point");
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    let qf = q as f64;
    for i in 0..q.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (qf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(q, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[q - 1 - i] = x;
        weights[i] = w;
        weights[q - 1 - i] = w;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
        let (_, d) = legendre_with_derivative(q, 0.0);
        weights[q / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// Value and derivative of the Legendre polynomial P_q at x.
fn legendre_with_derivative(q: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if q == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=q {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = q as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Trapezoid rule for a periodic function sampled at `n` uniform points on
/// [0, 2*pi); spectrally accurate for smooth periodic integrands.
pub fn periodic_trapezoid(n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    (0..n).map(|j| f(j as f64 * h)).sum::<f64>() * h
}
