//! One-dimensional quadrature, summation and line-search primitives.

use std::f64::consts::PI;

/// Pairwise summation with a fixed tree shape (halving down to blocks of 8).
///
/// The result depends only on the order of `xs`, never on threading.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 8;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, computed by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n > 0, "Gauss-Legendre rule needs at least one node");
    let mut rule = vec![(0.0, 0.0); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th largest root.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[i] = (x, w);
        rule[n - 1 - i] = (-x, w);
    }
    if n % 2 == 1 {
        rule[n / 2].0 = 0.0;
    }
    rule.reverse();
    rule
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// Gauss-Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    gauss_legendre(n)
        .into_iter()
        .map(|(x, w)| (mid + half * x, half * w))
        .collect()
}

/// Mean of a `2π`-periodic function over `m` equally spaced nodes
/// (the periodic trapezoid rule divided by `2π`).
pub fn periodic_mean(m: usize, f: impl Fn(f64) -> f64) -> f64 {
    let step = 2.0 * PI / m as f64;
    let values: Vec<f64> = (0..m).map(|j| f(j as f64 * step)).collect();
    pairwise_sum(&values) / m as f64
}

/// Periodic trapezoid mean, doubling the node count from `m0` until two
/// successive values agree to `rel_tol` or `max_nodes` is reached.
///
/// Returns `(value, error_estimate, nodes_used)`; the estimate is the gap
/// between the last two resolutions.
pub fn periodic_mean_converged(
    m0: usize,
    max_nodes: usize,
    rel_tol: f64,
    f: impl Fn(f64) -> f64,
) -> (f64, f64, usize) {
    let mut m = m0.max(4);
    let mut prev = periodic_mean(m, &f);
    loop {
        let next_m = m * 2;
        let next = periodic_mean(next_m, &f);
        let gap = (next - prev).abs();
        m = next_m;
        if gap <= rel_tol * next.abs() || m >= max_nodes {
            return (next, gap, m);
        }
        prev = next;
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss-Legendre quadrature to absolute tolerance `tol`: a
/// 16-node panel is accepted when it agrees with the sum over its halves.
pub fn adaptive_gauss(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let rule = gauss_legendre(16);
    let panel = |lo: f64, hi: f64| {
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        half * rule
            .iter()
            .map(|&(x, w)| w * f(mid + half * x))
            .sum::<f64>()
    };
    gauss_step(&panel, a, b, panel(a, b), tol, 40)
}

fn gauss_step(
    panel: &impl Fn(f64, f64) -> f64,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (left, right) = (panel(a, m), panel(m, b));
    if depth == 0 || (left + right - whole).abs() <= tol {
        return left + right;
    }
    gauss_step(panel, a, m, left, 0.5 * tol, depth - 1)
        + gauss_step(panel, m, b, right, 0.5 * tol, depth - 1)
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
///
/// Returns the best `(x, f(x))` seen, including the bracket ends.
pub fn golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64, x_tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut best = (lo, f(lo));
    let fh = f(hi);
    if fh > best.1 {
        best = (hi, fh);
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo <= x_tol {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    for (x, fx) in [(x1, f1), (x2, f2)] {
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}
