//! Gauss–Legendre and generalized Gauss–Laguerre rules.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (z * p1 - p0) / (z * z - 1.0))
}

/// Generalized Gauss–Laguerre rule for `∫₀^∞ x^α e^{−x} f(x) dx`.
///
/// Returns nodes and natural-log weights; the weights of the outermost
/// nodes underflow long before the integrand does.
pub fn gauss_laguerre(n: usize, alpha: u32) -> (Vec<f64>, Vec<f64>) {
    let a = alpha as f64;
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut ln_w = vec![0.0; n];
    // ln Γ(n + α) − ln Γ(n) for integer α
    let ln_ratio: f64 = (0..alpha).map(|k| (nf + k as f64).ln()).sum();
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => (1.0 + a) * (3.0 + 0.92 * a) / (1.0 + 2.4 * nf + 1.8 * a),
            1 => z + (15.0 + 6.25 * a) / (1.0 + 0.9 * a + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * a / (1.0 + 3.5 * ai)) * (z - x[i - 2])
                    / (1.0 + 0.3 * a)
            }
        };
        let mut p2 = 0.0;
        let mut pp = 1.0;
        for _ in 0..200 {
            let (p1, q2) = laguerre_pair(n, a, z);
            p2 = q2;
            pp = (nf * p1 - (nf + a) * p2) / z;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        let (p1, q2) = laguerre_pair(n, a, z);
        if p1.is_finite() {
            p2 = q2;
            pp = (nf * p1 - (nf + a) * p2) / z;
        }
        x[i] = z;
        // w = −Γ(n+α)/Γ(n) / (pp·n·p2)
        ln_w[i] = ln_ratio - (-(pp * nf * p2)).ln();
    }
    (x, ln_w)
}

/// Returns (L_n^α(z), L_{n−1}^α(z)).
fn laguerre_pair(n: usize, a: f64, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jf - 1.0 + a - z) * p2 - (jf - 1.0 + a) * p3) / jf;
    }
    (p1, p2)
}
