#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

/// Gauss–Legendre nodes on [−1, 1] by Newton iteration on P_n.
pub fn legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

fn factorial(n: i32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Associated Legendre function with the Condon–Shortley phase, from the
/// explicit Rodrigues expansion.
pub fn assoc_legendre(l: i32, m: i32, x: f64) -> f64 {
    let ma = m.abs();
    let s = (1.0 - x * x).sqrt();
    // d^{l+|m|}/dx^{l+|m|} (x² − 1)^l / (2^l l!)
    let mut deriv = 0.0;
    for k in 0..=l {
        let power = 2 * k;
        if power < l + ma {
            continue;
        }
        let coef = factorial(l) / (factorial(k) * factorial(l - k)) * if (l - k) % 2 == 0 { 1.0 } else { -1.0 };
        let falling = factorial(power) / factorial(power - l - ma);
        deriv += coef * falling * x.powi(power - l - ma);
    }
    deriv /= 2f64.powi(l) * factorial(l);
    let cs = if ma % 2 == 0 { 1.0 } else { -1.0 };
    let p = cs * s.powi(ma) * deriv;
    if m >= 0 {
        p
    } else {
        let sign = if ma % 2 == 0 { 1.0 } else { -1.0 };
        sign * factorial(l - ma) / factorial(l + ma) * p
    }
}

pub fn ylm(l: i32, m: i32, theta: f64, phi: f64) -> Complex64 {
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * factorial(l - m) / factorial(l + m)).sqrt();
    norm * assoc_legendre(l, m, theta.cos()) * Complex64::from_polar(1.0, m as f64 * phi)
}

/// `⟨l' m'| x_q / r |l m⟩` on a product grid exact for these integrands.
pub fn angular_quadrature(l: i32, m: i32, q: i32, lp: i32, mp: i32) -> Complex64 {
    let nodes = legendre_nodes(24);
    let nphi = 32;
    let mut sum = Complex64::new(0.0, 0.0);
    for &(x, w) in &nodes {
        let theta = x.acos();
        let st = theta.sin();
        for j in 0..nphi {
            let phi = 2.0 * PI * j as f64 / nphi as f64;
            let xq = match q {
                1 => -st * Complex64::from_polar(1.0, phi) / 2f64.sqrt(),
                -1 => st * Complex64::from_polar(1.0, -phi) / 2f64.sqrt(),
                _ => unreachable!(),
            };
            sum += w * (2.0 * PI / nphi as f64) * ylm(lp, mp, theta, phi).conj() * xq * ylm(l, m, theta, phi);
        }
    }
    sum
}

/// Adaptive Simpson quadrature of `f` on `[a, b]`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
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
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
}
