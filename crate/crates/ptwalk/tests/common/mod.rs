//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the spectral machinery of the library: matrix
//! exponentials come from a Taylor series with scaling and squaring, time
//! averages from explicit time stepping, and rank statistics from direct
//! counting.

#![allow(dead_code)]

use ptwalk::{CMatrix, CVector, Complex};

/// `e^{A}` by scaling and squaring with a degree-30 Taylor polynomial.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm: f64 = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut s = 0;
    while norm / f64::powi(2.0, s) > 0.25 {
        s += 1;
    }
    let scaled = a.map(|z| z / f64::powi(2.0, s));
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled / Complex::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// `e^{−iMt}` for a real or complex generator `M`.
pub fn evolution(m: &CMatrix, t: f64) -> CMatrix {
    expm(&m.map(|z| z * Complex::new(0.0, -t)))
}

/// Trapezoidal time average of `|ψ_v(t)|²` over `[0, t_max]` with step
/// `dt`, starting from the uniform state and stepping with a single
/// precomputed `e^{−iM·dt}`, normalised to unit sum.
pub fn stepped_average(m: &CMatrix, t_max: f64, dt: f64) -> Vec<f64> {
    let n = m.nrows();
    let steps = (t_max / dt).round() as usize;
    let u = evolution(m, dt);
    let mut psi = CVector::from_element(n, Complex::new(1.0 / (n as f64).sqrt(), 0.0));
    let mut acc = vec![0.0; n];
    for k in 0..=steps {
        let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
        for (a, z) in acc.iter_mut().zip(psi.iter()) {
            *a += w * z.norm_sqr();
        }
        if k < steps {
            psi = &u * psi;
        }
    }
    let total: f64 = acc.iter().sum();
    acc.iter().map(|a| a / total).collect()
}

/// Zero-based average rank of every item by decreasing score, from
/// counting: `#{strictly greater} + (#{equal} − 1)/2`.
pub fn counting_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&a| {
            let greater = x.iter().filter(|&&b| b > a).count() as f64;
            let equal = x.iter().filter(|&&b| b == a).count() as f64;
            greater + (equal - 1.0) / 2.0
        })
        .collect()
}

/// Vigna's weighted τ with symmetrised additive hyperbolic weights, summed
/// over all ordered pairs. `None` when either input is entirely tied.
pub fn vigna_brute(x: &[f64], y: &[f64]) -> Option<f64> {
    let rx = counting_ranks(x);
    let ry = counting_ranks(y);
    let h = |r: f64| 1.0 / (r + 1.0);
    let sgn = |d: f64| {
        if d > 0.0 {
            1.0
        } else if d < 0.0 {
            -1.0
        } else {
            0.0
        }
    };
    let (mut num, mut dx, mut dy) = (0.0, 0.0, 0.0);
    for i in 0..x.len() {
        for j in 0..x.len() {
            if i == j {
                continue;
            }
            let w = h(rx[i]) + h(rx[j]) + h(ry[i]) + h(ry[j]);
            let (a, b) = (sgn(x[i] - x[j]), sgn(y[i] - y[j]));
            num += w * a * b;
            dx += w * a * a;
            dy += w * b * b;
        }
    }
    (dx > 0.0 && dy > 0.0).then(|| num / (dx * dy).sqrt())
}

/// Kendall's τ_b from concordant, discordant and tied pair counts.
pub fn kendall_brute(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    let (mut c, mut d, mut tx, mut ty) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            let a = (x[i] - x[j]) * (y[i] - y[j]);
            if x[i] == x[j] {
                tx += 1.0;
            }
            if y[i] == y[j] {
                ty += 1.0;
            }
            if a > 0.0 {
                c += 1.0;
            } else if a < 0.0 {
                d += 1.0;
            }
        }
    }
    let p = (n * (n - 1) / 2) as f64;
    let denom = ((p - tx) * (p - ty)).sqrt();
    (denom > 0.0).then(|| (c - d) / denom)
}

/// Maximum absolute entry of `a − b`.
pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
