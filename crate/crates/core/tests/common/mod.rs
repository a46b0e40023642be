//! Independent reference implementations used as test oracles. Nothing
//! here calls into the code paths it is used to check.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use langevin_mc::prng::RngStream;
use langevin_mc::targets::BoxSpec;

/// `log N(x | mean, var·I)`, written out term by term.
pub fn gauss_logpdf(x: &[f64], mean: &[f64], var: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..x.len() {
        let d = x[i] - mean[i];
        acc += -0.5 * (TAU * var).ln() - d * d / (2.0 * var);
    }
    acc
}

/// Direct double-loop autocorrelation.
#[allow(clippy::needless_range_loop)]
pub fn acf_brute(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let mut c0 = 0.0;
    for t in 0..n {
        c0 += (x[t] - mean) * (x[t] - mean);
    }
    (0..=max_lag)
        .map(|k| {
            let mut ck = 0.0;
            for t in 0..n - k {
                ck += (x[t] - mean) * (x[t + k] - mean);
            }
            ck / c0
        })
        .collect()
}

/// CDF of `(2/L)·sin²(nπs/L)` on `[0, L]`.
fn axis_cdf(s: f64, n: u32, len: f64) -> f64 {
    let w = 2.0 * n as f64 * PI / len;
    s / len - (w * s).sin() / (2.0 * n as f64 * PI)
}

/// Inverse CDF by bisection.
fn axis_quantile(u: f64, n: u32, len: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, len);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if axis_cdf(mid, n, len) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact i.i.d. draws from the box density, which factorizes per axis.
pub fn box_iid(spec: &BoxSpec, n: usize, stream: &mut RngStream) -> Vec<[f64; 2]> {
    (0..n)
        .map(|_| {
            let ux = stream.next_uniform();
            let uy = stream.next_uniform();
            [
                axis_quantile(ux, spec.nx, spec.lx),
                axis_quantile(uy, spec.ny, spec.ly),
            ]
        })
        .collect()
}

/// Central finite difference of `f` along every coordinate.
pub fn fd_grad(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut a = x.to_vec();
            let mut b = x.to_vec();
            a[i] += h;
            b[i] -= h;
            (f(&a) - f(&b)) / (2.0 * h)
        })
        .collect()
}

/// Relative error with an absolute floor for values near zero.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
