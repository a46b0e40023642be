//! Chain diagnostics: autocorrelation and ESS, box histograms compared to
//! the analytic grid, mode coverage, and empirical Fisher information.

use std::fmt::Write as _;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::samplers::Chain;
use crate::targets::particle_box::analytic_grid;
use crate::targets::{BoxSpec, Target, TargetDensity};

const NORMALIZATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsReport {
    /// Per-dimension autocorrelation at lags `0..=max_lag`.
    pub acf: Vec<Vec<f64>>,
    pub ess: Vec<f64>,
    pub acceptance_rate: f64,
    pub tv_distance: Option<f64>,
    pub mode_coverage: Option<f64>,
    pub wall_time_s: f64,
    pub fisher_trace: Option<f64>,
}

impl DiagnosticsReport {
    pub fn min_ess(&self) -> f64 {
        self.ess.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `lag,rho_x0,rho_x1,...`, one row per lag.
    pub fn acf_csv(&self) -> String {
        let mut out = String::from("lag");
        for j in 0..self.acf.len() {
            write!(out, ",rho_x{j}").unwrap();
        }
        out.push('\n');
        let lags = self.acf.iter().map(Vec::len).min().unwrap_or(0);
        for k in 0..lags {
            write!(out, "{k}").unwrap();
            for dim in &self.acf {
                write!(out, ",{}", dim[k]).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

fn centered(series: &[f64]) -> Result<Vec<f64>> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort {
            need: 2,
            got: series.len(),
        });
    }
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    let out: Vec<f64> = series.iter().map(|x| x - mean).collect();
    if out.iter().all(|d| *d == 0.0) || !out.iter().all(|d| d.is_finite()) {
        return Err(Error::ConstantSeries);
    }
    Ok(out)
}

/// Autocorrelation at every lag `0..n`, by zero-padded FFT.
fn autocorrelation_all(series: &[f64]) -> Result<Vec<f64>> {
    let dev = centered(series)?;
    let n = dev.len();
    let m = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = dev
        .iter()
        .map(|&x| Complex::new(x, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(m)
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    for c in &mut buf {
        *c = Complex::new(c.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let c0 = buf[0].re;
    Ok(buf[..n].iter().map(|c| c.re / c0).collect())
}

/// `ρ(k) = Σ_t (x_t − x̄)(x_{t+k} − x̄) / Σ_t (x_t − x̄)²` for `k = 0..=max_lag`.
pub fn autocorrelation(series: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    if max_lag >= series.len() {
        return Err(Error::InvalidParameter(format!(
            "max_lag {max_lag} must be below series length {}",
            series.len()
        )));
    }
    let mut rho = autocorrelation_all(series)?;
    rho.truncate(max_lag + 1);
    rho[0] = 1.0;
    Ok(rho)
}

/// `n / (1 + 2·Σ_{k=1..K} ρ(k))`, with `K` the first lag where
/// `ρ(K) + ρ(K+1) < 0`. Clamped to `(0, n]`.
pub fn ess(series: &[f64]) -> Result<f64> {
    let rho = autocorrelation_all(series)?;
    let n = series.len();
    let mut sum = 0.0;
    for k in 1..n {
        sum += rho[k];
        if k + 1 >= n || rho[k] + rho[k + 1] < 0.0 {
            break;
        }
    }
    let denom = 1.0 + 2.0 * sum;
    let n = n as f64;
    if denom <= 0.0 || !denom.is_finite() {
        return Ok(n);
    }
    Ok((n / denom).clamp(f64::MIN_POSITIVE, n))
}

fn bin(coord: f64, len: f64, res: usize) -> Option<usize> {
    if !(0.0..=len).contains(&coord) {
        return None;
    }
    Some(((coord / len * res as f64) as usize).min(res - 1))
}

/// Normalized `res × res` histogram over the box (rows index `y`).
pub fn histogram2d<I, S>(samples: I, spec: &BoxSpec, res: usize) -> Result<Grid>
where
    I: IntoIterator<Item = S>,
    S: AsRef<[f64]>,
{
    if res < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid resolution must be >= 2, got {res}"
        )));
    }
    let mut grid = Grid::zeros(res, res);
    let mut n = 0usize;
    for s in samples {
        let p = s.as_ref();
        if p.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: p.len(),
            });
        }
        match (bin(p[0], spec.lx, res), bin(p[1], spec.ly, res)) {
            (Some(j), Some(i)) => *grid.get_mut(i, j) += 1.0,
            _ => return Err(Error::OutOfBox(p.to_vec())),
        }
        n += 1;
    }
    if n > 0 {
        let scale = 1.0 / n as f64;
        let (rows, cols) = grid.shape();
        for i in 0..rows {
            for j in 0..cols {
                *grid.get_mut(i, j) *= scale;
            }
        }
    }
    Ok(grid)
}

/// `½·Σ|a − b|`. Both grids must share a shape and sum to one.
pub fn tv_distance(a: &Grid, b: &Grid) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(a.shape(), b.shape()));
    }
    for g in [a, b] {
        let s = g.sum();
        if s.is_nan() || (s - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(s));
        }
    }
    let l1: f64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .sum();
    Ok((0.5 * l1).min(1.0))
}

/// Fraction of the `nx × ny` mode basins holding at least
/// `ceil(0.01 · n / (nx·ny))` of the `n` samples.
pub fn mode_coverage<I, S>(samples: I, spec: &BoxSpec) -> f64
where
    I: IntoIterator<Item = S>,
    S: AsRef<[f64]>,
{
    let (nx, ny) = (spec.nx as usize, spec.ny as usize);
    let mut counts = vec![0usize; nx * ny];
    let mut n = 0usize;
    for s in samples {
        n += 1;
        let p = s.as_ref();
        if p.len() != 2 {
            continue;
        }
        if let (Some(j), Some(i)) = (bin(p[0], spec.lx, nx), bin(p[1], spec.ly, ny)) {
            counts[i * nx + j] += 1;
        }
    }
    if n == 0 {
        return 0.0;
    }
    let threshold = ((0.01 * n as f64 / (nx * ny) as f64).ceil() as usize).max(1);
    counts.iter().filter(|&&c| c >= threshold).count() as f64 / (nx * ny) as f64
}

/// `(1/n)·Σ ∇L(x)·∇L(x)ᵀ` over the samples.
#[allow(clippy::needless_range_loop)]
pub fn empirical_fisher<T, I, S>(target: &T, samples: I) -> Result<Vec<Vec<f64>>>
where
    T: TargetDensity + ?Sized,
    I: IntoIterator<Item = S>,
    S: AsRef<[f64]>,
{
    let d = target.dim();
    let mut acc = vec![vec![0.0; d]; d];
    let mut n = 0usize;
    for s in samples {
        let g = target.grad_log_density(s.as_ref())?;
        for i in 0..d {
            for j in i..d {
                acc[i][j] += g[i] * g[j];
            }
        }
        n += 1;
    }
    let scale = if n > 0 { 1.0 / n as f64 } else { 0.0 };
    for i in 0..d {
        for j in i..d {
            acc[i][j] *= scale;
            acc[j][i] = acc[i][j];
        }
    }
    Ok(acc)
}

/// Full report for one chain, plus the chain histogram for box targets.
pub fn diagnose(
    chain: &Chain,
    target: &Target,
    grid_res: usize,
    max_lag: usize,
) -> Result<(DiagnosticsReport, Option<Grid>)> {
    let n = chain.len();
    let lag = max_lag.min(n.saturating_sub(1));
    let mut acf = Vec::with_capacity(chain.dim());
    let mut ess_all = Vec::with_capacity(chain.dim());
    for j in 0..chain.dim() {
        let col = chain.column(j);
        match autocorrelation(&col, lag) {
            Ok(rho) => {
                acf.push(rho);
                ess_all.push(ess(&col)?);
            }
            // A chain stuck at one value is perfectly correlated.
            Err(Error::ConstantSeries | Error::SeriesTooShort { .. }) => {
                acf.push(vec![1.0; lag + 1]);
                ess_all.push(n.min(1) as f64);
            }
            Err(e) => return Err(e),
        }
    }

    let (tv, coverage, hist) = match target.as_box() {
        Some(b) if n > 0 => {
            let hist = histogram2d(chain.rows(), &b.spec, grid_res)?;
            let reference = analytic_grid(&b.spec, grid_res)?;
            (
                Some(tv_distance(&hist, &reference)?),
                Some(mode_coverage(chain.rows(), &b.spec)),
                Some(hist),
            )
        }
        Some(b) => (None, Some(mode_coverage(chain.rows(), &b.spec)), None),
        None => (None, None, None),
    };

    let fisher_trace = if n > 0 {
        let f = empirical_fisher(target, chain.rows())?;
        Some((0..f.len()).map(|i| f[i][i]).sum())
    } else {
        None
    };

    Ok((
        DiagnosticsReport {
            acf,
            ess: ess_all,
            acceptance_rate: chain.acceptance_rate(),
            tv_distance: tv,
            mode_coverage: coverage,
            wall_time_s: chain.meta.wall_time_s,
            fisher_trace,
        },
        hist,
    ))
}
