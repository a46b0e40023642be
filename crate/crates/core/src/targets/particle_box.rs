//! Stationary states of a free particle confined to the rectangle
//! `[0, Lx] × [0, Ly]`. The sampled density is the squared eigenfunction
//!
//! ```text
//! p(x, y) = (4 / (Lx·Ly)) · sin²(nx·π·x / Lx) · sin²(ny·π·y / Ly)
//! ```
//!
//! which has `nx·ny` modes separated by nodal lines of zero density.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{LogDensity, TargetDensity};
use crate::error::{Error, Result};
use crate::grid::Grid;

pub const DEFAULT_GMAX: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxSpec {
    pub lx: f64,
    pub ly: f64,
    pub nx: u32,
    pub ny: u32,
}

impl BoxSpec {
    pub fn new(lx: f64, ly: f64, nx: u32, ny: u32) -> Result<Self> {
        let spec = BoxSpec { lx, ly, nx, ny };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lx.is_finite() && self.lx > 0.0 && self.ly.is_finite() && self.ly > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "box lengths must be positive, got Lx={}, Ly={}",
                self.lx, self.ly
            )));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::InvalidParameter(format!(
                "quantum numbers must be >= 1, got nx={}, ny={}",
                self.nx, self.ny
            )));
        }
        Ok(())
    }

    pub fn mode_count(&self) -> usize {
        self.nx as usize * self.ny as usize
    }

    pub fn first_mode_center(&self) -> [f64; 2] {
        [
            self.lx / (2.0 * self.nx as f64),
            self.ly / (2.0 * self.ny as f64),
        ]
    }

    /// All `nx·ny` mode centers, row-major in `(y, x)` basin order.
    pub fn mode_centers(&self) -> Vec<[f64; 2]> {
        let mut out = Vec::with_capacity(self.mode_count());
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                out.push([
                    (2 * ix + 1) as f64 * self.lx / (2.0 * self.nx as f64),
                    (2 * iy + 1) as f64 * self.ly / (2.0 * self.ny as f64),
                ]);
            }
        }
        out
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == 2
            && (0.0..=self.lx).contains(&point[0])
            && (0.0..=self.ly).contains(&point[1])
    }
}

/// Physical constants entering the energy level; all dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysConstants {
    pub rho: f64,
    pub hbar: f64,
    pub m: f64,
}

impl Default for PhysConstants {
    fn default() -> Self {
        PhysConstants {
            rho: 1.0,
            hbar: 1.0,
            m: 1.0,
        }
    }
}

impl PhysConstants {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("rho", self.rho), ("hbar", self.hbar), ("m", self.m)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// `|sin(π·t)|` and `cot(π·t)` reduced to the nearest integer so that
/// integer `t` (a node) gives an exact zero.
fn reduced_phase(t: f64) -> f64 {
    t - t.round()
}

/// The box target: eigenfunction density plus the gradient clamp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParticleBox", into = "RawParticleBox")]
pub struct ParticleBox {
    pub spec: BoxSpec,
    pub gmax: f64,
    pub consts: PhysConstants,
}

impl ParticleBox {
    pub fn new(spec: BoxSpec) -> Result<Self> {
        Self::with_gmax(spec, DEFAULT_GMAX)
    }

    pub fn with_gmax(spec: BoxSpec, gmax: f64) -> Result<Self> {
        let t = ParticleBox {
            spec,
            gmax,
            consts: PhysConstants::default(),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        self.consts.validate()?;
        if self.gmax.is_nan() || self.gmax <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gmax must be positive, got {}",
                self.gmax
            )));
        }
        Ok(())
    }

    pub fn energy(&self) -> f64 {
        energy(&self.spec, &self.consts)
    }
}

impl TargetDensity for ParticleBox {
    fn dim(&self) -> usize {
        2
    }

    fn log_density(&self, point: &[f64]) -> Result<LogDensity> {
        check_dim(point)?;
        Ok(log_density(&self.spec, point))
    }

    fn grad_log_density(&self, point: &[f64]) -> Result<Vec<f64>> {
        check_dim(point)?;
        grad_log_density(&self.spec, point, self.gmax).map(Vec::from)
    }
}

fn check_dim(point: &[f64]) -> Result<()> {
    if point.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: point.len(),
        });
    }
    Ok(())
}

/// Log of the squared eigenfunction; the zero-density sentinel outside the
/// open box and on nodal lines.
pub fn log_density(spec: &BoxSpec, point: &[f64]) -> LogDensity {
    let (x, y) = (point[0], point[1]);
    if !(x > 0.0 && x < spec.lx && y > 0.0 && y < spec.ly) {
        return LogDensity::ZERO_DENSITY;
    }
    let rx = reduced_phase(spec.nx as f64 * x / spec.lx);
    let ry = reduced_phase(spec.ny as f64 * y / spec.ly);
    if rx == 0.0 || ry == 0.0 {
        return LogDensity::ZERO_DENSITY;
    }
    let sx = (PI * rx).sin().abs();
    let sy = (PI * ry).sin().abs();
    LogDensity::new((4.0 / (spec.lx * spec.ly)).ln() + 2.0 * sx.ln() + 2.0 * sy.ln())
}

/// `(2·nx·π/Lx · cot(nx·π·x/Lx), 2·ny·π/Ly · cot(ny·π·y/Ly))`, each
/// component clamped to `[-gmax, gmax]`.
pub fn grad_log_density(spec: &BoxSpec, point: &[f64], gmax: f64) -> Result<[f64; 2]> {
    if !log_density(spec, point).is_finite() {
        return Err(Error::ZeroDensity(point.to_vec()));
    }
    let axis = |coord: f64, n: u32, len: f64| {
        let k = n as f64 * PI / len;
        let r = reduced_phase(n as f64 * coord / len);
        let cot = (PI * r).cos() / (PI * r).sin();
        (2.0 * k * cot).clamp(-gmax, gmax)
    };
    Ok([
        axis(point[0], spec.nx, spec.lx),
        axis(point[1], spec.ny, spec.ly),
    ])
}

/// `(ρ²ħ²/2m)·(nx²/Lx² + ny²/Ly²)`.
pub fn energy(spec: &BoxSpec, consts: &PhysConstants) -> f64 {
    let nx = spec.nx as f64;
    let ny = spec.ny as f64;
    consts.rho.powi(2) * consts.hbar.powi(2) / (2.0 * consts.m)
        * (nx * nx / (spec.lx * spec.lx) + ny * ny / (spec.ly * spec.ly))
}

/// Exact probability mass of `(2/L)·sin²(nπs/L)` on `[a, b]`.
fn axis_mass(a: f64, b: f64, n: u32, len: f64) -> f64 {
    let w = 2.0 * n as f64 * PI / len;
    (b - a) / len - ((w * b).sin() - (w * a).sin()) / (2.0 * n as f64 * PI)
}

fn axis_masses(n: u32, len: f64, res: usize) -> Vec<f64> {
    (0..res)
        .map(|k| {
            let a = len * k as f64 / res as f64;
            let b = len * (k + 1) as f64 / res as f64;
            axis_mass(a, b, n, len)
        })
        .collect()
}

/// Probability mass of each cell of a `res × res` partition of the box,
/// computed from closed-form integrals. Row index runs over `y`.
pub fn analytic_grid(spec: &BoxSpec, res: usize) -> Result<Grid> {
    if res < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid resolution must be >= 2, got {res}"
        )));
    }
    let px = axis_masses(spec.nx, spec.lx, res);
    let py = axis_masses(spec.ny, spec.ly, res);
    let values = py
        .iter()
        .flat_map(|&my| px.iter().map(move |&mx| my * mx))
        .collect();
    Grid::from_vec(res, res, values)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParticleBox {
    #[serde(rename = "Lx")]
    lx: f64,
    #[serde(rename = "Ly")]
    ly: f64,
    nx: u32,
    ny: u32,
    #[serde(default = "default_gmax")]
    gmax: f64,
    #[serde(default = "one")]
    rho: f64,
    #[serde(default = "one")]
    hbar: f64,
    #[serde(default = "one")]
    m: f64,
}

fn default_gmax() -> f64 {
    DEFAULT_GMAX
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawParticleBox> for ParticleBox {
    type Error = Error;

    fn try_from(raw: RawParticleBox) -> Result<Self> {
        let t = ParticleBox {
            spec: BoxSpec {
                lx: raw.lx,
                ly: raw.ly,
                nx: raw.nx,
                ny: raw.ny,
            },
            gmax: raw.gmax,
            consts: PhysConstants {
                rho: raw.rho,
                hbar: raw.hbar,
                m: raw.m,
            },
        };
        t.validate()?;
        Ok(t)
    }
}

impl From<ParticleBox> for RawParticleBox {
    fn from(t: ParticleBox) -> Self {
        RawParticleBox {
            lx: t.spec.lx,
            ly: t.spec.ly,
            nx: t.spec.nx,
            ny: t.spec.ny,
            gmax: t.gmax,
            rho: t.consts.rho,
            hbar: t.consts.hbar,
            m: t.consts.m,
        }
    }
}
