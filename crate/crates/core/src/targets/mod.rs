//! Target densities exposing a log-density and its gradient.

pub mod gauss_mix;
pub mod particle_box;

pub use gauss_mix::{GaussComponent, GaussMix};
pub use particle_box::{BoxSpec, ParticleBox, PhysConstants, DEFAULT_GMAX};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// A log-density value that is either finite or the `-∞` sentinel used
/// for points of zero density (outside a support, on a nodal line).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogDensity(f64);

impl LogDensity {
    pub const ZERO_DENSITY: LogDensity = LogDensity(f64::NEG_INFINITY);

    /// Panics on NaN or `+∞`.
    pub fn new(value: f64) -> Self {
        assert!(
            !value.is_nan() && value != f64::INFINITY,
            "log-density must be finite or -inf, got {value}"
        );
        LogDensity(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

pub trait TargetDensity: Sync {
    fn dim(&self) -> usize;

    fn log_density(&self, point: &[f64]) -> Result<LogDensity>;

    /// Errors when `point` has zero density.
    fn grad_log_density(&self, point: &[f64]) -> Result<Vec<f64>>;

    /// Log-density and gradient together; the gradient is `None` at
    /// zero-density points.
    fn evaluate(&self, point: &[f64]) -> Result<(LogDensity, Option<Vec<f64>>)> {
        let lp = self.log_density(point)?;
        if lp.is_finite() {
            Ok((lp, Some(self.grad_log_density(point)?)))
        } else {
            Ok((lp, None))
        }
    }
}

/// Config-selectable targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum Target {
    ParticleBox(ParticleBox),
    GaussMix(GaussMix),
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::ParticleBox(_) => "particle_box",
            Target::GaussMix(_) => "gauss_mix",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Target::ParticleBox(t) => t.validate(),
            Target::GaussMix(t) => t.validate(),
        }
    }

    pub fn as_box(&self) -> Option<&ParticleBox> {
        match self {
            Target::ParticleBox(t) => Some(t),
            Target::GaussMix(_) => None,
        }
    }

    /// Default starting point: the first mode center of the box, or the
    /// mean of the first mixture component.
    pub fn mode_center(&self) -> Vec<f64> {
        match self {
            Target::ParticleBox(t) => t.spec.first_mode_center().to_vec(),
            Target::GaussMix(t) => t.components()[0].mean.clone(),
        }
    }
}

impl TargetDensity for Target {
    fn dim(&self) -> usize {
        match self {
            Target::ParticleBox(t) => t.dim(),
            Target::GaussMix(t) => t.dim(),
        }
    }

    fn log_density(&self, point: &[f64]) -> Result<LogDensity> {
        match self {
            Target::ParticleBox(t) => t.log_density(point),
            Target::GaussMix(t) => t.log_density(point),
        }
    }

    fn grad_log_density(&self, point: &[f64]) -> Result<Vec<f64>> {
        match self {
            Target::ParticleBox(t) => t.grad_log_density(point),
            Target::GaussMix(t) => t.grad_log_density(point),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[should_panic]
    fn nan_log_density_rejected() {
        LogDensity::new(f64::NAN);
    }

    #[test]
    fn target_json_selects_by_name() {
        let t: Target =
            serde_json::from_str(r#"{"name":"particle_box","Lx":1,"Ly":2,"nx":2,"ny":3}"#).unwrap();
        let b = t.as_box().unwrap();
        assert_eq!((b.spec.nx, b.spec.ny), (2, 3));
        assert_eq!(b.gmax, DEFAULT_GMAX);

        let t: Target = serde_json::from_str(
            r#"{"name":"gauss_mix","components":[{"weight":2,"mean":[0],"variance":[1]}]}"#,
        )
        .unwrap();
        assert_eq!(t.name(), "gauss_mix");
        assert!(serde_json::from_str::<Target>(r#"{"name":"banana"}"#).is_err());
    }
}
