//! Diagonal-covariance Gaussian mixtures, used as analytic validation
//! targets.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{LogDensity, TargetDensity};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussComponent {
    pub weight: f64,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

/// Weights are normalized to sum to one at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGaussMix")]
pub struct GaussMix {
    components: Vec<GaussComponent>,
    #[serde(skip)]
    log_norms: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGaussMix {
    components: Vec<GaussComponent>,
}

impl TryFrom<RawGaussMix> for GaussMix {
    type Error = Error;

    fn try_from(raw: RawGaussMix) -> Result<Self> {
        GaussMix::new(raw.components)
    }
}

impl GaussMix {
    pub fn new(mut components: Vec<GaussComponent>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidParameter("mixture has no components".into()))?;
        let dim = first.mean.len();
        if dim == 0 {
            return Err(Error::InvalidParameter("mixture dimension is zero".into()));
        }
        for c in &components {
            if c.mean.len() != dim || c.variance.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: if c.mean.len() != dim {
                        c.mean.len()
                    } else {
                        c.variance.len()
                    },
                });
            }
            if !(c.weight.is_finite() && c.weight > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "component weight must be positive, got {}",
                    c.weight
                )));
            }
            if c.variance.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(Error::InvalidParameter(
                    "component variances must be positive".into(),
                ));
            }
            if c.mean.iter().any(|m| !m.is_finite()) {
                return Err(Error::InvalidParameter(
                    "component mean is not finite".into(),
                ));
            }
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if !total.is_finite() {
            return Err(Error::InvalidParameter("weights overflow".into()));
        }
        for c in &mut components {
            c.weight /= total;
        }
        let log_norms = components
            .iter()
            .map(|c| c.weight.ln() - 0.5 * c.variance.iter().map(|v| (TAU * v).ln()).sum::<f64>())
            .collect();
        Ok(GaussMix {
            components,
            log_norms,
        })
    }

    /// Single-component standard normal in `dim` dimensions.
    pub fn standard_normal(dim: usize) -> Self {
        Self::new(vec![GaussComponent {
            weight: 1.0,
            mean: vec![0.0; dim],
            variance: vec![1.0; dim],
        }])
        .expect("valid standard normal")
    }

    pub fn components(&self) -> &[GaussComponent] {
        &self.components
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.components.clone()).map(|_| ())
    }

    fn check_dim(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: point.len(),
            });
        }
        Ok(())
    }

    /// Per-component `log(w_k · N(point | mean_k, var_k))`.
    fn component_logs(&self, point: &[f64]) -> Vec<f64> {
        self.components
            .iter()
            .zip(&self.log_norms)
            .map(|(c, norm)| {
                let quad: f64 = point
                    .iter()
                    .zip(&c.mean)
                    .zip(&c.variance)
                    .map(|((x, m), v)| (x - m).powi(2) / v)
                    .sum();
                norm - 0.5 * quad
            })
            .collect()
    }
}

/// Normalized responsibilities and the log-sum-exp of `logs`.
fn softmax(logs: &[f64]) -> (Vec<f64>, f64) {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    let lse = max + total.ln();
    (weights.into_iter().map(|w| w / total).collect(), lse)
}

impl TargetDensity for GaussMix {
    fn dim(&self) -> usize {
        self.components[0].mean.len()
    }

    fn log_density(&self, point: &[f64]) -> Result<LogDensity> {
        self.check_dim(point)?;
        if point.iter().any(|x| !x.is_finite()) {
            return Ok(LogDensity::ZERO_DENSITY);
        }
        let (_, lse) = softmax(&self.component_logs(point));
        // Overflow of the quadratic form in the far tail yields -inf, which
        // is the correct limit.
        Ok(LogDensity::new(lse))
    }

    fn grad_log_density(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(point)?;
        let logs = self.component_logs(point);
        let (resp, lse) = softmax(&logs);
        if !lse.is_finite() {
            return Err(Error::ZeroDensity(point.to_vec()));
        }
        let mut grad = vec![0.0; self.dim()];
        for (c, r) in self.components.iter().zip(resp) {
            for ((g, x), (m, v)) in grad
                .iter_mut()
                .zip(point)
                .zip(c.mean.iter().zip(&c.variance))
            {
                *g -= r * (x - m) / v;
            }
        }
        Ok(grad)
    }
}
