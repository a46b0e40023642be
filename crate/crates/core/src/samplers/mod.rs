//! Samplers and the shared Metropolis-Hastings machinery.
//!
//! Every transition is split into a proposal (which caches the target
//! evaluation at the candidate and both directions of the proposal
//! density) and [`mh_accept`], which draws exactly one uniform.

mod chain;
mod hmc;
mod langevin;

pub use chain::{run_chain, Chain, ChainMeta};
pub use hmc::{hamiltonian, hmc_step, leapfrog, HmcParams, Trajectory};
pub use langevin::{
    adaptive_propose, langevin_mean, langevin_proposal, mala_propose, mala_propose_with_noise,
};

use serde::{Deserialize, Serialize};

use crate::adaptation::AdaptParams;
use crate::error::{Error, Result};
use crate::prng::RngStream;
use crate::targets::{LogDensity, TargetDensity};

#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    pub theta: Vec<f64>,
    pub log_p: LogDensity,
    pub grad: Vec<f64>,
    pub theta_prev: Option<Vec<f64>>,
    pub grad_prev: Option<Vec<f64>>,
    /// Current adaptive scale Σⁿ.
    pub sigma: f64,
    pub step: u64,
}

impl ChainState {
    pub fn new<T: TargetDensity + ?Sized>(target: &T, init: &[f64], sigma0: f64) -> Result<Self> {
        if init.len() != target.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim(),
                got: init.len(),
            });
        }
        match target.evaluate(init)? {
            (log_p, Some(grad)) if log_p.is_finite() => Ok(ChainState {
                theta: init.to_vec(),
                log_p,
                grad,
                theta_prev: None,
                grad_prev: None,
                sigma: sigma0,
                step: 0,
            }),
            _ => Err(Error::InvalidInit(init.to_vec())),
        }
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    /// Moves to an accepted point, shifting the current point into history.
    fn advance_to(&self, theta: Vec<f64>, log_p: LogDensity, grad: Vec<f64>, sigma: f64) -> Self {
        ChainState {
            theta,
            log_p,
            grad,
            theta_prev: Some(self.theta.clone()),
            grad_prev: Some(self.grad.clone()),
            sigma,
            step: self.step + 1,
        }
    }

    /// Stays put after a rejection. History still shifts, so the previous
    /// point becomes the current one.
    fn stay(&self) -> Self {
        self.advance_to(
            self.theta.clone(),
            self.log_p,
            self.grad.clone(),
            self.sigma,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Proposal {
    pub theta_star: Vec<f64>,
    pub mean_fwd: Vec<f64>,
    /// Variance multiplier of the identity covariance.
    pub cov_scale_fwd: f64,
    pub log_q_fwd: f64,
    /// `-∞` when the candidate has zero density.
    pub log_q_rev: f64,
    pub log_p_star: LogDensity,
    pub grad_star: Option<Vec<f64>>,
}

impl Proposal {
    pub fn auto_reject(&self) -> bool {
        !self.log_p_star.is_finite()
    }
}

/// `log N(x | mean, var·I)`.
pub fn gaussian_log_density(x: &[f64], mean: &[f64], var: f64) -> f64 {
    let sq: f64 = x.iter().zip(mean).map(|(a, b)| (a - b).powi(2)).sum();
    -0.5 * x.len() as f64 * (std::f64::consts::TAU * var).ln() - sq / (2.0 * var)
}

/// `log min(1, p(θ*)·q(θ|θ*) / (p(θ)·q(θ*|θ)))`; `-∞` for zero-density
/// candidates.
pub fn log_acceptance_probability(
    log_p: LogDensity,
    log_p_star: LogDensity,
    log_q_fwd: f64,
    log_q_rev: f64,
) -> f64 {
    if !log_p_star.is_finite() || log_q_rev == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let log_ratio = log_p_star.value() + log_q_rev - log_p.value() - log_q_fwd;
    if log_ratio.is_nan() {
        f64::NEG_INFINITY
    } else {
        log_ratio.min(0.0)
    }
}

/// `min(1, p(θ*)·q(θ|θ*) / (p(θ)·q(θ*|θ)))`.
pub fn acceptance_probability(
    log_p: LogDensity,
    log_p_star: LogDensity,
    log_q_fwd: f64,
    log_q_rev: f64,
) -> f64 {
    log_acceptance_probability(log_p, log_p_star, log_q_fwd, log_q_rev).exp()
}

/// Metropolis-Hastings correction. Consumes one uniform from `stream`.
pub fn mh_accept(
    state: &ChainState,
    prop: &Proposal,
    stream: &mut RngStream,
) -> (ChainState, bool) {
    let alpha =
        acceptance_probability(state.log_p, prop.log_p_star, prop.log_q_fwd, prop.log_q_rev);
    let u = stream.next_uniform();
    match &prop.grad_star {
        Some(grad) if u < alpha => (
            state.advance_to(
                prop.theta_star.clone(),
                prop.log_p_star,
                grad.clone(),
                prop.cov_scale_fwd,
            ),
            true,
        ),
        _ => (state.stay(), false),
    }
}

/// Sampler selection as it appears in experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum SamplerConfig {
    Mala {
        eps: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Adaptive {
        #[serde(default)]
        adaptation: AdaptParams,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Hmc {
        #[serde(default = "HmcParams::default_eps")]
        eps_leap: f64,
        #[serde(default = "HmcParams::default_n_leap")]
        n_leap: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

impl SamplerConfig {
    pub fn mala(eps: f64) -> Self {
        SamplerConfig::Mala { eps, label: None }
    }

    pub fn adaptive(adaptation: AdaptParams) -> Self {
        SamplerConfig::Adaptive {
            adaptation,
            label: None,
        }
    }

    pub fn hmc(params: HmcParams) -> Self {
        SamplerConfig::Hmc {
            eps_leap: params.eps_leap,
            n_leap: params.n_leap,
            label: None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SamplerConfig::Mala { .. } => "mala",
            SamplerConfig::Adaptive { .. } => "adaptive",
            SamplerConfig::Hmc { .. } => "hmc",
        }
    }

    /// File-name stem: the label if given, else the sampler name.
    pub fn label(&self) -> &str {
        let label = match self {
            SamplerConfig::Mala { label, .. }
            | SamplerConfig::Adaptive { label, .. }
            | SamplerConfig::Hmc { label, .. } => label,
        };
        label.as_deref().unwrap_or(self.kind())
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SamplerConfig::Mala { eps, .. } => {
                if !(eps.is_finite() && *eps > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "eps must be positive, got {eps}"
                    )));
                }
            }
            SamplerConfig::Adaptive { adaptation, .. } => adaptation.validate()?,
            SamplerConfig::Hmc { .. } => self.hmc_params().unwrap().validate()?,
        }
        let label = self.label();
        if label.is_empty()
            || !label
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(Error::InvalidParameter(format!(
                "sampler label {label:?} must be non-empty [A-Za-z0-9_-]"
            )));
        }
        Ok(())
    }

    pub fn hmc_params(&self) -> Option<HmcParams> {
        match self {
            SamplerConfig::Hmc {
                eps_leap, n_leap, ..
            } => Some(HmcParams {
                eps_leap: *eps_leap,
                n_leap: *n_leap,
            }),
            _ => None,
        }
    }

    fn sigma0(&self) -> f64 {
        match self {
            SamplerConfig::Adaptive { adaptation, .. } => adaptation.sigma0,
            _ => 1.0,
        }
    }

    /// One full transition: propose, then correct.
    pub fn step<T: TargetDensity + ?Sized>(
        &self,
        target: &T,
        state: &ChainState,
        stream: &mut RngStream,
    ) -> Result<(ChainState, bool)> {
        match self {
            SamplerConfig::Mala { eps, .. } => {
                let prop = mala_propose(target, state, *eps, stream)?;
                Ok(mh_accept(state, &prop, stream))
            }
            SamplerConfig::Adaptive { adaptation, .. } => {
                let prop = adaptive_propose(target, state, adaptation, stream)?;
                Ok(mh_accept(state, &prop, stream))
            }
            SamplerConfig::Hmc {
                eps_leap, n_leap, ..
            } => hmc_step(
                target,
                state,
                &HmcParams {
                    eps_leap: *eps_leap,
                    n_leap: *n_leap,
                },
                stream,
            ),
        }
    }
}
