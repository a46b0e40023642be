//! Hamiltonian Monte Carlo with an identity mass matrix and a fixed
//! number of leapfrog steps.

use serde::{Deserialize, Serialize};

use super::ChainState;
use crate::error::{Error, Result};
use crate::prng::RngStream;
use crate::targets::{LogDensity, TargetDensity};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HmcParams {
    pub eps_leap: f64,
    pub n_leap: usize,
}

impl Default for HmcParams {
    fn default() -> Self {
        HmcParams {
            eps_leap: Self::default_eps(),
            n_leap: Self::default_n_leap(),
        }
    }
}

impl HmcParams {
    pub(crate) fn default_eps() -> f64 {
        0.05
    }

    pub(crate) fn default_n_leap() -> usize {
        20
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_leap.is_finite() && self.eps_leap > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "eps_leap must be positive, got {}",
                self.eps_leap
            )));
        }
        if self.n_leap == 0 {
            return Err(Error::InvalidParameter("n_leap must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Trajectory {
    Complete {
        theta: Vec<f64>,
        momentum: Vec<f64>,
        log_p: LogDensity,
        grad: Vec<f64>,
    },
    /// An intermediate position had zero density or the momentum blew up.
    Diverged,
}

/// `H = −log p(θ) + ‖p‖²/2`.
pub fn hamiltonian(log_p: LogDensity, momentum: &[f64]) -> f64 {
    -log_p.value() + 0.5 * momentum.iter().map(|p| p * p).sum::<f64>()
}

/// `n_steps` leapfrog steps of size `step_size` starting from `theta`.
pub fn leapfrog<T: TargetDensity + ?Sized>(
    target: &T,
    theta: &[f64],
    momentum: &[f64],
    step_size: f64,
    n_steps: usize,
) -> Result<Trajectory> {
    match target.evaluate(theta)? {
        (log_p, Some(grad)) => leapfrog_from(
            target,
            theta.to_vec(),
            log_p,
            grad,
            momentum.to_vec(),
            step_size,
            n_steps,
        ),
        _ => Ok(Trajectory::Diverged),
    }
}

fn leapfrog_from<T: TargetDensity + ?Sized>(
    target: &T,
    mut theta: Vec<f64>,
    mut log_p: LogDensity,
    mut grad: Vec<f64>,
    mut momentum: Vec<f64>,
    eps: f64,
    n_steps: usize,
) -> Result<Trajectory> {
    let kick = |p: &mut [f64], g: &[f64], h: f64| {
        for (p, g) in p.iter_mut().zip(g) {
            *p += h * g;
        }
    };
    for _ in 0..n_steps {
        kick(&mut momentum, &grad, 0.5 * eps);
        for (t, p) in theta.iter_mut().zip(&momentum) {
            *t += eps * p;
        }
        match target.evaluate(&theta)? {
            (lp, Some(g)) => {
                log_p = lp;
                grad = g;
            }
            _ => return Ok(Trajectory::Diverged),
        }
        kick(&mut momentum, &grad, 0.5 * eps);
        if momentum.iter().any(|p| !p.is_finite()) {
            return Ok(Trajectory::Diverged);
        }
    }
    Ok(Trajectory::Complete {
        theta,
        momentum,
        log_p,
        grad,
    })
}

/// One HMC transition. Consumes `d` normals and one uniform.
pub fn hmc_step<T: TargetDensity + ?Sized>(
    target: &T,
    state: &ChainState,
    params: &HmcParams,
    stream: &mut RngStream,
) -> Result<(ChainState, bool)> {
    let mut momentum = vec![0.0; state.dim()];
    stream.fill_normal(&mut momentum);
    let h0 = hamiltonian(state.log_p, &momentum);
    let traj = leapfrog_from(
        target,
        state.theta.clone(),
        state.log_p,
        state.grad.clone(),
        momentum,
        params.eps_leap,
        params.n_leap,
    )?;
    let u = stream.next_uniform();
    match traj {
        Trajectory::Complete {
            theta,
            momentum,
            log_p,
            grad,
        } => {
            let delta_h = hamiltonian(log_p, &momentum) - h0;
            let alpha = if delta_h.is_nan() {
                0.0
            } else {
                (-delta_h).exp().min(1.0)
            };
            if u < alpha {
                return Ok((state.advance_to(theta, log_p, grad, state.sigma), true));
            }
            Ok((state.stay(), false))
        }
        Trajectory::Diverged => Ok((state.stay(), false)),
    }
}
