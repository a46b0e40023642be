//! Stochastic proposal-scale update for the adaptive Langevin sampler.
//!
//! Given the two most recent chain positions and their gradients, the next
//! proposal variance multiplier is
//!
//! ```text
//! r_θ  = (‖θⁿ‖ / ‖θⁿ⁻¹‖)²
//! r_g  = (‖∇L(θⁿ)‖ / ‖∇L(θⁿ⁻¹)‖)²
//! ψ    ~ Uniform[0, √(2π) + Σⁿ)
//! base = max(β + ψ·(r_θ − r_g), base_floor)
//! Σⁿ⁺¹ = ε · base^ξ / (1 + exp(−r_g))
//! ```
//!
//! Denominators of the norm ratios are floored at `norm_floor`. The
//! proposal covariance is `Σⁿ⁺¹·I`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdaptParams {
    pub beta: f64,
    pub xi: f64,
    pub eps: f64,
    pub sigma0: f64,
    pub base_floor: f64,
    pub norm_floor: f64,
}

impl Default for AdaptParams {
    fn default() -> Self {
        AdaptParams {
            beta: 1.0,
            xi: 0.5,
            eps: 0.1,
            sigma0: 1.0,
            base_floor: 1e-12,
            norm_floor: 1e-12,
        }
    }
}

impl AdaptParams {
    pub fn with_eps(eps: f64) -> Self {
        AdaptParams {
            eps,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        positive("eps", self.eps)?;
        positive("sigma0", self.sigma0)?;
        positive("base_floor", self.base_floor)?;
        positive("norm_floor", self.norm_floor)?;
        if !self.beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "beta must be finite, got {}",
                self.beta
            )));
        }
        if !(self.xi > 0.0 && self.xi < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "xi must lie in (0, 1), got {}",
                self.xi
            )));
        }
        Ok(())
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `‖a‖ / max(‖b‖, floor)`.
pub fn ratio_norm_guarded(a: &[f64], b: &[f64], floor: f64) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    norm(a) / norm(b).max(floor)
}

/// Upper end of the ψ interval, `√(2π) + Σⁿ`.
pub fn psi_bound(sigma_prev: f64) -> f64 {
    TAU.sqrt() + sigma_prev
}

/// Uniform draw on `[0, √(2π) + sigma_prev)`. Consumes one uniform.
pub fn psi_draw(sigma_prev: f64, stream: &mut RngStream) -> f64 {
    debug_assert!(sigma_prev >= 0.0);
    stream.next_uniform() * psi_bound(sigma_prev)
}

/// The deterministic part of the update once ψ is known.
pub fn sigma_from_ratios(r_theta: f64, r_grad: f64, psi: f64, params: &AdaptParams) -> f64 {
    let base = params.beta + psi * (r_theta - r_grad);
    let clamped = if base > params.base_floor {
        base
    } else {
        params.base_floor
    };
    params.eps * clamped.powf(params.xi) / (1.0 + (-r_grad).exp())
}

/// Next proposal variance multiplier. Draws ψ from `stream`.
pub fn sigma_update(
    theta_n: &[f64],
    theta_prev: &[f64],
    grad_n: &[f64],
    grad_prev: &[f64],
    sigma_prev: f64,
    params: &AdaptParams,
    stream: &mut RngStream,
) -> f64 {
    assert!(
        theta_n.len() == theta_prev.len()
            && grad_n.len() == grad_prev.len()
            && theta_n.len() == grad_n.len(),
        "sigma_update: dimension mismatch"
    );
    assert!(
        theta_n
            .iter()
            .chain(theta_prev)
            .chain(grad_n)
            .chain(grad_prev)
            .all(|v| !v.is_nan())
            && !sigma_prev.is_nan(),
        "sigma_update: NaN input"
    );
    let r_theta = ratio_norm_guarded(theta_n, theta_prev, params.norm_floor).powi(2);
    let r_grad = ratio_norm_guarded(grad_n, grad_prev, params.norm_floor).powi(2);
    let psi = psi_draw(sigma_prev, stream);
    let sigma = sigma_from_ratios(r_theta, r_grad, psi, params);
    // r_θ can overflow to +inf for huge position ratios; keep the scale usable.
    if sigma.is_finite() {
        sigma
    } else {
        f64::MAX
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prng::split;

    #[test]
    fn ratio_examples() {
        assert_eq!(ratio_norm_guarded(&[3.0, 4.0], &[3.0, 4.0], 1e-12), 1.0);
        assert_eq!(ratio_norm_guarded(&[0.0, 0.0], &[1.0, 2.0], 1e-12), 0.0);
        let r = ratio_norm_guarded(&[1.0, 0.0], &[0.0, 0.0], 1e-12);
        assert!((r - 1e12).abs() < 1e-3);
    }

    #[test]
    fn psi_bounds_and_mean() {
        let mut s = split(8, 0);
        for _ in 0..1000 {
            let v = psi_draw(0.0, &mut s);
            assert!((0.0..TAU.sqrt()).contains(&v));
        }
        let n = 10_000;
        let mean = (0..n).map(|_| psi_draw(1.0, &mut s)).sum::<f64>() / n as f64;
        let expected = (TAU.sqrt() + 1.0) / 2.0;
        assert!((mean - expected).abs() < 0.05 * expected);
    }

    #[test]
    fn zero_psi_ignores_position_ratio() {
        // β^ξ / (1 + e^0) with β = 1.
        assert_eq!(
            sigma_from_ratios(9.0, 0.0, 0.0, &AdaptParams::with_eps(1.0)),
            1.0 / 2.0
        );
    }

    #[test]
    fn equilibrium_value() {
        let p = AdaptParams::with_eps(0.1);
        let expected = 0.1 / (1.0 + (-1f64).exp());
        for seed in 0..5 {
            let sigma = sigma_update(
                &[1.0, 2.0],
                &[2.0, 1.0],
                &[0.5, 0.0],
                &[0.0, -0.5],
                0.7,
                &p,
                &mut split(seed, 0),
            );
            assert!((sigma - expected).abs() < 1e-15);
            assert!((sigma - 0.073_105_857_863).abs() < 1e-11);
        }
    }

    #[test]
    fn negative_base_is_floored() {
        let p = AdaptParams::with_eps(0.2);
        let r_g = 4.0;
        let sigma = sigma_from_ratios(0.0, r_g, 2.0, &p);
        let expected = 0.2 * 1e-12f64.powf(0.5) / (1.0 + (-r_g).exp());
        assert_eq!(sigma, expected);
    }

    #[test]
    fn zero_previous_gradient_is_finite() {
        let p = AdaptParams::default();
        let s = sigma_update(
            &[0.3, 0.3],
            &[0.2, 0.3],
            &[1.0, 1.0],
            &[0.0, 0.0],
            1.0,
            &p,
            &mut split(1, 1),
        );
        assert!(s.is_finite() && s > 0.0);
    }

    #[test]
    fn param_validation() {
        assert!(AdaptParams::default().validate().is_ok());
        for bad in [
            AdaptParams {
                xi: 1.0,
                ..Default::default()
            },
            AdaptParams {
                xi: 0.0,
                ..Default::default()
            },
            AdaptParams {
                eps: 0.0,
                ..Default::default()
            },
            AdaptParams {
                sigma0: -1.0,
                ..Default::default()
            },
            AdaptParams {
                base_floor: 0.0,
                ..Default::default()
            },
            AdaptParams {
                beta: f64::NAN,
                ..Default::default()
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }
}
