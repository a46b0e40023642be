//! Langevin proposals: classic MALA and the adaptive-scale variant.

use super::{gaussian_log_density, ChainState, Proposal};
use crate::adaptation::{sigma_update, AdaptParams};
use crate::error::Result;
use crate::prng::RngStream;
use crate::targets::TargetDensity;

/// Euler drift `θ + (ε²/2)·∇L(θ)`.
pub fn langevin_mean(theta: &[f64], grad: &[f64], eps: f64) -> Vec<f64> {
    let h = 0.5 * eps * eps;
    theta.iter().zip(grad).map(|(t, g)| t + h * g).collect()
}

/// Builds the proposal for a given candidate. Both directions use the
/// drift step `eps` and the same variance `cov_scale`.
pub fn langevin_proposal<T: TargetDensity + ?Sized>(
    target: &T,
    state: &ChainState,
    theta_star: Vec<f64>,
    eps: f64,
    cov_scale: f64,
) -> Result<Proposal> {
    let mean_fwd = langevin_mean(&state.theta, &state.grad, eps);
    let log_q_fwd = gaussian_log_density(&theta_star, &mean_fwd, cov_scale);
    let (log_p_star, grad_star) = target.evaluate(&theta_star)?;
    let log_q_rev = match &grad_star {
        Some(g) => {
            let mean_rev = langevin_mean(&theta_star, g, eps);
            gaussian_log_density(&state.theta, &mean_rev, cov_scale)
        }
        None => f64::NEG_INFINITY,
    };
    Ok(Proposal {
        theta_star,
        mean_fwd,
        cov_scale_fwd: cov_scale,
        log_q_fwd,
        log_q_rev,
        log_p_star,
        grad_star,
    })
}

/// MALA proposal from explicit standard-normal noise `z`.
pub fn mala_propose_with_noise<T: TargetDensity + ?Sized>(
    target: &T,
    state: &ChainState,
    eps: f64,
    z: &[f64],
) -> Result<Proposal> {
    let theta_star = langevin_mean(&state.theta, &state.grad, eps)
        .into_iter()
        .zip(z)
        .map(|(m, z)| m + eps * z)
        .collect();
    langevin_proposal(target, state, theta_star, eps, eps * eps)
}

/// `θ* ~ N(θ + (ε²/2)·∇L(θ), ε²·I)`. Consumes `d` normals.
pub fn mala_propose<T: TargetDensity + ?Sized>(
    target: &T,
    state: &ChainState,
    eps: f64,
    stream: &mut RngStream,
) -> Result<Proposal> {
    let mut z = vec![0.0; state.dim()];
    stream.fill_normal(&mut z);
    mala_propose_with_noise(target, state, eps, &z)
}

/// Adaptive proposal `θ* ~ N(θ + (ε²/2)·∇L(θ), Σⁿ⁺¹·I)` where `Σⁿ⁺¹` comes
/// from [`sigma_update`] over the last two points. Without history (the
/// first step) this is exactly [`mala_propose`] with step `params.eps`.
///
/// Consumes one uniform for ψ, then `d` normals.
pub fn adaptive_propose<T: TargetDensity + ?Sized>(
    target: &T,
    state: &ChainState,
    params: &AdaptParams,
    stream: &mut RngStream,
) -> Result<Proposal> {
    let (theta_prev, grad_prev) = match (&state.theta_prev, &state.grad_prev) {
        (Some(t), Some(g)) if state.step > 0 => (t, g),
        _ => return mala_propose(target, state, params.eps, stream),
    };
    let sigma = sigma_update(
        &state.theta,
        theta_prev,
        &state.grad,
        grad_prev,
        state.sigma,
        params,
        stream,
    );
    let sd = sigma.sqrt();
    let mut z = vec![0.0; state.dim()];
    stream.fill_normal(&mut z);
    let theta_star = langevin_mean(&state.theta, &state.grad, params.eps)
        .into_iter()
        .zip(&z)
        .map(|(m, z)| m + sd * z)
        .collect();
    langevin_proposal(target, state, theta_star, params.eps, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prng::split;
    use crate::targets::{BoxSpec, GaussMix, ParticleBox};

    #[test]
    fn flat_gradient_zero_noise_is_identity() {
        let target = GaussMix::standard_normal(2);
        let state = ChainState::new(&target, &[0.0, 0.0], 1.0).unwrap();
        let p = mala_propose_with_noise(&target, &state, 0.3, &[0.0, 0.0]).unwrap();
        assert_eq!(p.theta_star, state.theta);
    }

    #[test]
    fn drift_only_step() {
        let target = GaussMix::standard_normal(1);
        let state = ChainState::new(&target, &[1.0], 1.0).unwrap();
        let p = mala_propose_with_noise(&target, &state, 0.5, &[0.0]).unwrap();
        assert_eq!(p.theta_star, vec![0.875]);
        assert_eq!(p.cov_scale_fwd, 0.25);
    }

    #[test]
    fn first_adaptive_step_matches_mala() {
        let target = GaussMix::standard_normal(3);
        let state = ChainState::new(&target, &[0.2, -0.4, 1.0], 1.0).unwrap();
        let params = AdaptParams::with_eps(0.4);
        let a = adaptive_propose(&target, &state, &params, &mut split(3, 0)).unwrap();
        let m = mala_propose(&target, &state, 0.4, &mut split(3, 0)).unwrap();
        assert_eq!(a, m);
    }

    #[test]
    fn equilibrium_history_gives_fixed_scale() {
        let target = GaussMix::standard_normal(2);
        let mut state = ChainState::new(&target, &[1.0, 2.0], 1.0).unwrap();
        // Equal norms of the positions and of the gradients: r_θ = r_g = 1.
        state.theta_prev = Some(vec![2.0, 1.0]);
        state.grad_prev = Some(vec![-2.0, -1.0]);
        state.step = 5;
        let params = AdaptParams::with_eps(0.1);
        let p = adaptive_propose(&target, &state, &params, &mut split(0, 0)).unwrap();
        assert!((p.cov_scale_fwd - 0.073_105_857_863).abs() < 1e-11);
    }

    #[test]
    fn out_of_box_candidate_auto_rejects() {
        let target = ParticleBox::new(BoxSpec::new(1.0, 1.0, 2, 2).unwrap()).unwrap();
        let state = ChainState::new(&target, &[0.25, 0.25], 1.0).unwrap();
        let p = mala_propose_with_noise(&target, &state, 0.5, &[-1.0, 0.0]).unwrap();
        assert!(p.auto_reject());
        assert_eq!(p.log_q_rev, f64::NEG_INFINITY);
    }
}
