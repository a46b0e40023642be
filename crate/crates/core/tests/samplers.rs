mod common;

use common::gauss_logpdf;
use langevin_mc::adaptation::AdaptParams;
use langevin_mc::prng::split;
use langevin_mc::samplers::{
    acceptance_probability, hamiltonian, langevin_mean, langevin_proposal, leapfrog,
    log_acceptance_probability, mala_propose, mh_accept, run_chain, ChainState, HmcParams,
    SamplerConfig, Trajectory,
};
use langevin_mc::targets::{BoxSpec, GaussComponent, GaussMix, ParticleBox, Target, TargetDensity};

fn box22() -> ParticleBox {
    ParticleBox::new(BoxSpec::new(1.0, 1.0, 2, 2).unwrap()).unwrap()
}

/// `log p(a) + log q(b|a) + log α(a→b)` for a Langevin kernel with drift
/// step `eps` and variance `var` in both directions.
fn log_flux<T: TargetDensity>(t: &T, a: &[f64], b: &[f64], eps: f64, var: f64) -> f64 {
    let sa = ChainState::new(t, a, 1.0).unwrap();
    let prop = langevin_proposal(t, &sa, b.to_vec(), eps, var).unwrap();
    let log_alpha =
        log_acceptance_probability(sa.log_p, prop.log_p_star, prop.log_q_fwd, prop.log_q_rev);
    sa.log_p.value() + prop.log_q_fwd + log_alpha
}

#[test]
fn mala_forward_density_matches_oracle() {
    let t = GaussMix::standard_normal(3);
    let mut s = split(10, 0);
    for _ in 0..200 {
        let theta: Vec<f64> = (0..3).map(|_| s.next_normal()).collect();
        let state = ChainState::new(&t, &theta, 1.0).unwrap();
        let p = mala_propose(&t, &state, 0.6, &mut s).unwrap();
        let mean: Vec<f64> = theta.iter().map(|x| x + 0.18 * -x).collect();
        let want = gauss_logpdf(&p.theta_star, &mean, 0.36);
        assert!((p.log_q_fwd - want).abs() < 1e-12 * want.abs().max(1.0));
        let back: Vec<f64> = p.theta_star.iter().map(|x| x + 0.18 * -x).collect();
        let want_rev = gauss_logpdf(&theta, &back, 0.36);
        assert!((p.log_q_rev - want_rev).abs() < 1e-12 * want_rev.abs().max(1.0));
    }
}

#[test]
fn hand_computed_acceptance() {
    let t = GaussMix::standard_normal(1);
    let state = ChainState::new(&t, &[0.0], 1.0).unwrap();
    let prop = langevin_proposal(&t, &state, vec![1.0], 0.5, 0.25).unwrap();
    // log p(1) - log p(0) = -1/2; forward mean 0, reverse mean 1 - 0.125.
    let log_p = |x: f64| -0.5 * x * x - 0.5 * std::f64::consts::TAU.ln();
    let fwd = gauss_logpdf(&[1.0], &[0.0], 0.25);
    let rev = gauss_logpdf(&[0.0], &[0.875], 0.25);
    let want = (log_p(1.0) + rev - log_p(0.0) - fwd).exp().min(1.0);
    let got = acceptance_probability(state.log_p, prop.log_p_star, prop.log_q_fwd, prop.log_q_rev);
    assert!((got - want).abs() < 1e-12 * want, "{got} vs {want}");
}

#[test]
fn detailed_balance_identity() {
    let gauss = GaussMix::new(vec![
        GaussComponent {
            weight: 1.0,
            mean: vec![-1.0, 0.0],
            variance: vec![0.5, 1.0],
        },
        GaussComponent {
            weight: 2.0,
            mean: vec![1.5, 0.5],
            variance: vec![1.0, 0.3],
        },
    ])
    .unwrap();
    let bx = box22();
    let mut s = split(2718, 0);
    let mut worst: f64 = 0.0;
    let mut worst_underflow: f64 = 0.0;
    let mut representable = 0;
    for i in 0..1000 {
        let eps = 0.05 + 0.5 * s.next_uniform();
        // MALA uses ε², the adaptive kernel a Σ shared by both directions.
        let var = if i % 2 == 0 {
            eps * eps
        } else {
            0.01 + s.next_uniform()
        };
        let (lhs, rhs) = if i % 4 < 2 {
            let a = [2.0 * s.next_normal(), 2.0 * s.next_normal()];
            let b = [2.0 * s.next_normal(), 2.0 * s.next_normal()];
            (
                log_flux(&gauss, &a, &b, eps, var),
                log_flux(&gauss, &b, &a, eps, var),
            )
        } else {
            let mut draw = || loop {
                let p = [s.next_uniform(), s.next_uniform()];
                if bx.log_density(&p).unwrap().is_finite() {
                    break p;
                }
            };
            let (a, b) = (draw(), draw());
            (
                log_flux(&bx, &a, &b, eps, var),
                log_flux(&bx, &b, &a, eps, var),
            )
        };
        assert!(lhs.is_finite() && rhs.is_finite(), "{lhs} {rhs}");
        // Where p·q·α is representable as an f64, a log gap δ is a relative
        // product error of e^δ − 1. Below that the products underflow and
        // only the log-scale comparison is meaningful.
        if lhs > -700.0 {
            representable += 1;
            worst = worst.max((lhs - rhs).abs());
        } else {
            worst_underflow = worst_underflow.max((lhs - rhs).abs() / lhs.abs());
        }
    }
    println!("representable pairs {representable}, worst gap {worst:e}, underflow rel {worst_underflow:e}");
    assert!(representable > 500);
    assert!(worst_underflow < 1e-10);
    assert!(worst < 1e-10, "worst log-gap {worst}");
}

#[test]
fn small_step_mala_accepts_almost_everything() {
    let t = GaussMix::standard_normal(1);
    let c = run_chain(&SamplerConfig::mala(1e-3), &t, 10_000, 0, &[0.3], 5, 0).unwrap();
    assert!(c.acceptance_rate() >= 0.99, "{}", c.acceptance_rate());
}

#[test]
fn mala_recovers_standard_normal_moments() {
    let t = GaussMix::standard_normal(1);
    let c = run_chain(&SamplerConfig::mala(0.5), &t, 50_000, 500, &[0.0], 2024, 0).unwrap();
    let xs = c.column(0);
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
    assert!(mean.abs() <= 0.05, "mean {mean}");
    assert!((0.9..=1.1).contains(&var), "var {var}");
}

#[test]
fn adaptive_sampler_recovers_gaussian_moments() {
    let t = GaussMix::standard_normal(2);
    let s = SamplerConfig::adaptive(AdaptParams::with_eps(0.5));
    let c = run_chain(&s, &t, 50_000, 500, &[0.0, 0.0], 31, 0).unwrap();
    for j in 0..2 {
        let xs = c.column(j);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() <= 0.1, "mean {mean}");
        assert!((0.8..=1.2).contains(&var), "var {var}");
    }
}

#[test]
fn chains_never_visit_zero_density() {
    let t = Target::ParticleBox(box22());
    for s in [
        SamplerConfig::mala(0.2),
        SamplerConfig::adaptive(AdaptParams::with_eps(0.2)),
        SamplerConfig::hmc(HmcParams {
            eps_leap: 0.05,
            n_leap: 10,
        }),
    ] {
        let c = run_chain(&s, &t, 5000, 0, &[0.25, 0.25], 3, 0).unwrap();
        for (row, lp) in c.rows().zip(c.log_ps()) {
            assert!(lp.is_finite());
            assert!(
                t.log_density(row).unwrap().is_finite(),
                "{} at {row:?}",
                s.kind()
            );
        }
    }
}

#[test]
fn accepted_adaptive_step_records_scale() {
    let t = GaussMix::standard_normal(2);
    let p = AdaptParams::with_eps(0.3);
    let mut stream = split(0, 0);
    let mut state = ChainState::new(&t, &[0.5, 0.5], p.sigma0).unwrap();
    let mut seen = 0;
    for _ in 0..200 {
        let before = state.clone();
        let prop = langevin_mc::samplers::adaptive_propose(&t, &state, &p, &mut stream).unwrap();
        let (next, accepted) = mh_accept(&before, &prop, &mut stream);
        if accepted {
            assert_eq!(next.sigma, prop.cov_scale_fwd);
            assert_eq!(next.theta, prop.theta_star);
            seen += 1;
        } else {
            assert_eq!(next.sigma, before.sigma);
            assert_eq!(next.theta, before.theta);
        }
        assert_eq!(next.theta_prev.as_ref(), Some(&before.theta));
        state = next;
    }
    assert!(seen > 0);
}

/// Mean |ΔH| over 1000 fresh (θ, p) pairs for a fixed trajectory length.
fn mean_abs_energy_error(eps: f64, n_leap: usize) -> f64 {
    let t = GaussMix::standard_normal(2);
    let mut s = split(99, 0);
    let mut total = 0.0;
    for _ in 0..1000 {
        let theta = [s.next_normal(), s.next_normal()];
        let p = [s.next_normal(), s.next_normal()];
        let h0 = hamiltonian(t.log_density(&theta).unwrap(), &p);
        match leapfrog(&t, &theta, &p, eps, n_leap).unwrap() {
            Trajectory::Complete {
                momentum, log_p, ..
            } => total += (hamiltonian(log_p, &momentum) - h0).abs(),
            Trajectory::Diverged => panic!("diverged on a Gaussian"),
        }
    }
    total / 1000.0
}

#[test]
fn leapfrog_energy_error_is_second_order() {
    let coarse = mean_abs_energy_error(0.2, 10);
    let fine = mean_abs_energy_error(0.1, 20);
    let ratio = coarse / fine;
    assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn leapfrog_single_step_against_fine_integrator() {
    // Hand arithmetic: p½ = -0.05, θ' = 0.995, p' = -0.09975. The exact flow
    // over t = 0.1 is θ = cos t, p = -sin t; leapfrog is within O(t³).
    let t = GaussMix::standard_normal(1);
    let Trajectory::Complete {
        theta, momentum, ..
    } = leapfrog(&t, &[1.0], &[0.0], 0.1, 1).unwrap()
    else {
        panic!()
    };
    assert!((theta[0] - 0.995).abs() < 1e-15 && (momentum[0] + 0.09975).abs() < 1e-15);
    assert!((theta[0] - 0.1f64.cos()).abs() < 1e-3 && (momentum[0] + 0.1f64.sin()).abs() < 1e-3);
    let Trajectory::Complete { theta: fine, .. } =
        leapfrog(&t, &[1.0], &[0.0], 1e-4, 1000).unwrap()
    else {
        panic!()
    };
    assert!((fine[0] - 0.1f64.cos()).abs() < 1e-9);
}

#[test]
fn langevin_mean_drift() {
    assert_eq!(langevin_mean(&[1.0], &[-1.0], 0.5), vec![0.875]);
}
