use num_complex::Complex64;
use std::f64::consts::PI;
use torus_control::hum::{solve_hum, GramianSpec};
use torus_control::nls::{
    energy, evolve, fit_decay_rate, global_control, local_control_nls, nls_step, stabilize, DecayRecord, Leg,
    NlsParams, PhaseKind, StabilizeOptions,
};
use torus_control::sampling::{random_smooth_state, random_state, rng};
use torus_control::spectral::{make_window, CutoffWindow, FourierState, GridSpec, Interval, WindowKind};
use torus_control::Error;

fn grid(n: usize) -> GridSpec {
    GridSpec::new(1, n).unwrap()
}

fn window(g: GridSpec) -> CutoffWindow {
    make_window(g, &[Interval(0.0, 0.3)], 0.05, WindowKind::Smooth).unwrap()
}

#[test]
fn plane_wave_dispersion_relation() {
    let g = grid(32);
    for sigma in [1.0, -1.0] {
        let (k, a) = (3, 0.7);
        let u0 = FourierState::plane_wave(g, k, 0, Complex64::new(a, 0.0)).unwrap();
        let (u, _) = evolve(&u0, 0.5, &NlsParams::new(sigma, 1e-3)).unwrap();
        let omega = (2.0 * PI * k as f64).powi(2) + sigma * a * a;
        let exact = u0.scale(Complex64::from_polar(1.0, -omega * 0.5));
        assert!(u.sub(&exact).l2_norm() < 1e-10, "sigma {sigma}");
    }
}

#[test]
fn undamped_step_is_an_isometry() {
    let g = grid(64);
    let u = random_state(g, &mut rng(1)).scale(Complex64::new(3.0, 0.0));
    for sigma in [1.0, -1.0, 0.0] {
        for dealias in [true, false] {
            let v = nls_step(&u, &NlsParams::new(sigma, 1e-3).with_dealias(dealias)).unwrap();
            assert!((v.l2_norm() - u.l2_norm()).abs() <= 1e-12 * u.l2_norm());
        }
    }
}

#[test]
fn constant_damping_factor() {
    let g = grid(16);
    let u = random_state(g, &mut rng(2)).scale(Complex64::new(1e-6, 0.0));
    let params = NlsParams::new(1.0, 1e-2).with_damping(CutoffWindow::full(g));
    let v = nls_step(&u, &params).unwrap();
    let expect = (-1e-2f64).exp();
    for (a, b) in v.coeffs().iter().zip(u.coeffs()) {
        assert!((a.norm() - expect * b.norm()).abs() <= 1e-12 * b.norm().max(1e-30));
    }
}

#[test]
fn energy_examples() {
    let g = grid(16);
    assert_eq!(energy(&FourierState::zeros(g), 1.0), 0.0);
    let c = FourierState::plane_wave(g, 0, 0, Complex64::new(0.8, 0.0)).unwrap();
    assert!((energy(&c, 1.0) - 0.8f64.powi(4) / 2.0).abs() < 1e-14);
    let e1 = FourierState::plane_wave(g, 1, 0, Complex64::new(1.0, 0.0)).unwrap();
    assert!((energy(&e1, 1.0) - (4.0 * PI * PI + 0.5)).abs() < 1e-12);
}

#[test]
fn undamped_conservation() {
    let g = grid(64);
    for sigma in [1.0, -1.0] {
        let u0 = random_smooth_state(g, 4, 1.0, &mut rng(3));
        let (_, coarse) = evolve(&u0, 1.0, &NlsParams::new(sigma, 1e-3)).unwrap();
        let (_, fine) = evolve(&u0, 1.0, &NlsParams::new(sigma, 5e-4)).unwrap();
        assert!(coarse.relative_mass_drift() <= 1e-10);
        let ratio = coarse.energy_drift() / fine.energy_drift();
        assert!((ratio - 4.0).abs() <= 0.5, "sigma {sigma}: ratio {ratio}");
        assert!(coarse.gamma_fit.is_none());
    }
}

#[test]
fn damped_mass_balance_and_monotone_decay() {
    let g = grid(64);
    let params = NlsParams::new(-1.0, 1e-3).with_damping(window(g));
    for seed in 0..3 {
        let u0 = random_state(g, &mut rng(seed));
        let (_, rec) = evolve(&u0, 1.0, &params).unwrap();
        assert!(rec.mass_balance().abs() <= 1e-4);
        assert!(rec.mass_balance().abs() <= 5.0 * 1e-6 * rec.max_observed());
        assert!(rec.mass.windows(2).all(|m| m[1] <= m[0] + 1e-12));
        assert!(rec.mass.iter().all(|&m| m >= 0.0));
        assert_eq!(rec.times.len(), rec.observed.len());
        assert!(rec.gamma_fit.is_some());
    }
}

#[test]
fn decay_rate_fits() {
    let times: Vec<f64> = (0..100).map(|i| i as f64 * 0.05).collect();
    let mut rec = DecayRecord {
        mass: times.iter().map(|t| (-2.0 * t).exp()).collect(),
        energy: vec![0.0; 100],
        observed: vec![0.0; 100],
        times,
        gamma_fit: None,
    };
    let fit = fit_decay_rate(&rec, 0.5).unwrap();
    assert!((fit.gamma - 1.0).abs() < 1e-10 && !fit.clamped);
    rec.mass = vec![2.0; 100];
    assert_eq!(fit_decay_rate(&rec, 0.5).unwrap().gamma, 0.0);
    rec.mass[99] = 0.0;
    assert!(matches!(fit_decay_rate(&rec, 0.5), Err(Error::NonPositiveMass)));
    assert!(matches!(fit_decay_rate(&rec, 0.05), Err(Error::TooFewSamples { .. })));

    let g = grid(16);
    let params = NlsParams::new(0.0, 1e-3).with_damping(CutoffWindow::full(g));
    let (_, rec) = evolve(&random_state(g, &mut rng(4)), 1.0, &params).unwrap();
    assert!((rec.gamma_fit.unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn stabilization_reaches_threshold() {
    let g = grid(64);
    let u0 = random_smooth_state(g, 8, 0.5, &mut rng(5));
    let params = NlsParams::new(-1.0, 1e-3).with_damping(window(g));
    let s = stabilize(&u0, &params, 0.05, &StabilizeOptions::default()).unwrap();
    assert!(s.final_state.l2_norm() <= 0.05);
    assert!(s.gamma_est.unwrap() > 0.0);
    assert!(s.t_reached <= s.horizon_cap.unwrap());
}

#[test]
fn stabilization_stalls_without_damping_support() {
    let g = grid(16);
    let u0 = random_state(g, &mut rng(6));
    let params = NlsParams::new(-1.0, 1e-2).with_damping(CutoffWindow::empty(g));
    let opts = StabilizeOptions { refit_interval: 1.0, ..Default::default() };
    assert!(matches!(stabilize(&u0, &params, 0.1, &opts), Err(Error::StabilizationStall { .. })));
    let undamped = NlsParams::new(-1.0, 1e-2);
    assert!(matches!(stabilize(&u0, &undamped, 0.1, &opts), Err(Error::InvalidParameter(_))));
}

#[test]
fn local_control_trivial_cases() {
    let g = grid(32);
    let spec = GramianSpec::new(1.0, window(g)).unwrap();
    let zero = local_control_nls(&FourierState::zeros(g), &spec, &NlsParams::new(-1.0, 1e-3), 1e-10, 10).unwrap();
    assert_eq!(zero.iterations, 1);
    assert_eq!(zero.phi0.l2_norm(), 0.0);

    let u0 = random_smooth_state(g, 6, 0.3, &mut rng(7));
    let linear = local_control_nls(&u0, &spec, &NlsParams::new(0.0, 1e-3), 1e-10, 10).unwrap();
    let hum = solve_hum(&spec, &u0, 1e-13, 500).unwrap();
    assert!(linear.phi0.sub(&hum.phi0).l2_norm() <= 1e-9 * hum.phi0.l2_norm());
    assert!(linear.iterations <= 2);
    assert!(linear.history[0].ratio.is_none());
}

#[test]
fn local_control_small_data() {
    let g = grid(64);
    let spec = GramianSpec::new(1.0, window(g)).unwrap();
    let u0 = random_smooth_state(g, 8, 0.05, &mut rng(8));
    let c = local_control_nls(&u0, &spec, &NlsParams::new(-1.0, 1e-3), 1e-10, 50).unwrap();
    assert!(c.residual <= 1e-5 * u0.l2_norm());
    assert!(c.max_ratio.unwrap() < 0.5);
}

#[test]
fn local_control_rejects_damped_params() {
    let g = grid(16);
    let spec = GramianSpec::new(1.0, window(g)).unwrap();
    let params = NlsParams::new(-1.0, 1e-3).with_damping(window(g));
    let u0 = random_state(g, &mut rng(9));
    assert!(local_control_nls(&u0, &spec, &params, 1e-8, 5).is_err());
}

#[test]
fn global_control_degenerate_schedules() {
    let g = grid(32);
    let spec = GramianSpec::new(1.0, window(g)).unwrap();
    let params = NlsParams::new(-1.0, 1e-3);
    let opts = StabilizeOptions::default();
    let zero = FourierState::zeros(g);
    let empty = global_control(&zero, &zero, &spec, &params, 0.1, 1e-10, 20, &opts).unwrap();
    assert!(empty.phases.is_empty());
    assert_eq!(empty.error_to_zero + empty.error_from_zero, 0.0);

    let u0 = random_smooth_state(g, 6, 0.05, &mut rng(10));
    let local = global_control(&u0, &zero, &spec, &params, 0.1, 1e-10, 20, &opts).unwrap();
    assert_eq!(local.phases.len(), 1);
    assert_eq!(local.phases[0].kind, PhaseKind::Control);
    assert!(local.error_to_zero <= 1e-8);
}

#[test]
fn global_control_both_legs() {
    let g = grid(64);
    let spec = GramianSpec::new(1.0, window(g)).unwrap();
    let params = NlsParams::new(-1.0, 1e-3);
    let u0 = random_smooth_state(g, 8, 0.5, &mut rng(11));
    let u1 = random_smooth_state(g, 8, 0.3, &mut rng(12));
    let s = global_control(&u0, &u1, &spec, &params, 0.1, 1e-10, 50, &StabilizeOptions::default()).unwrap();
    assert!(s.error_to_zero <= 1e-4 && s.error_from_zero <= 1e-4);
    let kinds: Vec<_> = s.leg(Leg::FromZero).map(|p| p.kind).collect();
    assert_eq!(kinds, vec![PhaseKind::Control, PhaseKind::Antidamped]);
    let js = serde_json::to_value(&s.phases).unwrap();
    assert_eq!(js[0]["type"], "damped");
    assert!(js[0]["phi0"].is_null());
    for w in s.phases.windows(2) {
        assert_eq!(w[0].t_end, w[1].t_start);
    }
}
