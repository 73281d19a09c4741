use num_complex::Complex64;
use proptest::prelude::*;
use torus_control::spectral::{
    fractional_derivative, free_propagate, sobolev_norm, FourierState, GridSpec,
};

fn state(dim: usize, n: usize, parts: &[(f64, f64)]) -> FourierState {
    let g = GridSpec::new(dim, n).unwrap();
    let coeffs = parts.iter().cycle().take(g.len()).map(|&(re, im)| Complex64::new(re, im)).collect();
    FourierState::from_coeffs(g, coeffs).unwrap()
}

fn parts() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn propagator_is_unitary(p in parts(), t in -3.0..3.0f64, dim in 1usize..=2) {
        let u = state(dim, 16, &p);
        let v = free_propagate(&u, t);
        prop_assert!((v.l2_norm() - u.l2_norm()).abs() <= 1e-12 * u.l2_norm().max(1.0));
        prop_assert!((sobolev_norm(&v, 1.5) - sobolev_norm(&u, 1.5)).abs() <= 1e-12 * sobolev_norm(&u, 1.5).max(1.0));
    }

    #[test]
    fn propagator_group_law(p in parts(), s in -1.0..1.0f64, t in -1.0..1.0f64) {
        let u = state(1, 32, &p);
        let split = free_propagate(&free_propagate(&u, s), t);
        prop_assert!(split.sub(&free_propagate(&u, s + t)).l2_norm() <= 1e-10 * u.l2_norm().max(1.0));
        prop_assert!(free_propagate(&free_propagate(&u, t), -t).sub(&u).l2_norm() <= 1e-12 * u.l2_norm().max(1.0));
    }

    #[test]
    fn fractional_derivatives_compose(p in parts(), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let u = state(1, 32, &p);
        let ab = fractional_derivative(&fractional_derivative(&u, b).unwrap(), a).unwrap();
        let via_sign = fractional_derivative(&fractional_derivative(&u, 0.0).unwrap(), a + b).unwrap();
        prop_assert!(ab.sub(&via_sign).l2_norm() <= 1e-9 * ab.l2_norm().max(1.0));
        let back = fractional_derivative(&fractional_derivative(&u, a).unwrap(), -a).unwrap();
        prop_assert!(back.sub(&u).l2_norm() <= 1e-12 * u.l2_norm().max(1.0));
    }

    #[test]
    fn plancherel(p in parts(), dim in 1usize..=2) {
        let u = state(dim, 8, &p);
        let samples = u.to_physical();
        let mean_sq = samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / samples.len() as f64;
        prop_assert!((mean_sq - u.norm_sqr()).abs() <= 1e-12 * u.norm_sqr().max(1.0));
        let round = FourierState::from_physical(*u.grid(), samples).unwrap();
        prop_assert!(round.sub(&u).l2_norm() <= 1e-12 * u.l2_norm().max(1.0));
    }
}

#[test]
fn sobolev_norm_of_plane_wave() {
    let g = GridSpec::new(1, 16).unwrap();
    let e = FourierState::plane_wave(g, 3, 0, Complex64::new(2.0, 0.0)).unwrap();
    let w = 1.0 + (2.0 * std::f64::consts::PI * 3.0).powi(2);
    assert!((sobolev_norm(&e, 1.0) - 2.0 * w.sqrt()).abs() < 1e-12);
    assert!((sobolev_norm(&e, -1.0) - 2.0 / w.sqrt()).abs() < 1e-14);
}
