use num_complex::Complex64;
use torus_control::hum::{
    apply_gramian, assemble_gramian, drive_linear, gramian_spectrum_dense, gramian_spectrum_iterative,
    hum_regularity_ratio, observability_constant, observed_energy, solve_hum, GramianSpec,
};
use torus_control::linalg;
use torus_control::sampling::{random_smooth_state, random_state, rng};
use torus_control::spectral::{make_window, CutoffWindow, FourierState, GridSpec, Interval, WindowKind};

fn smooth_spec(n: usize, a: f64, b: f64, t: f64) -> GramianSpec {
    let g = GridSpec::new(1, n).unwrap();
    GramianSpec::new(t, make_window(g, &[Interval(a, b)], 0.04, WindowKind::Smooth).unwrap()).unwrap()
}

fn sharp_spec(n: usize, a: f64, b: f64, t: f64) -> GramianSpec {
    let g = GridSpec::new(1, n).unwrap();
    GramianSpec::new(t, make_window(g, &[Interval(a, b)], 0.0, WindowKind::Sharp).unwrap()).unwrap()
}

#[test]
fn full_window_gramian_is_t_identity() {
    let g = GridSpec::new(1, 16).unwrap();
    let spec = GramianSpec::new(1.5, CutoffWindow::full(g)).unwrap();
    let phi = random_state(g, &mut rng(11));
    let s = apply_gramian(&spec, &phi).unwrap();
    assert!(s.sub(&phi.scale(Complex64::new(1.5, 0.0))).l2_norm() < 1e-12);
    assert_eq!(apply_gramian(&spec, &FourierState::zeros(g)).unwrap().l2_norm(), 0.0);
}

#[test]
fn quadratic_form_matches_fine_time_integral() {
    let spec = smooth_spec(32, 0.0, 0.2, 1.0);
    let phi = random_state(spec.grid(), &mut rng(5));
    let form = apply_gramian(&spec, &phi).unwrap().inner(&phi);
    let brute = observed_energy(&spec, &phi, 10).unwrap();
    assert!(form.im.abs() < 1e-12);
    assert!((form.re - brute).abs() <= 1e-8 * brute, "{} vs {}", form.re, brute);
}

#[test]
fn gramian_is_self_adjoint_and_positive() {
    let spec = smooth_spec(32, 0.1, 0.35, 1.0);
    let mut r = rng(8);
    for _ in 0..5 {
        let phi = random_state(spec.grid(), &mut r);
        let psi = random_state(spec.grid(), &mut r);
        let a = apply_gramian(&spec, &phi).unwrap().inner(&psi);
        let b = apply_gramian(&spec, &psi).unwrap().inner(&phi).conj();
        assert!((a - b).norm() <= 1e-12 * phi.l2_norm() * psi.l2_norm());
        assert!(apply_gramian(&spec, &phi).unwrap().inner(&phi).re > 0.0);
    }
}

#[test]
fn dense_assembly_matches_quadrature() {
    let spec = smooth_spec(16, 0.0, 0.3, 0.7);
    let dense = assemble_gramian(&spec);
    let phi = random_state(spec.grid(), &mut rng(2));
    let via_dense = linalg::matvec(&dense, phi.coeffs());
    let via_quad = apply_gramian(&spec, &phi).unwrap();
    let err: f64 = via_dense
        .iter()
        .zip(via_quad.coeffs())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    assert!(err < 1e-12, "{err}");
}

#[test]
fn observability_constant_dense_oracle() {
    // dense exact eigensolve vs Lanczos on the matrix-free quadrature operator
    let spec = sharp_spec(32, 0.0, 0.25, 1.0);
    let (lo_dense, _) = gramian_spectrum_dense(&spec).unwrap();
    let (lo_iter, _) = gramian_spectrum_iterative(&spec, 32).unwrap();
    assert!((lo_dense - lo_iter).abs() <= 1e-8 * lo_dense, "{lo_dense} vs {lo_iter}");
    let rep = observability_constant(&spec).unwrap();
    assert!((rep.c_t - 1.0 / lo_dense).abs() <= 1e-12 * rep.c_t);
}

#[test]
fn observability_constant_nonincreasing_in_t() {
    let c1 = observability_constant(&smooth_spec(32, 0.0, 0.25, 0.5)).unwrap().c_t;
    let c2 = observability_constant(&smooth_spec(32, 0.0, 0.25, 1.0)).unwrap().c_t;
    let c4 = observability_constant(&smooth_spec(32, 0.0, 0.25, 2.0)).unwrap().c_t;
    assert!(c2 <= c1 && c4 <= c2, "{c1} {c2} {c4}");
}

#[test]
fn quadrature_doubling_is_converged() {
    let spec = smooth_spec(32, 0.0, 0.25, 1.0);
    let (lo, _) = gramian_spectrum_iterative(&spec, 32).unwrap();
    let doubled = spec.clone().with_n_quad(2 * spec.n_quad);
    let (lo2, _) = gramian_spectrum_iterative(&doubled, 32).unwrap();
    assert!((1.0 / lo - 1.0 / lo2).abs() <= 1e-6 / lo);
}

#[test]
fn closed_loop_linear_control() {
    let spec = smooth_spec(64, 0.0, 0.2, 1.0);
    for seed in 0..3 {
        let u0 = random_state(spec.grid(), &mut rng(seed));
        let sol = solve_hum(&spec, &u0, 1e-10, 2000).unwrap();
        assert!(sol.residual_l2 <= 1e-6 * u0.l2_norm(), "seed {seed}: {}", sol.residual_l2);
        let d = drive_linear(&u0, &spec, &sol.phi0).unwrap();
        assert!((d.residual - sol.residual_l2).abs() < 1e-14);
        assert!(d.trajectory.first().unwrap().t == 0.0);
        assert!((d.trajectory.last().unwrap().t - 1.0).abs() < 1e-12);
    }
}

#[test]
fn hum_optimality_two_ways() {
    let spec = smooth_spec(32, 0.0, 0.2, 1.0);
    let u0 = random_smooth_state(spec.grid(), 6, 1.0, &mut rng(9));
    let sol = solve_hum(&spec, &u0, 1e-12, 500).unwrap();
    let form = apply_gramian(&spec, &sol.phi0).unwrap().inner(&sol.phi0).re;
    let brute = observed_energy(&spec, &sol.phi0, 4).unwrap();
    assert!((form - brute).abs() <= 1e-8 * brute);
}

#[test]
fn regularity_ratio_full_window() {
    let g = GridSpec::new(1, 32).unwrap();
    let spec = GramianSpec::new(2.0, CutoffWindow::full(g)).unwrap();
    let stats = hum_regularity_ratio(&spec, 1.0, 4, 8, 3).unwrap();
    for r in stats.ratios {
        assert!((r - 0.5).abs() < 1e-10);
    }
}

#[test]
fn regularity_ratio_l2_bounded_by_constant() {
    let spec = smooth_spec(32, 0.0, 0.3, 1.0);
    let c_t = observability_constant(&spec).unwrap().c_t;
    let stats = hum_regularity_ratio(&spec, 0.0, 6, 15, 4).unwrap();
    assert!(stats.max <= c_t * (1.0 + 1e-9));
}

#[test]
fn regularity_rejects_sharp_window() {
    let spec = sharp_spec(16, 0.0, 0.3, 1.0);
    assert!(hum_regularity_ratio(&spec, 1.0, 2, 4, 0).is_err());
}
