use num_complex::Complex64;
use torus_control::hum::{observed_energy, GramianSpec};
use torus_control::sampling::{random_state, rng};
use torus_control::spectral::{make_window, FourierState, GridSpec, Interval, WindowKind};
use torus_control::tensor::{strip_observability_constant, StripWindow};

fn strip(n: usize, kind: WindowKind) -> StripWindow {
    let g = GridSpec::new(1, n).unwrap();
    let width = if kind == WindowKind::Smooth { 0.05 } else { 0.0 };
    StripWindow::new(make_window(g, &[Interval(0.0, 0.3)], width, kind).unwrap()).unwrap()
}

#[test]
fn strip_constant_matches_base() {
    for kind in [WindowKind::Sharp, WindowKind::Smooth] {
        let s = strip(16, kind);
        let spec = GramianSpec::new(1.0, s.to_window()).unwrap();
        let rep = strip_observability_constant(&spec).unwrap();
        assert!(rep.relative_gap <= 1e-6, "{kind:?}: {}", rep.relative_gap);
        assert!(rep.off_block <= 1e-14);
        let full = rep.lambda_min_full.unwrap();
        assert!((1.0 / full - rep.c_2d).abs() <= 1e-8 * rep.c_2d);
    }
}

#[test]
fn single_mode_observed_energy_matches_1d() {
    let s = strip(8, WindowKind::Smooth);
    let spec_1d = GramianSpec::new(0.5, s.base().clone()).unwrap();
    let spec_2d = GramianSpec::new(0.5, s.to_window()).unwrap();
    let g2 = spec_2d.grid();
    let c = random_state(spec_1d.grid(), &mut rng(3));
    for k in [0, 1, -3] {
        let u = FourierState::from_modes(g2, |k1, k2| if k2 == k { c.mode(k1, 0) } else { Complex64::default() });
        let e2 = observed_energy(&spec_2d, &u, 2).unwrap();
        let e1 = observed_energy(&spec_1d, &c, 2).unwrap();
        assert!((e2 - e1).abs() <= 1e-10 * e1, "k={k}: {e2} vs {e1}");
    }
}

#[test]
fn non_strip_window_is_rejected() {
    let g = GridSpec::new(2, 8).unwrap();
    let mut w = make_window(g, &[Interval(0.0, 0.4)], 0.05, WindowKind::Smooth).unwrap();
    w.samples[10] = 0.3;
    let spec = GramianSpec::new(1.0, w).unwrap();
    assert!(strip_observability_constant(&spec).is_err());
    let one_d = GramianSpec::new(1.0, strip(8, WindowKind::Sharp).base().clone()).unwrap();
    assert!(strip_observability_constant(&one_d).is_err());
}
