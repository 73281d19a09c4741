use nalgebra::DMatrix;
use num_complex::Complex64;

use super::fft;
use super::grid::GridSpec;
use super::state::FourierState;
use super::window::CutoffWindow;
use crate::error::{Error, Result};

/// Options for the free propagator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PropagatorOptions {
    /// Zero the unpaired mode `-N/2` after propagation.
    pub drop_nyquist: bool,
}

/// `e^{itΔ}`: multiplies mode `k` by `e^{-i(2π)^2|k|^2 t}`.
pub fn free_propagate(u: &FourierState, t: f64) -> FourierState {
    free_propagate_with(u, t, PropagatorOptions::default())
}

pub fn free_propagate_with(u: &FourierState, t: f64, opts: PropagatorOptions) -> FourierState {
    let grid = *u.grid();
    let half = (grid.n() / 2) as i64;
    u.map(|i, c| {
        let (k1, k2) = grid.mode(i);
        if opts.drop_nyquist && (k1 == -half || (grid.dim() == 2 && k2 == -half)) {
            return Complex64::new(0.0, 0.0);
        }
        c * Complex64::from_polar(1.0, -grid.laplacian_symbol(i) * t)
    })
}

/// Symbol of `D^r` at integer mode `n`: `sgn(n)|n|^r`, and 1 at `n = 0`.
pub fn fractional_symbol(n: i64, r: f64) -> f64 {
    if n == 0 {
        1.0
    } else {
        (n.signum() as f64) * (n.unsigned_abs() as f64).powf(r)
    }
}

/// `D^r u` on the circle.
pub fn fractional_derivative(u: &FourierState, r: f64) -> Result<FourierState> {
    let grid = *u.grid();
    if grid.dim() != 1 {
        return Err(Error::Dimension { expected: 1, got: grid.dim() });
    }
    Ok(u.map(|i, c| c * fractional_symbol(grid.axis_mode(i), r)))
}

/// Sobolev weight `(1 + (2π)^2|k|^2)^s` of the mode at `idx`.
pub fn sobolev_weight(grid: &GridSpec, idx: usize, s: f64) -> f64 {
    (1.0 + grid.laplacian_symbol(idx)).powf(s)
}

/// `∥u∥_{H^s} = (Σ_k (1+|2πk|²)^s |û(k)|²)^{1/2}`.
pub fn sobolev_norm(u: &FourierState, s: f64) -> f64 {
    let grid = u.grid();
    u.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| sobolev_weight(grid, i, s) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Pointwise product with real grid samples, back to modes.
pub fn multiply_samples(u: &FourierState, samples: &[f64]) -> FourierState {
    let grid = *u.grid();
    let mut buf = u.coeffs().to_vec();
    fft::inverse(&grid, &mut buf);
    for (v, &w) in buf.iter_mut().zip(samples) {
        *v *= w;
    }
    fft::forward(&grid, &mut buf);
    FourierState::from_coeffs(grid, buf).expect("buffer length preserved")
}

/// Pointwise multiplication by the window on the grid.
pub fn multiply_window(u: &FourierState, w: &CutoffWindow) -> Result<FourierState> {
    u.check_grid(&w.grid())?;
    Ok(multiply_samples(u, &w.samples))
}

/// Galerkin product `P_N(f u)`: the product is formed on a grid with twice
/// the resolution, where `f` is resampled from its analytic description,
/// and truncated back to the modes of `u`. No wrap-around aliasing enters
/// the retained modes.
pub fn galerkin_multiply(u: &FourierState, f: &CutoffWindow) -> Result<FourierState> {
    let grid = *u.grid();
    u.check_grid(&f.grid())?;
    let fine = GridSpec::new(grid.dim(), 2 * grid.n())?;
    let mut buf = vec![Complex64::new(0.0, 0.0); fine.len()];
    for (i, c) in u.coeffs().iter().enumerate() {
        let (k1, k2) = grid.mode(i);
        buf[fine.index(k1, k2).expect("coarse mode resolved on fine grid")] = *c;
    }
    fft::inverse(&fine, &mut buf);
    let f_fine = f.resample(fine);
    for (v, &w) in buf.iter_mut().zip(&f_fine.samples) {
        *v *= w;
    }
    fft::forward(&fine, &mut buf);
    Ok(FourierState::from_modes(grid, |k1, k2| {
        buf[fine.index(k1, k2).expect("coarse mode resolved on fine grid")]
    }))
}

/// `[D^r, f] u = D^r(f u) - f D^r u`, with Galerkin products.
pub fn commutator_apply(u: &FourierState, r: f64, f: &CutoffWindow) -> Result<FourierState> {
    if u.grid().dim() != 1 {
        return Err(Error::Dimension { expected: 1, got: u.grid().dim() });
    }
    let left = fractional_derivative(&galerkin_multiply(u, f)?, r)?;
    let right = galerkin_multiply(&fractional_derivative(u, r)?, f)?;
    Ok(left.sub(&right))
}

/// Empirical `H^s → H^{s-r+1}` operator norm of `u ↦ [D^r, f]u` on the
/// grid's mode space: the largest singular value of the commutator matrix
/// conjugated by the Sobolev weights.
pub fn commutator_operator_norm(grid: &GridSpec, r: f64, s: f64, f: &CutoffWindow) -> Result<f64> {
    if grid.dim() != 1 {
        return Err(Error::Dimension { expected: 1, got: grid.dim() });
    }
    grid.check_same(&f.grid())?;
    let len = grid.len();
    let out_s = s - r + 1.0;
    let mut m = DMatrix::<Complex64>::zeros(len, len);
    for k in 0..len {
        let mut e = FourierState::zeros(*grid);
        e.coeffs_mut()[k] = Complex64::new(sobolev_weight(grid, k, -0.5 * s), 0.0);
        let col = commutator_apply(&e, r, f)?;
        for (j, c) in col.coeffs().iter().enumerate() {
            m[(j, k)] = c * sobolev_weight(grid, j, 0.5 * out_s);
        }
    }
    Ok(m.singular_values().max())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::window::{make_window, Interval, WindowKind};
    use std::f64::consts::PI;

    fn g1(n: usize) -> GridSpec {
        GridSpec::new(1, n).unwrap()
    }

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn propagator_single_mode_phase() {
        let u = FourierState::plane_wave(g1(16), 1, 0, one()).unwrap();
        let t = 0.37;
        let v = free_propagate(&u, t);
        let expect = Complex64::from_polar(1.0, -4.0 * PI * PI * t);
        assert!((v.mode(1, 0) - expect).norm() < 1e-14);
    }

    #[test]
    fn propagator_identity_and_inverse() {
        let u = FourierState::from_modes(g1(32), |k, _| Complex64::new(1.0 / (1 + k * k) as f64, k as f64 * 0.1));
        assert_eq!(free_propagate(&u, 0.0), u);
        let back = free_propagate(&free_propagate(&u, 1.3), -1.3);
        assert!(back.sub(&u).l2_norm() < 1e-14 * u.l2_norm());
    }

    #[test]
    fn drop_nyquist_option() {
        let u = FourierState::from_modes(g1(8), |_, _| one());
        let v = free_propagate_with(&u, 0.1, PropagatorOptions { drop_nyquist: true });
        assert_eq!(v.mode(-4, 0), Complex64::new(0.0, 0.0));
        assert!((v.mode(3, 0).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fractional_derivative_cases() {
        let g = g1(16);
        let c = FourierState::plane_wave(g, 0, 0, Complex64::new(2.5, -1.0)).unwrap();
        assert_eq!(fractional_derivative(&c, 3.7).unwrap(), c);
        let e1 = FourierState::plane_wave(g, 1, 0, one()).unwrap();
        assert_eq!(fractional_derivative(&e1, -1.0).unwrap(), e1);
        let em1 = FourierState::plane_wave(g, -1, 0, one()).unwrap();
        assert_eq!(fractional_derivative(&em1, 2.0).unwrap(), em1.scale(-one()));
        let two_d = FourierState::zeros(GridSpec::new(2, 8).unwrap());
        assert!(fractional_derivative(&two_d, 1.0).is_err());
    }

    #[test]
    fn sobolev_norm_cases() {
        let e1 = FourierState::plane_wave(g1(16), 1, 0, one()).unwrap();
        assert!((sobolev_norm(&e1, 0.0) - 1.0).abs() < 1e-15);
        assert!((sobolev_norm(&e1, 1.0) - (1.0 + 4.0 * PI * PI).sqrt()).abs() < 1e-13);
        assert_eq!(sobolev_norm(&FourierState::zeros(g1(16)), 2.0), 0.0);
    }

    #[test]
    fn multiply_window_cases() {
        let g = g1(32);
        let u = FourierState::from_modes(g, |k, _| Complex64::new((-(k * k) as f64 / 8.0).exp(), 0.0));
        let full = CutoffWindow::full(g);
        assert!(multiply_window(&u, &full).unwrap().sub(&u).l2_norm() < 1e-14);
        let w = make_window(g, &[Interval(0.1, 0.4)], 0.05, WindowKind::Smooth).unwrap();
        let wu = multiply_window(&u, &w).unwrap();
        assert!(wu.l2_norm() <= w.max() * u.l2_norm() + 1e-14);
        // physical support disjoint from the window
        let bump = FourierState::from_fn(g, |x, _| {
            Complex64::new(if (0.6..0.9).contains(&x) { 1.0 } else { 0.0 }, 0.0)
        });
        assert!(multiply_window(&bump, &w).unwrap().l2_norm() < 1e-15);
        let wrong = CutoffWindow::full(g1(16));
        assert!(multiply_window(&u, &wrong).is_err());
    }

    #[test]
    fn commutator_with_constant_vanishes() {
        let g = g1(32);
        let u = FourierState::from_modes(g, |k, _| Complex64::new(1.0 / (1.0 + (k * k) as f64), k as f64));
        let c = commutator_apply(&u, 1.5, &CutoffWindow::full(g)).unwrap();
        assert!(c.l2_norm() < 1e-12 * u.l2_norm());
    }

    #[test]
    fn commutator_zero_order_matches_definition() {
        let g = g1(32);
        let f = make_window(g, &[Interval(0.2, 0.6)], 0.1, WindowKind::Smooth).unwrap();
        let u = FourierState::from_modes(g, |k, _| Complex64::new((k as f64 * 0.3).cos(), 0.2));
        let direct = {
            let d0 = |v: &FourierState| fractional_derivative(v, 0.0).unwrap();
            d0(&galerkin_multiply(&u, &f).unwrap()).sub(&galerkin_multiply(&d0(&u), &f).unwrap())
        };
        let c = commutator_apply(&u, 0.0, &f).unwrap();
        assert!(c.sub(&direct).l2_norm() < 1e-14);
    }

    #[test]
    fn galerkin_product_of_bandlimited_is_exact() {
        // f = 1 on the whole torus means the product reproduces u exactly.
        let g = g1(16);
        let u = FourierState::from_modes(g, |k, _| Complex64::new(k as f64, 1.0));
        let p = galerkin_multiply(&u, &CutoffWindow::full(g)).unwrap();
        assert!(p.sub(&u).l2_norm() < 1e-13);
    }
}
