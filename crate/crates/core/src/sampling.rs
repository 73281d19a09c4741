//! Seeded random test states.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::spectral::{sobolev_norm, FourierState, GridSpec};

/// The single generator type used for all randomized experiments.
pub type StateRng = ChaCha8Rng;

pub fn rng(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut StateRng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex Gaussian coefficients on every resolved mode, unit L² norm.
pub fn random_state(grid: GridSpec, rng: &mut StateRng) -> FourierState {
    let u = FourierState::from_modes(grid, |_, _| gaussian(rng));
    normalize(u, 1.0)
}

/// Complex Gaussian coefficients on modes with `|k_i| <= band`, zero
/// elsewhere, scaled to the given L² norm. Modes are drawn in a fixed
/// order over `-band..=band`, so the same seed gives the same continuum
/// function on every grid that resolves the band.
pub fn random_smooth_state(grid: GridSpec, band: i64, norm: f64, rng: &mut StateRng) -> FourierState {
    let mut u = FourierState::zeros(grid);
    let second: Vec<i64> = if grid.dim() == 2 { (-band..=band).collect() } else { vec![0] };
    for k1 in -band..=band {
        for &k2 in &second {
            let c = gaussian(rng);
            if let Some(i) = grid.index(k1, k2) {
                u.coeffs_mut()[i] = c;
            }
        }
    }
    normalize(u, norm)
}

/// Rescales to the requested L² norm (zero stays zero).
pub fn normalize(u: FourierState, norm: f64) -> FourierState {
    let n = u.l2_norm();
    if n == 0.0 {
        return u;
    }
    u.scale(Complex64::new(norm / n, 0.0))
}

/// Rescales to unit `H^s` norm.
pub fn normalize_sobolev(u: FourierState, s: f64) -> FourierState {
    let n = sobolev_norm(&u, s);
    if n == 0.0 {
        return u;
    }
    u.scale(Complex64::new(1.0 / n, 0.0))
}
