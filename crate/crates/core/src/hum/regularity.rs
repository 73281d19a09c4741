use serde::{Deserialize, Serialize};

use super::gramian::{Gramian, GramianSpec};
use crate::error::{Error, Result};
use crate::sampling;
use crate::spectral::{sobolev_norm, WindowKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityStats {
    pub s: f64,
    pub n: usize,
    pub max: f64,
    pub mean: f64,
    pub ratios: Vec<f64>,
}

/// Empirical `H^s → H^s` size of `S^{-1}`: for `n_samples` seeded random
/// band-limited `Ψ₀` with `∥Ψ₀∥_{H^s} = 1`, solves `SΦ₀ = Ψ₀` and reports
/// `∥Φ₀∥_{H^s}`. The data live on modes `|k| <= band`, so the same seed
/// gives the same continuum data at every resolution.
pub fn hum_regularity_ratio(
    spec: &GramianSpec,
    s: f64,
    n_samples: usize,
    band: i64,
    seed: u64,
) -> Result<RegularityStats> {
    if !(s >= 0.0) {
        return Err(Error::InvalidParameter(format!("s must be nonnegative, got {s}")));
    }
    if n_samples == 0 {
        return Err(Error::InvalidParameter("n_samples must be positive".into()));
    }
    let w = &spec.window;
    let constant = w.samples.iter().all(|&v| v == w.samples[0]);
    if w.kind != WindowKind::Smooth && !constant {
        return Err(Error::InvalidWindow("regularity diagnostic needs a smooth window".into()));
    }
    let grid = spec.grid();
    let gramian = Gramian::new(spec)?;
    let mut rng = sampling::rng(seed);
    let mut ratios = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let psi = sampling::random_smooth_state(grid, band, 1.0, &mut rng);
        let psi = sampling::normalize_sobolev(psi, s);
        let (phi, _) = gramian.solve(&psi, 1e-12, 20 * grid.len())?;
        ratios.push(sobolev_norm(&phi, s) / sobolev_norm(&psi, s));
    }
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    Ok(RegularityStats {
        s,
        n: grid.n(),
        max,
        mean,
        ratios,
    })
}
