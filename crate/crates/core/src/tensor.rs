//! Observability on strips `ω₁ × T ⊂ T²` from observability of `ω₁ ⊂ T`.
//!
//! Writing `u₀(x₁,x₂) = Σ_k c_k(x₁) e^{2πikx₂}`, the second-axis phases are
//! unimodular and the strip window does not depend on `x₂`, so
//! `∫∥χ e^{itΔ}u₀∥² = Σ_k ∫∥χ₁ e^{itΔ₁}c_k∥²`. The 2D Gramian is therefore
//! block diagonal with one 1D-sized block per second-axis mode.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hum::{self, difference_index, multiplier_coeffs, phase_integral, GramianSpec, DENSE_LIMIT};
use crate::linalg::{self, CMatrix};
use crate::spectral::{make_window, CutoffWindow, FourierState, GridSpec};

/// The product window `ω₁ × T`.
#[derive(Debug, Clone, PartialEq)]
pub struct StripWindow {
    base: CutoffWindow,
}

impl StripWindow {
    pub fn new(base: CutoffWindow) -> Result<Self> {
        if base.dim != 1 {
            return Err(Error::Dimension { expected: 1, got: base.dim });
        }
        Ok(Self { base })
    }

    pub fn base(&self) -> &CutoffWindow {
        &self.base
    }

    /// 2D samples with `χ(x₁, x₂) = χ₁(x₁)`.
    pub fn to_window(&self) -> CutoffWindow {
        let grid = GridSpec::new(2, self.base.n).expect("base grid valid");
        if self.base.omega.is_empty() {
            return CutoffWindow::empty(grid);
        }
        let mut w = make_window(grid, &self.base.omega, self.base.transition_width, self.base.kind)
            .expect("base window parameters already validated");
        if w.profile != self.base.profile {
            w = w.with_profile(self.base.profile);
        }
        w
    }

    /// Recovers the strip structure of a 2D window, if it has one.
    pub fn from_window(w: &CutoffWindow) -> Result<Self> {
        if w.dim != 2 {
            return Err(Error::Dimension { expected: 2, got: w.dim });
        }
        let n = w.n;
        for i in 0..n {
            let row = &w.samples[i * n..(i + 1) * n];
            if row.iter().any(|&v| v != row[0]) {
                return Err(Error::InvalidWindow("window depends on the second coordinate".into()));
            }
        }
        let grid = GridSpec::new(1, n)?;
        let mut base = CutoffWindow::empty(grid);
        base.kind = w.kind;
        base.omega = w.omega.clone();
        base.transition_width = w.transition_width;
        base.profile = w.profile;
        base.samples = (0..n).map(|i| w.samples[i * n]).collect();
        Ok(Self { base })
    }
}

/// Second-axis mode slice `c_k` of a 2D state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSlice {
    pub k: i64,
    pub state: FourierState,
}

/// `u(x₁,x₂) = Σ_k c_k(x₁) e^{2πikx₂}`, slices in ascending `k`.
pub fn decompose_modes(u2d: &FourierState) -> Result<Vec<ModeSlice>> {
    let grid = *u2d.grid();
    if grid.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: grid.dim() });
    }
    let g1 = GridSpec::new(1, grid.n())?;
    let half = (grid.n() / 2) as i64;
    Ok((-half..half)
        .map(|k| ModeSlice {
            k,
            state: FourierState::from_modes(g1, |k1, _| u2d.mode(k1, k)),
        })
        .collect())
}

/// Inverse of [`decompose_modes`].
pub fn compose_modes(slices: &[ModeSlice]) -> Result<FourierState> {
    let first = slices
        .first()
        .ok_or_else(|| Error::InvalidParameter("no slices".into()))?;
    let grid = GridSpec::new(2, first.state.grid().n())?;
    let mut u = FourierState::zeros(grid);
    for s in slices {
        for k1 in -(grid.n() as i64 / 2)..(grid.n() as i64 / 2) {
            if let Some(i) = grid.index(k1, s.k) {
                u.coeffs_mut()[i] = s.state.mode(k1, 0);
            }
        }
    }
    Ok(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TensorReport {
    #[serde(rename = "C_1d")]
    pub c_1d: f64,
    #[serde(rename = "C_2d")]
    pub c_2d: f64,
    pub relative_gap: f64,
    #[serde(rename = "N_per_axis")]
    pub n_per_axis: usize,
    #[serde(rename = "T")]
    pub horizon: f64,
    /// Largest off-block entry of the assembled 2D Gramian.
    pub off_block: f64,
    /// Smallest eigenvalue of the full (unblocked) 2D Gramian when it is
    /// small enough to diagonalize directly.
    pub lambda_min_full: Option<f64>,
}

/// Block of the 2D Gramian for second-axis mode `k2`, assembled from the
/// 2D window's Fourier coefficients.
fn strip_block(grid: &GridSpec, coeffs: &[Complex64], horizon: f64, k2: i64) -> CMatrix {
    let n = grid.n();
    let half = (n / 2) as i64;
    let idx: Vec<usize> = (-half..half).map(|k1| grid.index(k1, k2).expect("resolved")).collect();
    CMatrix::from_fn(n, n, |a, b| {
        let (p, q) = (idx[a], idx[b]);
        coeffs[difference_index(grid, p, q)]
            * phase_integral(grid.laplacian_symbol(p) - grid.laplacian_symbol(q), 0.0, horizon)
    })
}

/// Observability constants of the strip (2D) and of its base (1D).
pub fn strip_observability_constant(spec_2d: &GramianSpec) -> Result<TensorReport> {
    spec_2d.validate()?;
    let strip = StripWindow::from_window(&spec_2d.window)?;
    let grid = spec_2d.grid();
    let n = grid.n();
    let half = (n / 2) as i64;
    let coeffs = multiplier_coeffs(&grid, &spec_2d.control_multiplier());

    let mut off_block: f64 = 0.0;
    for (i, c) in coeffs.iter().enumerate() {
        if grid.mode(i).1 != 0 {
            off_block = off_block.max(c.norm() * spec_2d.horizon);
        }
    }
    let mut lo_2d = f64::INFINITY;
    for k2 in -half..half {
        let block = strip_block(&grid, &coeffs, spec_2d.horizon, k2);
        lo_2d = lo_2d.min(linalg::hermitian_eigenvalues(&block)[0]);
    }
    let lambda_min_full = if grid.len() <= DENSE_LIMIT {
        Some(linalg::hermitian_eigenvalues(&hum::assemble_gramian(spec_2d))[0])
    } else {
        None
    };
    let c_2d = hum::report_from_spectrum(spec_2d, lo_2d, f64::NAN, hum::GramianMethod::Dense)?.c_t;

    let spec_1d = GramianSpec::new(spec_2d.horizon, strip.base().clone())?;
    let c_1d = hum::observability_constant(&spec_1d)?.c_t;
    Ok(TensorReport {
        c_1d,
        c_2d,
        relative_gap: (c_2d - c_1d).abs() / c_1d,
        n_per_axis: n,
        horizon: spec_2d.horizon,
        off_block,
        lambda_min_full,
    })
}
