use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::solver::{NlsParams, SplitStepper};
use crate::error::{Error, Result};
use crate::hum::{assemble_gramian_on, hum_rhs, Gramian, GramianSpec};
use crate::linalg::CMatrix;
use crate::spectral::{free_propagate, FourierState, GridSpec};

/// Split-step integrator for the controlled equation
/// `i∂_t u + Δu = σ|u|²u + χ² e^{i(t - t₀)Δ}Φ₀`.
///
/// The linear half-steps are exact including the source: over `[a, a + τ]`,
/// `u ↦ e^{iτΔ}(u - i G_τ e^{iaΔ}Φ₀)` with `G_τ` the Gramian of `[0, τ]`.
/// Steps may be negative (backward integration); forward and backward
/// steps are exact inverses of each other when dealiasing is off.
pub(crate) struct ForcedStepper {
    split: SplitStepper,
    grid: GridSpec,
    h: f64,
    g_half: CMatrix,
    phi0: FourierState,
    active: bool,
}

impl ForcedStepper {
    pub(crate) fn new(spec: &GramianSpec, params: &NlsParams, phi0: &FourierState, h: f64) -> Self {
        let grid = spec.grid();
        let active = phi0.norm_sqr() > 0.0;
        let g_half = if active {
            assemble_gramian_on(&spec.window, 0.0, 0.5 * h)
        } else {
            CMatrix::zeros(0, 0)
        };
        Self {
            split: SplitStepper::new(grid, params, h),
            grid,
            h,
            g_half,
            phi0: phi0.clone(),
            active,
        }
    }

    fn source_half(&self, coeffs: &mut [Complex64], local_t: f64) {
        if self.active {
            let psi = free_propagate(&self.phi0, local_t);
            let g = &self.g_half * nalgebra::DVector::from_column_slice(psi.coeffs());
            coeffs
                .iter_mut()
                .zip(g.iter())
                .for_each(|(c, gi)| *c -= Complex64::i() * gi);
        }
        self.split.apply_linear_half(coeffs);
    }

    /// Advances from local time `t` to `t + h`.
    pub(crate) fn step(&mut self, coeffs: &mut [Complex64], t: f64) {
        debug_assert_eq!(coeffs.len(), self.grid.len());
        self.source_half(coeffs, t);
        self.split.apply_nonlinear(coeffs);
        self.source_half(coeffs, t + 0.5 * self.h);
    }
}

fn control_params(params: &NlsParams) -> Result<NlsParams> {
    if params.damping.is_some() {
        return Err(Error::InvalidParameter("controlled phases are undamped; remove the damping window".into()));
    }
    Ok(params.clone())
}

/// Integrates the controlled equation forward over `[0, T]` from `u0`.
pub fn forced_forward(u0: &FourierState, spec: &GramianSpec, params: &NlsParams, phi0: &FourierState) -> Result<FourierState> {
    let grid = spec.grid();
    u0.check_grid(&grid)?;
    phi0.check_grid(&grid)?;
    params.validate(&grid)?;
    let params = control_params(params)?;
    let steps = params.steps_for(spec.horizon);
    let h = spec.horizon / steps as f64;
    let mut stepper = ForcedStepper::new(spec, &params, phi0, h);
    let mut u = u0.clone();
    for j in 0..steps {
        stepper.step(u.coeffs_mut(), j as f64 * h);
    }
    Ok(u)
}

/// Integrates the controlled equation backward from `u(T) = uT` to `t = 0`.
pub fn forced_backward(u_t: &FourierState, spec: &GramianSpec, params: &NlsParams, phi0: &FourierState) -> Result<FourierState> {
    let grid = spec.grid();
    u_t.check_grid(&grid)?;
    phi0.check_grid(&grid)?;
    params.validate(&grid)?;
    let params = control_params(params)?;
    let steps = params.steps_for(spec.horizon);
    let h = spec.horizon / steps as f64;
    let mut stepper = ForcedStepper::new(spec, &params, phi0, -h);
    let mut u = u_t.clone();
    for j in (1..=steps).rev() {
        stepper.step(u.coeffs_mut(), j as f64 * h);
    }
    Ok(u)
}

/// One Picard iterate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PicardStep {
    pub iteration: usize,
    /// `∥Φ^{j+1} - Φ^j∥`.
    pub update_norm: f64,
    /// `∥Φ^{j+1} - Φ^j∥ / ∥Φ^j - Φ^{j-1}∥`, omitted once the previous update
    /// is at roundoff level.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalControl {
    pub phi0: FourierState,
    /// Forward-integrated `∥u(T)∥`.
    pub residual: f64,
    pub iterations: usize,
    pub history: Vec<PicardStep>,
    /// Largest recorded contraction ratio.
    pub max_ratio: Option<f64>,
}

/// Relative size below which iterate differences are treated as roundoff
/// and excluded from contraction ratios.
const RATIO_FLOOR: f64 = 1e-11;
/// Certification slack: controlled `∥u(T)∥ ≤ CERTIFY_FACTOR·tol·∥u₀∥`.
pub const CERTIFY_FACTOR: f64 = 10.0;
/// Consecutive expanding updates treated as divergence.
const DIVERGENCE_STREAK: usize = 3;

/// Fixed point `Φ₀ = S⁻¹(-i u₀) - S⁻¹(-i KΦ₀)` with `KΦ₀ = v(0)` the
/// Duhamel contribution of the nonlinearity.
///
/// Each iterate integrates the controlled equation backward from `u(T) = 0`
/// with the current `Φ₀`; the nonlinear contribution is what remains of
/// `u(0)` after removing the linear part `iSΦ₀`. Convergence is
/// `∥Φ^{j+1} - Φ^j∥ < tol`, then the control is certified by integrating
/// forward from `u₀`.
pub fn local_control_nls(
    u0: &FourierState,
    spec: &GramianSpec,
    params: &NlsParams,
    tol: f64,
    max_iter: usize,
) -> Result<LocalControl> {
    let grid = spec.grid();
    u0.check_grid(&grid)?;
    spec.validate()?;
    params.validate(&grid)?;
    control_params(params)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be positive".into()));
    }
    let gramian = Gramian::new(spec)?;
    let cg_tol = 1e-14;
    let cg_iter = 10 * grid.len();
    let zero = FourierState::zeros(grid);

    let mut phi = zero.clone();
    let mut history: Vec<PicardStep> = Vec::new();
    let mut prev_update: Option<f64> = None;
    let mut expanding = 0;
    for iteration in 1..=max_iter {
        let u_back = forced_backward(&zero, spec, params, &phi)?;
        let linear = gramian.apply(&phi)?.scale(Complex64::i());
        let nonlinear = u_back.sub(&linear);
        let (next, _) = gramian.solve(&hum_rhs(&u0.sub(&nonlinear)), cg_tol, cg_iter)?;
        let update = next.sub(&phi).l2_norm();
        if !update.is_finite() {
            return Err(Error::DataTooLarge { ratio: f64::INFINITY });
        }
        let scale = next.l2_norm().max(phi.l2_norm());
        let ratio = prev_update.filter(|&p| p > RATIO_FLOOR * scale).map(|p| update / p);
        history.push(PicardStep { iteration, update_norm: update, ratio });
        phi = next;
        if update < tol {
            let residual = forced_forward(u0, spec, params, &phi)?.l2_norm();
            let bound = CERTIFY_FACTOR * tol * u0.l2_norm();
            if residual > bound && u0.norm_sqr() > 0.0 {
                return Err(Error::CertificationFailed { residual, bound });
            }
            let max_ratio = history.iter().filter_map(|s| s.ratio).reduce(f64::max);
            return Ok(LocalControl {
                phi0: phi,
                residual,
                iterations: iteration,
                history,
                max_ratio,
            });
        }
        if let Some(r) = ratio {
            expanding = if r > 1.0 { expanding + 1 } else { 0 };
            if expanding >= DIVERGENCE_STREAK {
                return Err(Error::DataTooLarge { ratio: r });
            }
        }
        prev_update = Some(update);
    }
    Err(Error::FixedPointStalled {
        iterations: max_iter,
        ratio: history.iter().rev().find_map(|s| s.ratio).unwrap_or(f64::NAN),
    })
}

/// One probe of [`admissible_amplitude`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeProbe {
    pub amplitude: f64,
    /// Converged, certified, and every recorded ratio below one.
    pub admissible: bool,
    pub max_ratio: Option<f64>,
    pub iterations: usize,
    /// Failure kind when the iteration did not converge.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleAmplitude {
    /// Largest probed `∥u₀∥` along the given direction for which the Picard
    /// iteration contracted, converged and certified.
    pub delta: f64,
    pub probes: Vec<AmplitudeProbe>,
}

/// Empirical radius of the local-control ball along `direction`: doubling
/// from `start` until a probe is not admissible, then `bisections`
/// bisection steps between the last success and the first failure.
pub fn admissible_amplitude(
    direction: &FourierState,
    spec: &GramianSpec,
    params: &NlsParams,
    tol: f64,
    max_iter: usize,
    start: f64,
    bisections: usize,
) -> Result<AdmissibleAmplitude> {
    let norm = direction.l2_norm();
    if norm == 0.0 {
        return Err(Error::InvalidParameter("direction must be non-zero".into()));
    }
    if !(start > 0.0 && start.is_finite()) {
        return Err(Error::InvalidParameter(format!("start amplitude must be positive, got {start}")));
    }
    let unit = direction.scale(Complex64::new(1.0 / norm, 0.0));
    let mut probes = Vec::new();
    let probe = |amp: f64, probes: &mut Vec<AmplitudeProbe>| -> Result<bool> {
        let u0 = unit.scale(Complex64::new(amp, 0.0));
        let p = match local_control_nls(&u0, spec, params, tol, max_iter) {
            Ok(c) => AmplitudeProbe {
                amplitude: amp,
                admissible: c.max_ratio.is_none_or(|r| r < 1.0),
                max_ratio: c.max_ratio,
                iterations: c.iterations,
                failure: None,
            },
            Err(e @ (Error::DataTooLarge { .. } | Error::FixedPointStalled { .. } | Error::CertificationFailed { .. })) => {
                AmplitudeProbe {
                    amplitude: amp,
                    admissible: false,
                    max_ratio: match e {
                        Error::DataTooLarge { ratio } | Error::FixedPointStalled { ratio, .. } => Some(ratio),
                        _ => None,
                    },
                    iterations: max_iter,
                    failure: Some(e.kind().to_string()),
                }
            }
            Err(e) => return Err(e),
        };
        let ok = p.admissible;
        probes.push(p);
        Ok(ok)
    };

    const MAX_DOUBLINGS: usize = 40;
    let mut good = 0.0;
    let mut bad = None;
    let mut amp = start;
    for _ in 0..MAX_DOUBLINGS {
        if probe(amp, &mut probes)? {
            good = amp;
            amp *= 2.0;
        } else {
            bad = Some(amp);
            break;
        }
    }
    let Some(mut hi) = bad else {
        return Ok(AdmissibleAmplitude { delta: good, probes });
    };
    let mut lo = good;
    for _ in 0..bisections {
        let mid = if lo == 0.0 { 0.5 * hi } else { 0.5 * (lo + hi) };
        if probe(mid, &mut probes)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo == 0.0 {
        return Err(Error::DataTooLarge { ratio: f64::NAN });
    }
    Ok(AdmissibleAmplitude { delta: lo, probes })
}
