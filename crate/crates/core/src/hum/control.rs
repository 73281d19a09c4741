use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gramian::{Gramian, GramianMethod, GramianSpec};
use crate::error::{Error, Result};
use crate::linalg;
use crate::sampling;
use crate::spectral::{free_propagate, multiply_samples, FourierState};

/// Conditioning floor below which observability is declared void.
pub const LAMBDA_FLOOR: f64 = 1e-14;

/// HUM minimizer and its closed-loop certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ControlSolution {
    pub phi0: FourierState,
    /// `∥u(T)∥_{L²}` after driving the target with the synthesized control.
    pub residual_l2: f64,
    pub iterations: usize,
    pub observability_constant: Option<f64>,
}

/// Right-hand side of the HUM system for steering `target` to zero.
///
/// With the control `g = χ² e^{itΔ}Φ₀` entering as `i∂_t u + Δu = g`, the
/// final state is `u(T) = e^{iTΔ}(u₀ - iSΦ₀)`, so `SΦ₀ = -i u₀`.
pub fn hum_rhs(target: &FourierState) -> FourierState {
    target.scale(Complex64::new(0.0, -1.0))
}

/// Finds `Φ₀` whose control drives `target` to rest at time `T`.
pub fn solve_hum(spec: &GramianSpec, target: &FourierState, tol: f64, max_iter: usize) -> Result<ControlSolution> {
    target.check_grid(&spec.grid())?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    if target.norm_sqr() == 0.0 {
        return Ok(ControlSolution {
            phi0: FourierState::zeros(spec.grid()),
            residual_l2: 0.0,
            iterations: 0,
            observability_constant: None,
        });
    }
    let gramian = Gramian::new(spec)?;
    let (phi0, iterations) = gramian.solve(&hum_rhs(target), tol, max_iter)?;
    let drive = drive_linear(target, spec, &phi0)?;
    Ok(ControlSolution {
        phi0,
        residual_l2: drive.residual,
        iterations,
        observability_constant: None,
    })
}

/// Control source `χ² e^{itΔ} Φ₀` at time `t ∈ [0, T]`.
pub fn synthesize_control(spec: &GramianSpec, phi0: &FourierState, t: f64) -> Result<FourierState> {
    phi0.check_grid(&spec.grid())?;
    if !(0.0..=spec.horizon).contains(&t) {
        return Err(Error::OutsideHorizon { t, horizon: spec.horizon });
    }
    Ok(multiply_samples(&free_propagate(phi0, t), &spec.control_multiplier()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub mass: f64,
    /// `∥χ u(t)∥²`.
    pub observed_mass: f64,
}

#[derive(Debug, Clone)]
pub struct LinearDrive {
    pub trajectory: Vec<TrajectorySample>,
    pub final_state: FourierState,
    pub residual: f64,
}

/// Maximum number of trajectory records kept by [`drive_linear`].
const MAX_RECORDS: usize = 2000;

/// Integrates `i∂_t u + Δu = χ² e^{itΔ}Φ₀` from `u0` over `[0, T]`.
///
/// Between quadrature nodes the free flow is applied exactly; the source
/// enters through the Duhamel sum over the nodes of the spec's rule. States
/// are carried in the interaction picture `a(t) = e^{-itΔ} u(t)`.
pub fn drive_linear(u0: &FourierState, spec: &GramianSpec, phi0: &FourierState) -> Result<LinearDrive> {
    let grid = spec.grid();
    u0.check_grid(&grid)?;
    phi0.check_grid(&grid)?;
    let rule = spec.quadrature()?;
    let chi2 = spec.control_multiplier();
    let chi = &spec.window.samples;

    let record = |t: f64, u: &FourierState| TrajectorySample {
        t,
        mass: u.norm_sqr(),
        observed_mass: multiply_samples(u, chi).norm_sqr(),
    };

    let mut a = u0.clone();
    let mut trajectory = vec![record(0.0, u0)];
    let stride = rule.panels().div_ceil(MAX_RECORDS).max(1);
    let control_active = phi0.norm_sqr() > 0.0;
    for p in 0..rule.panels() {
        if control_active {
            for i in rule.panel_start[p]..rule.panel_start[p + 1] {
                let t = rule.nodes[i];
                let g = multiply_samples(&free_propagate(phi0, t), &chi2);
                let pulled = free_propagate(&g, -t);
                let w = Complex64::new(0.0, -rule.weights[i]);
                a.coeffs_mut()
                    .iter_mut()
                    .zip(pulled.coeffs())
                    .for_each(|(ai, gi)| *ai += w * gi);
            }
        }
        if (p + 1) % stride == 0 || p + 1 == rule.panels() {
            let t = rule.breaks[p + 1];
            trajectory.push(record(t, &free_propagate(&a, t)));
        }
    }
    let final_state = free_propagate(&a, spec.horizon);
    let residual = final_state.l2_norm();
    Ok(LinearDrive {
        trajectory,
        final_state,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservabilityReport {
    #[serde(rename = "C_T")]
    pub c_t: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub n_quad: usize,
    pub method: GramianMethod,
}

/// Smallest and largest eigenvalue of the dense exact Gramian.
pub fn gramian_spectrum_dense(spec: &GramianSpec) -> Result<(f64, f64)> {
    let g = Gramian::with_method(spec, GramianMethod::Dense)?;
    let ev = linalg::hermitian_eigenvalues(g.dense().expect("dense gramian"));
    Ok((ev[0], ev[ev.len() - 1]))
}

/// Extreme eigenvalues of the matrix-free quadrature Gramian by Lanczos.
pub fn gramian_spectrum_iterative(spec: &GramianSpec, max_steps: usize) -> Result<(f64, f64)> {
    let g = Gramian::with_method(spec, GramianMethod::MatrixFree)?;
    let start = sampling::random_state(spec.grid(), &mut sampling::rng(0x5eed));
    linalg::lanczos_extremes(|x| g.apply_coeffs(x), start.coeffs(), max_steps)
}

/// `C_T = 1/λ_min(S)`, the best constant in
/// `∥v₀∥² <= C_T ∫_0^T ∥χ e^{itΔ} v₀∥² dt` at this truncation.
pub fn observability_constant(spec: &GramianSpec) -> Result<ObservabilityReport> {
    let len = spec.grid().len();
    let (method, (lo, hi)) = if len <= super::gramian::DENSE_LIMIT {
        (GramianMethod::Dense, gramian_spectrum_dense(spec)?)
    } else {
        (GramianMethod::MatrixFree, gramian_spectrum_iterative(spec, len)?)
    };
    report_from_spectrum(spec, lo, hi, method)
}

pub(crate) fn report_from_spectrum(spec: &GramianSpec, lo: f64, hi: f64, method: GramianMethod) -> Result<ObservabilityReport> {
    if !(lo >= LAMBDA_FLOOR) {
        return Err(Error::Unobservable {
            lambda_min: lo,
            floor: LAMBDA_FLOOR,
        });
    }
    Ok(ObservabilityReport {
        c_t: 1.0 / lo,
        lambda_min: lo,
        lambda_max: hi,
        n_quad: spec.n_quad,
        method,
    })
}

/// `∫_0^T ∥χ e^{itΔ}φ∥² dt` by the spec's quadrature rule with node count
/// scaled by `refine`.
pub fn observed_energy(spec: &GramianSpec, phi: &FourierState, refine: usize) -> Result<f64> {
    phi.check_grid(&spec.grid())?;
    let rule = crate::quadrature::TimeQuadrature::new(spec.quad_rule, spec.horizon, spec.n_quad * refine.max(1))?;
    Ok(rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| w * multiply_samples(&free_propagate(phi, t), &spec.window.samples).norm_sqr())
        .sum())
}
