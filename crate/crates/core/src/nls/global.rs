use serde::{Deserialize, Serialize};

use super::control::{forced_forward, local_control_nls, LocalControl};
use super::solver::{fit_decay_rate, DecayRecord, NlsParams, SplitStepper};
use crate::error::{Error, Result};
use crate::hum::GramianSpec;
use crate::spectral::{free_propagate, FourierState};

/// Adaptive stopping rule for damped runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilizeOptions {
    /// Time between decay-rate re-fits.
    pub refit_interval: f64,
    /// The run stops with a stall once `t > cap_factor / γ_est`.
    pub cap_factor: f64,
    /// Fitted rates below this are a stall.
    pub gamma_floor: f64,
    /// Fraction of the record used by each fit.
    pub tail_fraction: f64,
}

impl Default for StabilizeOptions {
    fn default() -> Self {
        Self {
            refit_interval: 10.0,
            cap_factor: 50.0,
            gamma_floor: 1e-4,
            tail_fraction: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stabilization {
    pub final_state: FourierState,
    pub record: DecayRecord,
    /// Time at which `∥u∥ ≤ threshold` first held.
    pub t_reached: f64,
    pub steps: usize,
    /// Last fitted rate (the final fit over the whole run when no re-fit
    /// happened).
    pub gamma_est: Option<f64>,
    /// `cap_factor / γ_est` at the end of the run.
    pub horizon_cap: Option<f64>,
}

/// Runs the damped equation until `∥u∥ ≤ threshold`.
pub fn stabilize(u0: &FourierState, params: &NlsParams, threshold: f64, opts: &StabilizeOptions) -> Result<Stabilization> {
    params.validate(u0.grid())?;
    let window = params
        .damping
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("stabilization needs a damping window".into()))?;
    if params.gain <= 0.0 {
        return Err(Error::InvalidParameter("stabilization needs a positive damping gain".into()));
    }
    if !(threshold >= 0.0) || !(opts.refit_interval > 0.0) || !(opts.cap_factor > 0.0) {
        return Err(Error::InvalidParameter("threshold, refit interval and cap factor must be positive".into()));
    }
    let chi = window.samples.as_slice();
    let h = params.dt;
    let mut stepper = SplitStepper::new(*u0.grid(), params, h);
    let mut u = u0.clone();
    let mut record = DecayRecord::default();
    record.push(0.0, &u, params.sigma, Some(chi));
    let mut gamma_est = None;
    let mut cap: Option<f64> = None;
    let refit_every = (opts.refit_interval / h).round().max(1.0) as usize;
    let mut steps = 0;
    while u.l2_norm() > threshold {
        stepper.step(u.coeffs_mut());
        steps += 1;
        let t = steps as f64 * h;
        record.push(t, &u, params.sigma, Some(chi));
        if steps % refit_every == 0 {
            let fit = fit_decay_rate(&record, opts.tail_fraction)?;
            if fit.gamma < opts.gamma_floor {
                return Err(Error::StabilizationStall {
                    t,
                    reason: format!("fitted decay rate {:.3e} below floor {:.1e}", fit.gamma, opts.gamma_floor),
                });
            }
            gamma_est = Some(fit.gamma);
            cap = Some(opts.cap_factor / fit.gamma);
        }
        if let Some(c) = cap {
            if t > c {
                return Err(Error::StabilizationStall {
                    t,
                    reason: format!("horizon cap {c:.3} reached with ∥u∥ = {:.3e}", u.l2_norm()),
                });
            }
        }
    }
    if gamma_est.is_none() {
        if let Ok(fit) = fit_decay_rate(&record, 1.0) {
            gamma_est = Some(fit.gamma);
            cap = (fit.gamma > 0.0).then(|| opts.cap_factor / fit.gamma);
        }
    }
    record.gamma_fit = gamma_est;
    Ok(Stabilization {
        final_state: u,
        t_reached: steps as f64 * h,
        steps,
        record,
        gamma_est,
        horizon_cap: cap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseKind {
    Damped,
    /// Time reversal of a damped phase (`gain = -1`).
    Antidamped,
    Control,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Leg {
    /// `u₀ → 0`.
    ToZero,
    /// `0 → u₁`.
    FromZero,
}

/// One phase of a control schedule. Control phases apply the source
/// `χ² e^{i(t - t_start)Δ}Φ₀` over `[t_start, t_end]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchedulePhase {
    pub leg: Leg,
    pub phase: usize,
    pub t_start: f64,
    pub t_end: f64,
    #[serde(rename = "type")]
    pub kind: PhaseKind,
    pub phi0: Option<FourierState>,
}

impl SchedulePhase {
    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlSchedule {
    pub phases: Vec<SchedulePhase>,
    /// Forward-verified `∥u(t_mid)∥` at the end of the first leg.
    pub error_to_zero: f64,
    /// Forward-verified `∥u(t_end) - u₁∥` at the end of the second leg.
    pub error_from_zero: f64,
    pub gamma_to_zero: Option<f64>,
    pub gamma_from_zero: Option<f64>,
    /// Decay record of the first leg's damped phase (empty if skipped).
    pub record: DecayRecord,
}

impl ControlSchedule {
    pub fn total_time(&self) -> f64 {
        self.phases.last().map_or(0.0, |p| p.t_end)
    }

    pub fn leg(&self, leg: Leg) -> impl Iterator<Item = &SchedulePhase> {
        self.phases.iter().filter(move |p| p.leg == leg)
    }
}

struct LegPlan {
    damped: Option<Stabilization>,
    control: Option<LocalControl>,
}

#[allow(clippy::too_many_arguments)]
fn drive_to_zero(
    u0: &FourierState,
    spec: &GramianSpec,
    damped: &NlsParams,
    controlled: &NlsParams,
    threshold: f64,
    tol: f64,
    max_iter: usize,
    opts: &StabilizeOptions,
) -> Result<LegPlan> {
    if u0.norm_sqr() == 0.0 {
        return Ok(LegPlan { damped: None, control: None });
    }
    let damped_run = if u0.l2_norm() > threshold {
        Some(stabilize(u0, damped, threshold, opts)?)
    } else {
        None
    };
    let start = damped_run.as_ref().map_or(u0, |s| &s.final_state);
    let control = local_control_nls(start, spec, controlled, tol, max_iter)?;
    Ok(LegPlan { damped: damped_run, control: Some(control) })
}

/// Integrates a sequence of phases starting from `u`.
pub fn run_phases<'a>(
    u: &FourierState,
    phases: impl IntoIterator<Item = &'a SchedulePhase>,
    spec: &GramianSpec,
    params: &NlsParams,
) -> Result<FourierState> {
    let window = params.damping.clone().unwrap_or_else(|| spec.window.clone());
    let mut u = u.clone();
    for p in phases {
        let duration = p.duration();
        if duration <= 0.0 {
            continue;
        }
        u = match p.kind {
            PhaseKind::Damped | PhaseKind::Antidamped => {
                let gain = if p.kind == PhaseKind::Damped { 1.0 } else { -1.0 };
                let pp = params.clone().with_damping(window.clone()).with_gain(gain);
                let steps = pp.steps_for(duration);
                let mut stepper = SplitStepper::new(*u.grid(), &pp, duration / steps as f64);
                for _ in 0..steps {
                    stepper.step(u.coeffs_mut());
                }
                u
            }
            PhaseKind::Control => {
                let phi0 = p
                    .phi0
                    .as_ref()
                    .ok_or_else(|| Error::InvalidParameter(format!("control phase {} has no phi0", p.phase)))?;
                let mut s = spec.clone();
                s.horizon = duration;
                forced_forward(&u, &s, &params.clone().without_damping(), phi0)?
            }
        };
    }
    Ok(u)
}

/// Stabilize-then-control from `u0` to rest, followed by the time reversal
/// of the same strategy applied to `conj(u1)`, which steers rest to `u1`.
///
/// The damped phases use `params` with the damping window of `params` (the
/// control window when absent). Control phases are undamped with horizon
/// `spec.horizon`. The second leg is computed without dealiasing so that
/// its time reversal is exact at the discrete level. Both legs are verified
/// by forward integration.
#[allow(clippy::too_many_arguments)]
pub fn global_control(
    u0: &FourierState,
    u1: &FourierState,
    spec: &GramianSpec,
    params: &NlsParams,
    mass_threshold: f64,
    tol: f64,
    max_iter: usize,
    opts: &StabilizeOptions,
) -> Result<ControlSchedule> {
    let grid = spec.grid();
    u0.check_grid(&grid)?;
    u1.check_grid(&grid)?;
    spec.validate()?;
    params.validate(&grid)?;
    if !(mass_threshold > 0.0) {
        return Err(Error::InvalidParameter(format!("mass_threshold must be positive, got {mass_threshold}")));
    }
    let window = params.damping.clone().unwrap_or_else(|| spec.window.clone());
    let damped = params.clone().with_damping(window).with_gain(1.0);
    let controlled = params.clone().without_damping();

    let leg_a = drive_to_zero(u0, spec, &damped, &controlled, mass_threshold, tol, max_iter, opts)?;
    let exact = |p: &NlsParams| p.clone().with_dealias(false);
    let leg_b = drive_to_zero(
        &u1.conj(),
        spec,
        &exact(&damped),
        &exact(&controlled),
        mass_threshold,
        tol,
        max_iter,
        opts,
    )?;

    let mut phases = Vec::new();
    let mut t = 0.0;
    let mut push = |phases: &mut Vec<SchedulePhase>, leg, kind, duration: f64, phi0: Option<FourierState>| {
        let phase = phases.iter().filter(|p: &&SchedulePhase| p.leg == leg).count() + 1;
        phases.push(SchedulePhase { leg, phase, t_start: t, t_end: t + duration, kind, phi0 });
        t += duration;
    };
    if let Some(s) = &leg_a.damped {
        push(&mut phases, Leg::ToZero, PhaseKind::Damped, s.t_reached, None);
    }
    if let Some(c) = &leg_a.control {
        push(&mut phases, Leg::ToZero, PhaseKind::Control, spec.horizon, Some(c.phi0.clone()));
    }
    // v(t) = conj(w(T - t)): a control phase with Φ₀ becomes one with
    // e^{-iTΔ} conj(Φ₀); a damped phase becomes anti-damped.
    if let Some(c) = &leg_b.control {
        let reversed = free_propagate(&c.phi0.conj(), -spec.horizon);
        push(&mut phases, Leg::FromZero, PhaseKind::Control, spec.horizon, Some(reversed));
    }
    if let Some(s) = &leg_b.damped {
        push(&mut phases, Leg::FromZero, PhaseKind::Antidamped, s.t_reached, None);
    }

    let end_a = run_phases(u0, phases.iter().filter(|p| p.leg == Leg::ToZero), spec, &damped)?;
    let zero = FourierState::zeros(grid);
    let end_b = run_phases(&zero, phases.iter().filter(|p| p.leg == Leg::FromZero), spec, &exact(&damped))?;
    Ok(ControlSchedule {
        phases,
        error_to_zero: end_a.l2_norm(),
        error_from_zero: end_b.sub(u1).l2_norm(),
        gamma_to_zero: leg_a.damped.as_ref().and_then(|s| s.gamma_est),
        gamma_from_zero: leg_b.damped.as_ref().and_then(|s| s.gamma_est),
        record: leg_a.damped.map(|s| s.record).unwrap_or_default(),
    })
}
