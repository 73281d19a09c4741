//! Cubic NLS `i∂_t u + Δu + iχ²u = σ|u|²u` on the torus: split-step
//! integration, conserved quantities, decay measurement, fixed-point local
//! control near zero and the global stabilize-then-control strategy.

mod control;
mod global;
mod solver;

pub use control::{
    admissible_amplitude, forced_backward, forced_forward, local_control_nls, AdmissibleAmplitude, AmplitudeProbe,
    LocalControl, PicardStep, CERTIFY_FACTOR,
};
pub use global::{
    global_control, run_phases, stabilize, ControlSchedule, Leg, PhaseKind, SchedulePhase, Stabilization,
    StabilizeOptions,
};
pub use solver::{
    energy, evolve, fit_decay_rate, nls_step, trapezoid, DecayFit, DecayRecord, NlsParams, MIN_FIT_SAMPLES,
};
