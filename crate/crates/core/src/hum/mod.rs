//! HUM control of the linear Schrödinger equation: the Gramian
//! `S = ∫_0^T e^{-itΔ} χ² e^{itΔ} dt`, its inversion, control synthesis,
//! forward verification and observability constants.

mod control;
mod gramian;
mod regularity;

pub use control::{
    drive_linear, gramian_spectrum_dense, gramian_spectrum_iterative, hum_rhs, observability_constant,
    observed_energy, solve_hum, synthesize_control, ControlSolution, LinearDrive, ObservabilityReport,
    TrajectorySample, LAMBDA_FLOOR,
};
pub(crate) use control::report_from_spectrum;
pub use gramian::{
    apply_gramian, assemble_gramian, assemble_gramian_on, default_node_count, phase_integral, Gramian,
    GramianMethod, GramianSpec, DENSE_LIMIT,
};
pub(crate) use gramian::{difference_index, multiplier_coeffs};
pub use regularity::{hum_regularity_ratio, RegularityStats};
