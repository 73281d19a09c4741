//! Numerical substrate: grids, Fourier states, the free Schrödinger
//! propagator, `D^r`, Sobolev norms, cutoff windows and commutators.

pub mod fft;
mod grid;
mod ops;
mod state;
mod window;

pub use grid::{make_grid, GridSpec};
pub use ops::{
    commutator_apply, commutator_operator_norm, fractional_derivative, fractional_symbol, free_propagate, free_propagate_with,
    galerkin_multiply, multiply_samples, multiply_window, sobolev_norm, sobolev_weight, PropagatorOptions,
};
pub use state::FourierState;
pub use window::{make_window, CutoffWindow, Interval, Profile, WindowKind};
