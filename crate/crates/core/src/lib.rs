//! Spectral laboratory for the control theory of the linear and cubic
//! Schrödinger equation on the torus `T = R/Z` (and strips of `T²`).
//!
//! * [`spectral`]: grids, Fourier states, the free propagator, `D^r`,
//!   Sobolev norms, cutoff windows and commutators.
//! * [`hum`]: the HUM Gramian, exact-control synthesis, closed-loop
//!   verification, observability constants and the `H^s` regularity
//!   diagnostic.
//! * [`resolvent`]: best constants in `∥u∥² <= M∥(Δ-λ)u∥² + m∥χu∥²`,
//!   conversions to and from observability constants, wave-type estimates.
//! * [`tensor`]: observability transfer from `ω₁ ⊂ T` to strips `ω₁ × T`.
//! * [`nls`]: split-step cubic NLS with damping, decay measurement,
//!   fixed-point local control and the stabilize-then-control strategy.
//! * [`cli`]: JSON-configured experiment runner behind the binary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod hum;
pub mod io;
pub mod linalg;
pub mod nls;
pub mod quadrature;
pub mod resolvent;
pub mod sampling;
pub mod spectral;
pub mod tensor;

pub use error::{Error, Result};
