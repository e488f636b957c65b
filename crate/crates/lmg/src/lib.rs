//! Dissipative Lipkin-Meshkov-Glick dynamics.
//!
//! Exact Lindblad evolution of a collective spin coupled to an Ohmic bath,
//! the corresponding semiclassical flow, the averaged slow-time energy
//! dissipation law, and thermalization diagnostics (Gibbs stationarity,
//! Liouvillian spectral gaps).

extern crate blas_src;

pub mod bath;
pub mod error;
pub mod experiment;
pub mod matrix;
pub mod ode;
pub mod quad;
pub mod semiclassical;
pub mod slowflow;
pub mod special;
pub mod lindblad;
pub mod spin;
pub mod thermal;

pub use error::{LmgError, Result};
