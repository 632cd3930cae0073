//! Free quantum motion on the constant-curvature 3-spaces H3 and S3.
//!
//! The crate builds the chart atlas of both spaces, closed-form plane waves
//! and separated solutions of the Schrodinger equation, the differential
//! operators acting on them, and a verification harness that checks every
//! analytic claim numerically. Units are `hbar = M = 1` with unit curvature
//! radius; the Hamiltonian is `H = -(1/2) Laplace-Beltrami`.

pub mod diff;
pub mod error;
pub mod geometry;
pub mod operators;
pub mod specfun;
pub mod verify;
pub mod waves;

pub use error::{Error, Result};
pub use geometry::{ChartId, ChartPoint, Space, VariableSet};
pub use num_complex::Complex64;
pub use waves::{Branch, Family, Orientation, WaveFunction};
