//! Plane-wave families, separated solutions, and the spectral algebra
//! relating the wave exponent `alpha` to the dimensionless energy `epsilon`.
//!
//! Every evaluator omits the time factor `exp(-i eps t)`.

mod plane;
mod sov;
mod spectrum;

pub use plane::{
    alpha_from_epsilon, alternate_representation, dispersion_residual, make_plane_wave, AltRepresentation, Branch,
    Family, Orientation, QPlaneWave, Sign, WaveFunction,
};
pub use sov::{make_sov_solution, reduce_to_plane_wave, SpectralSolution};
pub use spectrum::{
    classify_physical, flat_limit_eigenvalue, quantize_s3, solution_catalog, Asymptotics, CatalogEntry, Classification,
    Growth, Reason, SpectrumFamily, SpectrumRow, Verdict,
};
