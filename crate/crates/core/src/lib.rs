//! Resonances and eigenvalues of 1D Schrödinger operators with compactly
//! supported piecewise-constant potentials.
//!
//! The crate evaluates the Jost solutions and Wronskian by exact entire
//! transfer matrices, locates every zero of the chosen spectral function in
//! a complex window with argument-principle certificates, and checks the
//! closed-form counting bounds, resonance-sum bounds, forbidden-domain and
//! Rouché criteria against the computed spectra.

pub mod bounds;
pub mod error;
pub mod gamma;
pub mod io;
pub mod jost;
pub mod kernels;
pub mod neumann;
pub mod potential;
pub mod quad;
pub mod zeros;

pub use error::{Error, Result};
pub use jost::{evaluate, scattering_matrix, spectral_function, w_star, JostEvaluation};
pub use neumann::{neumann_series, NeumannSeries, NeumannSeriesResult};
pub use potential::{OperatorCase, PiecewisePotential, PotentialConstants};
pub use zeros::{
    count_zeros, counting_function, locate_zeros, Rect, SpectralKind, SpectralPoint,
    SpectrumWindow,
};
