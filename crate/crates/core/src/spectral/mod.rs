//! Periodic-box spectral infrastructure.

pub mod field;
pub mod grid;
pub mod io;
pub mod littlewood_paley;
pub mod multiplier;
pub mod norms;
pub mod projection;

pub use field::{ScalarField, Spectrum, VectorField};
pub use grid::SpectralGrid;
pub use littlewood_paley::{lp_lowpass, lp_project, FrequencyShell, ShellProjection};
pub use multiplier::{apply_multiplier, apply_multiplier_vec, divergence, gradient, laplacian, partial, Multiplier};
pub use norms::{besov_norm, mixed_norm, sobolev_norm, time_norm, SpatialNorm};
pub use projection::{helmholtz_p, helmholtz_q};
