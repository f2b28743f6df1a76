//! Pseudospectral simulation and verification toolkit for the low Mach
//! number limit of the quantum Navier–Stokes system.
//!
//! Modules, bottom-up:
//!
//! * [`spectral`]: periodic grids, Fourier multipliers, Helmholtz projections,
//!   Littlewood–Paley blocks and Sobolev/Besov/mixed norms;
//! * [`dispersion`]: the Bogoliubov symbol, its propagator, an oscillatory
//!   integral quadrature oracle, dispersive decay fits and Strichartz probes;
//! * [`qns`]: the scaled quantum Navier–Stokes solver with energy and
//!   BD-entropy bookkeeping;
//! * [`acoustic`]: the acoustic subsystem, its symmetrization and Duhamel
//!   solves;
//! * [`limit`]: the incompressible reference solver, data generators and
//!   ε-sweep convergence studies.
//!
//! Everything numerical is generic over [`scalar::Real`]; the aliases below
//! fix the common `f64` instantiations.

pub mod acoustic;
pub mod dispersion;
pub mod error;
pub mod fit;
pub mod limit;
pub mod qns;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::{Exact, Exponent, Real};

pub type Grid = spectral::SpectralGrid<f64>;
pub type Field = spectral::ScalarField<f64>;
pub type VecField = spectral::VectorField<f64>;
pub type Params = dispersion::DispersionParams<f64>;

pub type GridF32 = spectral::SpectralGrid<f32>;
pub type FieldF32 = spectral::ScalarField<f32>;
