//! The scaled quantum Navier–Stokes system on a periodic box.

pub mod bohm;
pub mod energy;
pub(crate) mod ops;
pub mod params;
pub mod rhs;
pub mod solver;
pub(crate) mod split;
pub mod state;
pub mod viscous;

pub use bohm::{bohm_forms, BohmForms};
pub use energy::{bd_entropy, internal_energy_density, internal_energy_field, total_energy, EnergyReport};
pub use params::FluidParams;
pub use rhs::{acoustic_operator, qns_rhs, QnsRhs};
pub use solver::{qns_solve, Checkpoint, DtPolicy, QnsRun, Sample, SeriesRow, SolveOptions};
pub use state::FluidState;
pub use viscous::{dissipation, regularized_viscosity, viscous_tensor, DissipationReport, ViscousTensor};
