//! The low Mach number limit: incompressible reference, data generators,
//! exponent tables and ε-sweep studies.

pub mod data;
pub mod exponents;
pub mod ns;

pub use crate::fit::{rate_fit, RateRow, RateTable};
pub use data::{make_data, DataKind, DataProfile, GeneratedData};
pub use exponents::{alpha_exponent, beta_exponent};
pub use ns::{leray_energy_check, leray_for_trajectory, ns_solve, taylor_green, taylor_green_error, LerayReport, NSState, NsTrajectory};
pub mod study;
pub use study::{convergence_study, reference_run, StudyConfig, StudyReport};
