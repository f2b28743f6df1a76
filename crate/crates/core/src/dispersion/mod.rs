//! Bogoliubov dispersion: symbol, propagator, oscillatory integrals,
//! dispersive decay, admissible exponents and Strichartz probes.

pub mod admissible;
pub mod decay;
pub mod oscillatory;
pub mod propagator;
pub mod quadrature;
pub mod strichartz;
pub mod symbol;

pub use admissible::{admissible_dual, is_admissible, AdmissiblePair};
pub use decay::{epsilon_gain, measure_decay, DecayBackend, DecayFit, ShellPacket};
pub use oscillatory::{oscillatory_integral_oracle, rescaled_oscillatory_integral, OscillatoryOracle};
pub use propagator::{duhamel, propagate, u_eps_power};
pub use symbol::{h_bound_check, hessian_det, omega, DispersionParams, HBoundReport, PhaseProfile};
pub use strichartz::{strichartz_probe, strichartz_probe_inhomogeneous, StrichartzReport};
