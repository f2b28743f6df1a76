//! The acoustic subsystem `(σ_ε, Qm_ε)`: extraction from fluid states, the
//! source `F_ε`, symmetrization, exact linear flow, Duhamel solves and
//! ε-decay studies.

pub mod checks;
pub mod evolve;
pub mod state;
pub mod study;

pub use checks::{linearization_defect, linearization_order};
pub use evolve::{duhamel_solve, evolve_acoustic, linear_evolve, symmetrized_source};
pub use state::{desymmetrize, extract_acoustic, source_f, symmetrize, AcousticState, SymmetrizedState};
pub use study::{acoustic_decay_study, acoustic_sweep, AcousticDecayReport, AcousticStudyConfig, AcousticStudyReport, AcousticTrack, DecayNorms, DecayVerdict};
