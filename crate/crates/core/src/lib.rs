//! Quantum and classical correlations of Bell-diagonal two-qubit states under
//! local bit-flip, bit-phase-flip and phase-flip noise.
//!
//! States are described by their correlation vector `(c1, c2, c3)`
//! ([`CorrelationVector`]). The [`correlations`] module holds closed forms for
//! mutual information, classical correlations, discord, relative entropy of
//! entanglement and dissonance; [`channels`] evolves states analytically and
//! numerically; [`measurement`] recomputes classical correlations by an
//! explicit search over projective measurements.

pub mod channels;
pub mod correlations;
pub mod error;
pub mod figures;
pub mod matrix;
pub mod measurement;
pub mod state;
pub mod trajectory;
pub mod validation;

pub use channels::{
    class_params, class_state, evolve, integrate, lindblad_rhs, separable_class_state, ChannelKind,
    ChannelSpec, Sign, TransitionClassParams,
};
pub use correlations::{
    classical_correlations, closest_classical, discord, dissonance, entanglement_re, entropy,
    full_report, mutual_information, mutual_information_split, relative_entropy, sudden_death_time,
    transition_time, ClassicalStateDescriptor, CorrelationReport,
};
pub use error::{Error, Result};
pub use measurement::{
    classical_correlations_numeric, conditional_entropy, discord_numeric, MeasurementBasis,
    OptimizationResult,
};
pub use state::{
    bell_spectrum, make_state, sorted_spectrum, to_density_matrix, BellLabel, BellSpectrum,
    CorrelationVector, DensityMatrix,
};
pub use trajectory::{
    detect_transition, run_trajectory, Trajectory, TrajectoryConfig, TrajectoryRecord,
};
