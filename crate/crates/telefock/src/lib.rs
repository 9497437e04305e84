//! Simulation of continuous-variable teleportation of single-photon
//! polarization qubits in truncated Fock space.
//!
//! A polarization qubit `c_H |1;0> + c_V |0;1>` sent through two parallel
//! continuous-variable teleportation channels picks up extra unpolarized
//! photons whenever the shared entanglement (squeezing parameter `q < 1`)
//! is imperfect. The crate reproduces the full output statistics of that
//! process along two independent routes:
//!
//! * [`closed_form`] — the analytic photon-number distributions, transfer
//!   fidelities, accidental-cloning fidelities and their no-cloning bounds;
//! * [`quadrature`] — the same quantities integrated numerically over all
//!   measurement outcomes `beta` from the conditional output states built
//!   by [`teleport`] on the [`fock`] primitives.
//!
//! The two routes agree to quadrature precision; the `acceptance` test
//! target pins that agreement quantity by quantity.

pub mod closed_form;
pub mod fock;
pub mod quadrature;
pub mod teleport;

pub use fock::{
    displaced_fock_amplitude, displacement_operator, DenseOperator, FockError, FockVector,
    TruncationConfig, TwoModeState,
};
pub use quadrature::{
    numeric_fidelities, numeric_joint_distribution, numeric_single_mode_distribution,
    DistributionResult, FidelitySummary, QuadratureGrid, StatsError,
};
pub use teleport::{
    conditional_output, measurement_density, single_mode_transfer, transfer_applied_to_level,
    MeasurementOutcome, PolarizationQubit, SqueezingParameter, TeleportError,
};
