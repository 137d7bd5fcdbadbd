//! Quantum phase of one and two qubits.
//!
//! * [`qubit_phase`]: ladder operators, the unitary phase exponential `E` and
//!   the Hermitian phase operator with eigenphases `±π/2`.
//! * [`povm`]: the covariant phase POVMs `Δγ(φ)`, their distributions,
//!   dispersion, three-point reconstruction and the Q-function marginal.
//! * [`twoqubit`]: phase sum and difference operators, the parity-labelled
//!   sum/difference basis and the casting of distributions and POVMs.
//! * [`entangle`]: the dispersion-based entanglement degree `𝔻`, Schmidt
//!   decomposition, Bell states and a concurrence oracle.
//!
//! Dense linear algebra for dimensions 2 and 4 lives in [`linalg`]; states and
//! their validation in [`state`].

pub mod entangle;
pub mod error;
pub mod io;
pub mod linalg;
pub mod povm;
pub mod quadrature;
pub mod qubit_phase;
pub mod sampling;
pub mod state;
pub mod tolerance;
pub mod twoqubit;
pub mod validation;

pub use entangle::{entanglement_degree, BellState, EntanglementReport, Sign};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use povm::{PhaseFourier, PhasePovm};
pub use state::{validate_state, QuantumState};
pub use tolerance::Tolerances;
