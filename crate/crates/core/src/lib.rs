//! Quantum speed limit time of a GHZ-like three-qubit state shared with an
//! observer hovering near a Schwarzschild horizon, with Pauli noise acting on
//! the two asymptotic qubits.
//!
//! The crate is organized bottom-up:
//!
//! - [`qmatrix`]: small dense complex matrices, partial traces, Hermitian eigenvalues
//! - [`spacetime`]: the Hawking-dressed initial state
//! - [`channels`]: Pauli channels as a Kraus sum and as closed-form matrices
//! - [`qslt`]: the Hilbert–Schmidt speed limit ratio
//! - [`entanglement`]: GM concurrence and the optimal initial entanglement
//! - [`cli`]: sweeps, figure reproduction and output formats for the `qslt` binary

// `!(x > 0.0)` is used on purpose so that NaN fails domain checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod cli;
pub mod entanglement;
pub mod error;
pub mod minimize;
pub mod qmatrix;
pub mod qslt;
pub mod quadrature;
pub mod spacetime;

pub use channels::{apply_channel, closed_form, drho_dp, pauli_probs, ChannelKind, ChannelSpec};
pub use entanglement::{
    alpha_from_concurrence, gm_concurrence, optimal_concurrence, Boundary, Branch,
    ConcurrenceMap, OptimalCResult,
};
pub use error::{Error, Result};
pub use qmatrix::{CMatrix, DensityMatrix};
pub use qslt::{closed_form_ratio, qslt_ratio, QsltResult};
pub use spacetime::{physical_state, Scenario};
