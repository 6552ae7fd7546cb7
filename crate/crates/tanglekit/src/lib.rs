//! Entanglement tangles, unitary polynomial invariants, and monogamy
//! constraint verification for N-qubit pure states and their two/three-qubit
//! marginals.
//!
//! The crate is organized in four layers:
//!
//! * [`qstate`] — dense pure states, density-matrix marginals, basis-index
//!   arithmetic, named state families, Haar sampling, and state file I/O;
//! * [`invariants`] — spin-flip spectra, concurrence/two-tangle, the
//!   characteristic-polynomial coefficients `n4..n16` (spectral and
//!   amplitude-invariant routes), one-tangle, and the pure three-tangle;
//! * [`convexroof`] — best-found convex-roof three-tangle of three-qubit
//!   mixed marginals by randomized local search over ensemble decompositions;
//! * [`monogamy`] — the constraint checks (CKW, Osborne–Verstraete, sum
//!   rules, residual inequalities) and the structured per-state report.

pub mod convexroof;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod monogamy;
pub mod qstate;

pub use error::{Error, Result};
pub use qstate::{
    derive_seed, haar_random, make_state, named_state, read_state_file, write_state_file,
    DensityMatrix, MultiIndex, PureState, StateFamily,
};
