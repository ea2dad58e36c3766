//! Trotter-error analysis for second-quantized electronic Hamiltonians.
//!
//! The pipeline runs FCIDUMP integrals through hermitian term grouping
//! ([`fermion`]) or the Jordan-Wigner map ([`pauli`]), optional orbital
//! rotations ([`orbital`]), ordered first-order Trotter products
//! ([`propagators`]) and exact error measures ([`metrics`]). Everything is
//! dense linear algebra on the full Fock space, so systems are limited to
//! [`linalg::DENSE_LIMIT`] spin orbitals.

pub mod ensembles;
pub mod error;
pub mod evolution;
pub mod fermion;
pub mod integrals;
pub mod linalg;
pub mod metrics;
pub mod orbital;
pub mod ordering;
pub mod pauli;
pub mod propagators;
pub mod terms;

pub use error::{Error, Result};
