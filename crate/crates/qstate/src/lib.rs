//! Numerically exact complex linear algebra for small multi-qubit systems.
//!
//! Everything here works on dense state vectors and density matrices over
//! explicitly dimensioned subsystems, at desk scale (roughly 22 qubits of
//! total dense state, far less for anything that needs an eigendecomposition).
//! The crate provides:
//!
//! - [`PureState`] and [`DensityMatrix`] with validated invariants
//!   (normalization, Hermiticity, positivity, unit trace),
//! - Pauli masks `X^x Z^z` and the exact quantum one-time-pad average,
//! - fidelity (squared convention), trace distance, PSD matrix square roots,
//! - Haar sampling and exact symmetric-subspace moments,
//! - deterministic seed derivation for reproducible Monte-Carlo loops.
//!
//! All operations are pure functions on immutable inputs. Sampling takes an
//! explicit seeded stream, so everything is safe to call from multiple
//! threads and reproducible bit-for-bit under any schedule.
//!
//! # Conventions
//!
//! Subsystem 0 is the leftmost label and the most significant digit of the
//! amplitude index. For qubits this means basis index `i` assigns qubit `j`
//! the bit `(i >> (nq - 1 - j)) & 1`. Pauli masks follow the same layout, and
//! `X^x Z^z` applies `Z` first: `X^x Z^z |i> = (-1)^{i.z} |i XOR x>`.

pub mod density;
pub mod error;
pub mod haar;
pub mod linalg;
pub mod moments;
pub mod pauli;
pub mod pure;
pub mod seed;

mod index;

pub use density::DensityMatrix;
pub use error::{Error, Result};
pub use haar::{ginibre_density, haar_qubit_state, haar_state, random_two_outcome_povm};
pub use linalg::{
    fidelity, mat_sqrt_psd, overlap_trace, swap_test_prob, trace_distance, HermitianObservable,
};
pub use moments::sym_moment;
pub use pauli::{qotp_average, PauliMask};
pub use pure::PureState;
pub use seed::{derive_seed, stream};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Dense complex vector used throughout the crate.
pub type CVector = nalgebra::DVector<C64>;
