//! The non-interactive quantum commitment and its analysis toolkit.
//!
//! The sender who commits bit `b` prepares
//!
//! ```text
//! |psi_b> = 2^{-(2m+n)/2} sum_{x,z,k} |x,z,k>_R (X^x Z^z)^b |phi_k>_C
//! ```
//!
//! over a keeper register R and a committed register C, and ships C. The R
//! register is a set of orthonormal classical labels, so the state is kept
//! sparse-in-R: one `(label, amplitude, C-subvector)` triple per label. The
//! dense `2^{2m+n+m}` vector is never materialized.
//!
//! On top of the construction this crate provides the hiding states and
//! their distinguishing advantage, the fidelity chain behind sum-binding,
//! an explicit optimal (purification-rotation) cheating sender, the
//! spectral two-outcome extractor with the real-vs-ideal experiment, the
//! classical-opening wrapper, and the interactive receiver-mask variant.

mod analysis;
mod attack;
mod experiment;
mod state;

pub use analysis::{
    binding_bound, extractor_failure_probability, helstrom_extractor, helstrom_success,
    hiding_states, BindingReport,
};
pub use attack::{sum_binding_sweep, uhlmann_attack, uhlmann_purification, AttackSpec, SweepRow, UhlmannOutcome};
pub use experiment::{
    masked_r_marginal_deviation, paired_opening_trials, real_vs_ideal_experiment, HonestSender,
    MismatchedRevealSender, PairedOpeningReport, RealVsIdealReport, SenderMove, SenderStrategy,
    UhlmannSender,
};
pub use state::{
    build_commit_state, build_commit_state_from_outputs, classical_opening_wrap, honest_commit,
    honest_reveal_verify, interactive_variant_commit, CommitEntry, CommitmentTranscript,
    StructuredCommitState, MAX_DENSE_AMPLITUDES, MAX_R_MARGINAL_QUBITS, MAX_STORED_AMPLITUDES,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    State(#[from] qstate::Error),

    #[error(transparent)]
    Generator(#[from] generators::Error),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("commitment state mismatch: {0}")]
    Shape(String),

    #[error("environment cap: sigma_C rank {rank} exceeds {cap}")]
    EnvironmentCap { rank: usize, cap: usize },

    #[error("invalid bit {0}, expected 0 or 1")]
    BadBit(u8),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_bit(b: u8) -> Result<u8> {
    if b > 1 {
        return Err(Error::BadBit(b));
    }
    Ok(b)
}
