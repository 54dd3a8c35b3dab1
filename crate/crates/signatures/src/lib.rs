//! One-way state generator experiments and the one-time signature scheme
//! with quantum public keys.
//!
//! The signature scheme is the quantum-public-key analogue of a two-slot
//! hash-based one-time scheme: the secret key is a pair of generator keys,
//! the public key is the pair of generated states (re-queryable on demand),
//! a signature on bit `m` is the raw key `sk_m`, and verification measures
//! `pk_m` against `|phi_sigma><phi_sigma|`. Its one-time security reduces to
//! the one-wayness of the generator through an explicit wrapper adversary
//! whose acceptance probability is exactly half the forgery probability;
//! both sides of that identity are measured here.

mod adversary;
mod game;
mod owsg;
mod scheme;

pub use adversary::AdversaryKind;
pub use game::{one_time_security_game, reduction_experiment, OneTimeGameReport, ReductionReport};
pub use owsg::{haar_baseline, haar_challenge_experiment, owsg_experiment, McEstimate, OwsgConfig};
pub use scheme::{keygen, public_key, sign, verify, verify_sampled, PublicKey, SignatureKeys};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    State(#[from] qstate::Error),

    #[error(transparent)]
    Generator(#[from] generators::Error),

    #[error("adversary output has {got} bits, expected {want}")]
    BadGuessLength { got: usize, want: usize },

    #[error("unknown adversary `{0}`")]
    UnknownAdversary(String),

    #[error("adversary needs {need} public-key copies per slot, cap is {cap}")]
    QueryCap { need: usize, cap: usize },

    #[error("invalid experiment parameters: {0}")]
    InvalidParams(String),

    #[error("invalid message bit {0}")]
    BadMessage(u8),
}

pub type Result<T> = std::result::Result<T, Error>;
