//! Key generation, signing, and verification.

use rand::Rng;

use generators::{generate, GeneratorOutput, GeneratorSpec, Key};

use crate::{Error, Result};

/// The classical secret key: one generator key per message bit. Public keys
/// are quantum and therefore regenerated, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignatureKeys {
    pub sk0: Key,
    pub sk1: Key,
}

impl SignatureKeys {
    pub fn slot(&self, m: u8) -> Key {
        if m == 0 {
            self.sk0
        } else {
            self.sk1
        }
    }
}

/// One regenerated quantum public key pair.
#[derive(Debug, Clone)]
pub struct PublicKey {
    pub pk0: GeneratorOutput,
    pub pk1: GeneratorOutput,
}

impl PublicKey {
    pub fn slot(&self, m: u8) -> &GeneratorOutput {
        if m == 0 {
            &self.pk0
        } else {
            &self.pk1
        }
    }
}

/// Draw two independent uniform keys.
pub fn keygen<R: Rng>(spec: &GeneratorSpec, rng: &mut R) -> SignatureKeys {
    SignatureKeys {
        sk0: Key::uniform(spec.n, rng),
        sk1: Key::uniform(spec.n, rng),
    }
}

/// Regenerate the public key pair from the secret key (`Gen_2`).
pub fn public_key(spec: &GeneratorSpec, keys: &SignatureKeys) -> Result<PublicKey> {
    Ok(PublicKey {
        pk0: generate(spec, &keys.sk0)?,
        pk1: generate(spec, &keys.sk1)?,
    })
}

/// Sign a one-bit message: the signature is the raw slot key.
pub fn sign(keys: &SignatureKeys, msg: u8) -> Result<Key> {
    if msg > 1 {
        return Err(Error::BadMessage(msg));
    }
    Ok(keys.slot(msg))
}

/// Exact acceptance probability of the verification measurement
/// `{|phi_sigma><phi_sigma|, I - ...}` on `pk_msg`.
pub fn verify(spec: &GeneratorSpec, pk: &PublicKey, msg: u8, sig: &Key) -> Result<f64> {
    if msg > 1 {
        return Err(Error::BadMessage(msg));
    }
    if sig.len() != spec.n {
        return Err(Error::BadGuessLength {
            got: sig.len(),
            want: spec.n,
        });
    }
    let reference = generate(spec, sig)?.output;
    Ok(reference.overlap(&pk.slot(msg).output)?)
}

/// Sampled verification: one Bernoulli draw at the exact acceptance
/// probability, for end-to-end runs.
pub fn verify_sampled<R: Rng>(
    spec: &GeneratorSpec,
    pk: &PublicKey,
    msg: u8,
    sig: &Key,
    rng: &mut R,
) -> Result<bool> {
    let p = verify(spec, pk, msg, sig)?;
    Ok(rng.gen::<f64>() < p)
}
