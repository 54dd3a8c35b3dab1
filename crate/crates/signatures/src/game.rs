//! The one-time security game and its reduction to one-wayness.
//!
//! Game order is enforced structurally: the adversary sees the public keys
//! (equal copy counts per slot), then commits to a message, and only then
//! receives the slot key. With a one-bit message space a forgery always
//! targets the opposite slot, so the challenger verifies the forged
//! signature against `pk_{m XOR 1}`.
//!
//! The reduction wraps any such adversary into a one-wayness adversary: it
//! plants the challenge state in a random slot `r`, aborts when the
//! adversary asks to have that very slot opened, and otherwise forwards the
//! forgery to the one-wayness challenger. Conditioned on not aborting the
//! simulation is perfect, so `Pr[wrapper wins] = Pr[forgery] / 2` holds as
//! an exact identity; both sides are estimated independently here.

use rayon::prelude::*;

use generators::{generate, GeneratorSpec, Key};
use rand::Rng;

use crate::adversary::{measure_key, AdversaryKind};
use crate::owsg::McEstimate;
use crate::scheme::{keygen, public_key, sign, verify};
use crate::{Error, Result};

/// Outcome of a one-time security run.
#[derive(Debug, Clone)]
pub struct OneTimeGameReport {
    /// Mean exact acceptance of the forged signature on the untouched slot.
    pub forgery_rate: f64,
    pub std_error: f64,
    /// Fraction of trials whose two secret keys collided (`2^-n` expected);
    /// the replay strategy succeeds exactly on these.
    pub collision_fraction: f64,
    pub trials: usize,
}

fn forge(
    spec: &GeneratorSpec,
    adversary: AdversaryKind,
    pk_m1: &qstate::PureState,
    copies: usize,
    sk_m: Key,
    true_key_m1: Key,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<Option<Key>> {
    let sigma = match adversary {
        AdversaryKind::RandomGuess => Some(Key::uniform(spec.n, rng)),
        AdversaryKind::FixedGuess => Some(Key::new(0, spec.n).expect("zero key fits")),
        AdversaryKind::BasisMeasure => Some(measure_key(spec, pk_m1, copies.max(1), rng)),
        AdversaryKind::Oracle => Some(true_key_m1),
        AdversaryKind::Never => None,
        AdversaryKind::Replay => Some(sk_m),
    };
    if let Some(k) = &sigma {
        if k.len() != spec.n {
            return Err(Error::BadGuessLength {
                got: k.len(),
                want: spec.n,
            });
        }
    }
    Ok(sigma)
}

/// Run the one-time security game.
pub fn one_time_security_game(
    spec: &GeneratorSpec,
    adversary: AdversaryKind,
    trials: usize,
    seed: u64,
    query_cap: usize,
) -> Result<OneTimeGameReport> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be >= 1".into()));
    }
    let copies = adversary.copies_per_slot();
    if copies > query_cap {
        return Err(Error::QueryCap {
            need: copies,
            cap: query_cap,
        });
    }
    let results: Vec<(f64, bool)> = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<(f64, bool)> {
            let mut rng = qstate::stream(seed, i as u64);
            let keys = keygen(spec, &mut rng);
            let pk = public_key(spec, &keys)?;
            // Query phase: `copies` regenerations per slot, equal by
            // construction.
            let m: u8 = rng.gen::<u8>() & 1;
            let sk_m = sign(&keys, m)?;
            let target = m ^ 1;
            let sigma = forge(
                spec,
                adversary,
                &pk.slot(target).output,
                copies,
                sk_m,
                keys.slot(target),
                &mut rng,
            )?;
            let score = match sigma {
                None => 0.0,
                Some(s) => verify(spec, &pk, target, &s)?,
            };
            Ok((score, keys.sk0 == keys.sk1))
        })
        .collect::<Result<_>>()?;
    let scores: Vec<f64> = results.iter().map(|(s, _)| *s).collect();
    let est = McEstimate::from_scores(&scores);
    let collisions = results.iter().filter(|(_, c)| *c).count();
    Ok(OneTimeGameReport {
        forgery_rate: est.mean,
        std_error: est.std_error,
        collision_fraction: collisions as f64 / trials as f64,
        trials,
    })
}

/// Both sides of the reduction identity.
#[derive(Debug, Clone)]
pub struct ReductionReport {
    /// Empirical acceptance of the wrapper in the one-wayness game.
    pub lhs: f64,
    pub lhs_std_error: f64,
    /// Half the independently measured forgery rate.
    pub rhs: f64,
    pub rhs_std_error: f64,
    pub trials: usize,
}

impl ReductionReport {
    pub fn gap(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    pub fn combined_std_error(&self) -> f64 {
        (self.lhs_std_error * self.lhs_std_error + self.rhs_std_error * self.rhs_std_error).sqrt()
    }
}

/// Measure `Pr[wrapper -> 1]` and `Pr[forgery] / 2` on independent seeds.
pub fn reduction_experiment(
    spec: &GeneratorSpec,
    adversary: AdversaryKind,
    trials: usize,
    seed: u64,
) -> Result<ReductionReport> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be >= 1".into()));
    }
    let seed_lhs = qstate::derive_seed(seed, 0);
    let seed_rhs = qstate::derive_seed(seed, 1);
    let copies = adversary.copies_per_slot();

    let lhs_scores: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut rng = qstate::stream(seed_lhs, i as u64);
            // One-wayness challenger side.
            let challenge_key = Key::uniform(spec.n, &mut rng);
            let challenge = generate(spec, &challenge_key)?.output;
            // Wrapper side: plant the challenge in slot r.
            let r: u8 = rng.gen::<u8>() & 1;
            let own_key = Key::uniform(spec.n, &mut rng);
            let own_state = generate(spec, &own_key)?.output;
            let (pk0, pk1) = if r == 0 {
                (&challenge, &own_state)
            } else {
                (&own_state, &challenge)
            };
            // Adversary picks a message after seeing the public keys.
            let m: u8 = rng.gen::<u8>() & 1;
            if m == r {
                // The wrapper cannot open the challenge slot; abort.
                return Ok(0.0);
            }
            // Slot m holds own_key, so the wrapper can hand over sk_m.
            let target = m ^ 1; // equals r here
            let pk_target = if target == 0 { pk0 } else { pk1 };
            let sigma = forge(
                spec,
                adversary,
                pk_target,
                copies,
                own_key,
                challenge_key,
                &mut rng,
            )?;
            match sigma {
                None => Ok(0.0),
                Some(s) => {
                    let reference = generate(spec, &s)?.output;
                    Ok(reference.overlap(&challenge)?)
                }
            }
        })
        .collect::<Result<_>>()?;
    let lhs = McEstimate::from_scores(&lhs_scores);

    let game = one_time_security_game(spec, adversary, trials, seed_rhs, copies.max(1))?;

    Ok(ReductionReport {
        lhs: lhs.mean,
        lhs_std_error: lhs.std_error,
        rhs: 0.5 * game.forgery_rate,
        rhs_std_error: 0.5 * game.std_error,
        trials,
    })
}
