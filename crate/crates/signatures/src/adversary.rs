//! Built-in adversary strategies, shared by the one-wayness experiment and
//! the signature security game.

use rand_chacha::ChaCha8Rng;

use generators::{GeneratorSpec, Key};
use qstate::PureState;

use crate::{Error, Result};

/// Strategy names accepted on the command line and in configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryKind {
    /// Guess a uniformly random key.
    RandomGuess,
    /// Always guess the all-zero key.
    FixedGuess,
    /// Measure the available copies in the computational basis and read the
    /// key out of the leading qubits (majority vote across copies). Recovers
    /// basis-embed keys exactly.
    BasisMeasure,
    /// Control that is handed the true key out of band.
    Oracle,
    /// Declines to answer; scores zero everywhere.
    Never,
    /// Signature game only: replay the revealed slot key against the other
    /// slot. Succeeds exactly on key collisions.
    Replay,
}

impl AdversaryKind {
    pub const ALL: [AdversaryKind; 6] = [
        AdversaryKind::RandomGuess,
        AdversaryKind::FixedGuess,
        AdversaryKind::BasisMeasure,
        AdversaryKind::Oracle,
        AdversaryKind::Never,
        AdversaryKind::Replay,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AdversaryKind::RandomGuess => "random-guess",
            AdversaryKind::FixedGuess => "fixed-guess",
            AdversaryKind::BasisMeasure => "basis-measure",
            AdversaryKind::Oracle => "oracle",
            AdversaryKind::Never => "never",
            AdversaryKind::Replay => "replay",
        }
    }

    /// Public-key copies the strategy consumes per slot in the signature
    /// game (equal across slots by construction).
    pub fn copies_per_slot(&self) -> usize {
        match self {
            AdversaryKind::BasisMeasure => 1,
            _ => 0,
        }
    }

    /// One-wayness guess from `t` copies of the challenge state.
    /// `true_key` is populated only for the oracle control.
    pub fn owsg_guess(
        &self,
        spec: &GeneratorSpec,
        challenge: &PureState,
        t: usize,
        true_key: Option<Key>,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<Key>> {
        let guess = match self {
            AdversaryKind::RandomGuess => Some(Key::uniform(spec.n, rng)),
            AdversaryKind::FixedGuess => Some(Key::new(0, spec.n).expect("zero key fits")),
            AdversaryKind::BasisMeasure => {
                if t == 0 {
                    // Nothing to measure; fall back to an input-independent
                    // guess.
                    Some(Key::new(0, spec.n).expect("zero key fits"))
                } else {
                    Some(measure_key(spec, challenge, t, rng))
                }
            }
            AdversaryKind::Oracle => true_key,
            AdversaryKind::Never | AdversaryKind::Replay => None,
        };
        if let Some(k) = &guess {
            if k.len() != spec.n {
                return Err(Error::BadGuessLength {
                    got: k.len(),
                    want: spec.n,
                });
            }
        }
        Ok(guess)
    }
}

/// Measure `t` copies in the computational basis and majority-vote the
/// leading n bits.
pub(crate) fn measure_key(
    spec: &GeneratorSpec,
    state: &PureState,
    t: usize,
    rng: &mut ChaCha8Rng,
) -> Key {
    let shift = spec.m - spec.n.min(spec.m);
    let mut counts = std::collections::HashMap::<u64, usize>::new();
    for _ in 0..t {
        let outcome = state.sample_basis(rng) as u64;
        *counts.entry(outcome >> shift).or_insert(0) += 1;
    }
    let best = counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(v, _)| v)
        .unwrap_or(0);
    Key::new(best, spec.n).expect("shifted outcome fits in n bits")
}

impl std::str::FromStr for AdversaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AdversaryKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownAdversary(s.to_string()))
    }
}

impl std::fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use generators::{generate, Family};

    #[test]
    fn names_round_trip() {
        for kind in AdversaryKind::ALL {
            assert_eq!(kind.name().parse::<AdversaryKind>().unwrap(), kind);
        }
        assert!("eve".parse::<AdversaryKind>().is_err());
    }

    #[test]
    fn basis_measure_reads_basis_embed_key() {
        let spec = GeneratorSpec::new(Family::BasisEmbed, 3, 5).unwrap();
        let key = Key::from_bits("101").unwrap();
        let state = generate(&spec, &key).unwrap().output;
        let mut rng = qstate::stream(1, 0);
        let guessed = measure_key(&spec, &state, 1, &mut rng);
        assert_eq!(guessed, key);
    }
}
