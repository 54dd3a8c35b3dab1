//! The one-wayness experiment and its Haar baseline.
//!
//! One-wayness game: the challenger samples a key, hands the adversary `t`
//! copies of `|phi_k>`, receives a guess `sigma`, and scores the outcome of
//! measuring a fresh copy with `{|phi_sigma><phi_sigma|, I - ...}`. The
//! acceptance is accumulated analytically (exact overlap), not sampled, so
//! identities hold up to Monte-Carlo error in the key draw only.
//!
//! When the challenge is Haar random instead, no adversary can beat
//! `sum_sigma <phi_sigma| I/2^m |phi_sigma> = 2^{n-m}`, which is the hinge
//! of the one-wayness reduction; `haar_baseline` evaluates the sum exactly
//! and `haar_challenge_experiment` measures adversaries against it.

use rayon::prelude::*;

use generators::{generate, GeneratorSpec, Key};
use qstate::haar_qubit_state;

use crate::adversary::AdversaryKind;
use crate::{Error, Result};

/// Copy count, trial count, and base seed for a one-wayness run.
#[derive(Debug, Clone, Copy)]
pub struct OwsgConfig {
    pub t: usize,
    pub trials: usize,
    pub seed: u64,
}

impl OwsgConfig {
    pub fn new(t: usize, trials: usize, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidParams("trials must be >= 1".into()));
        }
        Ok(Self { t, trials, seed })
    }
}

/// A Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

impl McEstimate {
    pub(crate) fn from_scores(scores: &[f64]) -> Self {
        let n = scores.len();
        let mean = scores.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            mean,
            std_error: (var / n as f64).sqrt(),
            trials: n,
        }
    }
}

/// Run the one-wayness experiment against generator challenges.
pub fn owsg_experiment(
    spec: &GeneratorSpec,
    adversary: AdversaryKind,
    cfg: &OwsgConfig,
) -> Result<McEstimate> {
    let scores: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut rng = qstate::stream(cfg.seed, i as u64);
            let key = Key::uniform(spec.n, &mut rng);
            let challenge = generate(spec, &key)?.output;
            let guess =
                adversary.owsg_guess(spec, &challenge, cfg.t, Some(key), &mut rng)?;
            match guess {
                None => Ok(0.0),
                Some(sigma) => {
                    let reference = generate(spec, &sigma)?.output;
                    Ok(reference.overlap(&challenge)?)
                }
            }
        })
        .collect::<Result<_>>()?;
    Ok(McEstimate::from_scores(&scores))
}

/// `sum_sigma <phi_sigma| I/2^m |phi_sigma>`, evaluated term by term. Equals
/// `2^{n-m}` exactly; deviations beyond 1e-10 are a build error.
pub fn haar_baseline(spec: &GeneratorSpec) -> Result<f64> {
    let inv_d = 1.0 / spec.output_dim() as f64;
    let mut sum = 0.0;
    for sigma in Key::all(spec.n) {
        let phi = generate(spec, &sigma)?.output;
        sum += inv_d * phi.norm_sqr();
    }
    let expect = spec.rank_fidelity_bound();
    if (sum - expect).abs() > 1e-10 {
        return Err(Error::InvalidParams(format!(
            "haar baseline {sum} deviates from 2^(n-m) = {expect}"
        )));
    }
    Ok(sum)
}

/// The same experiment with Haar-random challenges. Every adversary's mean
/// must stay below `2^{n-m}` up to Monte-Carlo error.
pub fn haar_challenge_experiment(
    spec: &GeneratorSpec,
    adversary: AdversaryKind,
    cfg: &OwsgConfig,
) -> Result<McEstimate> {
    let scores: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut rng = qstate::stream(cfg.seed, i as u64);
            let challenge = haar_qubit_state(spec.m, &mut rng);
            // There is no true key for a Haar challenge; the oracle control
            // degenerates to a random guess.
            let oracle_stand_in = Key::uniform(spec.n, &mut rng);
            let guess =
                adversary.owsg_guess(spec, &challenge, cfg.t, Some(oracle_stand_in), &mut rng)?;
            match guess {
                None => Ok(0.0),
                Some(sigma) => {
                    let reference = generate(spec, &sigma)?.output;
                    Ok(reference.overlap(&challenge)?)
                }
            }
        })
        .collect::<Result<_>>()?;
    Ok(McEstimate::from_scores(&scores))
}
