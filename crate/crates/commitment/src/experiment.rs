//! Protocol-level experiments: extractor-based real-vs-ideal runs and the
//! classical-opening equivalence checks.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use generators::GeneratorSpec;
use qstate::{DensityMatrix, PauliMask};

use crate::analysis::{helstrom_pair, helstrom_success, hiding_states};
use crate::attack::{uhlmann_purification, AttackSpec};
use crate::state::{build_commit_state, StructuredCommitState};
use crate::{check_bit, Result};

/// What a sender does in the commit phase of one trial: the state it
/// prepares on R tensor C and the bit it will claim at reveal time.
#[derive(Clone)]
pub struct SenderMove {
    pub state: Arc<StructuredCommitState>,
    pub reveal_bit: u8,
}

/// A pluggable (possibly cheating) sender.
pub trait SenderStrategy: Sync {
    fn name(&self) -> &'static str;

    fn commit(&self, spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<SenderMove>;
}

/// Commits honestly to a fresh uniform bit and reveals it.
pub struct HonestSender {
    states: [Arc<StructuredCommitState>; 2],
}

impl HonestSender {
    pub fn new(spec: &GeneratorSpec) -> Result<Self> {
        Ok(Self {
            states: [
                Arc::new(build_commit_state(spec, 0)?),
                Arc::new(build_commit_state(spec, 1)?),
            ],
        })
    }
}

impl SenderStrategy for HonestSender {
    fn name(&self) -> &'static str {
        "honest"
    }

    fn commit(&self, _spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<SenderMove> {
        let b = (rng.gen::<u8>()) & 1;
        Ok(SenderMove {
            state: Arc::clone(&self.states[b as usize]),
            reveal_bit: b,
        })
    }
}

/// Commits honestly to one bit but claims the other at reveal time.
pub struct MismatchedRevealSender {
    state: Arc<StructuredCommitState>,
    reveal_bit: u8,
}

impl MismatchedRevealSender {
    pub fn new(spec: &GeneratorSpec, commit_bit: u8, reveal_bit: u8) -> Result<Self> {
        check_bit(commit_bit)?;
        check_bit(reveal_bit)?;
        Ok(Self {
            state: Arc::new(build_commit_state(spec, commit_bit)?),
            reveal_bit,
        })
    }
}

impl SenderStrategy for MismatchedRevealSender {
    fn name(&self) -> &'static str {
        "mismatched-reveal"
    }

    fn commit(&self, _spec: &GeneratorSpec, _rng: &mut ChaCha8Rng) -> Result<SenderMove> {
        Ok(SenderMove {
            state: Arc::clone(&self.state),
            reveal_bit: self.reveal_bit,
        })
    }
}

/// Commits `sigma_C` via its purification and opens a fresh uniform bit with
/// the optimal rotation for that bit.
pub struct UhlmannSender {
    states: [Arc<StructuredCommitState>; 2],
}

impl UhlmannSender {
    pub fn new(spec: &GeneratorSpec, sigma_c: DensityMatrix) -> Result<Self> {
        let attack = AttackSpec::new(sigma_c);
        let (_, s0) = uhlmann_purification(spec, 0, &attack)?;
        let (_, s1) = uhlmann_purification(spec, 1, &attack)?;
        Ok(Self {
            states: [Arc::new(s0), Arc::new(s1)],
        })
    }
}

impl SenderStrategy for UhlmannSender {
    fn name(&self) -> &'static str {
        "uhlmann"
    }

    fn commit(&self, _spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<SenderMove> {
        let b = (rng.gen::<u8>()) & 1;
        Ok(SenderMove {
            state: Arc::clone(&self.states[b as usize]),
            reveal_bit: b,
        })
    }
}

/// Outcome distributions of the real and ideal experiments, and their
/// empirical total-variation distance.
#[derive(Debug, Clone)]
pub struct RealVsIdealReport {
    pub distance: f64,
    /// Exact misread probability of the extractor on honest commitments.
    pub extractor_failure: f64,
    /// Combined Monte-Carlo standard error of the distance estimate.
    pub std_error: f64,
    pub trials: usize,
    /// Reject rate observed in the real run.
    pub real_reject_rate: f64,
    /// Reject rate observed in the ideal run.
    pub ideal_reject_rate: f64,
}

/// Run the extractor-based real and ideal experiments and compare their
/// outcome records.
///
/// Real: the sender commits, reveals, and the receiver measures
/// `{|psi_b><psi_b|, I - ...}`; the record is the revealed bit or a reject.
/// Ideal: the extractor first reads the committed bit off the receiver's
/// marginal (a classical readout of the Born statistics of `(Pi_0, Pi_1)`;
/// the verified state is not disturbed), then the reveal proceeds as in the
/// real run, and a mismatch between extracted and revealed bit forces a
/// reject.
pub fn real_vs_ideal_experiment(
    spec: &GeneratorSpec,
    sender: &dyn SenderStrategy,
    trials: usize,
    seed: u64,
) -> Result<RealVsIdealReport> {
    let (rho0, rho1) = hiding_states(spec)?;
    let (pi0, pi1) = helstrom_pair(&rho0, &rho1);
    let failure = 1.0 - helstrom_success(&pi0, &pi1, &rho0, &rho1)?;

    // Per-state quantities are cached by Arc identity, so strategies that
    // reuse a handful of states (all built-ins) pay for them once.
    let mut accept_cache: HashMap<(usize, u8), f64> = HashMap::new();
    let mut extract_cache: HashMap<usize, f64> = HashMap::new();

    let mut accept_prob = |mv: &SenderMove, spec: &GeneratorSpec| -> Result<f64> {
        let key = (Arc::as_ptr(&mv.state) as usize, mv.reveal_bit);
        if let Some(&p) = accept_cache.get(&key) {
            return Ok(p);
        }
        let p = crate::state::honest_reveal_verify(&mv.state, mv.reveal_bit, spec)?;
        accept_cache.insert(key, p);
        Ok(p)
    };
    let mut extract_prob0 = |mv: &SenderMove| -> Result<f64> {
        let key = Arc::as_ptr(&mv.state) as usize;
        if let Some(&p) = extract_cache.get(&key) {
            return Ok(p);
        }
        let p = pi0.expectation(&mv.state.c_marginal())?.clamp(0.0, 1.0);
        extract_cache.insert(key, p);
        Ok(p)
    };

    let seed_real = qstate::derive_seed(seed, 0);
    let seed_ideal = qstate::derive_seed(seed, 1);

    // Outcome index: 0 -> revealed 0, 1 -> revealed 1, 2 -> reject.
    let mut real_counts = [0usize; 3];
    for i in 0..trials {
        let mut rng = qstate::stream(seed_real, i as u64);
        let mv = sender.commit(spec, &mut rng)?;
        let p = accept_prob(&mv, spec)?;
        let accepted = rng.gen::<f64>() < p;
        real_counts[if accepted { mv.reveal_bit as usize } else { 2 }] += 1;
    }

    let mut ideal_counts = [0usize; 3];
    for i in 0..trials {
        let mut rng = qstate::stream(seed_ideal, i as u64);
        let mv = sender.commit(spec, &mut rng)?;
        let p = accept_prob(&mv, spec)?;
        let p0 = extract_prob0(&mv)?;
        let extracted: u8 = if rng.gen::<f64>() < p0 { 0 } else { 1 };
        let accepted = rng.gen::<f64>() < p;
        let outcome = if accepted && extracted == mv.reveal_bit {
            mv.reveal_bit as usize
        } else {
            2
        };
        ideal_counts[outcome] += 1;
    }

    let nt = trials as f64;
    let mut distance = 0.0;
    let mut var = 0.0;
    for v in 0..3 {
        let fr = real_counts[v] as f64 / nt;
        let fi = ideal_counts[v] as f64 / nt;
        distance += (fr - fi).abs();
        var += fr * (1.0 - fr) / nt + fi * (1.0 - fi) / nt;
    }
    Ok(RealVsIdealReport {
        distance: distance / 2.0,
        extractor_failure: failure,
        std_error: 0.5 * var.sqrt(),
        trials,
        real_reject_rate: real_counts[2] as f64 / nt,
        ideal_reject_rate: ideal_counts[2] as f64 / nt,
    })
}

/// Result of running the masked and unmasked protocols side by side on the
/// same underlying randomness.
#[derive(Debug, Clone)]
pub struct PairedOpeningReport {
    pub trials: usize,
    /// Trials on which the two protocols' accept/reject decisions differed.
    pub decision_mismatches: usize,
    /// Largest difference between the two arms' acceptance probabilities.
    pub max_probability_gap: f64,
}

/// For each trial: pick a commit bit and a claimed bit, draw one acceptance
/// coin, and run both the plain protocol and the masked-then-unmasked one on
/// it. The wrapper is a bijection on the R register, so decisions must agree
/// on every single trial.
pub fn paired_opening_trials(
    spec: &GeneratorSpec,
    trials: usize,
    seed: u64,
) -> Result<PairedOpeningReport> {
    let states = [build_commit_state(spec, 0)?, build_commit_state(spec, 1)?];
    // Acceptance of claiming `r` on an honest commit to `c`.
    let mut accept = [[0.0f64; 2]; 2];
    for c in 0..2 {
        for r in 0..2 {
            accept[c][r] = states[r].overlap(&states[c])?;
        }
    }

    let mut mismatches = 0usize;
    let mut max_gap = 0.0f64;
    for i in 0..trials {
        let mut rng = qstate::stream(seed, i as u64);
        let commit_bit = (rng.gen::<u8>() & 1) as usize;
        let claim_bit = (rng.gen::<u8>() & 1) as usize;
        let coin: f64 = rng.gen();

        let plain_p = accept[commit_bit][claim_bit];
        let plain_decision = coin < plain_p;

        let mask = PauliMask::uniform(states[commit_bit].r_qubits(), &mut rng);
        let masked = states[commit_bit].apply_r_mask(&mask)?;
        let unmasked = masked.apply_r_mask_inverse(&mask)?;
        let wrapped_p = states[claim_bit].overlap(&unmasked)?;
        let wrapped_decision = coin < wrapped_p;

        max_gap = max_gap.max((plain_p - wrapped_p).abs());
        if plain_decision != wrapped_decision {
            mismatches += 1;
        }
    }
    Ok(PairedOpeningReport {
        trials,
        decision_mismatches: mismatches,
        max_probability_gap: max_gap,
    })
}

/// Monte-Carlo check of the receiver's pre-reveal view of R: averaged over
/// sampled masks, the R marginal of the masked state converges to
/// `I / 2^{|R|}`. Returns the largest entrywise deviation.
///
/// Masking acts on R alone, so it commutes with tracing out C; the per-mask
/// marginal is the conjugated base marginal.
pub fn masked_r_marginal_deviation(
    spec: &GeneratorSpec,
    b: u8,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let state = build_commit_state(spec, b)?;
    let base = state.r_marginal()?;
    let d = base.total_dim();
    let mut acc = qstate::CMatrix::zeros(d, d);
    for i in 0..samples {
        let mut rng = qstate::stream(seed, i as u64);
        let mask = PauliMask::uniform(state.r_qubits(), &mut rng);
        let conj = mask.conjugate(&base)?;
        acc += conj.matrix();
    }
    acc /= num_complex::Complex64::new(samples as f64, 0.0);
    let mixed = DensityMatrix::maximally_mixed(vec![2; state.r_qubits()]);
    Ok((acc - mixed.matrix())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}
