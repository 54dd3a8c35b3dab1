//! The sparse-in-R commitment state and the honest protocol flows.

use num_complex::Complex64 as C64;
use rand::Rng;

use generators::{generate, GeneratorOutput, GeneratorSpec, Key};
use qstate::{CMatrix, DensityMatrix, PauliMask, PureState};

use crate::{check_bit, Error, Result};

/// Hard ceiling on stored amplitudes (entries times C dimension).
pub const MAX_STORED_AMPLITUDES: usize = 1 << 22;

/// Ceiling on dense materialization of the joint R tensor C vector.
pub const MAX_DENSE_AMPLITUDES: usize = 1 << 14;

/// R-marginal computation is quadratic in the entry count; cap the register.
pub const MAX_R_MARGINAL_QUBITS: usize = 7;

/// One R-basis branch of a commitment state: an orthonormal R label, its
/// amplitude, and the attached C subvector (unit norm).
#[derive(Debug, Clone)]
pub struct CommitEntry {
    pub r_label: u64,
    pub amplitude: C64,
    pub c_state: Vec<C64>,
}

/// A pure state on R tensor C, sparse in the orthonormal R basis:
/// `|psi> = sum_e amplitude_e |r_label_e>_R |c_state_e>_C`.
///
/// Labels are strictly increasing and the total norm is 1.
#[derive(Debug, Clone)]
pub struct StructuredCommitState {
    m: usize,
    n: usize,
    r_qubits: usize,
    entries: Vec<CommitEntry>,
}

impl StructuredCommitState {
    pub fn new(m: usize, n: usize, r_qubits: usize, entries: Vec<CommitEntry>) -> Result<Self> {
        if r_qubits == 0 || r_qubits > 62 {
            return Err(Error::Shape(format!("bad R register size {r_qubits}")));
        }
        let c_dim = 1usize << m;
        let mut norm2 = 0.0f64;
        let mut prev: Option<u64> = None;
        for e in &entries {
            if e.c_state.len() != c_dim {
                return Err(Error::Shape(format!(
                    "C subvector length {} != 2^m = {c_dim}",
                    e.c_state.len()
                )));
            }
            if e.r_label >= (1u64 << r_qubits) {
                return Err(Error::Shape(format!(
                    "label {} out of range for {r_qubits} R qubits",
                    e.r_label
                )));
            }
            if let Some(p) = prev {
                if e.r_label <= p {
                    return Err(Error::Shape("labels not strictly increasing".into()));
                }
            }
            prev = Some(e.r_label);
            let c_norm2: f64 = e.c_state.iter().map(|a| a.norm_sqr()).sum();
            norm2 += e.amplitude.norm_sqr() * c_norm2;
        }
        if (norm2 - 1.0).abs() > 1e-9 {
            return Err(Error::State(qstate::Error::NotNormalized(
                (norm2 - 1.0).abs(),
            )));
        }
        Ok(Self {
            m,
            n,
            r_qubits,
            entries,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r_qubits(&self) -> usize {
        self.r_qubits
    }

    pub fn c_dim(&self) -> usize {
        1 << self.m
    }

    pub fn entries(&self) -> &[CommitEntry] {
        &self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.amplitude.norm_sqr() * e.c_state.iter().map(|a| a.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// Inner product `<self|other>`; labels are orthonormal, so only shared
    /// labels contribute.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.m != other.m || self.r_qubits != other.r_qubits {
            return Err(Error::Shape(format!(
                "register mismatch: ({}, {}) vs ({}, {})",
                self.r_qubits, self.m, other.r_qubits, other.m
            )));
        }
        let mut acc = C64::new(0.0, 0.0);
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.entries.len() && j < other.entries.len() {
            let (a, b) = (&self.entries[i], &other.entries[j]);
            match a.r_label.cmp(&b.r_label) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let c_inner: C64 = a
                        .c_state
                        .iter()
                        .zip(&b.c_state)
                        .map(|(u, v)| u.conj() * v)
                        .sum();
                    acc += a.amplitude.conj() * b.amplitude * c_inner;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(acc)
    }

    /// `|<self|other>|^2`.
    pub fn overlap(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Receiver's view: `Tr_R |psi><psi|`.
    pub fn c_marginal(&self) -> DensityMatrix {
        let d = self.c_dim();
        let mut mat = CMatrix::zeros(d, d);
        for e in &self.entries {
            let w = e.amplitude.norm_sqr();
            if w == 0.0 {
                continue;
            }
            for r in 0..d {
                let vr = e.c_state[r] * w;
                if vr.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..d {
                    mat[(r, c)] += vr * e.c_state[c].conj();
                }
            }
        }
        DensityMatrix::new(mat, vec![2; self.m]).expect("marginal of a valid state")
    }

    /// Sender-kept view: `Tr_C |psi><psi|`. Quadratic in the entry count, so
    /// the register is capped at [`MAX_R_MARGINAL_QUBITS`].
    pub fn r_marginal(&self) -> Result<DensityMatrix> {
        if self.r_qubits > MAX_R_MARGINAL_QUBITS {
            return Err(Error::SizeCap(format!(
                "R-marginal needs r_qubits <= {MAX_R_MARGINAL_QUBITS}, got {}",
                self.r_qubits
            )));
        }
        let d = 1usize << self.r_qubits;
        let mut mat = CMatrix::zeros(d, d);
        for a in &self.entries {
            for b in &self.entries {
                // Tr_C(|c_a><c_b|) = <c_b|c_a>.
                let c_inner: C64 = b
                    .c_state
                    .iter()
                    .zip(&a.c_state)
                    .map(|(u, v)| u.conj() * v)
                    .sum();
                mat[(a.r_label as usize, b.r_label as usize)] +=
                    a.amplitude * b.amplitude.conj() * c_inner;
            }
        }
        Ok(DensityMatrix::new(mat, vec![2; self.r_qubits])
            .expect("marginal of a valid state"))
    }

    /// Apply `(X^x Z^z)_R tensor I_C`: labels permute and pick up signs.
    pub fn apply_r_mask(&self, mask: &PauliMask) -> Result<Self> {
        self.mask_with(mask, false)
    }

    /// Apply the exact inverse `(Z^z X^x)_R tensor I_C`.
    pub fn apply_r_mask_inverse(&self, mask: &PauliMask) -> Result<Self> {
        self.mask_with(mask, true)
    }

    fn mask_with(&self, mask: &PauliMask, inverse: bool) -> Result<Self> {
        if mask.len() != self.r_qubits {
            return Err(Error::Shape(format!(
                "mask on {} qubits, register has {}",
                mask.len(),
                self.r_qubits
            )));
        }
        let sign = |label: u64| -> f64 {
            if (label & mask.z()).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            }
        };
        let mut entries: Vec<CommitEntry> = self
            .entries
            .iter()
            .map(|e| {
                let new_label = e.r_label ^ mask.x();
                let s = if inverse { sign(new_label) } else { sign(e.r_label) };
                CommitEntry {
                    r_label: new_label,
                    amplitude: e.amplitude * s,
                    c_state: e.c_state.clone(),
                }
            })
            .collect();
        entries.sort_unstable_by_key(|e| e.r_label);
        Self::new(self.m, self.n, self.r_qubits, entries)
    }

    /// Dense joint vector on `r_qubits + m` qubits, for small configurations
    /// only.
    pub fn to_dense(&self) -> Result<PureState> {
        let total = (1usize << self.r_qubits) * self.c_dim();
        if total > MAX_DENSE_AMPLITUDES {
            return Err(Error::SizeCap(format!(
                "dense joint vector would hold {total} amplitudes (cap {MAX_DENSE_AMPLITUDES})"
            )));
        }
        let c_dim = self.c_dim();
        let mut amps = vec![C64::new(0.0, 0.0); total];
        for e in &self.entries {
            let base = e.r_label as usize * c_dim;
            for (c, &v) in e.c_state.iter().enumerate() {
                amps[base + c] = e.amplitude * v;
            }
        }
        Ok(PureState::new(amps, vec![2; self.r_qubits + self.m])?)
    }
}

fn check_build_caps(spec: &GeneratorSpec) -> Result<()> {
    spec.require_expanding()?;
    if spec.m > 8 || spec.n > 6 {
        return Err(Error::SizeCap(format!(
            "commitment construction caps at m <= 8, n <= 6 (got n={}, m={})",
            spec.n, spec.m
        )));
    }
    Ok(())
}

/// Build the honest commitment state `|psi_b>` for the given generator.
///
/// For `b = 0` every C subvector is `|phi_k>`; for `b = 1` it is
/// `X^x Z^z |phi_k>`. Ancilla-bearing outputs fold `|eta_k>` into the R
/// label space.
pub fn build_commit_state(spec: &GeneratorSpec, b: u8) -> Result<StructuredCommitState> {
    check_build_caps(spec)?;
    let outputs: Vec<GeneratorOutput> = Key::all(spec.n)
        .map(|k| generate(spec, &k))
        .collect::<generators::Result<_>>()?;
    build_commit_state_from_outputs(spec.m, spec.n, &outputs, b)
}

/// As [`build_commit_state`], from explicit generator outputs (one per key,
/// in key order). Exposed so ancilla-bearing outputs can be driven directly.
pub fn build_commit_state_from_outputs(
    m: usize,
    n: usize,
    outputs: &[GeneratorOutput],
    b: u8,
) -> Result<StructuredCommitState> {
    check_bit(b)?;
    if outputs.len() != 1 << n {
        return Err(Error::Shape(format!(
            "need 2^n = {} generator outputs, got {}",
            1 << n,
            outputs.len()
        )));
    }
    // Ancillas must share a qubit shape across keys.
    let anc_qubits = match &outputs[0].ancilla {
        None => 0,
        Some(a) => {
            if !a.is_qubit_register() {
                return Err(Error::Shape("ancilla must be a qubit register".into()));
            }
            a.dims().len()
        }
    };
    let r_qubits = 2 * m + n + anc_qubits;
    let c_dim = 1usize << m;
    let entry_count = (1usize << (2 * m + n)) << anc_qubits;
    if entry_count * c_dim > MAX_STORED_AMPLITUDES {
        return Err(Error::SizeCap(format!(
            "structured state would hold {} amplitudes (cap {MAX_STORED_AMPLITUDES})",
            entry_count * c_dim
        )));
    }
    let amp = C64::new(1.0 / ((1u64 << (2 * m + n)) as f64).sqrt(), 0.0);

    let mut entries = Vec::with_capacity(entry_count);
    for x in 0..(1u64 << m) {
        for z in 0..(1u64 << m) {
            let mask = PauliMask::new(x, z, m).expect("mask within width");
            for k in Key::all(n) {
                let out = &outputs[k.value() as usize];
                if out.output.dims().len() != m || !out.output.is_qubit_register() {
                    return Err(Error::Shape(format!(
                        "generator output must be {m} qubits"
                    )));
                }
                let c_state: Vec<C64> = if b == 1 {
                    mask.apply(&out.output)?.amplitudes().to_vec()
                } else {
                    out.output.amplitudes().to_vec()
                };
                let base = (((x << m) | z) << n) | k.value();
                match (&out.ancilla, anc_qubits) {
                    (None, 0) => entries.push(CommitEntry {
                        r_label: base,
                        amplitude: amp,
                        c_state,
                    }),
                    (Some(anc), _) => {
                        for (a_idx, &a_amp) in anc.amplitudes().iter().enumerate() {
                            if a_amp.norm_sqr() == 0.0 {
                                continue;
                            }
                            entries.push(CommitEntry {
                                r_label: (base << anc_qubits) | a_idx as u64,
                                amplitude: amp * a_amp,
                                c_state: c_state.clone(),
                            });
                        }
                    }
                    (None, _) => {
                        return Err(Error::Shape(
                            "all outputs must carry an ancilla when one does".into(),
                        ))
                    }
                }
            }
        }
    }
    StructuredCommitState::new(m, n, r_qubits, entries)
}

/// Acceptance probability of the reveal measurement
/// `{|psi_claimed><psi_claimed|, I - ...}` on the given (pure) state.
pub fn honest_reveal_verify(
    state: &StructuredCommitState,
    claimed_b: u8,
    spec: &GeneratorSpec,
) -> Result<f64> {
    check_bit(claimed_b)?;
    if state.m() != spec.m {
        return Err(Error::Shape(format!(
            "state C register has {} qubits, spec says {}",
            state.m(),
            spec.m
        )));
    }
    let reference = build_commit_state(spec, claimed_b)?;
    reference.overlap(state)
}

/// Transcript of one honest commit/reveal round.
#[derive(Debug, Clone)]
pub struct CommitmentTranscript {
    pub committed_bit: u8,
    /// What the receiver holds after the commit phase.
    pub receiver_view: DensityMatrix,
    /// The opening: the kept R register (as the full structured state) and
    /// the revealed bit.
    pub opening: StructuredCommitState,
    pub revealed_bit: u8,
    /// Filled by the classical-opening wrapper.
    pub classical_opening: Option<PauliMask>,
}

/// Run the honest protocol for bit `b` and record the transcript.
pub fn honest_commit(spec: &GeneratorSpec, b: u8) -> Result<CommitmentTranscript> {
    let state = build_commit_state(spec, b)?;
    Ok(CommitmentTranscript {
        committed_bit: b,
        receiver_view: state.c_marginal(),
        opening: state,
        revealed_bit: b,
        classical_opening: None,
    })
}

/// Classical-opening wrapper: draw a uniform mask on R, apply it, and hand
/// back the masked state together with the classical opening `(x, z)`.
/// Unmasking with [`StructuredCommitState::apply_r_mask_inverse`] restores
/// the input bit-exactly.
pub fn classical_opening_wrap<R: Rng>(
    state: &StructuredCommitState,
    rng: &mut R,
) -> Result<(StructuredCommitState, PauliMask)> {
    let mask = PauliMask::uniform(state.r_qubits(), rng);
    Ok((state.apply_r_mask(&mask)?, mask))
}

/// The interactive variant: the receiver chose `(x, z)` on m qubits, the
/// sender prepares `2^{-n/2} sum_k |k>_R (X^x Z^z)^b |phi_k>_C` with an R
/// register of n qubits.
pub fn interactive_variant_commit(
    spec: &GeneratorSpec,
    b: u8,
    receiver_mask: &PauliMask,
) -> Result<StructuredCommitState> {
    check_bit(b)?;
    spec.require_expanding()?;
    if receiver_mask.len() != spec.m {
        return Err(Error::Shape(format!(
            "receiver mask on {} qubits, C register has {}",
            receiver_mask.len(),
            spec.m
        )));
    }
    let amp = C64::new(1.0 / (spec.key_count() as f64).sqrt(), 0.0);
    let mut entries = Vec::with_capacity(spec.key_count());
    for k in Key::all(spec.n) {
        let out = generate(spec, &k)?.output;
        let c_state = if b == 1 {
            receiver_mask.apply(&out)?.amplitudes().to_vec()
        } else {
            out.amplitudes().to_vec()
        };
        entries.push(CommitEntry {
            r_label: k.value(),
            amplitude: amp,
            c_state,
        });
    }
    StructuredCommitState::new(spec.m, spec.n, spec.n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use generators::Family;

    fn spec(n: usize, m: usize) -> GeneratorSpec {
        GeneratorSpec::new(Family::BasisEmbed, n, m).unwrap()
    }

    #[test]
    fn honest_state_shape_n1_m2() {
        let s = build_commit_state(&spec(1, 2), 0).unwrap();
        assert_eq!(s.entries().len(), 1 << 5);
        let amp = 1.0 / 32f64.sqrt();
        for e in s.entries() {
            assert!((e.amplitude.re - amp).abs() < 1e-12 && e.amplitude.im == 0.0);
            // C subvectors are |00> or |10>.
            let idx: Vec<usize> = e
                .c_state
                .iter()
                .enumerate()
                .filter(|(_, a)| a.norm() > 0.0)
                .map(|(i, _)| i)
                .collect();
            assert_eq!(idx.len(), 1);
            assert!(idx[0] == 0 || idx[0] == 2);
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        assert!((s.overlap(&s).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn reveal_accepts_honest_bit() {
        for b in [0u8, 1u8] {
            let sp = spec(1, 2);
            let s = build_commit_state(&sp, b).unwrap();
            let p = honest_reveal_verify(&s, b, &sp).unwrap();
            assert!((p - 1.0).abs() < 1e-9, "b={b}: p={p}");
        }
    }

    #[test]
    fn reveal_rejects_orthogonal_state() {
        let sp = spec(1, 2);
        // All weight on a single wrong label/C pair, orthogonal to psi_1's
        // support structure on that label.
        let s = build_commit_state(&sp, 0).unwrap();
        // Take label 0 (x=z=0, k=0): psi_0 has |00> there, so put all weight
        // on a C vector orthogonal to both |00> and |10>.
        let entries = vec![CommitEntry {
            r_label: 0,
            amplitude: C64::new(1.0, 0.0),
            c_state: vec![
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        }];
        let bogus = StructuredCommitState::new(2, 1, s.r_qubits(), entries).unwrap();
        let p = honest_reveal_verify(&bogus, 0, &sp).unwrap();
        assert!(p < 1e-12);
    }

    #[test]
    fn mask_roundtrip_is_exact() {
        let sp = spec(1, 2);
        let s = build_commit_state(&sp, 1).unwrap();
        let mut rng = qstate::stream(21, 0);
        let (masked, mask) = classical_opening_wrap(&s, &mut rng).unwrap();
        let back = masked.apply_r_mask_inverse(&mask).unwrap();
        assert_eq!(s.entries().len(), back.entries().len());
        for (a, b) in s.entries().iter().zip(back.entries()) {
            assert_eq!(a.r_label, b.r_label);
            assert_eq!(a.amplitude, b.amplitude);
            assert_eq!(a.c_state, b.c_state);
        }
    }

    #[test]
    fn zero_mask_is_identity() {
        let sp = spec(1, 2);
        let s = build_commit_state(&sp, 0).unwrap();
        let masked = s.apply_r_mask(&PauliMask::zero(s.r_qubits())).unwrap();
        for (a, b) in s.entries().iter().zip(masked.entries()) {
            assert_eq!(a.r_label, b.r_label);
            assert_eq!(a.amplitude, b.amplitude);
        }
    }

    #[test]
    fn dense_cap_enforced() {
        let sp = spec(2, 6);
        let s = build_commit_state(&sp, 0).unwrap();
        assert!(matches!(s.to_dense(), Err(Error::SizeCap(_))));
    }

    #[test]
    fn interactive_b0_marginal_is_ensemble() {
        let sp = spec(2, 4);
        let mask = PauliMask::new(5, 9, 4).unwrap();
        let s = interactive_variant_commit(&sp, 0, &mask).unwrap();
        let rho = s.c_marginal();
        let ens = generators::ensemble_density(&sp).unwrap();
        assert!(rho.max_deviation(&ens).unwrap() < 1e-12);
    }

    #[test]
    fn m_le_n_configuration_rejected() {
        let sp = GeneratorSpec::new(Family::BasisEmbed, 2, 2).unwrap();
        assert!(build_commit_state(&sp, 0).is_err());
    }

    #[test]
    fn ancilla_outputs_fold_into_r() {
        // Hand-rolled outputs with a 1-qubit ancilla |+>.
        let m = 2usize;
        let n = 1usize;
        let r = 0.5f64.sqrt();
        let anc = PureState::new(vec![C64::new(r, 0.0), C64::new(r, 0.0)], vec![2]).unwrap();
        let outputs: Vec<GeneratorOutput> = (0..2)
            .map(|k| GeneratorOutput {
                output: PureState::qubit_basis(m, k << (m - n)).unwrap(),
                ancilla: Some(anc.clone()),
            })
            .collect();
        let s = build_commit_state_from_outputs(m, n, &outputs, 1).unwrap();
        assert_eq!(s.r_qubits(), 2 * m + n + 1);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
        // The C marginal is still exactly maximally mixed.
        let mixed = DensityMatrix::maximally_mixed(vec![2; m]);
        assert!(s.c_marginal().max_deviation(&mixed).unwrap() < 1e-10);
    }
}
