//! Two-branch state generators whose reduced states are statistically far
//! apart while remaining hard to distinguish for bounded observers.
//!
//! The construction runs a state generator coherently over all keys:
//!
//! - branch 0: `2^{-n/2} sum_k (|k> tensor |eta_k>)_A tensor |phi_k>_B`,
//! - branch 1: the maximally entangled pair `2^{-m/2} sum_r |r>_A |r>_B`.
//!
//! The B-side marginals are then the key ensemble and the maximally mixed
//! state, so their fidelity obeys the same `2^{n-m}` rank bound as the
//! commitment. Only the statistical quantities (fidelity, trace distance,
//! purities) are computed; no computational-indistinguishability claim is
//! machine-checked, the reports just carry the numbers and thresholds.

use num_complex::Complex64 as C64;
use thiserror::Error;

use generators::{generate, GeneratorSpec, Key};
use qstate::{fidelity, overlap_trace, trace_distance, DensityMatrix, PureState};

#[derive(Debug, Error)]
pub enum SdcidError {
    #[error(transparent)]
    State(#[from] qstate::Error),

    #[error(transparent)]
    Generator(#[from] generators::Error),

    #[error("branch bit {0} invalid")]
    BadBranch(u8),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),
}

pub type Result<T> = std::result::Result<T, SdcidError>;

/// One generated branch: the joint pure state over registers A and B, the
/// branch bit, and the register split.
#[derive(Debug, Clone)]
pub struct SdcidOutput {
    pub joint: PureState,
    pub branch: u8,
    pub a_dim: usize,
    pub b_dim: usize,
}

impl SdcidOutput {
    /// Reduced state on register B.
    pub fn reduced_b(&self) -> Result<DensityMatrix> {
        Ok(self.joint.reduced(&[1])?)
    }
}

/// Generate branch `b` from a (single-copy-style) state generator.
pub fn sdcid_from_prs(spec: &GeneratorSpec, b: u8) -> Result<SdcidOutput> {
    if b > 1 {
        return Err(SdcidError::BadBranch(b));
    }
    spec.require_expanding()?;
    let b_dim = spec.output_dim();
    if b == 1 {
        // Maximally entangled pair on m qubits each side.
        let amp = C64::new(1.0 / (b_dim as f64).sqrt(), 0.0);
        let mut amps = vec![C64::new(0.0, 0.0); b_dim * b_dim];
        for r in 0..b_dim {
            amps[r * b_dim + r] = amp;
        }
        let joint = PureState::with_labels(
            amps,
            vec![b_dim, b_dim],
            vec!["A".into(), "B".into()],
        )?;
        return Ok(SdcidOutput {
            joint,
            branch: 1,
            a_dim: b_dim,
            b_dim,
        });
    }

    // Branch 0: superpose the generator over all keys; the key register
    // (plus ancilla, when present) forms register A.
    let outputs: Vec<_> = Key::all(spec.n)
        .map(|k| generate(spec, &k))
        .collect::<generators::Result<Vec<_>>>()?;
    let anc_dim = outputs[0]
        .ancilla
        .as_ref()
        .map(|a| a.total_dim())
        .unwrap_or(1);
    let a_dim = spec.key_count() * anc_dim;
    if a_dim * b_dim > (1 << 22) {
        return Err(SdcidError::SizeCap(format!(
            "joint dimension {} too large",
            a_dim * b_dim
        )));
    }
    let key_amp = C64::new(1.0 / (spec.key_count() as f64).sqrt(), 0.0);
    let mut amps = vec![C64::new(0.0, 0.0); a_dim * b_dim];
    for (kv, out) in outputs.iter().enumerate() {
        let phi = out.output.amplitudes();
        match &out.ancilla {
            None => {
                let base = kv * anc_dim * b_dim;
                for (c, &v) in phi.iter().enumerate() {
                    amps[base + c] = key_amp * v;
                }
            }
            Some(anc) => {
                for (ai, &aa) in anc.amplitudes().iter().enumerate() {
                    let base = (kv * anc_dim + ai) * b_dim;
                    for (c, &v) in phi.iter().enumerate() {
                        amps[base + c] = key_amp * aa * v;
                    }
                }
            }
        }
    }
    let joint = PureState::with_labels(amps, vec![a_dim, b_dim], vec!["A".into(), "B".into()])?;
    Ok(SdcidOutput {
        joint,
        branch: 0,
        a_dim,
        b_dim,
    })
}

/// Statistical verdict on a branch pair.
#[derive(Debug, Clone)]
pub struct SdcidVerdict {
    pub fidelity: f64,
    /// The maximum single-shot distinguishing advantage; reported, with no
    /// computational claim attached.
    pub trace_distance: f64,
    pub purity0: f64,
    pub purity1: f64,
    pub threshold: f64,
    pub fidelity_below_threshold: bool,
}

/// Compute fidelity, trace distance and purities of the two reduced states
/// and compare the fidelity against `threshold`.
pub fn sdcid_check(out0: &SdcidOutput, out1: &SdcidOutput, threshold: f64) -> Result<SdcidVerdict> {
    let rho0 = out0.reduced_b()?;
    let rho1 = out1.reduced_b()?;
    let f = fidelity(&rho0, &rho1)?;
    Ok(SdcidVerdict {
        fidelity: f,
        trace_distance: trace_distance(&rho0, &rho1)?,
        purity0: rho0.purity(),
        purity1: rho1.purity(),
        threshold,
        fidelity_below_threshold: f < threshold,
    })
}

/// The two inequalities chained by the low-purity argument, evaluated on
/// concrete states: `Tr(rho_0 rho_1) <= F(rho_0, rho_1)` and
/// `|Tr(rho_0^2) - Tr(rho_0 rho_1)| <= 2 TD(rho_0, rho_1)` (a SWAP-test
/// advantage is bounded by the trace distance).
#[derive(Debug, Clone)]
pub struct PurityChainReport {
    pub purity0: f64,
    pub purity1: f64,
    pub cross_overlap: f64,
    pub fidelity: f64,
    pub trace_distance: f64,
    pub overlap_within_fidelity: bool,
    pub swap_advantage_within_td: bool,
}

pub fn purity_lemma_check(out0: &SdcidOutput, out1: &SdcidOutput) -> Result<PurityChainReport> {
    let rho0 = out0.reduced_b()?;
    let rho1 = out1.reduced_b()?;
    let cross = overlap_trace(&rho0, &rho1)?;
    let f = fidelity(&rho0, &rho1)?;
    let td = trace_distance(&rho0, &rho1)?;
    let purity0 = rho0.purity();
    let purity1 = rho1.purity();
    Ok(PurityChainReport {
        purity0,
        purity1,
        cross_overlap: cross,
        fidelity: f,
        trace_distance: td,
        overlap_within_fidelity: cross <= f + 1e-9,
        swap_advantage_within_td: (purity0 - cross).abs() <= 2.0 * td + 1e-9,
    })
}
