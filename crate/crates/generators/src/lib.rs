//! Keyed state-generator families and single-copy distinguishing experiments.
//!
//! A generator maps an n-bit key to a pure m-qubit state. Three families are
//! built in:
//!
//! - `basis-embed`: `|phi_k> = |k> |0^{m-n}>`. An orthonormal family and a
//!   deliberately weak control: its key ensemble is maximally far from the
//!   maximally mixed state that hiding needs, so every leakage bound is
//!   saturated with equality.
//! - `binary-phase`: `|phi_k> = 2^{-m/2} sum_x (-1)^{f_k(x)} |x>` with `f_k`
//!   a fixed public avalanche mixing function keyed by `k`.
//! - `prg-embed`: `|phi_k> = |G(k)>` for an expanding keyed mixing function
//!   `G`.
//!
//! The mixing functions are desk-scale stand-ins with explicit constants; no
//! cryptographic strength is claimed anywhere. What the experiments measure
//! are the information-theoretic quantities the security arguments rest on:
//! ensemble rank, fidelity to the maximally mixed state, and the exact
//! single-copy distinguishing advantage.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use thiserror::Error;

use qstate::seed::mix64;
use qstate::{haar_state, trace_distance, DensityMatrix, PureState};

/// Caps for exact enumeration over keys and amplitudes.
pub const MAX_KEY_BITS: usize = 10;
pub const MAX_OUTPUT_QUBITS: usize = 10;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    State(#[from] qstate::Error),

    #[error("key length {got}, expected {want}")]
    KeyLength { got: usize, want: usize },

    #[error("unknown generator family `{0}`")]
    UnknownFamily(String),

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// An n-bit key. The stored integer is the computational-basis index of
/// `|k>` (leftmost key bit most significant).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Key {
    value: u64,
    len: usize,
}

impl Key {
    pub fn new(value: u64, len: usize) -> Result<Self> {
        if len == 0 || len > 63 || value >= (1u64 << len) {
            return Err(Error::KeyLength {
                got: 64 - value.leading_zeros() as usize,
                want: len,
            });
        }
        Ok(Self { value, len })
    }

    /// Parse a bit string such as `"10"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let mut v = 0u64;
        for ch in bits.chars() {
            v = (v << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => {
                        return Err(Error::KeyLength {
                            got: 0,
                            want: bits.len(),
                        })
                    }
                };
        }
        Self::new(v, bits.len())
    }

    /// Uniformly random key of `len` bits.
    pub fn uniform<R: rand::Rng>(len: usize, rng: &mut R) -> Self {
        Self {
            value: rng.gen_range(0..(1u64 << len)),
            len,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// All 2^n keys in ascending order.
    pub fn all(len: usize) -> impl Iterator<Item = Key> {
        (0..(1u64 << len)).map(move |value| Key { value, len })
    }
}

impl std::fmt::Display for Key {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for j in 0..self.len {
            write!(f, "{}", (self.value >> (self.len - 1 - j)) & 1)?;
        }
        Ok(())
    }
}

/// The built-in generator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    BasisEmbed,
    BinaryPhase,
    PrgEmbed,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::BasisEmbed, Family::BinaryPhase, Family::PrgEmbed];

    pub fn name(&self) -> &'static str {
        match self {
            Family::BasisEmbed => "basis-embed",
            Family::BinaryPhase => "binary-phase",
            Family::PrgEmbed => "prg-embed",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basis-embed" => Ok(Family::BasisEmbed),
            "binary-phase" => Ok(Family::BinaryPhase),
            "prg-embed" => Ok(Family::PrgEmbed),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A generator family instantiated at key length `n` and output width `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    /// Families may carry an ancilla state alongside the output; the
    /// built-in ones do not.
    pub ancilla: bool,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidParams(format!(
                "n and m must be at least 1 (got n={n}, m={m})"
            )));
        }
        if n > MAX_KEY_BITS || m > MAX_OUTPUT_QUBITS {
            return Err(Error::SizeCap(format!(
                "n <= {MAX_KEY_BITS} and m <= {MAX_OUTPUT_QUBITS} at desk scale (got n={n}, m={m})"
            )));
        }
        if family == Family::BasisEmbed && m < n {
            return Err(Error::InvalidParams(format!(
                "basis-embed needs m >= n (got n={n}, m={m})"
            )));
        }
        Ok(Self {
            family,
            n,
            m,
            ancilla: false,
        })
    }

    /// Commitment and SDCID use require strictly expanding output, m > n.
    pub fn require_expanding(&self) -> Result<()> {
        if self.m <= self.n {
            return Err(Error::InvalidParams(format!(
                "this use requires m > n (got n={}, m={})",
                self.n, self.m
            )));
        }
        Ok(())
    }

    pub fn key_count(&self) -> usize {
        1usize << self.n
    }

    pub fn output_dim(&self) -> usize {
        1usize << self.m
    }

    /// The leakage bound `2^{n-m}` that every family must respect.
    pub fn rank_fidelity_bound(&self) -> f64 {
        (2.0f64).powi(self.n as i32 - self.m as i32)
    }
}

/// Output of a generator: a pure m-qubit state, plus an ancilla when the
/// family carries one.
#[derive(Debug, Clone)]
pub struct GeneratorOutput {
    pub output: PureState,
    pub ancilla: Option<PureState>,
}

// Public mixing constants for the keyed stand-in functions.
const PHASE_SALT: u64 = 0xd6e8_feb8_6659_fd93;
const PRG_SALT: u64 = 0xa076_1d64_78bd_642f;

/// Keyed phase bit for `binary-phase`.
fn phase_bit(key: u64, x: u64) -> u64 {
    mix64((key.wrapping_add(1) << 24) ^ x ^ PHASE_SALT) & 1
}

/// Expanding keyed mixing function for `prg-embed`, returning m bits.
fn prg_value(key: u64, m: usize) -> u64 {
    mix64(key ^ PRG_SALT) & ((1u64 << m) - 1)
}

/// Run the generator: deterministic in the key, unit-norm output.
pub fn generate(spec: &GeneratorSpec, key: &Key) -> Result<GeneratorOutput> {
    if key.len() != spec.n {
        return Err(Error::KeyLength {
            got: key.len(),
            want: spec.n,
        });
    }
    let d = spec.output_dim();
    let output = match spec.family {
        Family::BasisEmbed => {
            // |k> |0^{m-n}>: key bits occupy the leading qubits.
            let index = (key.value() as usize) << (spec.m - spec.n);
            PureState::qubit_basis(spec.m, index)?
        }
        Family::BinaryPhase => {
            let amp = 1.0 / (d as f64).sqrt();
            let amps: Vec<C64> = (0..d as u64)
                .map(|x| {
                    let sign = if phase_bit(key.value(), x) == 1 { -amp } else { amp };
                    C64::new(sign, 0.0)
                })
                .collect();
            PureState::new(amps, vec![2; spec.m])?
        }
        Family::PrgEmbed => {
            let index = prg_value(key.value(), spec.m) as usize;
            PureState::qubit_basis(spec.m, index)?
        }
    };
    Ok(GeneratorOutput {
        output,
        ancilla: None,
    })
}

/// Exact uniform key ensemble `rho_0 = 2^-n sum_k |phi_k><phi_k|`.
///
/// The rank is at most 2^n, which is what caps every fidelity and
/// distinguishing bound downstream.
pub fn ensemble_density(spec: &GeneratorSpec) -> Result<DensityMatrix> {
    let states: Vec<PureState> = Key::all(spec.n)
        .map(|k| generate(spec, &k).map(|o| o.output))
        .collect::<Result<_>>()?;
    Ok(DensityMatrix::uniform_mixture(&states)?)
}

/// `TD(rho_0, I/2^m)`: the information-theoretic maximum single-copy
/// distinguishing advantage against the maximally mixed state. Any concrete
/// distinguisher's measured advantage is bounded by this number.
pub fn single_copy_advantage(spec: &GeneratorSpec) -> Result<f64> {
    let rho = ensemble_density(spec)?;
    let mixed = DensityMatrix::maximally_mixed(vec![2; spec.m]);
    Ok(trace_distance(&rho, &mixed)?)
}

/// Two-copy SWAP-test distinguisher report.
///
/// The generator-side acceptance is computed analytically as
/// `(1 + mean_k Tr(rho_k^2)) / 2`; outputs are pure by construction, so it
/// is exactly 1. The Haar side is estimated over `trials` independent pairs.
#[derive(Debug, Clone)]
pub struct SwapTestReport {
    pub generator_acceptance: f64,
    pub haar_acceptance: f64,
    pub haar_std_error: f64,
    pub trials: usize,
}

impl SwapTestReport {
    /// The measured distinguishing advantage of the SWAP-test adversary.
    pub fn advantage(&self) -> f64 {
        (self.generator_acceptance - self.haar_acceptance).abs()
    }
}

/// Analytic SWAP-test acceptance for a given mean output purity.
pub fn swap_acceptance_from_purity(mean_purity: f64) -> f64 {
    (1.0 + mean_purity) / 2.0
}

/// Run the SWAP-test attack: analytic on generator outputs, Monte-Carlo on
/// Haar pairs, with per-trial derived seeds under `seed`.
pub fn swap_test_attack(spec: &GeneratorSpec, trials: usize, seed: u64) -> Result<SwapTestReport> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be >= 1".into()));
    }
    // Outputs are pure by construction: Tr(rho_k^2) = ||phi_k||^4 = 1.
    let mean_purity = {
        let mut acc = 0.0;
        for k in Key::all(spec.n) {
            let out = generate(spec, &k)?.output;
            let n2 = out.norm_sqr();
            acc += n2 * n2;
        }
        acc / spec.key_count() as f64
    };
    let generator_acceptance = swap_acceptance_from_purity(mean_purity);

    let d = spec.output_dim();
    let scores: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = qstate::stream(seed, i as u64);
            let a = haar_state(d, &mut rng);
            let b = haar_state(d, &mut rng);
            (1.0 + a.overlap(&b).expect("matched dims")) / 2.0
        })
        .collect();
    let mean: f64 = scores.iter().sum::<f64>() / trials as f64;
    let var: f64 = scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>()
        / (trials.max(2) - 1) as f64;
    Ok(SwapTestReport {
        generator_acceptance,
        haar_acceptance: mean,
        haar_std_error: (var / trials as f64).sqrt(),
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_embed_places_key_in_leading_qubits() {
        let spec = GeneratorSpec::new(Family::BasisEmbed, 2, 4).unwrap();
        let k = Key::from_bits("10").unwrap();
        let out = generate(&spec, &k).unwrap().output;
        // |1000> is index 8 of 16.
        assert_eq!(out.amplitudes()[8], C64::new(1.0, 0.0));
        assert_eq!(out.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 1);
    }

    #[test]
    fn binary_phase_has_flat_modulus() {
        let spec = GeneratorSpec::new(Family::BinaryPhase, 3, 5).unwrap();
        let out = generate(&spec, &Key::new(5, 3).unwrap()).unwrap().output;
        let expect = 1.0 / 32f64.sqrt();
        for a in out.amplitudes() {
            assert!((a.norm() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn generate_is_deterministic() {
        for family in Family::ALL {
            let spec = GeneratorSpec::new(family, 3, 4).unwrap();
            for k in Key::all(3) {
                let a = generate(&spec, &k).unwrap().output;
                let b = generate(&spec, &k).unwrap().output;
                assert_eq!(a.amplitudes(), b.amplitudes(), "{family} key {k}");
                assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn key_length_mismatch_rejected() {
        let spec = GeneratorSpec::new(Family::BasisEmbed, 2, 4).unwrap();
        let k = Key::new(0, 3).unwrap();
        assert!(matches!(generate(&spec, &k), Err(Error::KeyLength { .. })));
    }

    #[test]
    fn unknown_family_name_rejected() {
        assert!(matches!(
            "haar-magic".parse::<Family>(),
            Err(Error::UnknownFamily(_))
        ));
    }

    #[test]
    fn ensemble_of_basis_embed_is_flat_on_embedded_keys() {
        let spec = GeneratorSpec::new(Family::BasisEmbed, 2, 4).unwrap();
        let rho = ensemble_density(&spec).unwrap();
        let m = rho.matrix();
        let mut on = 0;
        for i in 0..16 {
            if m[(i, i)].re > 1e-12 {
                assert!((m[(i, i)].re - 0.25).abs() < 1e-12);
                on += 1;
            }
        }
        assert_eq!(on, 4);
        assert!((rho.purity() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn key_display_roundtrip() {
        let k = Key::from_bits("1010").unwrap();
        assert_eq!(k.to_string(), "1010");
        assert_eq!(k.value(), 10);
    }
}
