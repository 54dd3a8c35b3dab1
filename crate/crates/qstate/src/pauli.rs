//! Pauli masks `X^x Z^z` and the exact quantum one-time-pad average.

use rand::Rng;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::pure::PureState;
use crate::{C64, CMatrix};

/// Largest qubit count for which the 4^m one-time-pad enumeration runs.
pub const QOTP_MAX_QUBITS: usize = 6;

/// A pair `(x, z)` of m-bit strings denoting the Pauli product `X^x Z^z`.
///
/// Bit `j` of either string acts on qubit `j`; the stored integers use the
/// amplitude-index layout (qubit 0 at the most significant of the `len` low
/// bits). `Z` acts first on the ket: `X^x Z^z |i> = (-1)^{i.z} |i XOR x>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliMask {
    x: u64,
    z: u64,
    len: usize,
}

impl PauliMask {
    pub fn new(x: u64, z: u64, len: usize) -> Result<Self> {
        if len == 0 || len > 63 {
            return Err(Error::BitLength { got: len, want: 63 });
        }
        let cap = 1u64 << len;
        if x >= cap {
            return Err(Error::BitLength {
                got: 64 - x.leading_zeros() as usize,
                want: len,
            });
        }
        if z >= cap {
            return Err(Error::BitLength {
                got: 64 - z.leading_zeros() as usize,
                want: len,
            });
        }
        Ok(Self { x, z, len })
    }

    /// Parse from bit strings written qubit 0 first, e.g. `("10", "01")`.
    pub fn from_bits(x: &str, z: &str) -> Result<Self> {
        let parse = |s: &str| -> Result<(u64, usize)> {
            let mut v = 0u64;
            for ch in s.chars() {
                v = (v << 1)
                    | match ch {
                        '0' => 0,
                        '1' => 1,
                        _ => return Err(Error::BitLength { got: 0, want: s.len() }),
                    };
            }
            Ok((v, s.len()))
        };
        let (xv, xl) = parse(x)?;
        let (zv, zl) = parse(z)?;
        if xl != zl {
            return Err(Error::BitLength { got: zl, want: xl });
        }
        Self::new(xv, zv, xl)
    }

    /// Uniformly random mask on `len` qubits.
    pub fn uniform<R: Rng>(len: usize, rng: &mut R) -> Self {
        let cap = 1u64 << len;
        Self {
            x: rng.gen_range(0..cap),
            z: rng.gen_range(0..cap),
            len,
        }
    }

    /// Identity mask (x = z = 0).
    pub fn zero(len: usize) -> Self {
        Self { x: 0, z: 0, len }
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Parity of `x . z`; `(X^x Z^z)^2 = (-1)^{x.z} I`.
    pub fn xz_parity(&self) -> bool {
        (self.x & self.z).count_ones() % 2 == 1
    }

    /// Sign picked up by basis index `i` under `Z^z`.
    #[inline]
    fn z_sign(&self, i: u64) -> f64 {
        if (i & self.z).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    /// Apply `X^x Z^z` to an m-qubit pure state (Z first, then X).
    ///
    /// Applying the same mask twice reproduces the input up to the exact
    /// global phase `(-1)^{x.z}`; as density matrices the round trip is the
    /// identity. [`PauliMask::apply_inverse`] undoes it with no phase.
    pub fn apply(&self, s: &PureState) -> Result<PureState> {
        self.check_register(s)?;
        let n = s.total_dim();
        let amps = s.amplitudes();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (i, &a) in amps.iter().enumerate() {
            let phase = self.z_sign(i as u64);
            out[i ^ self.x as usize] = a * phase;
        }
        PureState::with_labels(out, s.dims().to_vec(), s.labels().to_vec())
    }

    /// Apply the exact inverse `(X^x Z^z)^dagger = Z^z X^x`.
    pub fn apply_inverse(&self, s: &PureState) -> Result<PureState> {
        self.check_register(s)?;
        let n = s.total_dim();
        let amps = s.amplitudes();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (i, &a) in amps.iter().enumerate() {
            let j = i ^ self.x as usize;
            out[j] = a * self.z_sign(j as u64);
        }
        PureState::with_labels(out, s.dims().to_vec(), s.labels().to_vec())
    }

    /// Conjugate a density matrix: `P rho P^dagger`.
    pub fn conjugate(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if !rho.is_qubit_register() {
            return Err(Error::NotQubits(rho.dims().to_vec()));
        }
        if rho.dims().len() != self.len {
            return Err(Error::DimensionMismatch(rho.dims().len(), self.len));
        }
        let d = rho.total_dim();
        let x = self.x as usize;
        let mat = rho.matrix();
        let out = CMatrix::from_fn(d, d, |r, c| {
            let (sr, sc) = (r ^ x, c ^ x);
            mat[(sr, sc)] * (self.z_sign(sr as u64) * self.z_sign(sc as u64))
        });
        Ok(DensityMatrix::from_valid(out, rho.dims().to_vec()))
    }

    fn check_register(&self, s: &PureState) -> Result<()> {
        if !s.is_qubit_register() {
            return Err(Error::NotQubits(s.dims().to_vec()));
        }
        if s.dims().len() != self.len {
            return Err(Error::DimensionMismatch(s.dims().len(), self.len));
        }
        Ok(())
    }
}

impl std::fmt::Display for PauliMask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let bits = |v: u64| -> String {
            (0..self.len)
                .map(|j| if (v >> (self.len - 1 - j)) & 1 == 1 { '1' } else { '0' })
                .collect()
        };
        write!(f, "X^{} Z^{}", bits(self.x), bits(self.z))
    }
}

/// Exact quantum one-time-pad average
/// `4^-m sum_{x,z} X^x Z^z rho Z^z X^x`, equal to `I / 2^m` for every
/// valid input. Enumerates all `4^m` masks; `m <= 6`.
pub fn qotp_average(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if !rho.is_qubit_register() {
        return Err(Error::NotQubits(rho.dims().to_vec()));
    }
    let m = rho.dims().len();
    if m > QOTP_MAX_QUBITS {
        return Err(Error::SizeCap(format!(
            "qotp_average enumerates 4^m masks; m = {m} exceeds {QOTP_MAX_QUBITS}"
        )));
    }
    let d = rho.total_dim();
    let weight = C64::new(1.0 / (d as f64 * d as f64), 0.0);
    let mut acc = CMatrix::zeros(d, d);
    for x in 0..d as u64 {
        for z in 0..d as u64 {
            let mask = PauliMask { x, z, len: m };
            let term = mask.conjugate(rho)?;
            acc += term.matrix() * weight;
        }
    }
    Ok(DensityMatrix::from_valid(acc, rho.dims().to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn x_flips_basis() {
        let mask = PauliMask::from_bits("1", "0").unwrap();
        let s = mask.apply(&PureState::qubit_basis(1, 0).unwrap()).unwrap();
        assert_eq!(s.amplitudes()[1], c(1.0));
    }

    #[test]
    fn z_flips_phase_of_plus() {
        let r = 0.5f64.sqrt();
        let plus = PureState::new(vec![c(r), c(r)], vec![2]).unwrap();
        let mask = PauliMask::from_bits("0", "1").unwrap();
        let s = mask.apply(&plus).unwrap();
        assert!((s.amplitudes()[0] - c(r)).norm() < 1e-12);
        assert!((s.amplitudes()[1] + c(r)).norm() < 1e-12);
    }

    #[test]
    fn xz_on_zero_is_one() {
        // Z fixes |0>, then X flips it.
        let mask = PauliMask::from_bits("1", "1").unwrap();
        let s = mask.apply(&PureState::qubit_basis(1, 0).unwrap()).unwrap();
        assert_eq!(s.amplitudes()[1], c(1.0));
    }

    #[test]
    fn double_application_phase_is_xz_parity() {
        let mut rng = crate::seed::stream(3, 0);
        for _ in 0..16 {
            let psi = crate::haar::haar_qubit_state(3, &mut rng);
            let mask = PauliMask::uniform(3, &mut rng);
            let twice = mask.apply(&mask.apply(&psi).unwrap()).unwrap();
            let sign = if mask.xz_parity() { -1.0 } else { 1.0 };
            let dev = psi
                .amplitudes()
                .iter()
                .zip(twice.amplitudes())
                .map(|(a, b)| (a * sign - b).norm())
                .fold(0.0, f64::max);
            assert!(dev < 1e-12, "mask {mask} dev {dev:e}");
            // As density matrices the round trip is exactly the identity.
            let dd = twice.to_density().max_deviation(&psi.to_density()).unwrap();
            assert!(dd < 1e-12);
        }
    }

    #[test]
    fn inverse_restores_exactly() {
        let mut rng = crate::seed::stream(4, 0);
        let psi = crate::haar::haar_qubit_state(4, &mut rng);
        let mask = PauliMask::uniform(4, &mut rng);
        let back = mask.apply_inverse(&mask.apply(&psi).unwrap()).unwrap();
        assert_eq!(psi.amplitudes(), back.amplitudes());
    }

    #[test]
    fn conjugate_matches_pure_application() {
        let mut rng = crate::seed::stream(5, 0);
        let psi = crate::haar::haar_qubit_state(2, &mut rng);
        let mask = PauliMask::uniform(2, &mut rng);
        let via_state = mask.apply(&psi).unwrap().to_density();
        let via_density = mask.conjugate(&psi.to_density()).unwrap();
        assert!(via_state.max_deviation(&via_density).unwrap() < 1e-12);
    }

    #[test]
    fn qotp_basis_state_m1() {
        let rho = PureState::qubit_basis(1, 0).unwrap().to_density();
        let avg = qotp_average(&rho).unwrap();
        let expect = DensityMatrix::maximally_mixed(vec![2]);
        assert!(avg.max_deviation(&expect).unwrap() < 1e-15);
    }

    #[test]
    fn qotp_random_pure_m2() {
        let mut rng = crate::seed::stream(6, 0);
        let rho = crate::haar::haar_qubit_state(2, &mut rng).to_density();
        let avg = qotp_average(&rho).unwrap();
        let expect = DensityMatrix::maximally_mixed(vec![2, 2]);
        assert!(avg.max_deviation(&expect).unwrap() < 1e-10);
    }

    #[test]
    fn qotp_fixed_point() {
        let rho = DensityMatrix::maximally_mixed(vec![2]);
        let avg = qotp_average(&rho).unwrap();
        assert!(avg.max_deviation(&rho).unwrap() < 1e-15);
    }

    #[test]
    fn qotp_size_cap() {
        let rho = DensityMatrix::maximally_mixed(vec![2; 7]);
        assert!(matches!(qotp_average(&rho), Err(Error::SizeCap(_))));
    }

    #[test]
    fn mask_width_checked() {
        assert!(PauliMask::new(4, 0, 2).is_err());
        assert!(PauliMask::new(0, 4, 2).is_err());
        let mask = PauliMask::new(1, 1, 1).unwrap();
        let s = PureState::qubit_basis(2, 0).unwrap();
        assert!(mask.apply(&s).is_err());
    }
}
