//! Haar sampling and random density matrices.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, HermitianObservable};
use crate::pure::PureState;
use crate::{C64, CMatrix};

fn gaussian_c64<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state of dimension `d`: a complex standard Gaussian
/// vector, normalized.
pub fn haar_state<R: Rng>(d: usize, rng: &mut R) -> PureState {
    assert!(d >= 2, "haar_state needs d >= 2");
    let amps: Vec<C64> = (0..d).map(|_| gaussian_c64(rng)).collect();
    PureState::normalized(amps, vec![d]).expect("gaussian vector is nonzero")
}

/// Haar-random state of `m` qubits (dims `[2; m]`).
pub fn haar_qubit_state<R: Rng>(m: usize, rng: &mut R) -> PureState {
    assert!(m >= 1, "haar_qubit_state needs m >= 1");
    let d = 1usize << m;
    let amps: Vec<C64> = (0..d).map(|_| gaussian_c64(rng)).collect();
    PureState::normalized(amps, vec![2; m]).expect("gaussian vector is nonzero")
}

/// Random rank-`rank` density matrix of dimension `d` (Ginibre ensemble:
/// `G G^dagger` normalized to unit trace).
pub fn ginibre_density<R: Rng>(d: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    assert!(d >= 2 && rank >= 1 && rank <= d);
    let g = CMatrix::from_fn(d, rank, |_, _| gaussian_c64(rng));
    let mut m = &g * g.adjoint();
    let tr: f64 = (0..d).map(|i| m[(i, i)].re).sum();
    m *= C64::new(1.0 / tr, 0.0);
    // Hermitize exactly to kill accumulation asymmetry.
    let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::from_valid(h, vec![d])
}

/// Random two-outcome POVM `(E, I - E)` with `0 <= E <= I`, built by mapping
/// the spectrum of a random Hermitian matrix into `[0, 1]`.
pub fn random_two_outcome_povm<R: Rng>(
    d: usize,
    rng: &mut R,
) -> Result<(HermitianObservable, HermitianObservable)> {
    if d < 2 {
        return Err(Error::SubsystemTooSmall(d));
    }
    let g = CMatrix::from_fn(d, d, |_, _| gaussian_c64(rng));
    let h = (&g + g.adjoint()) * C64::new(0.5, 0.0);
    let (values, vectors) = hermitian_eigen(&h);
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = (hi - lo).max(1e-12);
    let mut e = CMatrix::zeros(d, d);
    for (i, &v) in values.iter().enumerate() {
        let w = C64::new((v - lo) / span, 0.0);
        let col = vectors.column(i);
        for r in 0..d {
            let vr = col[r] * w;
            for c in 0..d {
                e[(r, c)] += vr * col[c].conj();
            }
        }
    }
    let complement = CMatrix::identity(d, d) - &e;
    Ok((
        HermitianObservable::from_valid(e),
        HermitianObservable::from_valid(complement),
    ))
}
