//! Exact Haar moments via the symmetric-subspace projector.
//!
//! The T-copy average of a Haar-random pure state is the normalized
//! projector onto the symmetric subspace:
//! `int dmu |psi><psi|^{tensor T} = Pi_sym / binom(d + T - 1, T)`.
//! `Pi_sym` is built here by explicit permutation-operator averaging over
//! `S_T`.

use itertools::Itertools;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::{C64, CMatrix};

/// Copy-count cap for the explicit permutation sum.
pub const MAX_COPIES: usize = 4;

/// Total-dimension cap `d^T`.
pub const MAX_TOTAL_DIM: usize = 4096;

/// `binom(d + t - 1, t)`: the dimension of the symmetric subspace of
/// `(C^d)^{tensor t}`.
pub fn sym_dim(d: usize, t: usize) -> usize {
    // Small arguments only; compute in u128 to be safe.
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..t {
        num *= (d + t - 1 - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as usize
}

/// The exact T-copy Haar moment on `(C^d)^{tensor T}`:
/// `Pi_sym / binom(d + T - 1, T)`, a unit-trace density matrix whose
/// rescaled form is idempotent.
pub fn sym_moment(d: usize, t: usize) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::SubsystemTooSmall(d));
    }
    if !(1..=MAX_COPIES).contains(&t) {
        return Err(Error::SizeCap(format!(
            "sym_moment supports 1 <= T <= {MAX_COPIES}, got {t}"
        )));
    }
    let total: usize = d.pow(t as u32);
    if total > MAX_TOTAL_DIM {
        return Err(Error::SizeCap(format!(
            "sym_moment total dimension {total} exceeds {MAX_TOTAL_DIM}"
        )));
    }

    let fact: usize = (1..=t).product();
    let scale = C64::new(
        1.0 / (fact as f64 * sym_dim(d, t) as f64),
        0.0,
    );
    let mut mat = CMatrix::zeros(total, total);
    // Row index: |x_{perm(0)}, ..., x_{perm(t-1)}>, column |x_0, ..., x_{t-1}>.
    let strides: Vec<usize> = (0..t).map(|i| d.pow((t - 1 - i) as u32)).collect();
    for perm in (0..t).permutations(t) {
        for col in 0..total {
            let mut digits = vec![0usize; t];
            let mut rem = col;
            for i in (0..t).rev() {
                digits[i] = rem % d;
                rem /= d;
            }
            let mut row = 0usize;
            for (slot, &src) in perm.iter().enumerate() {
                row += digits[src] * strides[slot];
            }
            mat[(row, col)] += scale;
        }
    }
    Ok(DensityMatrix::from_valid(mat, vec![d; t]))
}
