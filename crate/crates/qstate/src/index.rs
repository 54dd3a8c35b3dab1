//! Multi-index helpers shared by partial traces and tensor products.
//!
//! Row-major layout: subsystem 0 varies slowest (most significant digit).

use crate::error::{Error, Result};

pub(crate) fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Validate a `keep` set: nonempty, strictly increasing, in range.
pub(crate) fn check_keep(keep: &[usize], n_subsystems: usize) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::BadKeepSet);
    }
    for w in keep.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::BadKeepSet);
        }
    }
    for &k in keep {
        if k >= n_subsystems {
            return Err(Error::BadSubsystem(k, n_subsystems));
        }
    }
    Ok(())
}

/// Offsets of every compound index of the subsystems in `subset` into the
/// full index space, all other digits held at zero. The returned vector has
/// one entry per compound value of `subset`, enumerated row-major.
pub(crate) fn subset_offsets(dims: &[usize], subset: &[usize]) -> Vec<usize> {
    let strides = strides(dims);
    let sub_dims: Vec<usize> = subset.iter().map(|&i| dims[i]).collect();
    let count = total_dim(&sub_dims);
    let mut offsets = vec![0usize; count];
    for (flat, offset) in offsets.iter_mut().enumerate() {
        let mut rem = flat;
        let mut total = 0usize;
        for (pos, &sys) in subset.iter().enumerate().rev() {
            let d = sub_dims[pos];
            total += (rem % d) * strides[sys];
            rem /= d;
        }
        *offset = total;
    }
    offsets
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

pub(crate) fn complement(keep: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|i| !keep.contains(i)).collect()
}
