//! Density matrices over explicitly dimensioned subsystems.

use crate::error::{Error, Result};
use crate::index;
use crate::pure::PureState;
use crate::{C64, CMatrix};

/// Entrywise tolerance for the Hermiticity and trace invariants.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Eigenvalues are allowed to dip this far below zero before a state is
/// rejected as non-positive.
pub const PSD_TOL: f64 = 1e-9;

/// A Hermitian, positive-semidefinite, unit-trace matrix with subsystem dims.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Build a density matrix, validating Hermiticity, trace and positivity.
    pub fn new(mat: CMatrix, dims: Vec<usize>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare(mat.nrows(), mat.ncols()));
        }
        let expect = index::total_dim(&dims);
        if mat.nrows() != expect {
            return Err(Error::BadShape {
                dims,
                len: mat.nrows(),
            });
        }
        for &d in &dims {
            if d < 2 {
                return Err(Error::SubsystemTooSmall(d));
            }
        }
        let state = Self { mat, dims };
        state.validate(HERMITIAN_TOL, PSD_TOL)?;
        Ok(state)
    }

    /// Construct without validation, for results that are valid by
    /// construction (partial traces of valid states, convex mixtures, ...).
    pub(crate) fn from_valid(mat: CMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(mat.nrows(), index::total_dim(&dims));
        Self { mat, dims }
    }

    /// `|psi><psi|`.
    pub fn from_pure(psi: &PureState) -> Self {
        let d = psi.total_dim();
        let amps = psi.amplitudes();
        let mat = CMatrix::from_fn(d, d, |r, c| amps[r] * amps[c].conj());
        Self::from_valid(mat, psi.dims().to_vec())
    }

    /// `I / prod(dims)`.
    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d = index::total_dim(&dims);
        let mat = CMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0);
        Self::from_valid(mat, dims)
    }

    /// Uniform mixture of the given pure states (all of equal dimension).
    pub fn uniform_mixture(states: &[PureState]) -> Result<Self> {
        let first = states.first().ok_or(Error::BadKeepSet)?;
        let d = first.total_dim();
        let w = C64::new(1.0 / states.len() as f64, 0.0);
        let mut mat = CMatrix::zeros(d, d);
        for s in states {
            if s.total_dim() != d {
                return Err(Error::DimensionMismatch(s.total_dim(), d));
            }
            let amps = s.amplitudes();
            for r in 0..d {
                if amps[r].norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..d {
                    mat[(r, c)] += w * amps[r] * amps[c].conj();
                }
            }
        }
        Ok(Self::from_valid(mat, first.dims().to_vec()))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.mat.nrows()
    }

    /// True when every subsystem is a qubit.
    pub fn is_qubit_register(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    pub fn trace(&self) -> f64 {
        (0..self.mat.nrows()).map(|i| self.mat[(i, i)].re).sum()
    }

    /// Kronecker product; dims concatenate in order.
    pub fn tensor(&self, other: &Self) -> Self {
        let (da, db) = (self.total_dim(), other.total_dim());
        let mut mat = CMatrix::zeros(da * db, da * db);
        for ra in 0..da {
            for ca in 0..da {
                let w = self.mat[(ra, ca)];
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                for rb in 0..db {
                    for cb in 0..db {
                        mat[(ra * db + rb, ca * db + cb)] = w * other.mat[(rb, cb)];
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_valid(mat, dims)
    }

    /// Reduced state on the kept subsystems (strictly increasing indices).
    /// Trace-preserving; PSD is preserved exactly up to roundoff.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        index::check_keep(keep, self.dims.len())?;
        let traced = index::complement(keep, self.dims.len());
        let keep_offsets = index::subset_offsets(&self.dims, keep);
        let trace_offsets = if traced.is_empty() {
            vec![0usize]
        } else {
            index::subset_offsets(&self.dims, &traced)
        };
        let dk = keep_offsets.len();
        let mut mat = CMatrix::zeros(dk, dk);
        for (a, &off_a) in keep_offsets.iter().enumerate() {
            for (b, &off_b) in keep_offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &off_t in &trace_offsets {
                    acc += self.mat[(off_a + off_t, off_b + off_t)];
                }
                mat[(a, b)] = acc;
            }
        }
        let kept_dims: Vec<usize> = keep.iter().map(|&i| self.dims[i]).collect();
        Ok(Self::from_valid(mat, kept_dims))
    }

    /// `Tr(rho^2)`, in `(0, 1]` for a valid state.
    pub fn purity(&self) -> f64 {
        // Tr(rho^2) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho.
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest entrywise deviation from another matrix of the same size.
    pub fn max_deviation(&self, other: &Self) -> Result<f64> {
        if self.total_dim() != other.total_dim() {
            return Err(Error::DimensionMismatch(self.total_dim(), other.total_dim()));
        }
        Ok((&self.mat - &other.mat).iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// Check all invariants: Hermitian within `herm_tol`, eigenvalues above
    /// `-psd_tol`, trace 1 within `herm_tol`.
    pub fn validate(&self, herm_tol: f64, psd_tol: f64) -> Result<()> {
        let n = self.mat.nrows();
        let mut dev: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                dev = dev.max((self.mat[(r, c)] - self.mat[(c, r)].conj()).norm());
            }
        }
        if dev > herm_tol {
            return Err(Error::NotHermitian(dev));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > herm_tol {
            return Err(Error::BadTrace(tr));
        }
        let min_eig = crate::linalg::eigvalsh(&self.mat)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -psd_tol {
            return Err(Error::NotPsd(min_eig));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_tensor_identity() {
        let half = DensityMatrix::maximally_mixed(vec![2]);
        let quarter = half.tensor(&half);
        let expect = DensityMatrix::maximally_mixed(vec![2, 2]);
        assert!(quarter.max_deviation(&expect).unwrap() < 1e-15);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let r = 0.5f64.sqrt();
        let bell = PureState::new(
            vec![C64::new(r, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(r, 0.0)],
            vec![2, 2],
        )
        .unwrap();
        let rho = bell.to_density();
        let reduced = rho.partial_trace(&[1]).unwrap();
        assert!((reduced.trace() - 1.0).abs() < 1e-12);
        let expect = DensityMatrix::maximally_mixed(vec![2]);
        assert!(reduced.max_deviation(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_keep() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2]);
        assert!(rho.partial_trace(&[]).is_err());
        assert!(rho.partial_trace(&[2]).is_err());
        assert!(rho.partial_trace(&[1, 0]).is_err());
    }

    #[test]
    fn purity_of_mixtures() {
        let pure = PureState::qubit_basis(2, 1).unwrap().to_density();
        assert!((pure.purity() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(vec![2, 2, 2]);
        assert!((mixed.purity() - 0.125).abs() < 1e-12);
    }

    #[test]
    fn uniform_mixture_of_orthonormal_states() {
        let states: Vec<_> = (0..4).map(|i| PureState::qubit_basis(2, i).unwrap()).collect();
        let rho = DensityMatrix::uniform_mixture(&states).unwrap();
        assert!((rho.purity() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn new_rejects_non_hermitian() {
        let mut m = CMatrix::identity(2, 2) * C64::new(0.5, 0.0);
        m[(0, 1)] = C64::new(0.3, 0.0);
        assert!(matches!(DensityMatrix::new(m, vec![2]), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn new_rejects_bad_trace() {
        let m = CMatrix::identity(2, 2);
        assert!(matches!(DensityMatrix::new(m, vec![2]), Err(Error::BadTrace(_))));
    }

    #[test]
    fn new_rejects_negative_eigenvalue() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = C64::new(1.5, 0.0);
        m[(1, 1)] = C64::new(-0.5, 0.0);
        assert!(matches!(DensityMatrix::new(m, vec![2]), Err(Error::NotPsd(_))));
    }
}
