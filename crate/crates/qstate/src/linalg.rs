//! Hermitian eigendecompositions, PSD square roots, fidelity and trace
//! distance.
//!
//! Fidelity follows the squared convention `F(rho, sigma) =
//! (Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2` and is computed as the squared
//! nuclear norm of `sqrt(rho) sqrt(sigma)`, which is the same number with
//! better conditioning than the literal nested root.

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::{C64, CMatrix};

/// Eigenvalues in `[-EIG_CLAMP_TOL, 0)` are clamped to zero; anything below
/// `-EIG_ERROR_TOL` is treated as a logic error rather than roundoff.
pub const EIG_CLAMP_TOL: f64 = 1e-6;
pub const EIG_ERROR_TOL: f64 = 1e-6;

/// A Hermitian matrix wrapper for observables and POVM elements.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianObservable {
    mat: CMatrix,
}

impl HermitianObservable {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare(mat.nrows(), mat.ncols()));
        }
        let mut dev: f64 = 0.0;
        for r in 0..mat.nrows() {
            for c in r..mat.ncols() {
                dev = dev.max((mat[(r, c)] - mat[(c, r)].conj()).norm());
            }
        }
        if dev > 1e-9 {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_valid(mat: CMatrix) -> Self {
        Self { mat }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// `Tr(A rho)`, real for Hermitian `A`.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        if self.dim() != rho.total_dim() {
            return Err(Error::DimensionMismatch(self.dim(), rho.total_dim()));
        }
        Ok(trace_product(&self.mat, rho.matrix()))
    }
}

/// `Tr(A B)` real part (exact for Hermitian products under the trace).
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            acc += (a[(r, c)] * b[(c, r)]).re;
        }
    }
    acc
}

/// Eigenvalues of a Hermitian matrix.
pub fn eigvalsh(mat: &CMatrix) -> Vec<f64> {
    mat.clone().symmetric_eigen().eigenvalues.as_slice().to_vec()
}

/// Full Hermitian eigendecomposition, eigenpairs sorted by descending
/// eigenvalue for deterministic downstream use.
pub fn hermitian_eigen(mat: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = mat.clone().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

fn sqrt_psd_raw(mat: &CMatrix) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(mat);
    let n = values.len();
    let mut roots = vec![0.0f64; n];
    for (i, &v) in values.iter().enumerate() {
        if v < -EIG_ERROR_TOL {
            return Err(Error::NotPsd(v));
        }
        roots[i] = v.max(0.0).sqrt();
    }
    let mut out = CMatrix::zeros(n, n);
    for (i, &root) in roots.iter().enumerate() {
        if root == 0.0 {
            continue;
        }
        let v = vectors.column(i);
        let w = C64::new(root, 0.0);
        for r in 0..n {
            let vr = v[r] * w;
            if vr.norm_sqr() == 0.0 {
                continue;
            }
            for c in 0..n {
                out[(r, c)] += vr * v[c].conj();
            }
        }
    }
    Ok(out)
}

/// PSD square root of a density matrix. Eigenvalues in `[-1e-6, 0)` are
/// clamped to zero; anything lower is an error.
pub fn mat_sqrt_psd(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let root = sqrt_psd_raw(rho.matrix())?;
    Ok(DensityMatrix::from_valid_sqrt(root, rho.dims().to_vec()))
}

impl DensityMatrix {
    // A square root is not itself a density matrix (trace != 1); keep the
    // dims but bypass validation.
    pub(crate) fn from_valid_sqrt(mat: CMatrix, dims: Vec<usize>) -> DensityMatrix {
        DensityMatrix::from_valid(mat, dims)
    }
}

/// PSD square root of a Hermitian observable.
pub fn observable_sqrt(obs: &HermitianObservable) -> Result<HermitianObservable> {
    Ok(HermitianObservable::from_valid(sqrt_psd_raw(obs.matrix())?))
}

/// Squared fidelity `F(rho, sigma) = (Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2`,
/// computed as the squared sum of singular values of
/// `sqrt(rho) sqrt(sigma)`. Symmetric in its arguments.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.total_dim() != sigma.total_dim() {
        return Err(Error::DimensionMismatch(rho.total_dim(), sigma.total_dim()));
    }
    let a = sqrt_psd_raw(rho.matrix())?;
    let b = sqrt_psd_raw(sigma.matrix())?;
    let prod = a * b;
    let nuclear: f64 = prod.svd(false, false).singular_values.iter().sum();
    Ok(nuclear * nuclear)
}

/// Trace distance `0.5 * sum |eigenvalues of rho - sigma|`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.total_dim() != sigma.total_dim() {
        return Err(Error::DimensionMismatch(rho.total_dim(), sigma.total_dim()));
    }
    let diff = rho.matrix() - sigma.matrix();
    Ok(0.5 * eigvalsh(&diff).iter().map(|v| v.abs()).sum::<f64>())
}

/// SWAP-test acceptance probability `(1 + Tr(rho sigma)) / 2`.
pub fn swap_test_prob(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok((1.0 + overlap_trace(rho, sigma)?) / 2.0)
}

/// `Tr(rho sigma)`, real for Hermitian inputs.
pub fn overlap_trace(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.total_dim() != sigma.total_dim() {
        return Err(Error::DimensionMismatch(rho.total_dim(), sigma.total_dim()));
    }
    Ok(trace_product(rho.matrix(), sigma.matrix()))
}
