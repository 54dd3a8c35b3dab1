//! Pure states as complex amplitude vectors over labeled subsystems.

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::index;
use crate::C64;

/// Tolerance on `|  ||psi||^2 - 1 |` accepted at construction.
pub const NORM_TOL: f64 = 1e-9;

/// A normalized pure state over an ordered list of subsystems.
///
/// Subsystem 0 is the leftmost label and the most significant digit of the
/// amplitude index.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Vec<C64>,
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl PureState {
    /// Build a state from amplitudes, checking shape and normalization.
    pub fn new(amps: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let labels = (0..dims.len()).map(|i| format!("q{i}")).collect();
        Self::with_labels(amps, dims, labels)
    }

    /// As [`PureState::new`] with explicit subsystem names.
    pub fn with_labels(amps: Vec<C64>, dims: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        for &d in &dims {
            if d < 2 {
                return Err(Error::SubsystemTooSmall(d));
            }
        }
        if labels.len() != dims.len() {
            return Err(Error::DimensionMismatch(labels.len(), dims.len()));
        }
        let expect = index::total_dim(&dims);
        if amps.len() != expect {
            return Err(Error::BadShape {
                dims,
                len: amps.len(),
            });
        }
        let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized((n2 - 1.0).abs()));
        }
        Ok(Self { amps, dims, labels })
    }

    /// Normalize the given amplitudes and build the state.
    pub fn normalized(mut amps: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if n2 <= 0.0 {
            return Err(Error::NotNormalized(1.0));
        }
        let inv = 1.0 / n2.sqrt();
        for a in &mut amps {
            *a *= inv;
        }
        Self::new(amps, dims)
    }

    /// Computational-basis state `|index>` with the given subsystem dims.
    pub fn basis(dims: Vec<usize>, basis_index: usize) -> Result<Self> {
        let d = index::total_dim(&dims);
        if basis_index >= d {
            return Err(Error::BadSubsystem(basis_index, d));
        }
        let mut amps = vec![C64::new(0.0, 0.0); d];
        amps[basis_index] = C64::new(1.0, 0.0);
        Self::new(amps, dims)
    }

    /// `m`-qubit computational-basis state `|index>`.
    pub fn qubit_basis(m: usize, basis_index: usize) -> Result<Self> {
        Self::basis(vec![2; m], basis_index)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    /// True when every subsystem is a qubit.
    pub fn is_qubit_register(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.total_dim() != other.total_dim() {
            return Err(Error::DimensionMismatch(self.total_dim(), other.total_dim()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`.
    pub fn overlap(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Kronecker product; dims and labels concatenate in order.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Self { amps, dims, labels }
    }

    /// Density matrix `|psi><psi|`.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Reduced density matrix on the kept subsystems (strictly increasing
    /// indices), tracing out the rest.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        index::check_keep(keep, self.dims.len())?;
        let traced = index::complement(keep, self.dims.len());
        let keep_offsets = index::subset_offsets(&self.dims, keep);
        let trace_offsets = if traced.is_empty() {
            vec![0usize]
        } else {
            index::subset_offsets(&self.dims, &traced)
        };
        let dk = keep_offsets.len();
        let mut mat = crate::CMatrix::zeros(dk, dk);
        for (a, &off_a) in keep_offsets.iter().enumerate() {
            for (b, &off_b) in keep_offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &off_t in &trace_offsets {
                    acc += self.amps[off_a + off_t] * self.amps[off_b + off_t].conj();
                }
                mat[(a, b)] = acc;
            }
        }
        let kept_dims: Vec<usize> = keep.iter().map(|&i| self.dims[i]).collect();
        Ok(DensityMatrix::from_valid(mat, kept_dims))
    }

    /// Sample a computational-basis measurement outcome (Born rule).
    pub fn sample_basis<R: rand::Rng>(&self, rng: &mut R) -> usize {
        let mut u: f64 = rng.gen();
        for (i, a) in self.amps.iter().enumerate() {
            u -= a.norm_sqr();
            if u <= 0.0 {
                return i;
            }
        }
        self.amps.len() - 1
    }

    /// Check the normalization invariant against `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let dev = (self.norm_sqr() - 1.0).abs();
        if dev > tol {
            return Err(Error::NotNormalized(dev));
        }
        Ok(())
    }
}
