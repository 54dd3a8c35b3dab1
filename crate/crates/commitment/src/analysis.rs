//! Hiding states, the binding fidelity chain, and the spectral extractor.

use num_complex::Complex64 as C64;

use generators::GeneratorSpec;
use qstate::linalg::hermitian_eigen;
use qstate::{fidelity, CMatrix, DensityMatrix, HermitianObservable};

use crate::state::build_commit_state;
use crate::Result;

/// The receiver-side hiding states `(rho_0, rho_1)`, computed as partial
/// traces of the honest commitment states.
///
/// `rho_1` equals `I/2^m` exactly (one-time-pad average) and `rho_0` equals
/// the key ensemble; both identities are asserted by the test suite rather
/// than assumed here.
pub fn hiding_states(spec: &GeneratorSpec) -> Result<(DensityMatrix, DensityMatrix)> {
    let rho0 = build_commit_state(spec, 0)?.c_marginal();
    let rho1 = build_commit_state(spec, 1)?.c_marginal();
    Ok((rho0, rho1))
}

/// The numbers behind statistical sum-binding for one configuration.
#[derive(Debug, Clone)]
pub struct BindingReport {
    /// `F(rho_0, rho_1)`.
    pub fidelity: f64,
    /// The rank bound `2^{n-m}` on that fidelity.
    pub rank_bound: f64,
    /// `1 + sqrt(F)`: no cheating sender can beat this for `p_0 + p_1`.
    pub sum_binding_bound: f64,
    /// Whether `F <= 2^{n-m} + 1e-8` held.
    pub within_rank_bound: bool,
}

/// Evaluate the binding fidelity chain at the given configuration.
pub fn binding_bound(spec: &GeneratorSpec) -> Result<BindingReport> {
    let (rho0, rho1) = hiding_states(spec)?;
    let f = fidelity(&rho0, &rho1)?;
    let rank_bound = spec.rank_fidelity_bound();
    Ok(BindingReport {
        fidelity: f,
        rank_bound,
        sum_binding_bound: 1.0 + f.sqrt(),
        within_rank_bound: f <= rank_bound + 1e-8,
    })
}

/// The two-outcome measurement `(Pi_0, Pi_1)` that optimally distinguishes
/// the hiding states: `Pi_0` projects onto the nonnegative eigenspace of
/// `rho_0 - rho_1` (zero eigenvalues included), `Pi_1 = I - Pi_0`.
pub fn helstrom_extractor(
    spec: &GeneratorSpec,
) -> Result<(HermitianObservable, HermitianObservable)> {
    let (rho0, rho1) = hiding_states(spec)?;
    Ok(helstrom_pair(&rho0, &rho1))
}

/// Build the optimal discrimination pair for two explicit states.
pub fn helstrom_pair(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
) -> (HermitianObservable, HermitianObservable) {
    let diff = rho0.matrix() - rho1.matrix();
    let (values, vectors) = hermitian_eigen(&diff);
    let d = values.len();
    let mut pi0 = CMatrix::zeros(d, d);
    for (i, &v) in values.iter().enumerate() {
        if v < 0.0 {
            continue;
        }
        let col = vectors.column(i);
        for r in 0..d {
            let vr = col[r];
            for c in 0..d {
                pi0[(r, c)] += vr * col[c].conj();
            }
        }
    }
    let pi1 = CMatrix::identity(d, d) - &pi0;
    (
        HermitianObservable::new(hermitize(pi0)).expect("projector is Hermitian"),
        HermitianObservable::new(hermitize(pi1)).expect("projector is Hermitian"),
    )
}

fn hermitize(m: CMatrix) -> CMatrix {
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Success probability of the extractor on an honest commitment to a
/// uniformly random bit: `(Tr(Pi_0 rho_0) + Tr(Pi_1 rho_1)) / 2`.
pub fn helstrom_success(
    pi0: &HermitianObservable,
    pi1: &HermitianObservable,
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
) -> Result<f64> {
    Ok(0.5 * (pi0.expectation(rho0)? + pi1.expectation(rho1)?))
}

/// `1 - success`: how often the extractor misreads an honest commitment.
pub fn extractor_failure_probability(spec: &GeneratorSpec) -> Result<f64> {
    let (rho0, rho1) = hiding_states(spec)?;
    let (pi0, pi1) = helstrom_pair(&rho0, &rho1);
    Ok(1.0 - helstrom_success(&pi0, &pi1, &rho0, &rho1)?)
}
