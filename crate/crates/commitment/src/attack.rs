//! The optimal cheating sender, built explicitly.
//!
//! The adversary commits an arbitrary `sigma_C`, keeping a purification
//! `|Psi>_{ERC}`. To open bit `b` it rotates the purifying registers so the
//! result lines up with `|psi_b>` as well as any unitary can. The rotation
//! comes out of the singular value decomposition of the cross-Gram matrix
//! between the honest state's purification operator and `sqrt(sigma_C)`:
//! writing a state on R tensor C as a matrix `A` (rows R, columns C), the
//! purifications of `sigma_C` inside R are exactly `A~ = W V^dagger
//! sqrt(sigma_C^T)` for isometries `W V^dagger`, and the overlap
//! `|<psi_b|psi~>|` is maximized by the singular vectors of
//! `sqrt(sigma_C^T) A_b^dagger`. The achieved opening probability then
//! matches `F(rho_b, sigma_C)`, which is the content of Uhlmann's theorem;
//! here the rotated state is constructed and measured, so the equality is a
//! test outcome, not an assumption.
//!
//! Everything runs in the sparse-in-R representation: the honest state's
//! matrix `A_b` has one structured row per R label, and the singular vectors
//! are streamed over entries instead of being materialized on the full R
//! space.

use num_complex::Complex64 as C64;

use generators::GeneratorSpec;
use qstate::linalg::hermitian_eigen;
use qstate::{fidelity, CMatrix, DensityMatrix};

use crate::state::{build_commit_state, CommitEntry, StructuredCommitState};
use crate::{Error, Result};

/// Eigenvalues of the cross-Gram square below this fraction of the largest
/// one are treated as exact zeros. Roundoff on a unit-scale Hermitian
/// eigenproblem sits near 1e-16, so genuine directions clear this by orders
/// of magnitude at desk scale.
const RELATIVE_EIG_CUTOFF: f64 = 1e-10;

/// A cheating-sender target: the commitment `sigma_C` it will send, plus a
/// cap on the purifying environment it may use.
#[derive(Debug, Clone)]
pub struct AttackSpec {
    pub sigma_c: DensityMatrix,
    pub environment_cap: usize,
}

impl AttackSpec {
    /// Environment capped at `2^m`, always sufficient since
    /// `rank(sigma_C) <= 2^m`.
    pub fn new(sigma_c: DensityMatrix) -> Self {
        let cap = sigma_c.total_dim();
        Self {
            sigma_c,
            environment_cap: cap,
        }
    }
}

/// Achieved opening probabilities of the optimal attack.
#[derive(Debug, Clone, Copy)]
pub struct UhlmannOutcome {
    pub p0: f64,
    pub p1: f64,
}

/// Run the optimal attack for both bits.
pub fn uhlmann_attack(spec: &GeneratorSpec, attack: &AttackSpec) -> Result<UhlmannOutcome> {
    let p0 = uhlmann_solve(spec, 0, attack, false)?.0;
    let p1 = uhlmann_solve(spec, 1, attack, false)?.0;
    Ok(UhlmannOutcome { p0, p1 })
}

/// Build the rotated purification itself (the state the receiver would
/// verify when the cheating sender opens `b`), along with its acceptance
/// probability.
pub fn uhlmann_purification(
    spec: &GeneratorSpec,
    b: u8,
    attack: &AttackSpec,
) -> Result<(f64, StructuredCommitState)> {
    let (p, state) = uhlmann_solve(spec, b, attack, true)?;
    Ok((p, state.expect("state requested")))
}

fn uhlmann_solve(
    spec: &GeneratorSpec,
    b: u8,
    attack: &AttackSpec,
    build_state: bool,
) -> Result<(f64, Option<StructuredCommitState>)> {
    let sigma = &attack.sigma_c;
    let d = 1usize << spec.m;
    if sigma.total_dim() != d {
        return Err(Error::State(qstate::Error::DimensionMismatch(
            sigma.total_dim(),
            d,
        )));
    }
    sigma.validate(1e-9, 1e-6).map_err(Error::State)?;
    // Spectrum of sigma^T = conj(sigma): same eigenvalues as sigma, and the
    // eigenvectors double as the support basis needed below.
    let sigma_t = sigma.matrix().map(|z| z.conj());
    let (sig_values, sig_vectors) = hermitian_eigen(&sigma_t);
    let rank = sig_values.iter().filter(|&&v| v > 1e-9).count();
    if rank > attack.environment_cap {
        return Err(Error::EnvironmentCap {
            rank,
            cap: attack.environment_cap,
        });
    }

    let honest = build_commit_state(spec, b)?;
    let s = sqrt_hermitian_psd(&sigma_t)?;

    // K = s rho_b^T s has eigenvalues s_i^2, the squared singular values of
    // the cross-Gram matrix M = sqrt(sigma^T) A_b^dagger.
    let rho_b = honest.c_marginal();
    let rho_t = rho_b.matrix().map(|z| z.conj());
    let k = &s * rho_t * &s;
    let (values, vectors) = hermitian_eigen(&k);

    struct Direction {
        weight: f64,  // s_i; zero for completion directions
        v: Vec<C64>,  // left singular vector on C'
        g: Vec<C64>,  // row v_i^dagger s, the C-side component of psi~
    }
    let row_times_s = |v: &[C64]| -> Vec<C64> {
        (0..d)
            .map(|c| {
                let mut acc = C64::new(0.0, 0.0);
                for (j, vj) in v.iter().enumerate() {
                    acc += vj.conj() * s[(j, c)];
                }
                acc
            })
            .collect()
    };
    let lam_max = values.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = lam_max * RELATIVE_EIG_CUTOFF;
    let mut directions = Vec::new();
    for (i, &lam) in values.iter().enumerate() {
        if lam <= cutoff {
            continue;
        }
        let weight = lam.sqrt();
        let v: Vec<C64> = (0..d).map(|r| vectors[(r, i)]).collect();
        let g = row_times_s(&v);
        directions.push(Direction { weight, v, g });
    }

    // Stream the overlap <psi_b|psi~> over honest entries. Per entry:
    //   u_e = s conj(c_e),  w_i(e) = (a_e / s_i) <u_e|v_i>,
    //   <psi_b|psi~> += conj(a_e) sum_i w_i(e) <c_e|g_i>.
    // Completion directions (below) have zero cross-Gram weight and do not
    // contribute to the overlap, so the probability path can skip them.
    let entries = honest.entries();
    let e_count = entries.len();
    let mut total = C64::new(0.0, 0.0);
    let mut w_cols: Vec<Vec<C64>> = if build_state {
        vec![vec![C64::new(0.0, 0.0); e_count]; directions.len()]
    } else {
        Vec::new()
    };
    let mut u = vec![C64::new(0.0, 0.0); d];
    for (e_idx, e) in entries.iter().enumerate() {
        for (j, slot) in u.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..d {
                acc += s[(j, c)] * e.c_state[c].conj();
            }
            *slot = acc;
        }
        for (i, dir) in directions.iter().enumerate() {
            let u_dot_v: C64 = u.iter().zip(&dir.v).map(|(a, b)| a.conj() * b).sum();
            let w = e.amplitude * u_dot_v / dir.weight;
            let c_dot_g: C64 = e.c_state.iter().zip(&dir.g).map(|(a, b)| a.conj() * b).sum();
            total += e.amplitude.conj() * w * c_dot_g;
            if build_state {
                w_cols[i][e_idx] = w;
            }
        }
    }
    let p_streamed = total.norm_sqr();

    if !build_state {
        return Ok((p_streamed, None));
    }

    // The isometry W V^dagger only covers the row space of M. Complete it
    // over the rest of sigma's support so the rotated state is a genuine
    // purification: extra directions pair an unused orthonormal R vector
    // with the leftover support basis of sigma^T.
    let mut v_perp: Vec<Vec<C64>> = Vec::new();
    for (j, &lam) in sig_values.iter().enumerate() {
        if lam <= 1e-9 {
            continue;
        }
        let mut cand: Vec<C64> = (0..d).map(|r| sig_vectors[(r, j)]).collect();
        for basis in directions.iter().map(|dir| &dir.v).chain(v_perp.iter()) {
            let proj: C64 = basis.iter().zip(&cand).map(|(a, b)| a.conj() * b).sum();
            for (c, bv) in cand.iter_mut().zip(basis) {
                *c -= proj * bv;
            }
        }
        let norm2: f64 = cand.iter().map(|z| z.norm_sqr()).sum();
        if norm2 > 1e-12 {
            let inv = 1.0 / norm2.sqrt();
            for c in &mut cand {
                *c *= inv;
            }
            v_perp.push(cand);
        }
    }
    let mut w_perp: Vec<Vec<C64>> = Vec::new();
    for pos in 0..e_count {
        if w_perp.len() == v_perp.len() {
            break;
        }
        let mut cand = vec![C64::new(0.0, 0.0); e_count];
        cand[pos] = C64::new(1.0, 0.0);
        for basis in w_cols.iter().chain(w_perp.iter()) {
            let proj: C64 = basis.iter().zip(&cand).map(|(a, b)| a.conj() * b).sum();
            for (c, bv) in cand.iter_mut().zip(basis) {
                *c -= proj * bv;
            }
        }
        let norm2: f64 = cand.iter().map(|z| z.norm_sqr()).sum();
        if norm2 > 1e-6 {
            let inv = 1.0 / norm2.sqrt();
            for c in &mut cand {
                *c *= inv;
            }
            w_perp.push(cand);
        }
    }
    if w_perp.len() < v_perp.len() {
        return Err(Error::Shape(
            "R register too small to complete the purification isometry".into(),
        ));
    }
    let g_perp: Vec<Vec<C64>> = v_perp.iter().map(|v| row_times_s(v)).collect();

    let mut rebuilt: Vec<CommitEntry> = Vec::new();
    for (e_idx, e) in entries.iter().enumerate() {
        let mut c_new = vec![C64::new(0.0, 0.0); d];
        for (i, dir) in directions.iter().enumerate() {
            let w = w_cols[i][e_idx];
            if w.norm_sqr() == 0.0 {
                continue;
            }
            for (slot, gj) in c_new.iter_mut().zip(&dir.g) {
                *slot += w * gj;
            }
        }
        for (wp, gp) in w_perp.iter().zip(&g_perp) {
            let w = wp[e_idx];
            if w.norm_sqr() == 0.0 {
                continue;
            }
            for (slot, gj) in c_new.iter_mut().zip(gp) {
                *slot += w * gj;
            }
        }
        let norm2: f64 = c_new.iter().map(|z| z.norm_sqr()).sum();
        if norm2 > 1e-28 {
            let norm = norm2.sqrt();
            for z in &mut c_new {
                *z /= norm;
            }
            rebuilt.push(CommitEntry {
                r_label: e.r_label,
                amplitude: C64::new(norm, 0.0),
                c_state: c_new,
            });
        }
    }
    let state = StructuredCommitState::new(spec.m, spec.n, honest.r_qubits(), rebuilt)?;
    // Achieved probability, measured on the constructed state itself.
    let p_built = honest.inner(&state)?.norm_sqr();
    debug_assert!((p_built - p_streamed).abs() < 1e-9);
    Ok((p_built, Some(state)))
}

fn sqrt_hermitian_psd(mat: &CMatrix) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(mat);
    let n = values.len();
    let mut out = CMatrix::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        if v < -1e-6 {
            return Err(Error::State(qstate::Error::NotPsd(v)));
        }
        let w = C64::new(v.max(0.0).sqrt(), 0.0);
        if w.re == 0.0 {
            continue;
        }
        let col = vectors.column(i);
        for r in 0..n {
            let vr = col[r] * w;
            for c in 0..n {
                out[(r, c)] += vr * col[c].conj();
            }
        }
    }
    Ok(out)
}

/// One row of a sum-binding sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub label: String,
    pub p0: f64,
    pub p1: f64,
    pub sum: f64,
    /// `1 + sqrt(F(rho_0, rho_1))`, the bound no row may exceed.
    pub bound: f64,
    pub f0: f64,
    pub f1: f64,
}

/// Run the optimal attack against every candidate commitment and record the
/// achieved probabilities next to the sum-binding bound. An empty candidate
/// list yields an empty report.
pub fn sum_binding_sweep(
    spec: &GeneratorSpec,
    candidates: &[(String, DensityMatrix)],
) -> Result<Vec<SweepRow>> {
    if candidates.is_empty() {
        return Ok(Vec::new());
    }
    let (rho0, rho1) = crate::analysis::hiding_states(spec)?;
    let bound = 1.0 + fidelity(&rho0, &rho1)?.sqrt();
    let mut rows = Vec::with_capacity(candidates.len());
    for (label, sigma) in candidates {
        let attack = AttackSpec::new(sigma.clone());
        let outcome = uhlmann_attack(spec, &attack)?;
        rows.push(SweepRow {
            label: label.clone(),
            p0: outcome.p0,
            p1: outcome.p1,
            sum: outcome.p0 + outcome.p1,
            bound,
            f0: fidelity(&rho0, sigma)?,
            f1: fidelity(&rho1, sigma)?,
        });
    }
    Ok(rows)
}
