//! Property and oracle tests for the linear-algebra core.
//!
//! Monte-Carlo oracles use fixed seeds, so every run is reproducible.

use proptest::prelude::*;
use rayon::prelude::*;

use qstate::{
    fidelity, ginibre_density, haar_qubit_state, haar_state, overlap_trace, qotp_average,
    sym_moment, trace_distance, C64, CMatrix, DensityMatrix, PauliMask, PureState,
};

fn max_entry_dev(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn fidelity_basic_bounds_on_random_pairs() {
    let mut rng = qstate::stream(101, 0);
    for _ in 0..50 {
        let rho = ginibre_density(8, 5, &mut rng);
        let sigma = ginibre_density(8, 8, &mut rng);
        let f = fidelity(&rho, &sigma).unwrap();
        assert!((-1e-9..=1.0 + 1e-9).contains(&f));
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-9);
        // Symmetry within 1e-8.
        let g = fidelity(&sigma, &rho).unwrap();
        assert!((f - g).abs() < 1e-8);
    }
}

#[test]
fn fidelity_against_pure_reference_is_expectation() {
    let mut rng = qstate::stream(102, 0);
    for _ in 0..50 {
        let rho = ginibre_density(8, 4, &mut rng);
        let psi = haar_state(8, &mut rng);
        let f = fidelity(&rho, &psi.to_density()).unwrap();
        let amps = nalgebra::DVector::from_column_slice(psi.amplitudes());
        let expect = (amps.adjoint() * rho.matrix() * &amps)[(0, 0)].re;
        assert!((f - expect).abs() < 1e-8);
    }
}

/// Fidelity never decreases under partial trace: 200 random bipartite pairs.
#[test]
fn fidelity_monotone_under_partial_trace() {
    let mut rng = qstate::stream(103, 0);
    for trial in 0..200 {
        let d = 8; // two subsystems 4 x 2
        let mut rho = ginibre_density(d, 1 + trial % 8, &mut rng);
        let mut sigma = ginibre_density(d, 1 + (trial / 2) % 8, &mut rng);
        rho = DensityMatrix::new(rho.matrix().clone(), vec![4, 2]).unwrap();
        sigma = DensityMatrix::new(sigma.matrix().clone(), vec![4, 2]).unwrap();
        let f_joint = fidelity(&rho, &sigma).unwrap();
        let f_red = fidelity(
            &rho.partial_trace(&[0]).unwrap(),
            &sigma.partial_trace(&[0]).unwrap(),
        )
        .unwrap();
        assert!(
            f_joint <= f_red + 1e-8,
            "trial {trial}: joint {f_joint} > reduced {f_red}"
        );
    }
}

/// F(rho, xi) + F(sigma, xi) <= 1 + sqrt(F(rho, sigma)): 200 random triples.
#[test]
fn two_against_one_fidelity_bound() {
    let mut rng = qstate::stream(104, 0);
    for trial in 0..200 {
        let d = 6;
        let rho = ginibre_density(d, 1 + trial % d, &mut rng);
        let sigma = ginibre_density(d, 1 + (trial / 3) % d, &mut rng);
        let xi = ginibre_density(d, 1 + (trial / 7) % d, &mut rng);
        let lhs = fidelity(&rho, &xi).unwrap() + fidelity(&sigma, &xi).unwrap();
        let rhs = 1.0 + fidelity(&rho, &sigma).unwrap().sqrt();
        assert!(lhs <= rhs + 1e-8, "trial {trial}: {lhs} > {rhs}");
    }
}

/// Tr(rho sigma) <= F(rho, sigma): 200 random pairs.
#[test]
fn overlap_bounded_by_fidelity() {
    let mut rng = qstate::stream(105, 0);
    for trial in 0..200 {
        let d = 8;
        let rho = ginibre_density(d, 1 + trial % d, &mut rng);
        let sigma = ginibre_density(d, 1 + (trial / 5) % d, &mut rng);
        let tr = overlap_trace(&rho, &sigma).unwrap();
        let f = fidelity(&rho, &sigma).unwrap();
        assert!(tr <= f + 1e-8, "trial {trial}: Tr = {tr} > F = {f}");
    }
}

/// The one-time-pad average is exactly maximally mixed at m in {1, 2, 3}.
#[test]
fn qotp_average_is_maximally_mixed() {
    for m in 1..=3usize {
        let mixed = DensityMatrix::maximally_mixed(vec![2; m]);
        let devs: Vec<f64> = (0..20)
            .into_par_iter()
            .map(|i| {
                let mut rng = qstate::stream(106, (m * 100 + i) as u64);
                let rho = if i % 2 == 0 {
                    haar_qubit_state(m, &mut rng).to_density()
                } else {
                    let g = ginibre_density(1 << m, 1 + i % (1 << m), &mut rng);
                    DensityMatrix::new(g.matrix().clone(), vec![2; m]).unwrap()
                };
                let avg = qotp_average(&rho).unwrap();
                avg.max_deviation(&mixed).unwrap()
            })
            .collect();
        let worst = devs.into_iter().fold(0.0f64, f64::max);
        assert!(worst < 1e-10, "m = {m}: worst deviation {worst:e}");
    }
}

/// Empirical first moment of Haar sampling at d = 4.
#[test]
fn haar_first_moment_matches_identity() {
    let n = 100_000usize;
    let d = 4usize;
    let acc = (0..n)
        .into_par_iter()
        .fold(
            || CMatrix::zeros(d, d),
            |mut acc, i| {
                let mut rng = qstate::stream(107, i as u64);
                let s = haar_state(d, &mut rng);
                let a = s.amplitudes();
                for r in 0..d {
                    for c in 0..d {
                        acc[(r, c)] += a[r] * a[c].conj();
                    }
                }
                acc
            },
        )
        .reduce(|| CMatrix::zeros(d, d), |a, b| a + b);
    let mean = acc / C64::new(n as f64, 0.0);
    let expect = CMatrix::identity(d, d) * C64::new(0.25, 0.0);
    let dev = max_entry_dev(&mean, &expect);
    assert!(dev < 0.02, "deviation {dev}");
}

/// Empirical mean of |<0|psi>|^2 at d = 8 is 1/8.
#[test]
fn haar_overlap_mean() {
    let n = 100_000usize;
    let sum: f64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = qstate::stream(108, i as u64);
            haar_state(8, &mut rng).amplitudes()[0].norm_sqr()
        })
        .sum();
    let mean = sum / n as f64;
    assert!((mean - 0.125).abs() < 0.01, "mean {mean}");
}

/// Monte-Carlo oracle for the symmetric-subspace moment formula.
/// Entrywise agreement within 3 standard errors at (d, T) in
/// {(2,2), (2,3), (4,2)}.
#[test]
fn sym_moment_matches_monte_carlo() {
    for (d, t, samples) in [(2usize, 2usize, 100_000usize), (2, 3, 100_000), (4, 2, 100_000)] {
        let total = d.pow(t as u32);
        let exact = sym_moment(d, t).unwrap();

        let (sum, sq_sum) = (0..samples)
            .into_par_iter()
            .fold(
                || (CMatrix::zeros(total, total), nalgebra::DMatrix::<f64>::zeros(total, total)),
                |(mut sum, mut sq), i| {
                    let mut rng = qstate::stream(109 + d as u64 * 10 + t as u64, i as u64);
                    let psi = haar_state(d, &mut rng);
                    // |psi>^{tensor t} amplitudes.
                    let mut amps = vec![C64::new(1.0, 0.0)];
                    for _ in 0..t {
                        let mut next = Vec::with_capacity(amps.len() * d);
                        for a in &amps {
                            for b in psi.amplitudes() {
                                next.push(a * b);
                            }
                        }
                        amps = next;
                    }
                    for r in 0..total {
                        for c in 0..total {
                            let v = amps[r] * amps[c].conj();
                            sum[(r, c)] += v;
                            sq[(r, c)] += (v - exact.matrix()[(r, c)]).norm_sqr();
                        }
                    }
                    (sum, sq)
                },
            )
            .reduce(
                || (CMatrix::zeros(total, total), nalgebra::DMatrix::<f64>::zeros(total, total)),
                |(a1, a2), (b1, b2)| (a1 + b1, a2 + b2),
            );

        let ns = samples as f64;
        let mut worst_sigma = 0.0f64;
        for r in 0..total {
            for c in 0..total {
                let mean = sum[(r, c)] / C64::new(ns, 0.0);
                let dev = (mean - exact.matrix()[(r, c)]).norm();
                let se = (sq_sum[(r, c)] / ns).sqrt() / ns.sqrt();
                if se > 0.0 {
                    worst_sigma = worst_sigma.max(dev / se);
                } else {
                    assert!(dev < 1e-12);
                }
            }
        }
        assert!(
            worst_sigma <= 3.0,
            "(d={d}, T={t}): worst deviation {worst_sigma:.2} standard errors"
        );
    }
}

/// Partial trace preserves trace and positivity.
#[test]
fn partial_trace_preserves_trace_and_psd() {
    let mut rng = qstate::stream(110, 0);
    for _ in 0..50 {
        let g = ginibre_density(8, 4, &mut rng);
        let rho = DensityMatrix::new(g.matrix().clone(), vec![2, 4]).unwrap();
        for keep in [vec![0usize], vec![1usize]] {
            let red = rho.partial_trace(&keep).unwrap();
            assert!((red.trace() - 1.0).abs() < 1e-10);
            let min_eig = qstate::linalg::eigvalsh(red.matrix())
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            assert!(min_eig > -1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Pauli mask round trips through apply/apply_inverse bit-exactly.
    #[test]
    fn mask_roundtrip(seed in 0u64..1_000_000, x in 0u64..16, z in 0u64..16) {
        let mut rng = qstate::stream(seed, 0);
        let psi = haar_qubit_state(4, &mut rng);
        let mask = PauliMask::new(x, z, 4).unwrap();
        let back = mask.apply_inverse(&mask.apply(&psi).unwrap()).unwrap();
        prop_assert_eq!(psi.amplitudes(), back.amplitudes());
    }

    /// Tensor then reduce returns the right factor for product states.
    #[test]
    fn tensor_reduce_roundtrip(seed in 0u64..1_000_000) {
        let mut rng = qstate::stream(seed, 1);
        let a = haar_qubit_state(1, &mut rng);
        let b = haar_qubit_state(2, &mut rng);
        let joint = a.tensor(&b);
        let reduced = joint.reduced(&[1, 2]).unwrap();
        let expect = b.to_density();
        prop_assert!(reduced.max_deviation(&expect).unwrap() < 1e-10);
    }

    /// Trace distance is within [0, 1] and vanishes on identical states.
    #[test]
    fn trace_distance_range(seed in 0u64..1_000_000) {
        let mut rng = qstate::stream(seed, 2);
        let rho = ginibre_density(6, 3, &mut rng);
        let sigma = ginibre_density(6, 6, &mut rng);
        let td = trace_distance(&rho, &sigma).unwrap();
        prop_assert!((0.0..=1.0 + 1e-10).contains(&td));
        prop_assert!(trace_distance(&rho, &rho).unwrap() < 1e-10);
    }

    /// Purity of a uniform mixture of 2^k orthonormal states is 2^-k.
    #[test]
    fn purity_of_orthonormal_mixture(k in 1usize..4) {
        let states: Vec<PureState> =
            (0..1usize << k).map(|i| PureState::qubit_basis(4, i).unwrap()).collect();
        let rho = DensityMatrix::uniform_mixture(&states).unwrap();
        prop_assert!((rho.purity() - (0.5f64).powi(k as i32)).abs() < 1e-12);
    }
}
