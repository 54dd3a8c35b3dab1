//! End-to-end protocol checks against independent enumeration oracles.

use num_complex::Complex64 as C64;

use commitment::{
    binding_bound, build_commit_state, classical_opening_wrap, helstrom_extractor,
    helstrom_success, hiding_states, honest_commit, honest_reveal_verify,
    interactive_variant_commit, sum_binding_sweep, uhlmann_attack, AttackSpec,
};
use generators::{ensemble_density, generate, Family, GeneratorSpec, Key};
use qstate::{
    fidelity, ginibre_density, trace_distance, CMatrix, DensityMatrix, PauliMask,
};

fn spec(family: Family, n: usize, m: usize) -> GeneratorSpec {
    GeneratorSpec::new(family, n, m).unwrap()
}

/// Perfect correctness for both bits, every family, small configurations.
#[test]
fn honest_commit_reveal_accepts_with_probability_one() {
    for family in Family::ALL {
        for (n, m) in [(1usize, 2usize), (2, 4)] {
            let sp = spec(family, n, m);
            for b in [0u8, 1u8] {
                let t = honest_commit(&sp, b).unwrap();
                let p = honest_reveal_verify(&t.opening, b, &sp).unwrap();
                assert!(
                    (p - 1.0).abs() < 1e-9,
                    "{family} (n={n}, m={m}) b={b}: acceptance {p}"
                );
            }
        }
    }
}

/// Cross acceptance |<psi_1|psi_0>|^2 against the direct enumeration
/// (1/(4^m 2^n)) sum_{x,z,k} <P_{x,z} phi_k | phi_k>.
#[test]
fn cross_reveal_matches_enumeration_oracle() {
    for family in [Family::BasisEmbed, Family::BinaryPhase] {
        let sp = spec(family, 1, 2);
        let s0 = build_commit_state(&sp, 0).unwrap();
        let p_cross = honest_reveal_verify(&s0, 1, &sp).unwrap();

        let mut acc = C64::new(0.0, 0.0);
        for x in 0..4u64 {
            for z in 0..4u64 {
                let mask = PauliMask::new(x, z, 2).unwrap();
                for k in Key::all(1) {
                    let phi = generate(&sp, &k).unwrap().output;
                    let masked = mask.apply(&phi).unwrap();
                    acc += masked.inner(&phi).unwrap();
                }
            }
        }
        acc /= C64::new((16 * 2) as f64, 0.0);
        let expect = acc.norm_sqr();
        assert!(
            (p_cross - expect).abs() < 1e-12,
            "{family}: {p_cross} vs oracle {expect}"
        );
    }
    // For basis-embed at (1, 2) the enumeration gives exactly 1/64.
    let sp = spec(Family::BasisEmbed, 1, 2);
    let s0 = build_commit_state(&sp, 0).unwrap();
    let p = honest_reveal_verify(&s0, 1, &sp).unwrap();
    assert!((p - 1.0 / 64.0).abs() < 1e-12, "basis-embed cross accept {p}");
}

/// The structured C-marginal agrees with a dense-joint partial trace at a
/// configuration small enough to materialize.
#[test]
fn structured_marginal_matches_dense_partial_trace() {
    let sp = spec(Family::BinaryPhase, 1, 2);
    for b in [0u8, 1u8] {
        let s = build_commit_state(&sp, b).unwrap();
        let dense = s.to_dense().unwrap();
        let keep: Vec<usize> = (s.r_qubits()..s.r_qubits() + 2).collect();
        let via_dense = dense.reduced(&keep).unwrap();
        let via_structured = s.c_marginal();
        assert!(via_dense.max_deviation(&via_structured).unwrap() < 1e-10);
    }
    // And rho_1 is exactly I/4 there.
    let s1 = build_commit_state(&sp, 1).unwrap();
    let mixed = DensityMatrix::maximally_mixed(vec![2, 2]);
    assert!(s1.c_marginal().max_deviation(&mixed).unwrap() < 1e-10);
}

/// Hiding: rho_1 = I/2^m and rho_0 = ensemble for every family at the four
/// standard configurations.
#[test]
fn hiding_states_identities() {
    for family in Family::ALL {
        for (n, m) in [(1usize, 2usize), (2, 4), (2, 6), (3, 6)] {
            let sp = spec(family, n, m);
            let (rho0, rho1) = hiding_states(&sp).unwrap();
            let mixed = DensityMatrix::maximally_mixed(vec![2; m]);
            let dev1 = rho1.max_deviation(&mixed).unwrap();
            assert!(dev1 < 1e-10, "{family} (n={n}, m={m}): rho_1 dev {dev1:e}");
            let ens = ensemble_density(&sp).unwrap();
            let dev0 = rho0.max_deviation(&ens).unwrap();
            assert!(dev0 < 1e-10, "{family} (n={n}, m={m}): rho_0 dev {dev0:e}");
        }
    }
}

/// Binding chain F <= 2^{n-m} for every family, equality for basis-embed,
/// plus the hiding advantage TD(rho_0, rho_1) closed form.
#[test]
fn binding_chain_and_advantage() {
    for family in Family::ALL {
        for (n, m) in [(1usize, 2usize), (2, 4), (2, 6)] {
            let report = binding_bound(&spec(family, n, m)).unwrap();
            assert!(report.within_rank_bound, "{family} (n={n}, m={m})");
        }
    }
    let sp = spec(Family::BasisEmbed, 2, 4);
    let (rho0, rho1) = hiding_states(&sp).unwrap();
    assert!((trace_distance(&rho0, &rho1).unwrap() - 0.75).abs() < 1e-10);
}

/// Uhlmann contract: achieved p_b equals F(rho_b, sigma_C) for 50 random
/// commitments at (2, 4).
#[test]
fn uhlmann_matches_fidelity_on_random_commitments() {
    let sp = spec(Family::BasisEmbed, 2, 4);
    let (rho0, rho1) = hiding_states(&sp).unwrap();
    for trial in 0..50u64 {
        let mut rng = qstate::stream(0x07_1a, trial);
        let rank = 1 + (trial as usize) % 16;
        let sigma = ginibre_density(16, rank, &mut rng);
        let outcome = uhlmann_attack(&sp, &AttackSpec::new(sigma.clone())).unwrap();
        let f0 = fidelity(&rho0, &sigma).unwrap();
        let f1 = fidelity(&rho1, &sigma).unwrap();
        assert!(
            (outcome.p0 - f0).abs() < 1e-7,
            "trial {trial}: p0 {} vs F {f0}",
            outcome.p0
        );
        assert!(
            (outcome.p1 - f1).abs() < 1e-7,
            "trial {trial}: p1 {} vs F {f1}",
            outcome.p1
        );
        let bound = 1.0 + fidelity(&rho0, &rho1).unwrap().sqrt();
        assert!(outcome.p0 + outcome.p1 <= bound + 1e-7);
    }
}

/// Sweep rows include the canonical candidates and never break the bound.
#[test]
fn sweep_canonical_candidates() {
    let sp = spec(Family::BinaryPhase, 2, 4);
    let (rho0, rho1) = hiding_states(&sp).unwrap();
    let mid = DensityMatrix::new(
        (rho0.matrix() + rho1.matrix()) * C64::new(0.5, 0.0),
        rho0.dims().to_vec(),
    )
    .unwrap();
    let rows = sum_binding_sweep(
        &sp,
        &[
            ("rho0".into(), rho0),
            ("rho1".into(), rho1),
            ("midpoint".into(), mid),
        ],
    )
    .unwrap();
    for row in &rows {
        assert!(row.sum <= row.bound + 1e-7, "{}: {} > {}", row.label, row.sum, row.bound);
    }
}

/// No random two-outcome measurement beats the spectral extractor.
#[test]
fn extractor_beats_random_measurements() {
    let sp = spec(Family::BasisEmbed, 2, 4);
    let (rho0, rho1) = hiding_states(&sp).unwrap();
    let (pi0, pi1) = helstrom_extractor(&sp).unwrap();
    let best = helstrom_success(&pi0, &pi1, &rho0, &rho1).unwrap();
    for trial in 0..100u64 {
        let mut rng = qstate::stream(0x8e15, trial);
        let (e, f) = qstate::random_two_outcome_povm(16, &mut rng).unwrap();
        let success = 0.5 * (e.expectation(&rho0).unwrap() + f.expectation(&rho1).unwrap());
        let success = success.max(1.0 - success);
        assert!(
            success <= best + 1e-8,
            "trial {trial}: random POVM reached {success} > {best}"
        );
    }
}

/// Classical opening at (1, 2): the exact average over all 4^|R| masks of
/// the masked joint state is I/2^|R| tensor rho_b.
#[test]
fn masked_joint_view_is_product_exactly() {
    let sp = spec(Family::BasisEmbed, 1, 2);
    let s = build_commit_state(&sp, 0).unwrap();
    let r = s.r_qubits();
    let joint_dim = (1usize << r) * 4;
    let mut acc = CMatrix::zeros(joint_dim, joint_dim);
    for x in 0..(1u64 << r) {
        for z in 0..(1u64 << r) {
            let mask = PauliMask::new(x, z, r).unwrap();
            let masked = s.apply_r_mask(&mask).unwrap().to_dense().unwrap();
            let amps = masked.amplitudes();
            for row in 0..joint_dim {
                if amps[row].norm_sqr() == 0.0 {
                    continue;
                }
                for col in 0..joint_dim {
                    acc[(row, col)] += amps[row] * amps[col].conj();
                }
            }
        }
    }
    acc /= C64::new((1u64 << (2 * r)) as f64, 0.0);
    let expect = DensityMatrix::maximally_mixed(vec![2; r]).tensor(&s.c_marginal());
    let dev = (&acc - expect.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(dev < 1e-9, "joint view deviates by {dev:e}");
}

/// Mask, unmask, verify: identical to the unmasked protocol.
#[test]
fn masked_protocol_accepts_honest_runs() {
    let sp = spec(Family::BinaryPhase, 1, 2);
    for b in [0u8, 1u8] {
        let s = build_commit_state(&sp, b).unwrap();
        let mut rng = qstate::stream(77, b as u64);
        let (masked, mask) = classical_opening_wrap(&s, &mut rng).unwrap();
        let unmasked = masked.apply_r_mask_inverse(&mask).unwrap();
        let p = honest_reveal_verify(&unmasked, b, &sp).unwrap();
        assert!((p - 1.0).abs() < 1e-9);
    }
}

/// Interactive variant: the b = 1 marginal averaged over all receiver masks
/// is maximally mixed; a fixed mask only permutes the spectrum.
#[test]
fn interactive_variant_marginals() {
    let sp = spec(Family::BinaryPhase, 1, 3);
    let m = sp.m;
    let d = 1usize << m;
    let mut acc = CMatrix::zeros(d, d);
    for x in 0..(1u64 << m) {
        for z in 0..(1u64 << m) {
            let mask = PauliMask::new(x, z, m).unwrap();
            let s = interactive_variant_commit(&sp, 1, &mask).unwrap();
            acc += s.c_marginal().matrix();
        }
    }
    acc /= C64::new((1u64 << (2 * m)) as f64, 0.0);
    let mixed = DensityMatrix::maximally_mixed(vec![2; m]);
    let dev = (&acc - mixed.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(dev < 1e-10, "averaged marginal deviates by {dev:e}");

    // Fixed mask: the conjugated ensemble has the same eigenvalues as rho_0.
    let sp2 = spec(Family::BasisEmbed, 2, 4);
    let mask = PauliMask::new(3, 11, 4).unwrap();
    let fixed = interactive_variant_commit(&sp2, 1, &mask).unwrap().c_marginal();
    let rho0 = interactive_variant_commit(&sp2, 0, &mask).unwrap().c_marginal();
    let mut a = qstate::linalg::eigvalsh(fixed.matrix());
    let mut b = qstate::linalg::eigvalsh(rho0.matrix());
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-10);
    }

    // Fidelity-chain bound for the interactive variant.
    let f = fidelity(&rho0, &DensityMatrix::maximally_mixed(vec![2; 4])).unwrap();
    let bound = 1.0 + (2.0f64).powi(-1).sqrt();
    assert!(1.0 + f.sqrt() <= bound + 1e-9);
}

/// Binding survives the classical-opening wrapper: the masked protocol's
/// acceptance of a wrong bit equals the unmasked one's on every mask.
#[test]
fn masking_preserves_cross_acceptance() {
    let sp = spec(Family::BasisEmbed, 1, 2);
    let s0 = build_commit_state(&sp, 0).unwrap();
    let p_plain = honest_reveal_verify(&s0, 1, &sp).unwrap();
    for trial in 0..32u64 {
        let mut rng = qstate::stream(0xbead, trial);
        let (masked, mask) = classical_opening_wrap(&s0, &mut rng).unwrap();
        let unmasked = masked.apply_r_mask_inverse(&mask).unwrap();
        let p = honest_reveal_verify(&unmasked, 1, &sp).unwrap();
        assert_eq!(p.to_bits(), p_plain.to_bits());
    }
}
