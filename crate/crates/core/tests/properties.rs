use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use szvqe::ansatz::{statevector_of, PuccdParameters};
use szvqe::estimator::{exact_expectation, exact_setting_expectation, measurement_settings, MeasurementPlan};
use szvqe::integrals::{build_hcb_coefficients, parse_fcidump, IntegralSet, SeniorityZeroCoeffs};
use szvqe::oracle::{dense_hcb_hamiltonian, doci_ground, doci_matrix, rhf_energy, SeniorityZeroBasis};
use szvqe::pauli::{group_terms, qubitize, QubitHamiltonian};
use szvqe::simulator::{measure_counts, Gate, ReadoutNoise, StateVector};

fn random_integrals(n: usize, n_e: usize, seed: u64) -> IntegralSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ints = IntegralSet::zeros(n, n_e, rng.random_range(-2.0..2.0)).unwrap();
    for i in 0..n {
        for j in 0..=i {
            ints.set_sei(i, j, rng.random_range(-2.0..0.5));
        }
    }
    for i in 0..n {
        for j in 0..=i {
            for k in 0..n {
                for l in 0..=k {
                    if i * (i + 1) / 2 + j >= k * (k + 1) / 2 + l {
                        ints.set_tei(i, j, k, l, rng.random_range(0.0..0.8));
                    }
                }
            }
        }
    }
    ints
}

fn random_state(n: usize, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<Complex64> = (0..1 << n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(n, amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn random_gate(n: usize, rng: &mut ChaCha8Rng) -> Gate {
    let p = rng.random_range(0..n);
    let mut q = rng.random_range(0..n - 1);
    if q >= p {
        q += 1;
    }
    let theta = rng.random_range(-4.0..4.0);
    match rng.random_range(0..7) {
        0 => Gate::X(p),
        1 => Gate::Givens { p, q, theta },
        2 => Gate::Swap { p, q },
        3 => Gate::GivensSwap { p, q, theta },
        4 => Gate::BasisX(p),
        5 => Gate::BasisY(p),
        _ => Gate::PairRot { p, q, theta },
    }
}

fn sector_problem() -> impl Strategy<Value = (usize, usize, u64)> {
    (1usize..=5).prop_flat_map(|n| (Just(n), 0..=n, any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coefficients_are_exactly_symmetric((n, n_e, seed) in sector_problem()) {
        let c = build_hcb_coefficients(&random_integrals(n, n_e, seed));
        prop_assert_eq!(c.h_r1.transpose(), c.h_r1.clone());
        prop_assert_eq!(c.h_r2.transpose(), c.h_r2.clone());
    }

    #[test]
    fn fcidump_round_trip_keeps_coefficients((n, n_e, seed) in sector_problem()) {
        let ints = random_integrals(n, n_e, seed);
        let back = parse_fcidump(&ints.to_fcidump()).unwrap();
        let (a, b) = (build_hcb_coefficients(&ints), build_hcb_coefficients(&back));
        prop_assert!((a.constant - b.constant).abs() <= 1e-15);
        prop_assert!((&a.h_r1 - &b.h_r1).abs().max() <= 1e-15);
        prop_assert!((&a.h_r2 - &b.h_r2).abs().max() <= 1e-15);
    }

    #[test]
    fn coefficients_scale_linearly((n, n_e, seed) in sector_problem(), lambda in -3.0f64..3.0) {
        let ints = random_integrals(n, n_e, seed);
        let (a, b) = (build_hcb_coefficients(&ints), build_hcb_coefficients(&ints.scaled(lambda)));
        let tol = 1e-12 * (1.0 + lambda.abs());
        prop_assert!((a.constant * lambda - b.constant).abs() <= tol);
        prop_assert!((&a.h_r1 * lambda - &b.h_r1).abs().max() <= tol);
        prop_assert!((&a.h_r2 * lambda - &b.h_r2).abs().max() <= tol);
    }

    #[test]
    fn qubit_hamiltonian_matches_mode_operators((n, n_e, seed) in sector_problem()) {
        let c = build_hcb_coefficients(&random_integrals(n, n_e, seed));
        let dense = qubitize(&c).to_dense();
        let reference = dense_hcb_hamiltonian(&c);
        prop_assert!((&dense - &reference).iter().all(|z| z.norm() < 1e-12));
        prop_assert_eq!(dense.adjoint(), dense.clone());
        for r in 0..dense.nrows() {
            for k in 0..dense.ncols() {
                if (r as u32).count_ones() != (k as u32).count_ones() {
                    prop_assert_eq!(dense[(r, k)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn grouping_is_a_qubitwise_commuting_partition((n, n_e, seed) in sector_problem()) {
        let h = qubitize(&build_hcb_coefficients(&random_integrals(n, n_e, seed)));
        let groups = group_terms(&h).unwrap();
        let mut seen = Vec::new();
        for g in &groups {
            for a in &g.members {
                prop_assert!(g.members.iter().all(|b| a.qubitwise_commutes(b)));
                seen.push(a.clone());
            }
        }
        seen.sort();
        let mut all: Vec<_> = h.terms().iter().map(|t| t.ops.clone()).collect();
        all.sort();
        prop_assert_eq!(seen, all);
    }

    #[test]
    fn hamiltonian_json_round_trip((n, n_e, seed) in sector_problem()) {
        let h = qubitize(&build_hcb_coefficients(&random_integrals(n, n_e, seed)));
        prop_assert_eq!(QubitHamiltonian::from_json(&h.to_json()).unwrap(), h);
    }

    #[test]
    fn sector_block_spectrum_matches_doci((n, n_e, seed) in sector_problem()) {
        let c = build_hcb_coefficients(&random_integrals(n, n_e, seed));
        let basis = SeniorityZeroBasis::new(n, n_e).unwrap();
        let (e, v) = doci_ground(&c, &basis).unwrap();
        let m = doci_matrix(&c, &basis).unwrap();
        prop_assert!((&m * &v - &v * e).norm() < 1e-10);
        let dense = qubitize(&c).to_dense();
        let idx: Vec<usize> = basis.masks().iter().map(|&m| m as usize).collect();
        let block = DMatrix::from_fn(idx.len(), idx.len(), |r, k| dense[(idx[r], idx[k])].re);
        let min = block.symmetric_eigen().eigenvalues.min();
        prop_assert!((min - e).abs() < 1e-12 * (1.0 + e.abs()));
    }

    #[test]
    fn gates_are_unitary(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_gate(3, &mut rng);
        let m = g.matrix();
        let id = DMatrix::<Complex64>::identity(m.nrows(), m.ncols());
        prop_assert!((m.adjoint() * &m - id).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn random_circuits_preserve_norm(n in 2usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = random_state(n, seed ^ 1);
        for _ in 0..100 {
            s.apply(&random_gate(n, &mut rng)).unwrap();
        }
        prop_assert!((s.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn number_conserving_gates_stay_in_sector(n in 2usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = rng.random_range(0..1usize << n);
        let weight = start.count_ones();
        let mut s = StateVector::basis(n, start);
        for _ in 0..30 {
            let g = random_gate(n, &mut rng);
            if matches!(g, Gate::Givens { .. } | Gate::Swap { .. } | Gate::GivensSwap { .. } | Gate::PairRot { .. }) {
                s.apply(&g).unwrap();
            }
        }
        for (b, a) in s.amplitudes().iter().enumerate() {
            if b.count_ones() != weight {
                prop_assert!(a.norm() < 1e-15);
            }
        }
    }

    #[test]
    fn sampling_is_seed_deterministic(n in 1usize..=5, seed in any::<u64>()) {
        let s = random_state(n, seed);
        let noise = ReadoutNoise::new(0.05).unwrap();
        let rot = [Gate::BasisX(0)];
        prop_assert_eq!(measure_counts(&s, &rot, 500, noise, seed).unwrap(), measure_counts(&s, &rot, 500, noise, seed).unwrap());
    }

    #[test]
    fn ansatz_conserves_pairs_and_respects_doci((n, n_e, seed) in sector_problem(), steps in 1usize..4) {
        let ints = random_integrals(n, n_e, seed);
        let c = build_hcb_coefficients(&ints);
        let h = qubitize(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..(n - n_e) * n_e).map(|_| rng.random_range(-3.0..3.0)).collect();
        let params = PuccdParameters::from_vec(n, n_e, &x).unwrap();
        let s = statevector_of(&params, steps).unwrap();
        for (b, a) in s.amplitudes().iter().enumerate() {
            if b.count_ones() as usize != n_e {
                prop_assert!(a.norm() < 1e-12);
            }
        }
        let (e_doci, _) = doci_ground(&c, &SeniorityZeroBasis::new(n, n_e).unwrap()).unwrap();
        prop_assert!(exact_expectation(&s, &h).unwrap() >= e_doci - 1e-10);
        let hf = statevector_of(&PuccdParameters::zeros(n, n_e).unwrap(), steps).unwrap();
        prop_assert!((exact_expectation(&hf, &h).unwrap() - rhf_energy(&c, n_e)).abs() < 1e-10);
    }

    #[test]
    fn pair_rotation_route_matches_direct_hopping(seed in any::<u64>(), w in -1.0f64..1.0) {
        let c = SeniorityZeroCoeffs::new(0.0, DMatrix::from_row_slice(2, 2, &[0.0, 2.0 * w, 2.0 * w, 0.0]), DMatrix::zeros(2, 2)).unwrap();
        let h = qubitize(&c);
        let s = random_state(2, seed);
        let paired = measurement_settings(&h, MeasurementPlan::Paired).unwrap();
        let via: f64 = paired.iter().map(|st| exact_setting_expectation(&s, st).unwrap()).sum();
        prop_assert!((via - exact_expectation(&s, &h).unwrap()).abs() < 1e-10);
    }
}
