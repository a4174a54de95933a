use std::collections::HashMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::qstate::random::{random_density_matrix, random_pure_state};
use crate::qstate::{channels_equal, choi_matrix, BitString, CMatrix, DensityMatrix, QuantumChannel, TOLERANCE};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

// Counts n×n bit matrices whose induced map on {0,1}^n is a bijection.
fn brute_force_invertible_count(n: usize) -> u64 {
    let mut count = 0;
    for packed in 0u64..1 << (n * n) {
        let image = |x: u64| -> u64 {
            (0..n).fold(0, |acc, r| {
                let row = (packed >> (n * (n - 1 - r))) & ((1 << n) - 1);
                (acc << 1) | ((row & x).count_ones() as u64 & 1)
            })
        };
        let mut seen = vec![false; 1 << n];
        let mut ok = true;
        for x in 0..1u64 << n {
            let y = image(x) as usize;
            if seen[y] {
                ok = false;
                break;
            }
            seen[y] = true;
        }
        count += ok as u64;
    }
    count
}

#[test]
fn clifford_group_has_24_distinct_elements() {
    let group = enumerate_single_qubit_cliffords();
    assert_eq!(group.len(), 24);
    assert!(group.iter().any(|c| c.matrix().same_channel(&crate::qstate::UnitaryOp::identity(1))));
    for (i, a) in group.iter().enumerate() {
        assert_eq!(a.index(), i);
        for b in &group[i + 1..] {
            let gap = max_abs(&(choi_matrix(&a.matrix().to_channel()) - choi_matrix(&b.matrix().to_channel())));
            assert!(gap > 1e-3);
        }
    }
}

#[test]
fn clifford_group_is_closed() {
    let group = enumerate_single_qubit_cliffords();
    let mut table = vec![vec![usize::MAX; 24]; 24];
    for a in &group {
        for b in &group {
            let prod = a.matrix().mul(b.matrix()).unwrap();
            let hits: Vec<usize> = group
                .iter()
                .filter(|c| channels_equal(&c.matrix().to_channel(), &prod.to_channel()))
                .map(|c| c.index())
                .collect();
            assert_eq!(hits.len(), 1);
            table[a.index()][b.index()] = hits[0];
        }
        let inv = a.inverse();
        assert!(a.compose(&inv).matrix().same_channel(&crate::qstate::UnitaryOp::identity(1)));
    }
    // every row of the Cayley table is a permutation
    for row in &table {
        let mut sorted = row.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..24).collect::<Vec<_>>());
    }
}

#[test]
fn cliffords_normalise_the_paulis() {
    for c in clifford_group() {
        for p in [Pauli1::X, Pauli1::Z] {
            let (_, q) = c.conjugate_pauli(p).expect("image is a signed Pauli");
            assert_ne!(q, Pauli1::I);
        }
    }
    let sh = SingleQubitClifford::phase().compose(&SingleQubitClifford::hadamard());
    let state = sh.matrix().prepare_basis(0).unwrap();
    assert!(state.approx_eq(&DensityMatrix::plus_i()));
}

#[test]
fn gl_counts_match_brute_force() {
    for (n, expected) in [(1, 1), (2, 6), (3, 168)] {
        assert_eq!(count_gf2_invertible(n).unwrap(), expected);
        assert_eq!(brute_force_invertible_count(n), expected);
        assert_eq!(enumerate_gf2_invertible(n).unwrap().len() as u64, expected);
    }
    assert_eq!(count_gf2_invertible(4).unwrap(), 20160);
    assert_eq!(enumerate_gf2_invertible(4).unwrap().len(), 20160);
    assert_eq!(count_gf2_invertible(5).unwrap(), 9_999_360);
    assert!(count_gf2_invertible(0).is_err());
    assert!(count_gf2_invertible(6).is_err());
}

#[test]
fn gl_sampler_is_uniform_at_n2() {
    let mut r = rng(11);
    let n_samples = 60_000;
    let mut counts: HashMap<GF2InvertibleMap, usize> = HashMap::new();
    for _ in 0..n_samples {
        let g = sample_gf2_invertible(2, &mut r).unwrap();
        assert!(g.is_invertible());
        assert_eq!(g.apply_value(0), 0);
        *counts.entry(g).or_default() += 1;
    }
    assert_eq!(counts.len(), 6);
    let p = 1.0 / 6.0;
    let sigma = (p * (1.0 - p) / n_samples as f64).sqrt();
    let mut chi2 = 0.0;
    for &c in counts.values() {
        let freq = c as f64 / n_samples as f64;
        assert!((freq - p).abs() < 3.0 * sigma, "frequency {freq}");
        let e = n_samples as f64 * p;
        chi2 += (c as f64 - e).powi(2) / e;
    }
    // 5 degrees of freedom, 99.9% quantile is 20.5
    assert!(chi2 < 20.5);
    for _ in 0..50 {
        assert_eq!(sample_gf2_invertible(1, &mut r).unwrap(), GF2InvertibleMap::identity(1).unwrap());
    }
}

#[test]
fn permutation_unitaries() {
    let id = GF2InvertibleMap::identity(3).unwrap();
    assert!(id.permutation_unitary().same_channel(&crate::qstate::UnitaryOp::identity(3)));
    let swap = GF2InvertibleMap::from_matrix(&[vec![false, true], vec![true, false]]).unwrap();
    let u = swap.permutation_unitary();
    for (x, y) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        assert_eq!(u.matrix()[(y, x)].re, 1.0);
    }
    let mut r = rng(12);
    for n in 1..=5 {
        let g = sample_gf2_invertible(n, &mut r).unwrap();
        let zero = DensityMatrix::zero_state(n).unwrap();
        let out = zero.apply_unitary(&g.permutation_unitary(), &(0..n).collect::<Vec<_>>()).unwrap();
        assert!(out.approx_eq(&zero));
        let inv = g.inverse();
        assert_eq!(g.compose(&inv).unwrap(), GF2InvertibleMap::identity(n).unwrap());
    }
    // g(x) = x_1 b_1 + ... + x_n b_n with x_1 the leading bit
    let g = GF2InvertibleMap::from_basis(2, vec![0b11, 0b01]).unwrap();
    assert_eq!(g.apply(&"10".parse().unwrap()).unwrap().to_string(), "11");
    assert_eq!(g.apply(&"01".parse().unwrap()).unwrap().to_string(), "01");
    assert!(GF2InvertibleMap::from_basis(2, vec![0b11, 0b11]).is_err());
}

#[test]
fn rotation_examples() {
    let id = rotation_z(Angle::new(0).unwrap());
    assert!(channels_equal(&id.to_channel(), &QuantumChannel::identity(1)));
    let flipped = DensityMatrix::plus()
        .apply_unitary(&rotation_z(Angle::new(4).unwrap()), &[0])
        .unwrap();
    assert!(flipped.approx_eq(&DensityMatrix::minus()));
    for theta in Angle::all() {
        let lhs = pauli_x()
            .mul(&rotation_z(theta.negated()))
            .unwrap()
            .mul(&pauli_x())
            .unwrap();
        assert!(lhs.same_channel(&rotation_z(theta)));
        let out = DensityMatrix::plus().apply_unitary(&rotation_z(theta), &[0]).unwrap();
        assert!(out.approx_eq(&DensityMatrix::equatorial(theta.radians())));
    }
    assert!(Angle::new(8).is_err());
    assert!(pauli_z_power(false).same_channel(&crate::qstate::UnitaryOp::identity(1)));
    assert!(pauli_x_power(true).same_channel(&pauli_x()));
}

#[test]
fn haar_first_moment_is_maximally_mixed() {
    let mut r = rng(13);
    let n = 100_000;
    let mut acc = CMatrix::zeros(2, 2);
    for _ in 0..n {
        let u = haar_sample_1q(&mut r);
        acc += u.prepare_basis(0).unwrap().into_matrix();
    }
    let avg = DensityMatrix::new(acc / crate::qstate::cplx(n as f64, 0.0)).unwrap();
    let d = avg.trace_distance(&DensityMatrix::maximally_mixed(1).unwrap()).unwrap();
    assert!(d < 0.01, "distance {d}");
    let u = haar_sample_1q(&mut r);
    assert!(u.mul(&u.adjoint()).unwrap().same_channel(&crate::qstate::UnitaryOp::identity(1)));
}

#[test]
fn frame_potentials_identify_design_strength() {
    // Haar values on one qubit are the Catalan numbers 1, 2, 5, 14, 42
    let design = icosahedral_design();
    assert_eq!(design.len(), 60);
    for (t, haar) in [(1, 1.0), (2, 2.0), (3, 5.0), (4, 14.0), (5, 42.0)] {
        assert!((frame_potential(design, t) - haar).abs() < 1e-8, "t = {t}");
    }
    let cliffords: Vec<_> = clifford_group().iter().map(|c| c.matrix().clone()).collect();
    assert!((frame_potential(&cliffords, 2) - 2.0).abs() < 1e-8);
    assert!((frame_potential(&cliffords, 3) - 5.0).abs() < 1e-8);
    assert!(frame_potential(&cliffords, 4) > 14.0 + 1e-3);
}

#[test]
fn dephasing_examples() {
    let out = dephasing_twirl(&DensityMatrix::plus(), &[0]).unwrap();
    assert!(out.approx_eq(&DensityMatrix::maximally_mixed(1).unwrap()));
    let diag = DensityMatrix::mixture(&[
        (0.3, &DensityMatrix::basis(2, 1).unwrap()),
        (0.7, &DensityMatrix::basis(2, 2).unwrap()),
    ])
    .unwrap();
    assert!(dephasing_twirl(&diag, &[0, 1]).unwrap().approx_eq(&diag));
    let rho = random_density_matrix(3, &mut rng(14)).unwrap();
    let out = dephasing_twirl(&rho, &[0, 2]).unwrap();
    for i in 0..8 {
        for j in 0..8 {
            let same = (i >> 2) == (j >> 2) && (i & 1) == (j & 1);
            let expected = if same { rho.entry(i, j) } else { crate::qstate::cplx(0.0, 0.0) };
            assert!((out.entry(i, j) - expected).norm() < TOLERANCE);
        }
    }
}

#[test]
fn gf2_twirl_examples() {
    let zero = DensityMatrix::zero_state(3).unwrap();
    assert!(gf2_linear_twirl(&zero, &[0, 1, 2]).unwrap().approx_eq(&zero));
    let out = gf2_linear_twirl(&DensityMatrix::basis(2, 1).unwrap(), &[0, 1]).unwrap();
    for s in 0..4 {
        let expected = if s == 0 { 0.0 } else { 1.0 / 3.0 };
        assert!((out.entry(s, s).re - expected).abs() < TOLERANCE);
    }
    let input = DensityMatrix::mixture(&[
        (0.5, &DensityMatrix::basis(3, 0).unwrap()),
        (0.5, &DensityMatrix::basis(3, 4).unwrap()),
    ])
    .unwrap();
    let exact = gf2_linear_twirl_enumerated(&input, &[0, 1, 2]).unwrap();
    assert!(gf2_linear_twirl(&input, &[0, 1, 2]).unwrap().approx_eq(&exact));
    assert!((exact.entry(0, 0).re - 0.5).abs() < TOLERANCE);
    for s in 1..8 {
        assert!((exact.entry(s, s).re - 0.5 / 7.0).abs() < TOLERANCE);
    }
    assert!(matches!(
        gf2_linear_twirl(&DensityMatrix::plus(), &[0]),
        Err(crate::Error::Precondition(_))
    ));
}

#[test]
fn gf2_orbit_formula_matches_enumeration_with_ancilla() {
    let mut r = rng(15);
    for n in 1..=3 {
        let wires: Vec<usize> = (1..=n).collect();
        let rho = random_density_matrix(n + 1, &mut r).unwrap();
        let diag = dephasing_twirl(&rho, &wires).unwrap();
        let fast = gf2_linear_twirl(&diag, &wires).unwrap();
        let slow = gf2_linear_twirl_enumerated(&diag, &wires).unwrap();
        assert!(fast.approx_eq(&slow), "n = {n}");
    }
}

#[test]
fn clifford_twirl_examples() {
    let probs = clifford_twirl_channel(&QuantumChannel::identity(1)).unwrap();
    assert!((probs.p_i - 1.0).abs() < TOLERANCE);
    let probs = clifford_twirl_channel(&pauli_x().to_channel()).unwrap();
    for p in [probs.p_x, probs.p_y, probs.p_z] {
        assert!((p - 1.0 / 3.0).abs() < TOLERANCE);
    }
    assert!(probs.p_i.abs() < TOLERANCE);
    // the twirl preserves entanglement fidelity |Tr U|^2 / 4
    let mut r = rng(16);
    for _ in 0..20 {
        let u = haar_sample_1q(&mut r);
        let probs = clifford_twirl_channel(&u.to_channel()).unwrap();
        let fid = u.matrix().trace().norm_sqr() / 4.0;
        assert!((probs.p_i - fid).abs() < TOLERANCE);
        assert!(probs.is_depolarizing());
        let twirled = clifford_twirl(&u.to_channel()).unwrap();
        assert!(channels_equal(&twirled, &pauli_channel(&probs)));
    }
}

#[test]
fn depolarizing_is_unitarily_covariant() {
    let mut r = rng(17);
    let d = depolarizing_channel(1.0 / 3.0).unwrap();
    let check = haar_twirl_equals_clifford_twirl(&d, 1000, &mut r).unwrap();
    assert!(check.holds(), "{check:?}");
    let check = haar_twirl_equals_clifford_twirl(&QuantumChannel::identity(1), 10, &mut r).unwrap();
    assert!(check.holds());
    assert!((check.probs.p_i - 1.0).abs() < TOLERANCE);
    // a non-unital channel: amplitude damping with gamma = 0.3
    let g: f64 = 0.3;
    let k0 = CMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, (1.0 - g).sqrt()].map(|x| crate::qstate::cplx(x, 0.0)));
    let k1 = CMatrix::from_row_slice(2, 2, &[0.0, g.sqrt(), 0.0, 0.0].map(|x| crate::qstate::cplx(x, 0.0)));
    let damp = QuantumChannel::new(vec![k0, k1]).unwrap();
    let check = haar_twirl_equals_clifford_twirl(&damp, 100, &mut r).unwrap();
    assert!(check.holds(), "{check:?}");
}

#[test]
fn operation_groups() {
    assert_eq!(OperationGroup::Clifford1q.order(), Some(24));
    assert_eq!(OperationGroup::ZRotations.order(), Some(8));
    assert_eq!(OperationGroup::XAndZRotations.order(), Some(16));
    assert_eq!(OperationGroup::FullUnitary1q.order(), None);
    assert!(OperationGroup::Clifford1q.contains(&hadamard()));
    assert!(!OperationGroup::ZRotations.contains(&hadamard()));
    assert!(OperationGroup::ZRotations.contains(&rotation_z(Angle::new(3).unwrap())));
    assert!(OperationGroup::XAndZRotations.contains(&pauli_x()));
    assert!(OperationGroup::FullUnitary1q.contains(&haar_sample_1q(&mut rng(18))));
    assert!(OperationGroup::explicit(vec![crate::qstate::UnitaryOp::identity(1), pauli_x()]).is_ok());
    assert!(OperationGroup::explicit(vec![crate::qstate::UnitaryOp::identity(1), hadamard(), phase_s()]).is_err());
    assert_eq!("clifford-1q".parse::<OperationGroup>().unwrap(), OperationGroup::Clifford1q);
    let mut r = rng(19);
    for _ in 0..20 {
        assert!(OperationGroup::XAndZRotations.contains(&OperationGroup::XAndZRotations.sample(&mut r)));
    }
}

#[test]
fn pauli_strings() {
    let p = PauliOp::new("10".parse().unwrap(), "11".parse().unwrap()).unwrap();
    assert_eq!(p.to_string(), "YZ");
    let expected = pauli_y().tensor(&pauli_z()).unwrap();
    assert!(p.unitary().same_channel(&expected));
    assert_eq!(PauliOp::all(2).len(), 16);
    let x = x_string(&"101".parse::<BitString>().unwrap());
    let out = DensityMatrix::zero_state(3).unwrap().apply_unitary(&x, &[0, 1, 2]).unwrap();
    assert!(out.approx_eq(&DensityMatrix::basis(3, 5).unwrap()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dephasing_is_idempotent(seed in any::<u64>(), mask in 1u8..8) {
        let rho = random_density_matrix(3, &mut rng(seed)).unwrap();
        let wires: Vec<usize> = (0..3).filter(|w| mask >> w & 1 == 1).collect();
        let once = dephasing_twirl(&rho, &wires).unwrap();
        let twice = dephasing_twirl(&once, &wires).unwrap();
        prop_assert!(once.approx_eq(&twice));
    }

    #[test]
    fn gf2_twirl_has_two_block_form(seed in any::<u64>(), n in 1usize..=5) {
        let rho = random_density_matrix(n, &mut rng(seed)).unwrap();
        let wires: Vec<usize> = (0..n).collect();
        let out = gf2_linear_twirl(&dephasing_twirl(&rho, &wires).unwrap(), &wires).unwrap();
        let p0 = rho.entry(0, 0).re;
        prop_assert!((out.entry(0, 0).re - p0).abs() < TOLERANCE);
        let rest = (1.0 - p0) / ((1usize << n) - 1) as f64;
        for s in 1..1usize << n {
            prop_assert!((out.entry(s, s).re - rest).abs() < TOLERANCE);
        }
    }

    #[test]
    fn clifford_twirl_is_symmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let u = haar_sample_1q(&mut r);
        let v = haar_sample_1q(&mut r);
        let ch = QuantumChannel::uniform_mixture(&[u, v]).unwrap();
        let probs = clifford_twirl_channel(&ch).unwrap();
        prop_assert!((probs.p_x - probs.p_y).abs() <= TOLERANCE);
        prop_assert!((probs.p_x - probs.p_z).abs() <= TOLERANCE);
    }

    #[test]
    fn cliffords_map_pure_states_to_pure_states(seed in any::<u64>(), idx in 0usize..24) {
        let psi = random_pure_state(1, &mut rng(seed)).unwrap();
        let c = SingleQubitClifford::from_index(idx).unwrap();
        let out = psi.apply_unitary(c.matrix(), &[0]).unwrap();
        prop_assert!((out.overlap(&out) - 1.0).abs() < TOLERANCE);
    }
}
