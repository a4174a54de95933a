use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::{random_density_matrix, random_pure_state};
use super::*;

fn c(re: f64) -> Complex64 {
    cplx(re, 0.0)
}

fn x_gate() -> UnitaryOp {
    UnitaryOp::single_qubit([c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap()
}

fn rz(theta: f64) -> UnitaryOp {
    UnitaryOp::single_qubit([c(1.0), c(0.0), c(0.0), Complex64::from_polar(1.0, theta)]).unwrap()
}

fn hadamard() -> UnitaryOp {
    let s = FRAC_1_SQRT_2;
    UnitaryOp::single_qubit([c(s), c(s), c(s), c(-s)]).unwrap()
}

// Trace norm through singular values, independent of the eigenvalue route.
fn svd_trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    let diff = a.matrix() - b.matrix();
    0.5 * diff.svd(false, false).singular_values.iter().sum::<f64>()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn tensor_of_plus_and_minus_is_rank_one() {
    let out = DensityMatrix::plus().tensor(&DensityMatrix::minus()).unwrap();
    // |+-> = (|00> - |01> + |10> - |11>)/2
    let v = [0.5, -0.5, 0.5, -0.5];
    let expected = DMatrix::from_fn(4, 4, |i, j| c(v[i] * v[j]));
    assert!(max_abs_entry(&(out.matrix() - expected)) < TOLERANCE);
    let zz = DensityMatrix::ket0().tensor(&DensityMatrix::ket0()).unwrap();
    assert!(zz.approx_eq(&DensityMatrix::basis(2, 0).unwrap()));
}

#[test]
fn tensor_with_mixed_then_trace_recovers_state() {
    let rho = random_density_matrix(1, &mut rng(1)).unwrap();
    let joint = rho.tensor(&DensityMatrix::maximally_mixed(1).unwrap()).unwrap();
    assert!(joint.partial_trace(&[1]).unwrap().approx_eq(&rho));
}

#[test]
fn unitary_examples() {
    let one = DensityMatrix::ket0().apply_unitary(&x_gate(), &[0]).unwrap();
    assert!(one.approx_eq(&DensityMatrix::ket1()));
    let rotated = DensityMatrix::plus().apply_unitary(&rz(FRAC_PI_4), &[0]).unwrap();
    assert!(rotated.approx_eq(&DensityMatrix::equatorial(FRAC_PI_4)));
}

#[test]
fn flip_then_signed_rotation_matches_rotation_then_flip() {
    let mut r = rng(2);
    for k in 0..8 {
        let theta = k as f64 * FRAC_PI_4;
        for b in [false, true] {
            let signed = if b { -theta } else { theta };
            let xb = if b { x_gate() } else { UnitaryOp::identity(1) };
            let lhs = xb.mul(&rz(signed)).unwrap();
            let rhs = rz(theta).mul(&xb).unwrap();
            assert!(channels_equal(&lhs.to_channel(), &rhs.to_channel()));
            let rho = random_density_matrix(2, &mut r).unwrap();
            let a = rho.apply_unitary(&lhs, &[0]).unwrap();
            let bb = rho.apply_unitary(&rhs, &[0]).unwrap();
            assert!(a.approx_eq(&bb));
        }
    }
}

#[test]
fn embedding_respects_wire_order() {
    // X on wire 1 of |00> gives |01>
    let out = DensityMatrix::basis(2, 0)
        .unwrap()
        .apply_unitary(&x_gate(), &[1])
        .unwrap();
    assert!(out.approx_eq(&DensityMatrix::basis(2, 1).unwrap()));
    // CNOT listed as (control=1, target=0) maps |01> to |11>
    let mut cnot = CMatrix::zeros(4, 4);
    for (i, j) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        cnot[(i, j)] = c(1.0);
    }
    let cnot = UnitaryOp::new(cnot).unwrap();
    let out = DensityMatrix::basis(2, 1)
        .unwrap()
        .apply_unitary(&cnot, &[1, 0])
        .unwrap();
    assert!(out.approx_eq(&DensityMatrix::basis(2, 3).unwrap()));
    // against an explicit Kronecker embedding on three wires
    let rho = random_density_matrix(3, &mut rng(3)).unwrap();
    let h = hadamard();
    let full = UnitaryOp::identity(1)
        .tensor(&UnitaryOp::identity(1))
        .unwrap()
        .tensor(&h)
        .unwrap();
    let direct = rho.apply_unitary(&full, &[0, 1, 2]).unwrap();
    assert!(direct.approx_eq(&rho.apply_unitary(&h, &[2]).unwrap()));
}

#[test]
fn unitary_rejects_bad_wires() {
    let rho = DensityMatrix::zero_state(2).unwrap();
    assert!(matches!(
        rho.apply_unitary(&x_gate(), &[2]),
        Err(Error::WireOutOfRange { .. })
    ));
    let two = x_gate().tensor(&x_gate()).unwrap();
    assert!(matches!(
        rho.apply_unitary(&two, &[1, 1]),
        Err(Error::DuplicateWire(1))
    ));
    assert!(matches!(
        rho.apply_unitary(&two, &[0]),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn partial_trace_examples() {
    let zz = DensityMatrix::basis(2, 0).unwrap();
    assert!(zz.partial_trace(&[1]).unwrap().approx_eq(&DensityMatrix::ket0()));
    let marginal = DensityMatrix::bell().partial_trace(&[0]).unwrap();
    assert!(marginal.approx_eq(&DensityMatrix::maximally_mixed(1).unwrap()));
    let mut r = rng(4);
    let rho = random_density_matrix(2, &mut r).unwrap();
    let sigma = random_density_matrix(2, &mut r).unwrap();
    let joint = rho.tensor(&sigma).unwrap();
    assert!(joint.partial_trace(&[2, 3]).unwrap().approx_eq(&rho));
    assert!(joint.partial_trace(&[0, 1]).unwrap().approx_eq(&sigma));
}

#[test]
fn reduced_and_permute_reorder_wires() {
    let mut r = rng(5);
    let a = random_density_matrix(1, &mut r).unwrap();
    let b = random_density_matrix(1, &mut r).unwrap();
    let cc = random_density_matrix(1, &mut r).unwrap();
    let joint = a.tensor(&b).unwrap().tensor(&cc).unwrap();
    let swapped = joint.reduced(&[2, 0]).unwrap();
    assert!(swapped.approx_eq(&cc.tensor(&a).unwrap()));
    let perm = joint.permute_wires(&[1, 2, 0]).unwrap();
    assert!(perm.approx_eq(&b.tensor(&cc).unwrap().tensor(&a).unwrap()));
}

#[test]
fn measurement_examples() {
    let dist = DensityMatrix::plus().measure_computational(&[0]).unwrap();
    assert!((dist.probability_of(&"0".parse().unwrap()) - 0.5).abs() < TOLERANCE);
    assert!((dist.probability_of(&"1".parse().unwrap()) - 0.5).abs() < TOLERANCE);
    // measured wires vanish from the post-state
    let joint = DensityMatrix::plus().tensor(&DensityMatrix::ket1()).unwrap();
    let dist = joint.measure_computational(&[1]).unwrap();
    let one = dist
        .outcomes
        .iter()
        .find(|o| o.bits.to_string() == "1")
        .unwrap();
    assert!((one.probability - 1.0).abs() < TOLERANCE);
    assert!(one.state.as_ref().unwrap().approx_eq(&DensityMatrix::plus()));
    assert!(dist.outcomes[0].state.is_none());
}

#[test]
fn measurement_follows_born_rule() {
    let mut r = rng(6);
    for _ in 0..20 {
        let psi = random_pure_state(1, &mut r).unwrap();
        // amplitudes from the rank-one matrix: |alpha|^2 is entry (0,0)
        let alpha2 = psi.entry(0, 0).re;
        let dist = psi.measure_computational(&[0]).unwrap();
        assert!((dist.outcomes[0].probability - alpha2).abs() < TOLERANCE);
        assert!((dist.outcomes[1].probability - (1.0 - alpha2)).abs() < TOLERANCE);
    }
    // three-qubit block traces against a direct diagonal sum
    let rho = random_density_matrix(3, &mut r).unwrap();
    let dist = rho.measure_computational(&[2, 0]).unwrap();
    for o in &dist.outcomes {
        let (w2, w0) = (o.bits.bit(0) as usize, o.bits.bit(1) as usize);
        let expected: f64 = (0..8)
            .filter(|&i| bit_at(i, 2, 3) == w2 && bit_at(i, 0, 3) == w0)
            .map(|i| rho.entry(i, i).re)
            .sum();
        assert!((o.probability - expected).abs() < TOLERANCE);
        if let Some(post) = &o.state {
            post.validate().unwrap();
        }
    }
    assert!((dist.total_probability() - 1.0).abs() < TOLERANCE);
}

#[test]
fn trace_distance_examples() {
    let rho = random_density_matrix(2, &mut rng(7)).unwrap();
    assert!(rho.trace_distance(&rho).unwrap() < TOLERANCE);
    let d = DensityMatrix::ket0()
        .trace_distance(&DensityMatrix::ket1())
        .unwrap();
    assert!((d - 1.0).abs() < TOLERANCE);
    let h = hadamard();
    let mixed = DensityMatrix::maximally_mixed(1).unwrap();
    let d = mixed
        .apply_unitary(&h, &[0])
        .unwrap()
        .trace_distance(&DensityMatrix::ket0().apply_unitary(&h, &[0]).unwrap())
        .unwrap();
    assert!((d - 0.5).abs() < TOLERANCE);
    assert!(DensityMatrix::ket0()
        .trace_distance(&DensityMatrix::zero_state(2).unwrap())
        .is_err());
}

#[test]
fn trace_distance_agrees_with_singular_values() {
    let mut r = rng(8);
    for k in 1..=3 {
        let a = random_density_matrix(k, &mut r).unwrap();
        let b = random_pure_state(k, &mut r).unwrap();
        let fast = a.trace_distance(&b).unwrap();
        assert!((fast - svd_trace_distance(&a, &b)).abs() < TOLERANCE);
    }
}

#[test]
fn choi_of_identity_is_bell_projector() {
    let choi = choi_matrix(&QuantumChannel::identity(1));
    let bell = DensityMatrix::bell();
    let expected = bell.matrix() * c(2.0);
    assert!(max_abs_entry(&(choi - expected)) < TOLERANCE);
}

#[test]
fn depolarizing_choi_spectrum() {
    // p_X = p_Y = p_Z = 1/4 leaves p_I = 1/4: Choi is I/2 with eigenvalues 1/2
    let s = 0.5;
    let ops = [
        [c(1.0), c(0.0), c(0.0), c(1.0)],
        [c(0.0), c(1.0), c(1.0), c(0.0)],
        [c(0.0), cplx(0.0, -1.0), cplx(0.0, 1.0), c(0.0)],
        [c(1.0), c(0.0), c(0.0), c(-1.0)],
    ];
    let kraus = ops
        .iter()
        .map(|e| CMatrix::from_row_slice(2, 2, e) * c(s))
        .collect();
    let ch = QuantumChannel::new(kraus).unwrap();
    let choi = choi_matrix(&ch);
    let eig = choi.symmetric_eigenvalues();
    for e in eig.iter() {
        assert!((e - 0.5).abs() < TOLERANCE);
    }
}

#[test]
fn channel_composition_and_conjugation() {
    let h = hadamard().to_channel();
    let x = x_gate().to_channel();
    // H then X equals conjugation by the product X H
    let seq = h.then(&x).unwrap();
    let prod = x_gate().mul(&hadamard()).unwrap().to_channel();
    assert!(channels_equal(&seq, &prod));
    // H† X H = Z
    let z = UnitaryOp::single_qubit([c(1.0), c(0.0), c(0.0), c(-1.0)]).unwrap();
    assert!(channels_equal(&x.conjugated_by(&hadamard()).unwrap(), &z.to_channel()));
    assert!(QuantumChannel::new(vec![CMatrix::identity(2, 2) * c(2.0)]).is_err());
}

#[test]
fn distinct_channels_are_detected() {
    assert!(!channels_equal(
        &x_gate().to_channel(),
        &QuantumChannel::identity(1)
    ));
    assert!(x_gate().same_channel(&x_gate().clone()));
    let phased = UnitaryOp::new(x_gate().matrix() * Complex64::from_polar(1.0, 0.7)).unwrap();
    assert!(phased.same_channel(&x_gate()));
    assert!(!hadamard().same_channel(&x_gate()));
}

#[test]
fn validating_constructors_reject_bad_input() {
    let not_psd = CMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]);
    assert!(DensityMatrix::new(not_psd).is_err());
    let not_unit = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.0), c(0.0), c(0.0)]);
    assert!(DensityMatrix::new(not_unit).is_err());
    assert!(UnitaryOp::new(CMatrix::identity(2, 2) * c(1.1)).is_err());
    assert!(matches!(
        DensityMatrix::zero_state(MAX_QUBITS + 1),
        Err(Error::RegisterTooLarge(_))
    ));
    let eq = DensityMatrix::equatorial(PI);
    assert!(eq.approx_eq(&DensityMatrix::minus()));
}

fn arb_rotation() -> impl Strategy<Value = UnitaryOp> {
    (0.0..2.0 * PI, 0.0..PI, 0.0..2.0 * PI).prop_map(|(a, b, g)| {
        let (cb, sb) = ((b / 2.0).cos(), (b / 2.0).sin());
        UnitaryOp::single_qubit([
            Complex64::from_polar(cb, -(a + g) / 2.0),
            Complex64::from_polar(-sb, -(a - g) / 2.0),
            Complex64::from_polar(sb, (a - g) / 2.0),
            Complex64::from_polar(cb, (a + g) / 2.0),
        ])
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_states_satisfy_invariants(seed in any::<u64>(), k in 0usize..4) {
        let rho = random_density_matrix(k, &mut rng(seed)).unwrap();
        prop_assert!(rho.validate().is_ok());
        let psi = random_pure_state(k, &mut rng(seed ^ 1)).unwrap();
        prop_assert!(psi.validate().is_ok());
    }

    #[test]
    fn unitaries_preserve_trace_and_spectrum(seed in any::<u64>(), u in arb_rotation(), wire in 0usize..3) {
        let rho = random_density_matrix(3, &mut rng(seed)).unwrap();
        let out = rho.apply_unitary(&u, &[wire]).unwrap();
        prop_assert!((out.trace() - c(1.0)).norm() < TOLERANCE);
        let herm = |m: &CMatrix| (m + m.adjoint()) * c(0.5);
        let mut before: Vec<f64> = herm(rho.matrix()).symmetric_eigenvalues().iter().copied().collect();
        let mut after: Vec<f64> = herm(out.matrix()).symmetric_eigenvalues().iter().copied().collect();
        before.sort_by(|a, b| a.partial_cmp(b).unwrap());
        after.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < TOLERANCE);
        }
    }

    #[test]
    fn trace_distance_triangle_inequality(seed in any::<u64>(), k in 1usize..3) {
        let mut r = rng(seed);
        let a = random_density_matrix(k, &mut r).unwrap();
        let b = random_pure_state(k, &mut r).unwrap();
        let cc = random_density_matrix(k, &mut r).unwrap();
        let ab = a.trace_distance(&b).unwrap();
        let bc = b.trace_distance(&cc).unwrap();
        let ac = a.trace_distance(&cc).unwrap();
        prop_assert!(ac <= ab + bc + TOLERANCE);
        prop_assert!((ab - b.trace_distance(&a).unwrap()).abs() < TOLERANCE);
        prop_assert!((0.0..=1.0 + TOLERANCE).contains(&ab));
    }

    #[test]
    fn choi_ignores_kraus_phase(u in arb_rotation(), phi in 0.0..2.0 * PI) {
        let ch = u.to_channel();
        prop_assert!(channels_equal(&ch, &ch.with_kraus_phase(phi)));
        let mixed = QuantumChannel::uniform_mixture(&[u.clone(), x_gate()]).unwrap();
        prop_assert!(channels_equal(&mixed, &mixed.with_kraus_phase(phi)));
    }
}

#[test]
fn random_unitaries_and_channels_are_valid() {
    let mut r = rng(77);
    let samples = 4000;
    let mut first = 0.0;
    for _ in 0..samples {
        let u = super::random::random_unitary(1, &mut r).unwrap();
        first += u.matrix()[(0, 0)].norm_sqr();
    }
    // E|U_00|^2 = 1/2 with variance 1/12
    let sigma = (1.0f64 / 12.0 / samples as f64).sqrt();
    assert!((first / samples as f64 - 0.5).abs() < 4.0 * sigma);
    for k in 1..=3 {
        let ch = super::random::random_channel(2, k, &mut r).unwrap();
        assert_eq!(ch.kraus_operators().len(), k);
        let rho = random_density_matrix(2, &mut r).unwrap();
        ch.apply(&rho).unwrap().validate().unwrap();
    }
}

#[test]
fn embedding_agrees_with_local_application() {
    let mut r = rng(78);
    let g = super::random::random_unitary(2, &mut r).unwrap();
    let rho = random_density_matrix(3, &mut r).unwrap();
    for wires in [[0, 1], [2, 0], [1, 2]] {
        let full = g.embed(&wires, 3).unwrap();
        let a = rho.apply_unitary(&g, &wires).unwrap();
        let b = rho.apply_unitary(&full, &[0, 1, 2]).unwrap();
        assert!(a.approx_eq(&b));
    }
    assert!(g.embed(&[0], 3).is_err());
}

#[test]
fn signed_permutations_take_the_index_route_exactly() {
    let mut r = rng(79);
    let rho = random_density_matrix(4, &mut r).unwrap();
    let mut perm = CMatrix::zeros(4, 4);
    // |0⟩→i|2⟩, |1⟩→|0⟩, |2⟩→−|3⟩, |3⟩→|1⟩
    for (col, row, v) in [(0, 2, cplx(0.0, 1.0)), (1, 0, c(1.0)), (2, 3, c(-1.0)), (3, 1, c(1.0))] {
        perm[(row, col)] = v;
    }
    let k = UnitaryOp::new(perm).unwrap();
    for wires in [[0, 1], [3, 1], [2, 0]] {
        let split = WireSplit::new(4, &wires).unwrap();
        let fast = conjugate_on(rho.matrix(), k.matrix(), &split);
        let slow = apply_right_adjoint(&apply_left(rho.matrix(), k.matrix(), &split), k.matrix(), &split);
        assert!((fast - slow).iter().all(|z| z.norm() < 1e-12));
    }
}
