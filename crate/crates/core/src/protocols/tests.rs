use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::groups::{
    clifford_group, hadamard, haar_sample_1q, pauli_x, rotation_z, sample_gf2_invertible, Angle, OperationGroup,
    SingleQubitClifford,
};
use crate::qstate::random::{random_density_matrix, random_pure_state};
use crate::qstate::{channels_equal, TOLERANCE};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn angle(k: u8) -> Angle {
    Angle::new(k).unwrap()
}

fn bits(s: &str) -> BitString {
    s.parse().unwrap()
}

fn random_unitary_channel(k: usize, r: &mut ChaCha8Rng) -> QuantumChannel {
    // product of random single-qubit unitaries and CNOTs gives a generic unitary
    let mut u = UnitaryOp::identity(k);
    for _ in 0..3 {
        let mut layer = haar_sample_1q(r);
        for _ in 1..k {
            layer = layer.tensor(&haar_sample_1q(r)).unwrap();
        }
        u = layer.mul(&u).unwrap();
        if k >= 2 {
            let c = crate::groups::cnot().tensor(&UnitaryOp::identity(k - 2)).unwrap();
            u = c.mul(&u).unwrap();
        }
    }
    u.to_channel()
}

#[test]
fn protocol_ids_and_resources() {
    for p in ProtocolId::ALL {
        assert_eq!(p.to_string().parse::<ProtocolId>().unwrap(), p);
    }
    assert_eq!("p3".parse::<ProtocolId>().unwrap(), ProtocolId::P3);
    assert!("P6".parse::<ProtocolId>().is_err());
    assert_eq!(ProtocolId::P2.constructs(), ResourceKind::CRsp);
    assert!(ProtocolId::P3.requires().contains(&ResourceKind::CRsp));
}

#[test]
fn protocol1_examples() {
    let mut r = rng(1);
    let t = protocol1_run(angle(0), &Receiver1::honest(), &mut r).unwrap();
    assert!(t.messages.is_empty());
    assert!(t.final_state.approx_eq(&DensityMatrix::plus()));
    for _ in 0..8 {
        let t = protocol1_run(angle(3), &Receiver1::honest(), &mut r).unwrap();
        assert!(t.final_state.approx_eq(&DensityMatrix::equatorial(3.0 * std::f64::consts::FRAC_PI_4)));
    }
    let cheat = Receiver1::new(DensityMatrix::ket0(), None).unwrap();
    let avg = protocol1_averaged(angle(0), &cheat).unwrap();
    let out = avg.conditional("").unwrap();
    assert!(out.approx_eq(&DensityMatrix::maximally_mixed(1).unwrap()));
    assert!(Receiver1::new(DensityMatrix::ket0(), Some(QuantumChannel::identity(2))).is_err());
}

#[test]
fn protocol2_honest_always_accepts() {
    for n in 2..=3 {
        for c in [SingleQubitClifford::hadamard(), clifford_group()[7].clone()] {
            for averaging in [GlAveraging::Orbit, GlAveraging::Enumerated] {
                let cq = protocol2_averaged(n, &c, &Receiver2::honest(n).unwrap(), averaging).unwrap();
                assert!(cq.probability_where(|k| k.ends_with(ABORT)).abs() < TOLERANCE);
                assert!((cq.total_trace() - 1.0).abs() < TOLERANCE);
                let target = c.matrix().prepare_basis(0).unwrap();
                for key in cq.keys() {
                    assert!(cq.conditional(key).unwrap().approx_eq(&target));
                }
            }
        }
    }
    let mut r = rng(2);
    for n in 2..=5 {
        let t = protocol2_run(n, &SingleQubitClifford::hadamard(), &Receiver2::honest(n).unwrap(), &mut r).unwrap();
        assert!(!t.aborted);
        assert!(t.reveals_key());
        assert!(t.final_state.approx_eq(&DensityMatrix::plus()));
    }
}

#[test]
fn protocol2_attack_acceptance() {
    let c = SingleQubitClifford::hadamard();
    // flipping nothing passes only when the twirled string has zero test bits
    let cq = protocol2_averaged(2, &c, &Receiver2::attack(bits("01"), bits("0")).unwrap(), GlAveraging::Orbit).unwrap();
    assert!((cq.probability_where(|k| !k.ends_with(ABORT)) - 1.0 / 3.0).abs() < TOLERANCE);
    let cq = protocol2_averaged(2, &c, &Receiver2::attack(bits("01"), bits("1")).unwrap(), GlAveraging::Orbit).unwrap();
    assert!((cq.probability_where(|k| !k.ends_with(ABORT)) - 2.0 / 3.0).abs() < TOLERANCE);
    let honest = protocol2_averaged(3, &c, &Receiver2::honest(3).unwrap(), GlAveraging::Orbit).unwrap();
    let trivial = protocol2_averaged(3, &c, &Receiver2::attack(bits("000"), bits("00")).unwrap(), GlAveraging::Orbit).unwrap();
    assert!(honest.max_abs_diff(&trivial) < TOLERANCE);
}

#[test]
fn protocol2_sampled_acceptance_matches_exact() {
    let mut r = rng(3);
    let receiver = Receiver2::attack(bits("011"), bits("00")).unwrap();
    let runs = 6000;
    let accepted = (0..runs)
        .filter(|_| !protocol2_run(3, &SingleQubitClifford::identity(), &receiver, &mut r).unwrap().aborted)
        .count();
    let p = 1.0 / 7.0;
    let sigma = (p * (1.0 - p) / runs as f64).sqrt();
    assert!((accepted as f64 / runs as f64 - p).abs() < 3.0 * sigma);
}

#[test]
fn protocol2_orbit_matches_enumeration_for_general_receivers() {
    let mut r = rng(4);
    for n in 2..=3 {
        let input = random_density_matrix(n + 1, &mut r).unwrap();
        let receiver = Receiver2::new(n, input, Some(random_unitary_channel(n + 1, &mut r))).unwrap();
        let c = clifford_group()[r.random_range(0..24)].clone();
        let a = protocol2_averaged(n, &c, &receiver, GlAveraging::Orbit).unwrap();
        let b = protocol2_averaged(n, &c, &receiver, GlAveraging::Enumerated).unwrap();
        assert!(a.max_abs_diff(&b) < TOLERANCE);
        assert!((a.total_trace() - 1.0).abs() < TOLERANCE);
    }
}

#[test]
fn protocol2_abort_messages_do_not_depend_on_the_pad() {
    let mut r = rng(5);
    for n in 2..=3 {
        for s in BitString::all(n).skip(1) {
            for a in BitString::all(n - 1) {
                let receiver = Receiver2::attack(s, a).unwrap();
                let c = clifford_group()[r.random_range(0..24)].clone();
                let base = Protocol2Choices::sample(n, &mut r).unwrap();
                let transcripts: Vec<Transcript> = Pauli1::ALL
                    .iter()
                    .map(|&pauli| {
                        let choices = Protocol2Choices { pauli, ..base.clone() };
                        // identical seeds give identical measurement draws
                        protocol2_run_with(n, &c, &receiver, &choices, &mut rng(99)).unwrap()
                    })
                    .collect();
                if transcripts[0].aborted {
                    for t in &transcripts[1..] {
                        assert!(t.aborted);
                        assert_eq!(t.messages, transcripts[0].messages);
                        assert!(t.final_state.approx_eq(&transcripts[0].final_state));
                    }
                }
                let abort_prob: Vec<f64> = Pauli1::ALL
                    .iter()
                    .map(|&p| {
                        protocol2_averaged_given_pauli(n, &c, &receiver, GlAveraging::Orbit, p)
                            .unwrap()
                            .probability_where(|k| k.ends_with(ABORT))
                    })
                    .collect();
                assert!(abort_prob.iter().all(|p| (p - abort_prob[0]).abs() < TOLERANCE));
            }
        }
    }
}

#[test]
fn protocol2_fixed_choices_and_reply_checks() {
    let mut r = rng(6);
    let n = 3;
    let choices = Protocol2Choices {
        d: bits("101"),
        g: sample_gf2_invertible(n, &mut r).unwrap(),
        r: bits("10"),
        pauli: Pauli1::Y,
    };
    let c = clifford_group()[11].clone();
    let t = protocol2_run_with(n, &c, &Receiver2::honest(n).unwrap(), &choices, &mut r).unwrap();
    assert_eq!(t.messages[0].value, MessageValue::Bits(bits("10")));
    assert_eq!(t.messages[1].value, MessageValue::Key(Pauli1::Y));
    assert!(t.final_state.approx_eq(&c.matrix().prepare_basis(0).unwrap()));

    assert!(sender_accepts(&bits("10"), &bits("10")));
    assert!(!sender_accepts(&bits("10"), &bits("11")));
    assert!(!sender_accepts(&bits("10"), &bits("010")));
    assert!(Receiver2::honest(6).is_err());
    assert!(Receiver2::attack(bits("01"), bits("01")).is_err());
    assert!(Receiver2::attack_mixture(1.5, bits("01"), bits("0")).is_err());
}

#[test]
fn protocol3_examples() {
    let id = UnitaryOp::identity(1);
    let choices = Protocol3Choices {
        c: SingleQubitClifford::identity(),
        u1: id.clone(),
    };
    let t = protocol3_run_with(&id, &Receiver3::honest(), &choices).unwrap();
    match &t.messages[0].value {
        MessageValue::Unitary(u2) => assert!(u2.same_channel(&id)),
        other => panic!("unexpected message {other:?}"),
    }
    assert!(t.final_state.approx_eq(&DensityMatrix::ket0()));

    let mut r = rng(7);
    for _ in 0..20 {
        let u = haar_sample_1q(&mut r);
        let t = protocol3_run(&u, &Receiver3::honest(), &mut r).unwrap();
        assert!(t.final_state.approx_eq(&u.prepare_basis(0).unwrap()));
    }
    let choices = Protocol3Choices::sample(&mut r);
    let u2 = choices.correction(&hadamard()).unwrap();
    let chain = UnitaryOp::product([&u2, &choices.u1, choices.c.matrix()]).unwrap();
    assert!(chain.same_channel(&hadamard()));
}

#[test]
fn protocol3_conditioned_honest_view() {
    let mut r = rng(8);
    for _ in 0..5 {
        let u = haar_sample_1q(&mut r);
        let label = haar_sample_1q(&mut r);
        let view = protocol3_conditioned(&u, &Receiver3::honest(), &label).unwrap();
        // applying the announced correction yields the target state
        let out = view.apply_unitary(&label, &[0]).unwrap();
        assert!(out.approx_eq(&u.prepare_basis(0).unwrap()));
        let avg = protocol3_corrected_average(&u, &Receiver3::honest()).unwrap();
        assert!(avg.approx_eq(&u.prepare_basis(0).unwrap()));
    }
}

#[test]
fn reduced_receiver_channel_matches_direct_partial_trace() {
    let mut r = rng(9);
    for k in 1..=2 {
        let aux = random_density_matrix(k, &mut r).unwrap();
        let phi = random_unitary_channel(k + 1, &mut r);
        let receiver = Receiver3::new(aux.clone(), Some(phi.clone())).unwrap();
        let e = reduced_receiver_channel(&receiver).unwrap();
        for _ in 0..4 {
            let sigma = random_density_matrix(1, &mut r).unwrap();
            let direct = sigma
                .tensor(&aux)
                .unwrap()
                .apply_channel(&phi, &(0..=k).collect::<Vec<_>>())
                .unwrap()
                .reduced(&[0])
                .unwrap();
            assert!(e.apply(&sigma).unwrap().approx_eq(&direct));
        }
    }
}

#[test]
fn protocol3_channel_is_depolarizing() {
    let mut r = rng(10);
    let aux = random_pure_state(1, &mut r).unwrap();
    let receiver = Receiver3::new(aux, Some(random_unitary_channel(2, &mut r))).unwrap();
    let ch = protocol3_averaged_channel(&receiver).unwrap();
    let [pi, px, py, pz] = crate::groups::pauli_weights(&ch).unwrap();
    assert!((pi + px + py + pz - 1.0).abs() < TOLERANCE);
    assert!((px - py).abs() < TOLERANCE && (px - pz).abs() < TOLERANCE);
    let probs = crate::groups::PauliChannelProbs::new(pi, px, py, pz).unwrap();
    assert!(channels_equal(&ch, &crate::groups::pauli_channel(&probs)));
}

#[test]
fn protocol4_examples() {
    let id = UnitaryOp::identity(1);
    let mut r = rng(11);
    let t = protocol4_run(&id, &Receiver4::honest(), &mut r).unwrap();
    assert!(t.final_state.approx_eq(&DensityMatrix::ket0()));
    for _ in 0..10 {
        let u = haar_sample_1q(&mut r);
        for d in [false, true] {
            let t = protocol4_run_with(&u, &Receiver4::honest(), d).unwrap();
            assert!(t.final_state.approx_eq(&u.prepare_basis(0).unwrap()));
        }
    }
    let plus = Receiver4::new(DensityMatrix::plus(), None).unwrap();
    let avg = protocol4_averaged(&id, &plus).unwrap().conditional("").unwrap();
    assert!(avg.approx_eq(&DensityMatrix::maximally_mixed(1).unwrap()));
}

#[test]
fn protocol5_examples() {
    let mut r = rng(12);
    let group = OperationGroup::ZRotations;
    let u = rotation_z(angle(2));
    let honest = Adversary5::Honest {
        input: DensityMatrix::plus(),
        clients: 3,
    };
    for _ in 0..10 {
        let t = protocol5_run(&group, &u, &honest, &mut r).unwrap();
        assert!(t.final_state.approx_eq(&DensityMatrix::equatorial(std::f64::consts::FRAC_PI_2)));
        assert_eq!(t.messages.len(), 4);
    }
    let single = Adversary5::Honest {
        input: DensityMatrix::ket0(),
        clients: 1,
    };
    let w = haar_sample_1q(&mut r);
    let t = protocol5_run(&OperationGroup::FullUnitary1q, &w, &single, &mut r).unwrap();
    assert!(t.final_state.approx_eq(&w.prepare_basis(0).unwrap()));

    let ids = vec![UnitaryOp::identity(1); 3];
    let t = protocol5_run_with(&group, &u, &ids, &honest).unwrap();
    match &t.messages.last().unwrap().value {
        MessageValue::Unitary(corr) => assert!(corr.same_channel(&u)),
        other => panic!("unexpected message {other:?}"),
    }
    assert!(matches!(
        protocol5_run(&group, &hadamard(), &honest, &mut r),
        Err(crate::Error::NotInGroup(_))
    ));
}

#[test]
fn protocol5_honest_description_is_uniform() {
    let group = OperationGroup::Clifford1q;
    let elements = group.elements().unwrap();
    let runs = 4800;
    for (seed, u) in [(13, hadamard()), (14, UnitaryOp::identity(1))] {
        let mut r = rng(seed);
        let coalition = Coalition {
            honest_client: 2,
            client_unitaries: vec![pauli_x(), UnitaryOp::identity(1), hadamard()],
            server_input: DensityMatrix::ket0(),
            server_ops: vec![None, None, None],
        };
        let adversary = Adversary5::Coalition(coalition);
        let mut counts = vec![0usize; elements.len()];
        for _ in 0..runs {
            let t = protocol5_run(&group, &u, &adversary, &mut r).unwrap();
            let MessageValue::Unitary(uh) = &t.messages[1].value else {
                panic!("client message missing")
            };
            counts[elements.iter().position(|e| e.same_channel(uh)).unwrap()] += 1;
        }
        let e = runs as f64 / 24.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
        // 23 degrees of freedom, 99.9% quantile 49.7
        assert!(chi2 < 49.7, "chi2 = {chi2}");
    }
}

#[test]
fn protocol5_averaged_keys_cover_the_group() {
    let group = OperationGroup::ZRotations;
    let coalition = Coalition {
        honest_client: 1,
        client_unitaries: vec![UnitaryOp::identity(1), rotation_z(angle(3)), rotation_z(angle(5))],
        server_input: DensityMatrix::bell(),
        server_ops: vec![None, None, None],
    };
    let cq = protocol5_averaged(&group, &rotation_z(angle(1)), &coalition).unwrap();
    assert_eq!(cq.len(), 8);
    assert!((cq.total_trace() - 1.0).abs() < TOLERANCE);
    assert!(protocol5_averaged(&OperationGroup::FullUnitary1q, &hadamard(), &coalition).is_err());
    let mut bad = coalition.clone();
    bad.honest_client = 4;
    assert!(protocol5_averaged(&group, &rotation_z(angle(1)), &bad).is_err());
}

#[test]
fn composition_schema_checks() {
    let comp = compose_sequential(ProtocolId::P2, ProtocolId::P3).unwrap();
    assert_eq!(comp.slot, ResourceKind::CRsp);
    assert_eq!(comp.constructs(), ResourceKind::Rsp);
    assert_eq!(comp.requires(), vec![ResourceKind::MRc, ResourceKind::Ru]);
    assert!(matches!(
        compose_sequential(ProtocolId::P3, ProtocolId::P2),
        Err(crate::Error::Composition(_))
    ));
    assert!(compose_sequential(ProtocolId::P1, ProtocolId::P3).is_err());
    let p4_in_p5 = compose_sequential(ProtocolId::P5, ProtocolId::P5).unwrap();
    let mut r = rng(15);
    assert!(composed_run(&p4_in_p5, &hadamard(), &ComposedReceiver::honest(2).unwrap(), &mut r).is_err());
}

#[test]
fn composed_protocol_is_correct() {
    let comp = compose_sequential(ProtocolId::P2, ProtocolId::P3).unwrap();
    let mut r = rng(16);
    for n in 2..=3 {
        let receiver = ComposedReceiver::honest(n).unwrap();
        for _ in 0..10 {
            let u = haar_sample_1q(&mut r);
            let t = composed_run(&comp, &u, &receiver, &mut r).unwrap();
            assert!(!t.aborted);
            assert!((t.final_state.overlap(&u.prepare_basis(0).unwrap()) - 1.0).abs() < TOLERANCE);
        }
        let u = haar_sample_1q(&mut r);
        let label = haar_sample_1q(&mut r);
        let cq = composed_conditioned(&comp, &u, &receiver, &label, GlAveraging::Orbit).unwrap();
        assert!(cq.probability_where(|k| k.ends_with(ABORT)).abs() < TOLERANCE);
        assert!((cq.total_trace() - 1.0).abs() < TOLERANCE);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn aborted_runs_never_carry_a_key(seed in any::<u64>(), n in 2usize..=4, s in 1u64..16, a in 0u64..8) {
        let mut r = rng(seed);
        let s = BitString::new(n, s % (1 << n)).unwrap();
        let a = BitString::new(n - 1, a % (1 << (n - 1))).unwrap();
        let receiver = Receiver2::attack(s, a).unwrap();
        let t = protocol2_run(n, &clifford_group()[(seed % 24) as usize], &receiver, &mut r).unwrap();
        prop_assert_eq!(t.aborted, !t.reveals_key());
        prop_assert!((t.final_state.trace().re - 1.0).abs() < TOLERANCE);
    }

    #[test]
    fn protocol4_is_correct_for_every_target(seed in any::<u64>()) {
        let mut r = rng(seed);
        let u = haar_sample_1q(&mut r);
        let t = protocol4_run(&u, &Receiver4::honest(), &mut r).unwrap();
        prop_assert!(t.final_state.approx_eq(&u.prepare_basis(0).unwrap()));
    }
}
