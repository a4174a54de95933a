//! Curated strategy suites: basis and Pauli-eigenstate inputs, Bell
//! ancillas, random entangled inputs and worst-case coalitions.

use rand::Rng;

use super::AttackStrategy;
use crate::error::Result;
use crate::groups::{cnot, pauli_x, pauli_z, OperationGroup};
use crate::protocols::{Adversary, Coalition, Receiver1, Receiver2, Receiver3, Receiver4};
use crate::qstate::random::{random_channel, random_density_matrix, random_pure_state, random_unitary};
use crate::qstate::{DensityMatrix, QuantumChannel, UnitaryOp};

use super::protocol2::protocol2_attack_family;

/// The six Pauli eigenstates, named.
pub fn pauli_eigenstates() -> Vec<(&'static str, DensityMatrix)> {
    let pi = std::f64::consts::PI;
    vec![
        ("0", DensityMatrix::ket0()),
        ("1", DensityMatrix::ket1()),
        ("+", DensityMatrix::plus()),
        ("-", DensityMatrix::minus()),
        ("+i", DensityMatrix::plus_i()),
        ("-i", DensityMatrix::equatorial(1.5 * pi)),
    ]
}

/// `|0⟩, |1⟩, |+⟩, |+i⟩`: their projectors span the 2×2 matrices.
pub fn tomographic_inputs() -> Vec<(&'static str, DensityMatrix)> {
    pauli_eigenstates()
        .into_iter()
        .filter(|(name, _)| matches!(*name, "0" | "1" | "+" | "+i"))
        .collect()
}

/// The four Bell states.
pub fn bell_states() -> Vec<(&'static str, DensityMatrix)> {
    let b = DensityMatrix::bell();
    let x = pauli_x();
    let z = pauli_z();
    vec![
        ("phi+", b.clone()),
        ("phi-", b.apply_unitary(&z, &[1]).expect("wire 1")),
        ("psi+", b.apply_unitary(&x, &[1]).expect("wire 1")),
        (
            "psi-",
            b.apply_unitary(&x, &[1])
                .and_then(|s| s.apply_unitary(&z, &[1]))
                .expect("wire 1"),
        ),
    ]
}

fn swap() -> UnitaryOp {
    let flipped = cnot().embed(&[1, 0], 2).expect("two wires");
    UnitaryOp::product([&cnot(), &flipped, &cnot()]).expect("dims")
}

fn random_post<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<QuantumChannel> {
    if rng.random_bool(0.5) {
        Ok(random_unitary(num_qubits, rng)?.to_channel())
    } else {
        random_channel(num_qubits, 1 + rng.random_range(1..4), rng)
    }
}

/// At least fifty receivers for the single-plane protocol.
pub fn p1_suite<R: Rng + ?Sized>(rng: &mut R) -> Result<Vec<AttackStrategy>> {
    let mut out = Vec::new();
    let mut push = |name: String, input: DensityMatrix, post: Option<QuantumChannel>| -> Result<()> {
        out.push(AttackStrategy::new(format!("p1/{name}"), Adversary::P1(Receiver1::new(input, post)?)));
        Ok(())
    };
    for (name, s) in pauli_eigenstates() {
        push(format!("eigen/{name}"), s.clone(), None)?;
        push(format!("eigen/{name}/post"), s, Some(random_unitary(1, rng)?.to_channel()))?;
    }
    for (a, sa) in tomographic_inputs() {
        for (b, sb) in tomographic_inputs() {
            push(format!("product/{a}{b}"), sa.tensor(&sb)?, None)?;
        }
    }
    for (name, s) in bell_states() {
        push(format!("bell/{name}"), s.clone(), None)?;
        push(format!("bell/{name}/post"), s, Some(random_post(2, rng)?))?;
    }
    let bell_extra = DensityMatrix::bell().tensor(&DensityMatrix::plus())?;
    push("bell-plus/swap".into(), bell_extra.clone(), Some(swap().embed(&[0, 2], 3)?.to_channel()))?;
    push("bell-plus/cnot".into(), bell_extra, Some(cnot().embed(&[2, 0], 3)?.to_channel()))?;
    for i in 0..9 {
        let s = random_pure_state(2, rng)?;
        let post = Some(random_unitary(2, rng)?.to_channel());
        push(format!("random2/{i:02}"), s, post)?;
    }
    for i in 0..4 {
        let s = random_density_matrix(3, rng)?;
        let post = Some(random_post(3, rng)?);
        push(format!("random3/{i:02}"), s, post)?;
    }
    Ok(out)
}

/// Twenty receivers for the arbitrary-state protocol, mixing auxiliary
/// registers with operations before the RU call.
pub fn p3_suite<R: Rng + ?Sized>(rng: &mut R) -> Result<Vec<AttackStrategy>> {
    let auxes: Vec<(String, DensityMatrix)> = {
        let mut v = vec![("none".to_string(), DensityMatrix::trivial())];
        v.extend(tomographic_inputs().into_iter().map(|(n, s)| (n.to_string(), s)));
        v.push(("mixed".into(), DensityMatrix::maximally_mixed(1)?));
        v.push(("bell".into(), DensityMatrix::bell()));
        v.push(("random".into(), random_density_matrix(1, rng)?));
        v
    };
    let mut out = Vec::new();
    for i in 0..20 {
        let (aux_name, aux) = &auxes[i % auxes.len()];
        let size = aux.num_qubits() + 1;
        let (op_name, op) = match i / auxes.len() {
            0 if size > 1 => ("swap", Some(swap().embed(&[0, size - 1], size)?.to_channel())),
            0 => ("none", None),
            1 if size > 1 => ("cnot", Some(cnot().embed(&[size - 1, 0], size)?.to_channel())),
            1 => ("unitary", Some(random_unitary(1, rng)?.to_channel())),
            _ if i % 2 == 0 => ("unitary", Some(random_unitary(size, rng)?.to_channel())),
            _ => ("channel", Some(random_channel(size, 3, rng)?)),
        };
        out.push(AttackStrategy::new(
            format!("p3/{i:02}/aux={aux_name}/{op_name}"),
            Adversary::P3(Receiver3::new(aux.clone(), op)?),
        ));
    }
    out.push(AttackStrategy::new("p3/honest", Adversary::P3(Receiver3::honest())));
    Ok(out)
}

/// Twenty receivers for the selective-NOT protocol.
pub fn p4_suite<R: Rng + ?Sized>(rng: &mut R) -> Result<Vec<AttackStrategy>> {
    let mut out = vec![AttackStrategy::new("p4/honest", Adversary::P4(Receiver4::honest()))];
    for (name, s) in pauli_eigenstates() {
        out.push(AttackStrategy::new(
            format!("p4/eigen/{name}"),
            Adversary::P4(Receiver4::new(s, None)?),
        ));
    }
    for (name, s) in bell_states() {
        out.push(AttackStrategy::new(
            format!("p4/bell/{name}"),
            Adversary::P4(Receiver4::new(s, Some(random_post(2, rng)?))?),
        ));
    }
    for i in 0..9 {
        let k = 2 + i % 2;
        let s = random_density_matrix(k, rng)?;
        out.push(AttackStrategy::new(
            format!("p4/random{k}/{i:02}"),
            Adversary::P4(Receiver4::new(s, Some(random_post(k, rng)?))?),
        ));
    }
    Ok(out)
}

/// Ten coalitions around the honest client `h` of `clients`. The first
/// keeps every malicious element at the identity; the rest pick random
/// group elements, server ancillas and server operations.
pub fn p5_coalitions<R: Rng + ?Sized>(
    group: &OperationGroup,
    clients: usize,
    h: usize,
    rng: &mut R,
) -> Result<Vec<AttackStrategy>> {
    let k = group.num_qubits();
    let mut out = Vec::new();
    for i in 0..10 {
        let (name, coalition) = if i == 0 {
            (
                "identity",
                Coalition {
                    honest_client: h,
                    client_unitaries: vec![UnitaryOp::identity(k); clients],
                    server_input: DensityMatrix::zero_state(k)?,
                    server_ops: vec![None; clients],
                },
            )
        } else {
            let ancilla = i % 2 == 0;
            let input = if ancilla {
                random_density_matrix(k + 1, rng)?
            } else {
                random_pure_state(k, rng)?
            };
            let size = input.num_qubits();
            let mut ops = Vec::with_capacity(clients);
            for _ in 0..clients {
                ops.push(if rng.random_bool(0.7) { Some(random_post(size, rng)?) } else { None });
            }
            (
                if ancilla { "ancilla" } else { "plain" },
                Coalition {
                    honest_client: h,
                    client_unitaries: (0..clients).map(|_| group.sample(rng)).collect(),
                    server_input: input,
                    server_ops: ops,
                },
            )
        };
        out.push(AttackStrategy::new(
            format!("p5/{}/h={h}/{i:02}/{name}", group.name()),
            Adversary::P5(coalition),
        ));
    }
    Ok(out)
}

/// The `(s, a)` family at weight `p_0`, as strategies.
pub fn p2_family(n: usize, p0: f64) -> Result<Vec<AttackStrategy>> {
    Ok(protocol2_attack_family(n, p0)?
        .into_iter()
        .map(|(name, rx)| AttackStrategy::new(format!("p2/{name}"), Adversary::P2(rx)))
        .collect())
}

/// Honest Clifford-state receiver, for completeness checks.
pub fn p2_honest(n: usize) -> Result<AttackStrategy> {
    Ok(AttackStrategy::new(format!("p2/honest/n={n}"), Adversary::P2(Receiver2::honest(n)?)))
}
