//! Simulators attached to the ideal resources.
//!
//! Each simulator gets a single query to its resource through an [`Oracle`].
//! Trajectory entry points (`simulator*_run`) sample the simulator's own
//! randomness; the `*_world` functions average it exactly and return the
//! ideal-world view in the same key layout as the matching protocol.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groups::{
    clifford_group, cnot, haar_sample_1q, pauli_x_power, pauli_z_power, sample_gf2_invertible, x_string, z_string,
    Angle, OperationGroup, Pauli1, SingleQubitClifford,
};
use crate::protocols::{
    apply_optional, correction, correction_key, pad_average, receiver2_respond, sender_accepts, twirled_input,
    Adversary, Coalition, ComposedReceiver, GlAveraging, MessageValue, Party, ProtocolId, Receiver1, Receiver2,
    Receiver3, Receiver4, Transcript, ABORT,
};
use crate::qstate::{cplx, BitString, CMatrix, CqState, DensityMatrix, QuantumChannel, UnitaryOp, TOLERANCE};
use crate::resources::{
    ro_on, rsp_sn_filtered, AdversaryAccess, IdealResource, ResourceKind, SenderInput,
};


/// Single-query access to one interface of an ideal resource.
pub struct Oracle<I, O> {
    kind: ResourceKind,
    call: Option<Box<dyn FnOnce(I) -> Result<O> + Send>>,
}

impl<I, O> Oracle<I, O> {
    pub fn new(kind: ResourceKind, f: impl FnOnce(I) -> Result<O> + Send + 'static) -> Self {
        Self {
            kind,
            call: Some(Box::new(f)),
        }
    }

    pub fn kind(&self) -> ResourceKind {
        self.kind
    }

    pub fn is_spent(&self) -> bool {
        self.call.is_none()
    }

    pub fn query(&mut self, input: I) -> Result<O> {
        let f = self.call.take().ok_or(Error::OracleExhausted)?;
        f(input)
    }
}

impl<I, O> std::fmt::Debug for Oracle<I, O> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Oracle")
            .field("kind", &self.kind)
            .field("spent", &self.is_spent())
            .finish()
    }
}

/// Receiver interface of a resource without receiver input, with the
/// honest sender's input already supplied.
pub fn state_oracle(resource: IdealResource, sender: SenderInput) -> Oracle<(), DensityMatrix> {
    let kind = resource.kind();
    Oracle::new(kind, move |()| resource.evaluate(&sender, None))
}

/// Filtered interface of RSP-SN: the caller picks `b` and gets `U|b⟩`.
pub fn rsp_sn_oracle(u: UnitaryOp) -> Oracle<bool, DensityMatrix> {
    let access = AdversaryAccess::harness();
    Oracle::new(ResourceKind::RspSn, move |b| rsp_sn_filtered(&u, b, &access))
}

/// Server interface of RO with the orchestrator's `U` supplied. The element
/// acts on the leading wires of the joint state passed in.
pub fn ro_oracle(group: OperationGroup, u: UnitaryOp) -> Oracle<DensityMatrix, DensityMatrix> {
    Oracle::new(ResourceKind::Ro, move |joint: DensityMatrix| {
        let wires: Vec<usize> = (0..group.num_qubits()).collect();
        ro_on(&group, &u, &joint, &wires)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimulatorId {
    S1,
    S2,
    S3,
    S4,
    S5,
}

impl SimulatorId {
    pub fn resource_kind(self) -> ResourceKind {
        self.protocol().constructs()
    }

    pub fn protocol(self) -> ProtocolId {
        match self {
            SimulatorId::S1 => ProtocolId::P1,
            SimulatorId::S2 => ProtocolId::P2,
            SimulatorId::S3 => ProtocolId::P3,
            SimulatorId::S4 => ProtocolId::P4,
            SimulatorId::S5 => ProtocolId::P5,
        }
    }

    pub fn for_protocol(p: ProtocolId) -> Self {
        match p {
            ProtocolId::P1 => SimulatorId::S1,
            ProtocolId::P2 => SimulatorId::S2,
            ProtocolId::P3 => SimulatorId::S3,
            ProtocolId::P4 => SimulatorId::S4,
            ProtocolId::P5 => SimulatorId::S5,
        }
    }
}

/// A simulator bound to its resource for one session.
#[derive(Debug)]
pub struct SimulatorInstance {
    id: SimulatorId,
    resource: IdealResource,
    sender: SenderInput,
    rng: ChaCha8Rng,
    used: bool,
}

impl SimulatorInstance {
    pub fn new(id: SimulatorId, resource: IdealResource, sender: SenderInput, rng: ChaCha8Rng) -> Result<Self> {
        if resource.kind() != id.resource_kind() {
            return Err(Error::Precondition(format!(
                "{id:?} attaches to {}, not {}",
                id.resource_kind(),
                resource.kind()
            )));
        }
        Ok(Self {
            id,
            resource,
            sender,
            rng,
            used: false,
        })
    }

    pub fn id(&self) -> SimulatorId {
        self.id
    }

    /// Runs the ideal world once against `adversary`. A second call fails:
    /// the resource was already queried in this session.
    pub fn run(&mut self, adversary: &Adversary) -> Result<Transcript> {
        if self.used {
            return Err(Error::OracleExhausted);
        }
        if adversary.protocol() != self.id.protocol() {
            return Err(Error::Precondition(format!(
                "{:?} cannot face a {} adversary",
                self.id,
                adversary.protocol()
            )));
        }
        self.used = true;
        let rng = &mut self.rng;
        match (adversary, &self.resource, &self.sender) {
            (Adversary::P1(rx), res, sender) => {
                simulator1_run(&mut state_oracle(res.clone(), sender.clone()), rx, rng)
            }
            (Adversary::P2(rx), res, sender) => {
                simulator2_run(&mut state_oracle(res.clone(), sender.clone()), rx, rng)
            }
            (Adversary::P3(rx), res, sender) => {
                simulator3_run(&mut state_oracle(res.clone(), sender.clone()), rx, rng)
            }
            (Adversary::P4(rx), _, SenderInput::Unitary(u)) => simulator4_run(&mut rsp_sn_oracle(u.clone()), rx, rng),
            (Adversary::P5(c), IdealResource::Ro(group), SenderInput::Unitary(u)) => {
                simulator5_run(&mut ro_oracle(group.clone(), u.clone()), group, c, rng)
            }
            _ => Err(Error::Precondition("sender input does not fit the resource".into())),
        }
    }
}

fn scaled(m: CMatrix, w: f64) -> CMatrix {
    m * cplx(w, 0.0)
}

fn accumulate(acc: &mut Option<CMatrix>, m: CMatrix) {
    *acc = Some(match acc.take() {
        Some(a) => a + m,
        None => m,
    });
}

// ---------------------------------------------------------------- S1

/// Simulator 1's circuit on wire `wire` of `joint`, with the qubit obtained
/// from SP-RSP. Returns the output and the measured bit `b`.
pub fn simulator1_step<R: Rng + ?Sized>(
    theta_qubit: &DensityMatrix,
    joint: &DensityMatrix,
    wire: usize,
    rng: &mut R,
) -> Result<(DensityMatrix, bool)> {
    check_single(theta_qubit)?;
    let b_prime: bool = rng.random();
    let (extended, target) = s1_entangle(theta_qubit, joint, wire, b_prime)?;
    let outcomes = extended.measure_computational(&[target])?;
    let o = outcomes.sample(rng);
    let b = o.bits.bit(0);
    let post = o.state.as_ref().expect("sampled outcome has a state");
    let out = post.apply_unitary(&pauli_x_power(b), &[wire])?;
    Ok((out, b))
}

/// The same circuit with `b'` and the measurement averaged exactly.
pub fn simulator1_step_averaged(theta_qubit: &DensityMatrix, joint: &DensityMatrix, wire: usize) -> Result<DensityMatrix> {
    check_single(theta_qubit)?;
    let mut acc = None;
    for b_prime in [false, true] {
        let (extended, target) = s1_entangle(theta_qubit, joint, wire, b_prime)?;
        for o in extended.measure_computational(&[target])?.support() {
            let post = o.state.as_ref().expect("support has states");
            let out = post.apply_unitary(&pauli_x_power(o.bits.bit(0)), &[wire])?;
            accumulate(&mut acc, scaled(out.into_matrix(), 0.5 * o.probability));
        }
    }
    DensityMatrix::new(acc.expect("two branches"))
}

fn s1_entangle(
    theta_qubit: &DensityMatrix,
    joint: &DensityMatrix,
    wire: usize,
    b_prime: bool,
) -> Result<(DensityMatrix, usize)> {
    let flipped = joint.apply_unitary(&pauli_x_power(b_prime), &[wire])?;
    let extended = flipped.tensor(theta_qubit)?;
    let target = extended.num_qubits() - 1;
    Ok((extended.apply_unitary(&cnot(), &[wire, target])?, target))
}

/// Kraus form of Simulator 1's averaged circuit:
/// `K = √(λ/2) X^b (I ⊗ ⟨b|) CNOT (I ⊗ |e⟩) X^{b'}` over the eigenpairs
/// `(λ, |e⟩)` of the SP-RSP qubit.
pub fn simulator1_channel(theta_qubit: &DensityMatrix) -> Result<QuantumChannel> {
    check_single(theta_qubit)?;
    let eig = theta_qubit.matrix().clone().symmetric_eigen();
    let cx = cnot();
    let mut kraus = Vec::new();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= TOLERANCE {
            continue;
        }
        let e = eig.eigenvectors.column(j);
        for b_prime in [false, true] {
            for b in [false, true] {
                // (I ⊗ ⟨b|) CNOT (I ⊗ |e⟩) as a 2x2 block
                let core = DMatrix::from_fn(2, 2, |row, col| {
                    (0..2).fold(cplx(0.0, 0.0), |acc, t| acc + cx.matrix()[(row * 2 + b as usize, col * 2 + t)] * e[t])
                });
                let k = pauli_x_power(b).matrix() * core * pauli_x_power(b_prime).matrix();
                kraus.push(scaled(k, (lambda / 2.0).sqrt()));
            }
        }
    }
    QuantumChannel::new(kraus)
}

fn check_single(rho: &DensityMatrix) -> Result<()> {
    if rho.num_qubits() != 1 {
        return Err(Error::Precondition(format!(
            "expected a single qubit, got {} qubits",
            rho.num_qubits()
        )));
    }
    Ok(())
}

pub fn simulator1_run<R: Rng + ?Sized>(
    oracle: &mut Oracle<(), DensityMatrix>,
    receiver: &Receiver1,
    rng: &mut R,
) -> Result<Transcript> {
    let theta_qubit = oracle.query(())?;
    let (out, _) = simulator1_step(&theta_qubit, &receiver.input, 0, rng)?;
    Ok(Transcript::new(apply_optional(out, receiver.post.as_ref())?))
}

/// Ideal-world counterpart of `protocol1_averaged`.
pub fn simulator1_world(theta: Angle, receiver: &Receiver1) -> Result<CqState> {
    let theta_qubit = state_oracle(IdealResource::SpRsp, SenderInput::Angle(theta)).query(())?;
    let out = simulator1_step_averaged(&theta_qubit, &receiver.input, 0)?;
    Ok(CqState::single("", &apply_optional(out, receiver.post.as_ref())?))
}

// ---------------------------------------------------------------- S2

pub fn simulator2_run<R: Rng + ?Sized>(
    oracle: &mut Oracle<(), DensityMatrix>,
    receiver: &Receiver2,
    rng: &mut R,
) -> Result<Transcript> {
    let n = receiver.n;
    let ideal = oracle.query(())?;
    check_single(&ideal)?;
    let wires: Vec<usize> = (0..n).collect();
    let d = BitString::new(n, rng.random_range(0..1u64 << n))?;
    let g = sample_gf2_invertible(n, rng)?;
    let r = BitString::new(n - 1, rng.random_range(0..1u64 << (n - 1)))?;
    let q = Pauli1::ALL[rng.random_range(0..4)];

    let scrambled = receiver
        .input
        .apply_unitary(&z_string(&d), &wires)?
        .apply_unitary(&g.permutation_unitary(), &wires)?;
    let rest = scrambled.partial_trace(&[0])?;
    let replaced = ideal.tensor(&rest)?;
    let returned = replaced.apply_unitary(&q.unitary().tensor(&x_string(&r))?, &wires)?;

    let acted = apply_optional(returned, receiver.intervention.as_ref())?;
    let outcomes = acted.measure_computational(&(1..n).collect::<Vec<_>>())?;
    let o = outcomes.sample(rng);
    let post = o.state.clone().expect("sampled outcome has a state");
    let accepted = sender_accepts(&r, &o.bits);
    let final_state = if accepted {
        post.apply_unitary(&q.unitary().adjoint(), &[0])?
    } else {
        pad_average(&post)?
    };
    let mut t = Transcript::new(final_state);
    t.push(3, Party::Receiver, MessageValue::Bits(o.bits));
    if accepted {
        t.push(4, Party::Sender, MessageValue::Key(q));
    } else {
        t.push(4, Party::Sender, MessageValue::Abort);
        t.aborted = true;
    }
    Ok(t)
}

/// Simulator 2 averaged over `d`, `g`, `r` and `Q_2`, with `ideal` as the
/// qubit obtained from C-RSP.
pub fn simulator2_averaged(
    ideal: &DensityMatrix,
    receiver: &Receiver2,
    averaging: GlAveraging,
) -> Result<CqState> {
    check_single(ideal)?;
    let n = receiver.n;
    let wires: Vec<usize> = (0..n).collect();
    let twirled = twirled_input(n, &receiver.input, averaging)?;
    let replaced = ideal.tensor(&twirled.partial_trace(&[0])?)?;
    let weight = 1.0 / (4 * (1usize << (n - 1))) as f64;
    let mut out = CqState::new();
    for r in BitString::all(n - 1) {
        for q in Pauli1::ALL {
            let returned = replaced
                .apply_unitary(&q.unitary(), &[0])?
                .apply_unitary(&x_string(&r), &wires[1..])?;
            receiver2_respond(receiver, &returned, |rp| sender_accepts(&r, rp).then_some(q), weight, &mut out)?;
        }
    }
    Ok(out.pruned())
}

/// Ideal-world counterpart of `protocol2_averaged`.
pub fn simulator2_world(c: &SingleQubitClifford, receiver: &Receiver2, averaging: GlAveraging) -> Result<CqState> {
    let ideal = state_oracle(IdealResource::CRsp, SenderInput::Clifford(c.clone())).query(())?;
    simulator2_averaged(&ideal, receiver, averaging)
}

// ---------------------------------------------------------------- S3

pub fn simulator3_run<R: Rng + ?Sized>(
    oracle: &mut Oracle<(), DensityMatrix>,
    receiver: &Receiver3,
    rng: &mut R,
) -> Result<Transcript> {
    let phi = oracle.query(())?;
    let v1 = haar_sample_1q(rng);
    let v2 = haar_sample_1q(rng);
    simulator3_run_with(&phi, receiver, &v1, &v2)
}

/// Fake C-RSP output `V_1|φ⟩`, fake RU applying `V_2`, announcement
/// `V_3 = V_1† V_2†`. The final state is after `V_3` is applied.
pub fn simulator3_run_with(
    phi: &DensityMatrix,
    receiver: &Receiver3,
    v1: &UnitaryOp,
    v2: &UnitaryOp,
) -> Result<Transcript> {
    check_single(phi)?;
    let sent = receiver.prepare(&phi.apply_unitary(v1, &[0])?)?;
    let returned = sent.apply_unitary(v2, &[0])?;
    let v3 = v1.adjoint().mul(&v2.adjoint())?;
    let mut t = Transcript::new(returned.apply_unitary(&v3, &[0])?);
    t.push(3, Party::Sender, MessageValue::Unitary(v3));
    Ok(t)
}

/// Register after the fake RU, conditioned on the announcement `label`:
/// `V_1` is uniform over `design` and `V_2 = label† V_1†`.
pub fn simulator3_conditioned(
    phi: &DensityMatrix,
    receiver: &Receiver3,
    label: &UnitaryOp,
    design: &[UnitaryOp],
) -> Result<DensityMatrix> {
    check_single(phi)?;
    let mut acc = None;
    for v1 in design {
        let sent = receiver.prepare(&phi.apply_unitary(v1, &[0])?)?;
        let v2 = label.adjoint().mul(&v1.adjoint())?;
        accumulate(&mut acc, sent.apply_unitary(&v2, &[0])?.into_matrix());
    }
    let acc = acc.ok_or_else(|| Error::InvalidParameter("empty design".into()))?;
    DensityMatrix::new(scaled(acc, 1.0 / design.len() as f64))
}

/// Ideal view over a set of announced labels, keyed `L=i`.
pub fn simulator3_world(
    u: &UnitaryOp,
    receiver: &Receiver3,
    labels: &[UnitaryOp],
    design: &[UnitaryOp],
) -> Result<CqState> {
    let phi = state_oracle(IdealResource::Rsp, SenderInput::Unitary(u.clone())).query(())?;
    let mut out = CqState::new();
    for (i, label) in labels.iter().enumerate() {
        let view = simulator3_conditioned(&phi, receiver, label, design)?;
        out.add(format!("L={i}"), 1.0 / labels.len() as f64, &view);
    }
    Ok(out)
}

/// The Clifford group as a plain unitary list, the default exact design.
pub fn clifford_design() -> Vec<UnitaryOp> {
    clifford_group().iter().map(|c| c.matrix().clone()).collect()
}

// ---------------------------------------------------------------- S4

pub fn simulator4_run<R: Rng + ?Sized>(
    oracle: &mut Oracle<bool, DensityMatrix>,
    receiver: &Receiver4,
    rng: &mut R,
) -> Result<Transcript> {
    let d: bool = rng.random();
    let dephased = receiver.input.apply_unitary(&pauli_z_power(d), &[0])?;
    let outcomes = dephased.measure_computational(&[0])?;
    let o = outcomes.sample(rng);
    let post = o.state.as_ref().expect("sampled outcome has a state");
    let fresh = oracle.query(o.bits.bit(0))?;
    let replaced = fresh.tensor(post)?;
    Ok(Transcript::new(apply_optional(replaced, receiver.post.as_ref())?))
}

/// Ideal-world counterpart of `protocol4_averaged`; every branch is its own
/// session with its own oracle.
pub fn simulator4_world(u: &UnitaryOp, receiver: &Receiver4) -> Result<CqState> {
    let mut out = CqState::new();
    for d in [false, true] {
        let dephased = receiver.input.apply_unitary(&pauli_z_power(d), &[0])?;
        for o in dephased.measure_computational(&[0])?.support() {
            let post = o.state.as_ref().expect("support has states");
            let fresh = rsp_sn_oracle(u.clone()).query(o.bits.bit(0))?;
            let replaced = fresh.tensor(post)?;
            let view = apply_optional(replaced, receiver.post.as_ref())?;
            out.add("", 0.5 * o.probability, &view);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- S5

pub fn simulator5_run<R: Rng + ?Sized>(
    oracle: &mut Oracle<DensityMatrix, DensityMatrix>,
    group: &OperationGroup,
    coalition: &Coalition,
    rng: &mut R,
) -> Result<Transcript> {
    let substitute = group.sample(rng);
    simulator5_run_with(oracle, group, coalition, &substitute)
}

/// Simulator 5 with its stand-in for the honest client's element fixed.
///
/// At the honest position the server's state is rotated back by the
/// elements already applied, sent through RO, rotated forward again and
/// then hit with `substitute`. The announced correction is the product of
/// the inverses, with `substitute` in the honest slot.
pub fn simulator5_run_with(
    oracle: &mut Oracle<DensityMatrix, DensityMatrix>,
    group: &OperationGroup,
    coalition: &Coalition,
    substitute: &UnitaryOp,
) -> Result<Transcript> {
    coalition.validate(group)?;
    group.check_member(substitute)?;
    let h = coalition.honest_client;
    let k = group.num_qubits();
    let wires: Vec<usize> = (0..k).collect();
    // U_{h-1} ⋯ U_1
    let before = coalition.client_unitaries[..h - 1]
        .iter()
        .try_fold(UnitaryOp::identity(k), |acc, uj| uj.mul(&acc))?;

    let mut state = coalition.server_input.clone();
    for (j, op) in coalition.server_ops.iter().enumerate() {
        state = apply_optional(state, op.as_ref())?;
        if j + 1 == h {
            state = state.apply_unitary(&before.adjoint(), &wires)?;
            state = oracle.query(state)?;
            state = state.apply_unitary(&before, &wires)?;
            state = state.apply_unitary(substitute, &wires)?;
        } else {
            state = ro_on(group, &coalition.client_unitaries[j], &state, &wires)?;
        }
    }
    let mut announced = coalition.client_unitaries.clone();
    announced[h - 1] = substitute.clone();
    let corr = correction(&UnitaryOp::identity(k), &announced)?;

    let mut t = Transcript::new(state);
    for (j, uj) in coalition.client_unitaries.iter().enumerate() {
        if j + 1 != h {
            t.push(1, Party::Client(j + 1), MessageValue::Unitary(uj.clone()));
        }
    }
    t.push(3, Party::Orchestrator, MessageValue::Unitary(corr));
    Ok(t)
}

/// Ideal-world counterpart of `protocol5_averaged`.
pub fn simulator5_world(group: &OperationGroup, u: &UnitaryOp, coalition: &Coalition) -> Result<CqState> {
    group.check_member(u)?;
    let elements = group
        .elements()
        .ok_or_else(|| Error::Precondition(format!("exact averaging needs a finite group, not {}", group.name())))?;
    let weight = 1.0 / elements.len() as f64;
    let mut out = CqState::new();
    for substitute in &elements {
        let mut oracle = ro_oracle(group.clone(), u.clone());
        let t = simulator5_run_with(&mut oracle, group, coalition, substitute)?;
        let MessageValue::Unitary(corr) = &t.messages.last().expect("correction is announced").value else {
            unreachable!("last message is the correction")
        };
        out.add(correction_key(&elements, corr)?, weight, &t.final_state);
    }
    Ok(out)
}

// ---------------------------------------------------------------- composition

/// Ideal world of the composed protocol conditioned on the announcement
/// `label`: Simulator 3 hands `W|φ⟩` to Simulator 2 in place of the C-RSP
/// qubit, and `W` is averaged over `design`.
pub fn composed_ideal_conditioned(
    u: &UnitaryOp,
    receiver: &ComposedReceiver,
    label: &UnitaryOp,
    design: &[UnitaryOp],
    averaging: GlAveraging,
) -> Result<CqState> {
    let phi = state_oracle(IdealResource::Rsp, SenderInput::Unitary(u.clone())).query(())?;
    let weight = 1.0 / design.len() as f64;
    let mut out = CqState::new();
    for w in design {
        let inner = simulator2_averaged(&phi.apply_unitary(w, &[0])?, &receiver.inner, averaging)?;
        let v2 = label.adjoint().mul(&w.adjoint())?;
        for (key, block) in inner.blocks() {
            let state = DensityMatrix::from_matrix_unchecked(block.clone());
            let view = if key.ends_with(ABORT) {
                state.tensor(&receiver.aux)?
            } else {
                receiver.prepare(&state)?.apply_unitary(&v2, &[0])?
            };
            out.add_operator(key.clone(), &scaled(view.into_matrix(), weight));
        }
    }
    Ok(out)
}
