use nalgebra::DMatrix;
use rand::Rng;

use super::{apply_optional, check_channel_size, MessageValue, Party, Transcript};
use crate::error::{Error, Result};
use crate::groups::{clifford_group, haar_sample_1q, SingleQubitClifford};
use crate::qstate::{cplx, CMatrix, DensityMatrix, QuantumChannel, UnitaryOp, TOLERANCE};
use crate::resources::{c_rsp, ru_on};

/// Receiver of the arbitrary-state protocol.
///
/// It holds `aux`, receives the C-RSP qubit as wire 0 in front of it,
/// applies `before_ru` to everything and sends wire 0 through RU.
#[derive(Clone, Debug)]
pub struct Receiver3 {
    pub aux: DensityMatrix,
    pub before_ru: Option<QuantumChannel>,
}

impl Receiver3 {
    pub fn honest() -> Self {
        Self {
            aux: DensityMatrix::trivial(),
            before_ru: None,
        }
    }

    pub fn new(aux: DensityMatrix, before_ru: Option<QuantumChannel>) -> Result<Self> {
        check_channel_size(before_ru.as_ref(), aux.num_qubits() + 1)?;
        Ok(Self { aux, before_ru })
    }

    /// State sent into RU when the C-RSP output is `received`.
    pub(crate) fn prepare(&self, received: &DensityMatrix) -> Result<DensityMatrix> {
        apply_optional(received.tensor(&self.aux)?, self.before_ru.as_ref())
    }
}

/// The sender's hidden choices.
#[derive(Clone, Debug, PartialEq)]
pub struct Protocol3Choices {
    pub c: SingleQubitClifford,
    pub u1: UnitaryOp,
}

impl Protocol3Choices {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self {
            c: clifford_group()[rng.random_range(0..24)].clone(),
            u1: haar_sample_1q(rng),
        }
    }

    /// `U_2 = U C† U_1†`.
    pub fn correction(&self, u: &UnitaryOp) -> Result<UnitaryOp> {
        UnitaryOp::product([u, &self.c.matrix().adjoint(), &self.u1.adjoint()])
    }
}

fn check_target(u: &UnitaryOp) -> Result<()> {
    if u.num_qubits() != 1 {
        return Err(Error::Precondition("target unitary must act on one qubit".into()));
    }
    Ok(())
}

pub fn protocol3_run<R: Rng + ?Sized>(u: &UnitaryOp, receiver: &Receiver3, rng: &mut R) -> Result<Transcript> {
    let choices = Protocol3Choices::sample(rng);
    protocol3_run_with(u, receiver, &choices)
}

/// One execution with fixed sender choices. The final state is the register
/// after the receiver applies `U_2` to wire 0.
pub fn protocol3_run_with(u: &UnitaryOp, receiver: &Receiver3, choices: &Protocol3Choices) -> Result<Transcript> {
    check_target(u)?;
    let sent = receiver.prepare(&c_rsp(&choices.c))?;
    let returned = ru_on(&choices.u1, &sent, 0)?;
    let u2 = choices.correction(u)?;
    let mut t = Transcript::new(returned.apply_unitary(&u2, &[0])?);
    t.push(3, Party::Sender, MessageValue::Unitary(u2));
    Ok(t)
}

/// Distinguisher's register conditioned on the announced correction
/// `U_2 = label`: the Clifford is uniform and `U_1 = label† U C†`.
pub fn protocol3_conditioned(u: &UnitaryOp, receiver: &Receiver3, label: &UnitaryOp) -> Result<DensityMatrix> {
    check_target(u)?;
    let group = clifford_group();
    let mut acc: Option<CMatrix> = None;
    for c in group {
        let u1 = UnitaryOp::product([&label.adjoint(), u, &c.matrix().adjoint()])?;
        let sent = receiver.prepare(&c_rsp(c))?;
        let m = ru_on(&u1, &sent, 0)?.into_matrix();
        acc = Some(match acc {
            Some(a) => a + m,
            None => m,
        });
    }
    let avg = acc.expect("group is nonempty") * cplx(1.0 / group.len() as f64, 0.0);
    DensityMatrix::new(avg)
}

/// Register after the receiver applies the announced correction, averaged
/// over all sender randomness; `U_1` cancels so only the Clifford remains.
pub fn protocol3_corrected_average(u: &UnitaryOp, receiver: &Receiver3) -> Result<DensityMatrix> {
    check_target(u)?;
    let group = clifford_group();
    let mut acc: Option<CMatrix> = None;
    for c in group {
        let sent = receiver.prepare(&c_rsp(c))?;
        let back = u.mul(&c.matrix().adjoint())?;
        let m = sent.apply_unitary(&back, &[0])?.into_matrix();
        acc = Some(match acc {
            Some(a) => a + m,
            None => m,
        });
    }
    DensityMatrix::new(acc.expect("group is nonempty") * cplx(1.0 / group.len() as f64, 0.0))
}

/// Single-qubit channel `σ ↦ Tr_aux Φ(σ ⊗ aux)` the receiver's operation
/// induces on the protocol qubit.
pub fn reduced_receiver_channel(receiver: &Receiver3) -> Result<QuantumChannel> {
    let k = receiver.aux.num_qubits();
    let daux = 1usize << k;
    let phi = match &receiver.before_ru {
        Some(ch) => ch.clone(),
        None => QuantumChannel::identity(k + 1),
    };
    let eig = receiver.aux.matrix().clone().symmetric_eigen();
    let mut kraus = Vec::new();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= TOLERANCE {
            continue;
        }
        let e = eig.eigenvectors.column(j);
        for km in phi.kraus_operators() {
            for i in 0..daux {
                // (I ⊗ ⟨i|) K (I ⊗ |e_j⟩) with the protocol qubit leading
                let op = DMatrix::from_fn(2, 2, |row, col| {
                    let mut acc = cplx(0.0, 0.0);
                    for t in 0..daux {
                        acc += km[(row * daux + i, col * daux + t)] * e[t];
                    }
                    acc * cplx(lambda.sqrt(), 0.0)
                });
                kraus.push(op);
            }
        }
    }
    QuantumChannel::new(kraus)
}

/// Real-world channel on the protocol qubit, `σ ↦ (1/24) Σ_C C† E(C σ C†) C`,
/// assembled from the protocol's own averaging over the Clifford it sends.
pub fn protocol3_averaged_channel(receiver: &Receiver3) -> Result<QuantumChannel> {
    let e = reduced_receiver_channel(receiver)?;
    let scale = cplx((1.0 / 24.0f64).sqrt(), 0.0);
    let mut kraus = Vec::new();
    for c in clifford_group() {
        for k in e.kraus_operators() {
            kraus.push(c.matrix().matrix().adjoint() * k * c.matrix().matrix() * scale);
        }
    }
    QuantumChannel::new(kraus)
}
