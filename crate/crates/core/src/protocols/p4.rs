use rand::Rng;

use super::{apply_optional, check_channel_size, Transcript};
use crate::error::{Error, Result};
use crate::groups::pauli_z_power;
use crate::qstate::{CqState, DensityMatrix, QuantumChannel, UnitaryOp};
use crate::resources::ru_on;

/// Receiver of the selective-NOT protocol: wire 0 of `input` goes into RU.
#[derive(Clone, Debug)]
pub struct Receiver4 {
    pub input: DensityMatrix,
    pub post: Option<QuantumChannel>,
}

impl Receiver4 {
    pub fn honest() -> Self {
        Self {
            input: DensityMatrix::ket0(),
            post: None,
        }
    }

    pub fn new(input: DensityMatrix, post: Option<QuantumChannel>) -> Result<Self> {
        if input.num_qubits() == 0 {
            return Err(Error::Precondition("receiver must send one qubit".into()));
        }
        check_channel_size(post.as_ref(), input.num_qubits())?;
        Ok(Self { input, post })
    }
}

fn check_target(u: &UnitaryOp) -> Result<()> {
    if u.num_qubits() != 1 {
        return Err(Error::Precondition("target unitary must act on one qubit".into()));
    }
    Ok(())
}

pub fn protocol4_run<R: Rng + ?Sized>(u: &UnitaryOp, receiver: &Receiver4, rng: &mut R) -> Result<Transcript> {
    protocol4_run_with(u, receiver, rng.random())
}

/// One execution with the sender's dephasing bit fixed to `d`.
pub fn protocol4_run_with(u: &UnitaryOp, receiver: &Receiver4, d: bool) -> Result<Transcript> {
    check_target(u)?;
    let sent = u.mul(&pauli_z_power(d))?;
    let returned = ru_on(&sent, &receiver.input, 0)?;
    Ok(Transcript::new(apply_optional(returned, receiver.post.as_ref())?))
}

/// Final joint state averaged over `d`; no classical messages are sent.
pub fn protocol4_averaged(u: &UnitaryOp, receiver: &Receiver4) -> Result<CqState> {
    let mut out = CqState::new();
    for d in [false, true] {
        out.add("", 0.5, &protocol4_run_with(u, receiver, d)?.final_state);
    }
    Ok(out)
}
