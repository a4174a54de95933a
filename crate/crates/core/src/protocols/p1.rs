use rand::Rng;

use super::{apply_optional, check_channel_size, Transcript};
use crate::error::{Error, Result};
use crate::groups::Angle;
use crate::qstate::{CqState, DensityMatrix, QuantumChannel};
use crate::resources::{rr_d_on, rr_d_sample};

/// Receiver of the single-plane protocol.
///
/// Wire 0 of `input` goes into RR_D; the remaining wires stay with the
/// receiver. `post` acts on the whole register after the qubit returns.
#[derive(Clone, Debug)]
pub struct Receiver1 {
    pub input: DensityMatrix,
    pub post: Option<QuantumChannel>,
}

impl Receiver1 {
    pub fn honest() -> Self {
        Self {
            input: DensityMatrix::plus(),
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

pub fn protocol1_run<R: Rng + ?Sized>(theta: Angle, receiver: &Receiver1, rng: &mut R) -> Result<Transcript> {
    let returned = rr_d_sample(theta, &receiver.input, 0, rng)?.output;
    Ok(Transcript::new(apply_optional(returned, receiver.post.as_ref())?))
}

/// Final joint state with the RR_D bit averaged; there are no classical
/// messages, so the record is a single empty key.
pub fn protocol1_averaged(theta: Angle, receiver: &Receiver1) -> Result<CqState> {
    let returned = rr_d_on(theta, &receiver.input, 0)?;
    let final_state = apply_optional(returned, receiver.post.as_ref())?;
    Ok(CqState::single("", &final_state))
}
