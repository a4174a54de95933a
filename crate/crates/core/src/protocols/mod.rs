//! Converters for the five protocols and their sequential composition.
//!
//! Each protocol has a trajectory entry point (`*_run`), which samples the
//! honest parties' randomness and returns a [`Transcript`], and an exact entry
//! point that averages every hidden choice and returns the distinguisher's
//! view as a [`CqState`] keyed by the public classical record.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::Pauli1;
use crate::qstate::{BitString, DensityMatrix, QuantumChannel, UnitaryOp};
use crate::resources::ResourceKind;

mod compose;
mod p1;
mod p2;
mod p3;
mod p4;
mod p5;

#[cfg(test)]
mod tests;

pub use compose::{compose_sequential, composed_conditioned, composed_run, ComposedReceiver, SequentialComposition};
pub use p1::{protocol1_averaged, protocol1_run, Receiver1};
pub use p2::{
    protocol2_averaged, protocol2_averaged_given_pauli, protocol2_run, protocol2_run_with, sender_accepts,
    GlAveraging, Protocol2Choices, Receiver2, ABORT,
};
pub use p3::{
    protocol3_averaged_channel, protocol3_conditioned, protocol3_corrected_average, protocol3_run,
    protocol3_run_with, reduced_receiver_channel, Protocol3Choices, Receiver3,
};
pub use p4::{protocol4_averaged, protocol4_run, protocol4_run_with, Receiver4};
pub use p5::{protocol5_averaged, protocol5_run, protocol5_run_with, Adversary5, Coalition};

pub(crate) use p2::{pad_average, receiver2_respond, twirled_input};
pub(crate) use p5::{correction, correction_key};

/// Protocol identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProtocolId {
    P1,
    P2,
    P3,
    P4,
    P5,
}

impl ProtocolId {
    pub const ALL: [ProtocolId; 5] = [
        ProtocolId::P1,
        ProtocolId::P2,
        ProtocolId::P3,
        ProtocolId::P4,
        ProtocolId::P5,
    ];

    /// The resource the protocol constructs.
    pub fn constructs(self) -> ResourceKind {
        match self {
            ProtocolId::P1 => ResourceKind::SpRsp,
            ProtocolId::P2 => ResourceKind::CRsp,
            ProtocolId::P3 => ResourceKind::Rsp,
            ProtocolId::P4 => ResourceKind::RspSn,
            ProtocolId::P5 => ResourceKind::Ro,
        }
    }

    /// The resources the protocol consumes.
    pub fn requires(self) -> &'static [ResourceKind] {
        match self {
            ProtocolId::P1 => &[ResourceKind::RrD],
            ProtocolId::P2 => &[ResourceKind::MRc],
            ProtocolId::P3 => &[ResourceKind::CRsp, ResourceKind::Ru],
            ProtocolId::P4 => &[ResourceKind::Ru],
            ProtocolId::P5 => &[ResourceKind::Ro],
        }
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for ProtocolId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProtocolId::ALL
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown protocol {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Party {
    Sender,
    Receiver,
    Orchestrator,
    Server,
    Client(usize),
}

/// Payload of a classical message.
#[derive(Clone, Debug, PartialEq)]
pub enum MessageValue {
    Bits(BitString),
    Abort,
    /// Decryption key of a one-time pad.
    Key(Pauli1),
    Unitary(UnitaryOp),
}

impl fmt::Display for MessageValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MessageValue::Bits(b) => write!(f, "{b}"),
            MessageValue::Abort => f.write_str("abort"),
            MessageValue::Key(p) => write!(f, "key {p}"),
            MessageValue::Unitary(u) => {
                let m = u.matrix();
                write!(f, "unitary[")?;
                for (i, z) in m.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
                }
                f.write_str("]")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Message {
    /// Protocol step that emitted the message.
    pub step: u8,
    pub from: Party,
    pub value: MessageValue,
}

/// Classical messages in order plus the receiving side's final joint state.
#[derive(Clone, Debug, PartialEq)]
pub struct Transcript {
    pub messages: Vec<Message>,
    /// Output register first, then any ancilla the receiver carried along.
    pub final_state: DensityMatrix,
    pub aborted: bool,
}

impl Transcript {
    pub(crate) fn new(final_state: DensityMatrix) -> Self {
        Self {
            messages: Vec::new(),
            final_state,
            aborted: false,
        }
    }

    pub(crate) fn push(&mut self, step: u8, from: Party, value: MessageValue) {
        self.messages.push(Message { step, from, value });
    }

    pub fn reveals_key(&self) -> bool {
        self.messages.iter().any(|m| matches!(m.value, MessageValue::Key(_)))
    }

    /// The output register alone.
    pub fn output(&self) -> Result<DensityMatrix> {
        self.final_state.reduced(&[0])
    }
}

/// Everything the distinguisher controls in one protocol execution.
#[derive(Clone, Debug)]
pub enum Adversary {
    P1(Receiver1),
    P2(Receiver2),
    P3(Receiver3),
    P4(Receiver4),
    P5(Coalition),
}

impl Adversary {
    pub fn protocol(&self) -> ProtocolId {
        match self {
            Adversary::P1(_) => ProtocolId::P1,
            Adversary::P2(_) => ProtocolId::P2,
            Adversary::P3(_) => ProtocolId::P3,
            Adversary::P4(_) => ProtocolId::P4,
            Adversary::P5(_) => ProtocolId::P5,
        }
    }
}

/// Applies an optional channel to every wire of `rho`.
pub(crate) fn apply_optional(rho: DensityMatrix, channel: Option<&QuantumChannel>) -> Result<DensityMatrix> {
    match channel {
        None => Ok(rho),
        Some(ch) => {
            let wires: Vec<usize> = (0..rho.num_qubits()).collect();
            rho.apply_channel(ch, &wires)
        }
    }
}

fn check_channel_size(channel: Option<&QuantumChannel>, num_qubits: usize) -> Result<()> {
    if let Some(ch) = channel {
        if ch.num_qubits_in() != num_qubits || ch.num_qubits_out() != num_qubits {
            return Err(Error::DimensionMismatch {
                expected: num_qubits,
                actual: ch.num_qubits_in(),
            });
        }
    }
    Ok(())
}
