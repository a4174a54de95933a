use rand::Rng;

use super::p2::{protocol2_averaged, protocol2_run, GlAveraging, Receiver2, ABORT};
use super::p3::Protocol3Choices;
use super::{apply_optional, check_channel_size, MessageValue, Party, ProtocolId, Transcript};
use crate::error::{Error, Result};
use crate::groups::{clifford_group, haar_sample_1q};
use crate::qstate::{CqState, DensityMatrix, QuantumChannel, UnitaryOp};
use crate::resources::{ru_on, ResourceKind};

/// `outer` with its `slot` resource realised by running `inner`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SequentialComposition {
    pub inner: ProtocolId,
    pub outer: ProtocolId,
    pub slot: ResourceKind,
}

/// Checks that `inner` constructs a resource `outer` consumes.
pub fn compose_sequential(inner: ProtocolId, outer: ProtocolId) -> Result<SequentialComposition> {
    let slot = inner.constructs();
    if !outer.requires().contains(&slot) {
        return Err(Error::Composition(format!(
            "{outer} does not consume {slot}, which is what {inner} constructs"
        )));
    }
    Ok(SequentialComposition { inner, outer, slot })
}

impl SequentialComposition {
    /// Resources the composed protocol still consumes.
    pub fn requires(&self) -> Vec<ResourceKind> {
        let mut out: Vec<ResourceKind> = self
            .outer
            .requires()
            .iter()
            .copied()
            .filter(|&k| k != self.slot)
            .chain(self.inner.requires().iter().copied())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn constructs(&self) -> ResourceKind {
        self.outer.constructs()
    }

    fn ensure_executable(&self) -> Result<()> {
        if (self.inner, self.outer) != (ProtocolId::P2, ProtocolId::P3) {
            return Err(Error::Composition(format!(
                "no executable model for {} inside {}",
                self.inner, self.outer
            )));
        }
        Ok(())
    }
}

/// Receiver of the composed protocol: `inner` plays the Clifford-state leg,
/// then `aux` joins the register and `before_ru` acts on the qubit, the
/// inner ancilla and `aux` before the RU call.
#[derive(Clone, Debug)]
pub struct ComposedReceiver {
    pub inner: Receiver2,
    pub aux: DensityMatrix,
    pub before_ru: Option<QuantumChannel>,
}

impl ComposedReceiver {
    pub fn honest(n: usize) -> Result<Self> {
        Ok(Self {
            inner: Receiver2::honest(n)?,
            aux: DensityMatrix::trivial(),
            before_ru: None,
        })
    }

    pub fn new(inner: Receiver2, aux: DensityMatrix, before_ru: Option<QuantumChannel>) -> Result<Self> {
        let size = 1 + inner.input.num_qubits() - inner.n + aux.num_qubits();
        check_channel_size(before_ru.as_ref(), size)?;
        Ok(Self {
            inner,
            aux,
            before_ru,
        })
    }

    pub(crate) fn prepare(&self, after_inner: &DensityMatrix) -> Result<DensityMatrix> {
        apply_optional(after_inner.tensor(&self.aux)?, self.before_ru.as_ref())
    }
}

/// One execution of the composed protocol. An inner abort aborts the whole
/// run before RU is called.
pub fn composed_run<R: Rng + ?Sized>(
    composition: &SequentialComposition,
    u: &UnitaryOp,
    receiver: &ComposedReceiver,
    rng: &mut R,
) -> Result<Transcript> {
    composition.ensure_executable()?;
    let choices = Protocol3Choices {
        c: clifford_group()[rng.random_range(0..24)].clone(),
        u1: haar_sample_1q(rng),
    };
    let inner = protocol2_run(receiver.inner.n, &choices.c, &receiver.inner, rng)?;
    if inner.aborted {
        return Ok(Transcript {
            messages: inner.messages,
            final_state: inner.final_state.tensor(&receiver.aux)?,
            aborted: true,
        });
    }
    let sent = receiver.prepare(&inner.final_state)?;
    let returned = ru_on(&choices.u1, &sent, 0)?;
    let u2 = choices.correction(u)?;
    let mut t = Transcript::new(returned.apply_unitary(&u2, &[0])?);
    t.messages = inner.messages;
    t.push(3, Party::Sender, MessageValue::Unitary(u2));
    Ok(t)
}

/// Real-world view conditioned on the announced correction `label`, averaged
/// over the Clifford and every hidden choice of the inner leg.
pub fn composed_conditioned(
    composition: &SequentialComposition,
    u: &UnitaryOp,
    receiver: &ComposedReceiver,
    label: &UnitaryOp,
    averaging: GlAveraging,
) -> Result<CqState> {
    composition.ensure_executable()?;
    let group = clifford_group();
    let weight = 1.0 / group.len() as f64;
    let mut out = CqState::new();
    for c in group {
        let inner = protocol2_averaged(receiver.inner.n, c, &receiver.inner, averaging)?;
        let u1 = UnitaryOp::product([&label.adjoint(), u, &c.matrix().adjoint()])?;
        for (key, block) in inner.blocks() {
            let state = DensityMatrix::from_matrix_unchecked(block.clone());
            if key.ends_with(ABORT) {
                let held = state.tensor(&receiver.aux)?;
                out.add_operator(key.clone(), &(held.into_matrix() * crate::qstate::cplx(weight, 0.0)));
            } else {
                let returned = ru_on(&u1, &receiver.prepare(&state)?, 0)?;
                out.add_operator(key.clone(), &(returned.into_matrix() * crate::qstate::cplx(weight, 0.0)));
            }
        }
    }
    Ok(out)
}
