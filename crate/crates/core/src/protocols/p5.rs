use rand::Rng;

use super::{apply_optional, check_channel_size, MessageValue, Party, Transcript};
use crate::error::{Error, Result};
use crate::groups::OperationGroup;
use crate::qstate::{CqState, DensityMatrix, QuantumChannel, UnitaryOp};
use crate::resources::ro_on;

/// A server colluding with every client except `honest_client`.
///
/// The server's register occupies the first `group.num_qubits()` wires of
/// `server_input`; `server_ops[j]` acts on the whole server state right
/// before the call with client `j + 1`.
#[derive(Clone, Debug)]
pub struct Coalition {
    /// One-based position of the honest client.
    pub honest_client: usize,
    /// `client_unitaries[j]` is client `j + 1`'s announced element; the
    /// entry at the honest position is ignored.
    pub client_unitaries: Vec<UnitaryOp>,
    pub server_input: DensityMatrix,
    pub server_ops: Vec<Option<QuantumChannel>>,
}

impl Coalition {
    pub fn num_clients(&self) -> usize {
        self.client_unitaries.len()
    }

    pub(crate) fn validate(&self, group: &OperationGroup) -> Result<()> {
        let m = self.num_clients();
        if m == 0 || !(1..=m).contains(&self.honest_client) {
            return Err(Error::InvalidParameter(format!(
                "honest client {} outside 1..={m}",
                self.honest_client
            )));
        }
        for (j, u) in self.client_unitaries.iter().enumerate() {
            if j + 1 != self.honest_client {
                group.check_member(u)?;
            }
        }
        if self.server_ops.len() != m {
            return Err(Error::InvalidParameter(format!(
                "{} server operations for {m} calls",
                self.server_ops.len()
            )));
        }
        if self.server_input.num_qubits() < group.num_qubits() {
            return Err(Error::Precondition("server register smaller than the group's".into()));
        }
        for op in &self.server_ops {
            check_channel_size(op.as_ref(), self.server_input.num_qubits())?;
        }
        Ok(())
    }

    /// Server state after every call, given the full list of applied elements.
    pub(crate) fn server_view(&self, group: &OperationGroup, applied: &[UnitaryOp]) -> Result<DensityMatrix> {
        let wires: Vec<usize> = (0..group.num_qubits()).collect();
        let mut state = self.server_input.clone();
        for (op, u) in self.server_ops.iter().zip(applied) {
            state = apply_optional(state, op.as_ref())?;
            state = ro_on(group, u, &state, &wires)?;
        }
        Ok(state)
    }
}

/// Behaviour of everyone but the orchestrator.
#[derive(Clone, Debug)]
pub enum Adversary5 {
    /// All clients and the server follow the protocol on server input `input`.
    Honest { input: DensityMatrix, clients: usize },
    Coalition(Coalition),
}

/// `U' = U U_1† ⋯ U_m†`.
pub(crate) fn correction(u: &UnitaryOp, applied: &[UnitaryOp]) -> Result<UnitaryOp> {
    let mut out = u.clone();
    for uj in applied {
        out = out.mul(&uj.adjoint())?;
    }
    Ok(out)
}

/// Key under which a correction is recorded: its index in the group.
pub(crate) fn correction_key(group_elements: &[UnitaryOp], corr: &UnitaryOp) -> Result<String> {
    group_elements
        .iter()
        .position(|e| e.same_channel(corr))
        .map(|i| format!("U'={i}"))
        .ok_or_else(|| Error::NotInGroup("correction left the group".into()))
}

pub fn protocol5_run<R: Rng + ?Sized>(
    group: &OperationGroup,
    u: &UnitaryOp,
    adversary: &Adversary5,
    rng: &mut R,
) -> Result<Transcript> {
    let applied: Vec<UnitaryOp> = match adversary {
        Adversary5::Honest { clients, .. } => (0..*clients).map(|_| group.sample(rng)).collect(),
        Adversary5::Coalition(c) => {
            let mut v = c.client_unitaries.clone();
            if let Some(slot) = v.get_mut(c.honest_client.wrapping_sub(1)) {
                *slot = group.sample(rng);
            }
            v
        }
    };
    protocol5_run_with(group, u, &applied, adversary)
}

/// One execution where client `j` announces `applied[j − 1]`. For an honest
/// server the final state is after the correction; a coalition's server
/// keeps its state as it was after the last call.
pub fn protocol5_run_with(
    group: &OperationGroup,
    u: &UnitaryOp,
    applied: &[UnitaryOp],
    adversary: &Adversary5,
) -> Result<Transcript> {
    group.check_member(u)?;
    for uj in applied {
        group.check_member(uj)?;
    }
    let wires: Vec<usize> = (0..group.num_qubits()).collect();
    let corr = correction(u, applied)?;
    let (final_state, m) = match adversary {
        Adversary5::Honest { input, clients } => {
            if applied.len() != *clients || *clients == 0 {
                return Err(Error::InvalidParameter(format!(
                    "{} announced elements for {clients} clients",
                    applied.len()
                )));
            }
            let mut state = input.clone();
            for uj in applied {
                state = ro_on(group, uj, &state, &wires)?;
            }
            (state.apply_unitary(&corr, &wires)?, *clients)
        }
        Adversary5::Coalition(c) => {
            c.validate(group)?;
            if applied.len() != c.num_clients() {
                return Err(Error::InvalidParameter("announced elements do not match clients".into()));
            }
            (c.server_view(group, applied)?, c.num_clients())
        }
    };
    let mut t = Transcript::new(final_state);
    for (j, uj) in applied.iter().enumerate().take(m) {
        t.push(1, Party::Client(j + 1), MessageValue::Unitary(uj.clone()));
    }
    t.push(3, Party::Orchestrator, MessageValue::Unitary(corr));
    Ok(t)
}

/// Coalition's view averaged exactly over the honest client's element,
/// keyed by the group index of the announced correction.
pub fn protocol5_averaged(group: &OperationGroup, u: &UnitaryOp, coalition: &Coalition) -> Result<CqState> {
    group.check_member(u)?;
    coalition.validate(group)?;
    let elements = group
        .elements()
        .ok_or_else(|| Error::Precondition(format!("exact averaging needs a finite group, not {}", group.name())))?;
    let weight = 1.0 / elements.len() as f64;
    let mut out = CqState::new();
    for uh in &elements {
        let mut applied = coalition.client_unitaries.clone();
        applied[coalition.honest_client - 1] = uh.clone();
        let view = coalition.server_view(group, &applied)?;
        out.add(correction_key(&elements, &correction(u, &applied)?)?, weight, &view);
    }
    Ok(out)
}
