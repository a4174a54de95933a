//! Ideal functionalities, evaluated exactly on density matrices.
//!
//! Every resource rejects inputs of the wrong register size. Functions with
//! an `_on` suffix act on one sub-register of a larger joint state so that a
//! distinguisher's ancilla can ride along untouched.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{
    pauli_x_power, rotation_z, x_string, z_string, Angle, GF2InvertibleMap, OperationGroup, Pauli1,
    SingleQubitClifford,
};
use crate::qstate::{BitString, DensityMatrix, QuantumChannel, UnitaryOp};


/// Names of the ideal resources.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResourceKind {
    SpRsp,
    RrD,
    CRsp,
    Rsp,
    MRc,
    Ru,
    RspSn,
    Ro,
}

impl ResourceKind {
    pub const ALL: [ResourceKind; 8] = [
        ResourceKind::SpRsp,
        ResourceKind::RrD,
        ResourceKind::CRsp,
        ResourceKind::Rsp,
        ResourceKind::MRc,
        ResourceKind::Ru,
        ResourceKind::RspSn,
        ResourceKind::Ro,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ResourceKind::SpRsp => "sp-rsp",
            ResourceKind::RrD => "rr-d",
            ResourceKind::CRsp => "c-rsp",
            ResourceKind::Rsp => "rsp",
            ResourceKind::MRc => "m-rc",
            ResourceKind::Ru => "ru",
            ResourceKind::RspSn => "rsp-sn",
            ResourceKind::Ro => "ro",
        }
    }

    /// Whether the receiver feeds a quantum register into the resource.
    pub fn takes_receiver_input(self) -> bool {
        matches!(
            self,
            ResourceKind::RrD | ResourceKind::MRc | ResourceKind::Ru | ResourceKind::Ro
        )
    }

    pub fn has_filtered_interface(self) -> bool {
        self == ResourceKind::RspSn
    }
}

impl fmt::Display for ResourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ResourceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ResourceKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown resource {s:?}")))
    }
}

fn expect_qubits(rho: &DensityMatrix, n: usize) -> Result<()> {
    if rho.num_qubits() != n {
        return Err(Error::Precondition(format!(
            "resource expects a {n}-qubit register, got {}",
            rho.num_qubits()
        )));
    }
    Ok(())
}

fn expect_unitary_qubits(u: &UnitaryOp, n: usize) -> Result<()> {
    if u.num_qubits() != n {
        return Err(Error::Precondition(format!(
            "resource expects a {n}-qubit operator, got {}",
            u.num_qubits()
        )));
    }
    Ok(())
}

/// `|+_θ⟩⟨+_θ|`.
pub fn sp_rsp(theta: Angle) -> DensityMatrix {
    DensityMatrix::equatorial(theta.radians())
}

/// `ρ ↦ ½ Σ_b R_Z(θ) X^b ρ X^b R_Z(θ)†` as a channel.
pub fn rr_d_channel(theta: Angle) -> QuantumChannel {
    let r = rotation_z(theta);
    let branches: Vec<UnitaryOp> = [false, true]
        .iter()
        .map(|&b| r.mul(&pauli_x_power(b)).expect("single-qubit product"))
        .collect();
    QuantumChannel::uniform_mixture(&branches).expect("two unitaries of equal size")
}

/// Output of RR_D with the hidden bit averaged out.
pub fn rr_d(theta: Angle, rho: &DensityMatrix) -> Result<DensityMatrix> {
    expect_qubits(rho, 1)?;
    rr_d_on(theta, rho, 0)
}

/// RR_D on wire `wire` of a joint state.
pub fn rr_d_on(theta: Angle, joint: &DensityMatrix, wire: usize) -> Result<DensityMatrix> {
    joint.apply_channel(&rr_d_channel(theta), &[wire])
}

/// One execution of RR_D in which the harness may inspect the hidden bit.
#[derive(Clone, Debug)]
pub struct RrDTrajectory {
    pub output: DensityMatrix,
    pub b: bool,
}

/// Samples `b` and applies `R_Z(θ) X^b` to wire `wire`.
pub fn rr_d_sample<R: Rng + ?Sized>(
    theta: Angle,
    joint: &DensityMatrix,
    wire: usize,
    rng: &mut R,
) -> Result<RrDTrajectory> {
    let b: bool = rng.random();
    let u = rotation_z(theta).mul(&pauli_x_power(b))?;
    Ok(RrDTrajectory {
        output: joint.apply_unitary(&u, &[wire])?,
        b,
    })
}

/// `C|0⟩⟨0|C†`.
pub fn c_rsp(c: &SingleQubitClifford) -> DensityMatrix {
    c.matrix().prepare_basis(0).expect("single-qubit Clifford")
}

/// `U|0⟩⟨0|U†`.
pub fn rsp(u: &UnitaryOp) -> Result<DensityMatrix> {
    expect_unitary_qubits(u, 1)?;
    u.prepare_basis(0)
}

/// The `n`-qubit Clifford `C_1 = (P C ⊗ X^r) U_g Z^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuredClifford {
    pub pauli: Pauli1,
    pub clifford: SingleQubitClifford,
    pub r: BitString,
    pub g: GF2InvertibleMap,
    pub d: BitString,
}

impl StructuredClifford {
    pub fn new(
        pauli: Pauli1,
        clifford: SingleQubitClifford,
        r: BitString,
        g: GF2InvertibleMap,
        d: BitString,
    ) -> Result<Self> {
        let n = g.n();
        if d.len() != n || r.len() + 1 != n {
            return Err(Error::InvalidParameter(format!(
                "masks of length {} and {} do not fit n = {n}",
                d.len(),
                r.len()
            )));
        }
        Ok(Self {
            pauli,
            clifford,
            r,
            g,
            d,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.g.n()
    }

    /// The single-qubit slot `P C` acting on the first wire.
    pub fn first_qubit_operator(&self) -> UnitaryOp {
        self.pauli
            .unitary()
            .mul(self.clifford.matrix())
            .expect("single-qubit product")
    }

    pub fn unitary(&self) -> UnitaryOp {
        let front = self
            .first_qubit_operator()
            .tensor(&x_string(&self.r))
            .expect("n qubits fit the register");
        UnitaryOp::product([&front, &self.g.permutation_unitary(), &z_string(&self.d)])
            .expect("operators of equal size")
    }
}

/// Classical description accepted by the multi-qubit remote Clifford.
#[derive(Clone, Debug, PartialEq)]
pub enum CliffordDescription {
    Structured(StructuredClifford),
    /// Any operator given as an explicit matrix; the caller vouches that it
    /// is a Clifford.
    Explicit(UnitaryOp),
}

impl CliffordDescription {
    pub fn num_qubits(&self) -> usize {
        match self {
            CliffordDescription::Structured(s) => s.num_qubits(),
            CliffordDescription::Explicit(u) => u.num_qubits(),
        }
    }

    pub fn unitary(&self) -> UnitaryOp {
        match self {
            CliffordDescription::Structured(s) => s.unitary(),
            CliffordDescription::Explicit(u) => u.clone(),
        }
    }
}

/// `C(ρ)` for an `n`-qubit `ρ`.
pub fn m_rc(desc: &CliffordDescription, rho: &DensityMatrix) -> Result<DensityMatrix> {
    expect_qubits(rho, desc.num_qubits())?;
    rho.apply_unitary(&desc.unitary(), &rho_wires(rho))
}

/// M-RC acting on `wires` of a joint state.
pub fn m_rc_on(desc: &CliffordDescription, joint: &DensityMatrix, wires: &[usize]) -> Result<DensityMatrix> {
    if wires.len() != desc.num_qubits() {
        return Err(Error::Precondition(format!(
            "resource expects a {}-qubit register, got {}",
            desc.num_qubits(),
            wires.len()
        )));
    }
    joint.apply_unitary(&desc.unitary(), wires)
}

fn rho_wires(rho: &DensityMatrix) -> Vec<usize> {
    (0..rho.num_qubits()).collect()
}

/// `UρU†` for single-qubit `U` and `ρ`.
pub fn ru(u: &UnitaryOp, rho: &DensityMatrix) -> Result<DensityMatrix> {
    expect_qubits(rho, 1)?;
    ru_on(u, rho, 0)
}

pub fn ru_on(u: &UnitaryOp, joint: &DensityMatrix, wire: usize) -> Result<DensityMatrix> {
    expect_unitary_qubits(u, 1)?;
    joint.apply_unitary(u, &[wire])
}

/// Capability to drive the filtered interface of RSP-SN.
///
/// Only the security harness inside this crate can mint one, so protocol
/// code is confined to the honest value `b = 0`.
#[derive(Debug)]
pub struct AdversaryAccess {
    _private: (),
}

impl AdversaryAccess {
    pub(crate) fn harness() -> Self {
        Self { _private: () }
    }
}

/// Honest RSP-SN: `U|0⟩⟨0|U†`.
pub fn rsp_sn(u: &UnitaryOp) -> Result<DensityMatrix> {
    expect_unitary_qubits(u, 1)?;
    u.prepare_basis(0)
}

/// RSP-SN with the filtered bit set by an adversary: `U|b⟩⟨b|U†`.
pub fn rsp_sn_filtered(u: &UnitaryOp, b: bool, _access: &AdversaryAccess) -> Result<DensityMatrix> {
    expect_unitary_qubits(u, 1)?;
    u.prepare_basis(b as usize)
}

/// `UρU†` after checking `U ∈ 𝔊`.
pub fn ro(group: &OperationGroup, u: &UnitaryOp, rho: &DensityMatrix) -> Result<DensityMatrix> {
    expect_qubits(rho, group.num_qubits())?;
    ro_on(group, u, rho, &rho_wires(rho))
}

pub fn ro_on(group: &OperationGroup, u: &UnitaryOp, joint: &DensityMatrix, wires: &[usize]) -> Result<DensityMatrix> {
    group.check_member(u)?;
    joint.apply_unitary(u, wires)
}

/// Sender-side input of a resource call.
#[derive(Clone, Debug, PartialEq)]
pub enum SenderInput {
    Angle(Angle),
    Clifford(SingleQubitClifford),
    Unitary(UnitaryOp),
    Composite(CliffordDescription),
}

impl SenderInput {
    fn schema(&self) -> &'static str {
        match self {
            SenderInput::Angle(_) => "angle",
            SenderInput::Clifford(_) => "clifford",
            SenderInput::Unitary(_) => "unitary",
            SenderInput::Composite(_) => "composite clifford",
        }
    }
}

/// A configured ideal resource.
#[derive(Clone, Debug, PartialEq)]
pub enum IdealResource {
    SpRsp,
    RrD,
    CRsp,
    Rsp,
    MRc { n: usize },
    Ru,
    RspSn,
    Ro(OperationGroup),
}

impl IdealResource {
    pub fn kind(&self) -> ResourceKind {
        match self {
            IdealResource::SpRsp => ResourceKind::SpRsp,
            IdealResource::RrD => ResourceKind::RrD,
            IdealResource::CRsp => ResourceKind::CRsp,
            IdealResource::Rsp => ResourceKind::Rsp,
            IdealResource::MRc { .. } => ResourceKind::MRc,
            IdealResource::Ru => ResourceKind::Ru,
            IdealResource::RspSn => ResourceKind::RspSn,
            IdealResource::Ro(_) => ResourceKind::Ro,
        }
    }

    /// Size of the receiver's quantum input, if it has one.
    pub fn receiver_qubits(&self) -> Option<usize> {
        match self {
            IdealResource::RrD | IdealResource::Ru => Some(1),
            IdealResource::MRc { n } => Some(*n),
            IdealResource::Ro(g) => Some(g.num_qubits()),
            _ => None,
        }
    }

    /// Honest evaluation with hidden randomness averaged out.
    pub fn evaluate(&self, sender: &SenderInput, receiver: Option<&DensityMatrix>) -> Result<DensityMatrix> {
        let mismatch = || {
            Error::Precondition(format!(
                "{} does not accept a {} input",
                self.kind(),
                sender.schema()
            ))
        };
        let quantum = || -> Result<&DensityMatrix> {
            receiver.ok_or_else(|| Error::Precondition(format!("{} needs a receiver register", self.kind())))
        };
        if receiver.is_some() && self.receiver_qubits().is_none() {
            return Err(Error::Precondition(format!(
                "{} takes no receiver register",
                self.kind()
            )));
        }
        match (self, sender) {
            (IdealResource::SpRsp, SenderInput::Angle(t)) => Ok(sp_rsp(*t)),
            (IdealResource::RrD, SenderInput::Angle(t)) => rr_d(*t, quantum()?),
            (IdealResource::CRsp, SenderInput::Clifford(c)) => Ok(c_rsp(c)),
            (IdealResource::Rsp, SenderInput::Unitary(u)) => rsp(u),
            (IdealResource::MRc { n }, SenderInput::Composite(d)) => {
                if d.num_qubits() != *n {
                    return Err(mismatch());
                }
                m_rc(d, quantum()?)
            }
            (IdealResource::Ru, SenderInput::Unitary(u)) => ru(u, quantum()?),
            (IdealResource::RspSn, SenderInput::Unitary(u)) => rsp_sn(u),
            (IdealResource::Ro(g), SenderInput::Unitary(u)) => ro(g, u, quantum()?),
            _ => Err(mismatch()),
        }
    }
}
