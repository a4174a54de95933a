use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::clifford::closure_mod_phase;
use super::{clifford_group, haar_sample_1q, icosahedral_design, pauli_x, rotation_z, Angle};
use crate::error::{Error, Result};
use crate::qstate::UnitaryOp;

/// Group `𝔊` of operations a remote-operation resource may apply.
#[derive(Clone, Debug, PartialEq)]
pub enum OperationGroup {
    FullUnitary1q,
    Clifford1q,
    /// `⟨Z(π/4)⟩`: the eight rotations `R_Z(kπ/4)`.
    ZRotations,
    /// `⟨X, Z(π/4)⟩`: sixteen elements `X^b R_Z(kπ/4)`.
    XAndZRotations,
    Explicit(Vec<UnitaryOp>),
}

impl OperationGroup {
    /// Explicit finite group; checked for closure under products and inverses
    /// up to global phase.
    pub fn explicit(elements: Vec<UnitaryOp>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty group".into()))?;
        let k = first.num_qubits();
        if elements.iter().any(|u| u.num_qubits() != k) {
            return Err(Error::InvalidParameter("group elements differ in size".into()));
        }
        let find = |u: &UnitaryOp| elements.iter().any(|e| e.same_channel(u));
        for a in &elements {
            if !find(&a.adjoint()) {
                return Err(Error::NotInGroup("element inverse missing".into()));
            }
            for b in &elements {
                if !find(&a.mul(b)?) {
                    return Err(Error::NotInGroup("product missing".into()));
                }
            }
        }
        Ok(OperationGroup::Explicit(elements))
    }

    pub fn name(&self) -> &'static str {
        match self {
            OperationGroup::FullUnitary1q => "full-unitary-1q",
            OperationGroup::Clifford1q => "clifford-1q",
            OperationGroup::ZRotations => "z-rotations",
            OperationGroup::XAndZRotations => "xz-rotations",
            OperationGroup::Explicit(_) => "explicit",
        }
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            OperationGroup::Explicit(e) => e[0].num_qubits(),
            _ => 1,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, OperationGroup::FullUnitary1q)
    }

    /// Elements modulo phase; `None` for the continuous group.
    pub fn elements(&self) -> Option<Vec<UnitaryOp>> {
        match self {
            OperationGroup::FullUnitary1q => None,
            OperationGroup::Clifford1q => {
                Some(clifford_group().iter().map(|c| c.matrix().clone()).collect())
            }
            OperationGroup::ZRotations => Some(Angle::all().map(rotation_z).collect()),
            OperationGroup::XAndZRotations => Some(closure_mod_phase(&[
                pauli_x(),
                rotation_z(Angle::new(1).expect("valid")),
            ])),
            OperationGroup::Explicit(e) => Some(e.clone()),
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.elements().map(|e| e.len())
    }

    /// Finite set whose uniform average reproduces the group's Haar average
    /// for every quantity the harness compares: the group itself when
    /// finite, and the icosahedral 5-design for the full unitary group.
    pub fn exact_average_set(&self) -> Vec<UnitaryOp> {
        self.elements()
            .unwrap_or_else(|| icosahedral_design().to_vec())
    }

    pub fn index_of(&self, u: &UnitaryOp) -> Option<usize> {
        self.elements()?.iter().position(|e| e.same_channel(u))
    }

    pub fn contains(&self, u: &UnitaryOp) -> bool {
        match self {
            OperationGroup::FullUnitary1q => u.num_qubits() == 1,
            _ => u.num_qubits() == self.num_qubits() && self.index_of(u).is_some(),
        }
    }

    pub fn check_member(&self, u: &UnitaryOp) -> Result<()> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(Error::NotInGroup(format!("operator is not in {}", self.name())))
        }
    }

    /// Haar sample for the continuous group, uniform element otherwise.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> UnitaryOp {
        match self.elements() {
            None => haar_sample_1q(rng),
            Some(e) => e[rng.random_range(0..e.len())].clone(),
        }
    }
}

impl fmt::Display for OperationGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperationGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full-unitary-1q" | "u2" => Ok(OperationGroup::FullUnitary1q),
            "clifford-1q" | "clifford" => Ok(OperationGroup::Clifford1q),
            "z-rotations" | "z-rotations-theta" => Ok(OperationGroup::ZRotations),
            "xz-rotations" | "x-and-z-rotations-theta" => Ok(OperationGroup::XAndZRotations),
            other => Err(Error::InvalidParameter(format!("unknown group {other:?}"))),
        }
    }
}
