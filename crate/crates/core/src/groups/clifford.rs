use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{hadamard, phase_s, Pauli1};
use crate::error::{Error, Result};
use crate::qstate::{choi_matrix, cplx, UnitaryOp, TOLERANCE};

/// Element of the single-qubit Clifford group modulo global phase.
///
/// Indices refer to the canonical enumeration returned by
/// [`enumerate_single_qubit_cliffords`].
#[derive(Clone, Debug, PartialEq)]
pub struct SingleQubitClifford {
    index: usize,
    matrix: UnitaryOp,
}

impl SingleQubitClifford {
    pub fn from_index(index: usize) -> Result<Self> {
        clifford_group()
            .get(index)
            .cloned()
            .ok_or_else(|| Error::InvalidParameter(format!("Clifford index {index} is outside 0..24")))
    }

    /// Looks up the element equal to `u` up to phase.
    pub fn from_unitary(u: &UnitaryOp) -> Result<Self> {
        clifford_group()
            .iter()
            .find(|c| c.matrix.same_channel(u))
            .cloned()
            .ok_or_else(|| Error::NotInGroup("unitary is not a single-qubit Clifford".into()))
    }

    pub fn identity() -> Self {
        Self::from_unitary(&UnitaryOp::identity(1)).expect("identity is Clifford")
    }

    pub fn hadamard() -> Self {
        Self::from_unitary(&hadamard()).expect("H is Clifford")
    }

    pub fn phase() -> Self {
        Self::from_unitary(&phase_s()).expect("S is Clifford")
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn matrix(&self) -> &UnitaryOp {
        &self.matrix
    }

    /// Group product `self · other` (apply `other` first).
    pub fn compose(&self, other: &SingleQubitClifford) -> Self {
        let prod = self.matrix.mul(&other.matrix).expect("both are 1-qubit");
        Self::from_unitary(&prod).expect("Clifford group is closed")
    }

    pub fn inverse(&self) -> Self {
        Self::from_unitary(&self.matrix.adjoint()).expect("Clifford group is closed")
    }

    /// Image of a Pauli under conjugation `C P C†`, with its sign.
    pub fn conjugate_pauli(&self, p: Pauli1) -> Option<(f64, Pauli1)> {
        let m = self.matrix.matrix();
        let image = m * p.unitary().matrix() * m.adjoint();
        for q in Pauli1::ALL {
            for sign in [1.0, -1.0] {
                let diff = &image - q.unitary().matrix() * cplx(sign, 0.0);
                if diff.iter().all(|z| z.norm() <= TOLERANCE) {
                    return Some((sign, q));
                }
            }
        }
        None
    }
}

impl fmt::Display for SingleQubitClifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.index)
    }
}

impl Serialize for SingleQubitClifford {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.index as u64)
    }
}

impl<'de> Deserialize<'de> for SingleQubitClifford {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let idx = u64::deserialize(d)?;
        Self::from_index(idx as usize).map_err(serde::de::Error::custom)
    }
}

/// Rounded Choi entries used to order and deduplicate elements.
fn fingerprint(u: &UnitaryOp) -> Vec<(i64, i64)> {
    let scale = 1e6;
    choi_matrix(&u.to_channel())
        .iter()
        .map(|z| ((z.re * scale).round() as i64, (z.im * scale).round() as i64))
        .collect()
}

/// Phase-normalised copy: the first entry of significant magnitude is real positive.
fn canonical_phase(u: &UnitaryOp) -> UnitaryOp {
    let lead = u
        .matrix()
        .transpose()
        .iter()
        .copied()
        .find(|z| z.norm() > 1e-6)
        .expect("unitary has a nonzero entry");
    let phase = lead.conj() / lead.norm();
    UnitaryOp::new(u.matrix() * phase).expect("phase keeps unitarity")
}

/// All products of `gens` modulo global phase, sorted by fingerprint.
pub(super) fn closure_mod_phase(gens: &[UnitaryOp]) -> Vec<UnitaryOp> {
    let dim_qubits = gens.first().map_or(1, |g| g.num_qubits());
    let id = UnitaryOp::identity(dim_qubits);
    let mut found: Vec<(Vec<(i64, i64)>, UnitaryOp)> = vec![(fingerprint(&id), id.clone())];
    let mut frontier = vec![id];
    while let Some(u) = frontier.pop() {
        for g in gens {
            let next = g.mul(&u).expect("generators share a size");
            let fp = fingerprint(&next);
            if found.iter().all(|(f, _)| *f != fp) {
                found.push((fp, next.clone()));
                frontier.push(next);
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    found.into_iter().map(|(_, u)| canonical_phase(&u)).collect()
}

fn build_group() -> Vec<SingleQubitClifford> {
    closure_mod_phase(&[hadamard(), phase_s()])
        .into_iter()
        .enumerate()
        .map(|(index, matrix)| SingleQubitClifford { index, matrix })
        .collect()
}

/// Cached canonical enumeration.
pub fn clifford_group() -> &'static [SingleQubitClifford] {
    static GROUP: OnceLock<Vec<SingleQubitClifford>> = OnceLock::new();
    GROUP.get_or_init(build_group)
}

/// The 24 single-qubit Cliffords, generated by closure from `{H, S}` and
/// ordered by Choi fingerprint.
pub fn enumerate_single_qubit_cliffords() -> Vec<SingleQubitClifford> {
    clifford_group().to_vec()
}
