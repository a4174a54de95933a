use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{cplx, BitString, CMatrix, UnitaryOp, TOLERANCE};

/// Single-qubit Pauli label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli1 {
    I,
    X,
    Y,
    Z,
}

impl Pauli1 {
    pub const ALL: [Pauli1; 4] = [Pauli1::I, Pauli1::X, Pauli1::Y, Pauli1::Z];

    pub fn unitary(self) -> UnitaryOp {
        let (o, l) = (cplx(0.0, 0.0), cplx(1.0, 0.0));
        let entries = match self {
            Pauli1::I => [l, o, o, l],
            Pauli1::X => [o, l, l, o],
            Pauli1::Y => [o, cplx(0.0, -1.0), cplx(0.0, 1.0), o],
            Pauli1::Z => [l, o, o, -l],
        };
        UnitaryOp::single_qubit(entries).expect("Pauli matrices are unitary")
    }

    /// `(x, z)` bits of `X^x Z^z` up to phase.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli1::I => (false, false),
            Pauli1::X => (true, false),
            Pauli1::Y => (true, true),
            Pauli1::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli1::I,
            (true, false) => Pauli1::X,
            (true, true) => Pauli1::Y,
            (false, true) => Pauli1::Z,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Pauli1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli1::I => "I",
            Pauli1::X => "X",
            Pauli1::Y => "Y",
            Pauli1::Z => "Z",
        };
        f.write_str(s)
    }
}

/// `⊗_i X^{a_i} Z^{d_i}` with the phase dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliOp {
    x_mask: BitString,
    z_mask: BitString,
}

impl PauliOp {
    pub fn new(x_mask: BitString, z_mask: BitString) -> Result<Self> {
        if x_mask.len() != z_mask.len() {
            return Err(Error::DimensionMismatch {
                expected: x_mask.len(),
                actual: z_mask.len(),
            });
        }
        Ok(Self { x_mask, z_mask })
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self {
            x_mask: BitString::zeros(num_qubits),
            z_mask: BitString::zeros(num_qubits),
        }
    }

    pub fn single(p: Pauli1) -> Self {
        let (x, z) = p.bits();
        Self {
            x_mask: BitString::from_bits(&[x]),
            z_mask: BitString::from_bits(&[z]),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.x_mask.len()
    }

    pub fn x_mask(&self) -> BitString {
        self.x_mask
    }

    pub fn z_mask(&self) -> BitString {
        self.z_mask
    }

    pub fn factor(&self, wire: usize) -> Pauli1 {
        Pauli1::from_bits(self.x_mask.bit(wire), self.z_mask.bit(wire))
    }

    /// Matrix of `⊗ X^{a_i} Z^{d_i}`; a signed permutation matrix.
    pub fn unitary(&self) -> UnitaryOp {
        let n = self.num_qubits();
        let dim = 1usize << n;
        let (a, d) = (self.x_mask.index(), self.z_mask.index());
        let mut m = CMatrix::zeros(dim, dim);
        for col in 0..dim {
            let sign = if (col & d).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            m[(col ^ a, col)] = cplx(sign, 0.0);
        }
        UnitaryOp::new_unchecked(m)
    }

    /// Every element of `𝒫_n` modulo phase, in `(x_mask, z_mask)` order.
    pub fn all(num_qubits: usize) -> Vec<PauliOp> {
        BitString::all(num_qubits)
            .flat_map(|x| BitString::all(num_qubits).map(move |z| PauliOp { x_mask: x, z_mask: z }))
            .collect()
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in 0..self.num_qubits() {
            write!(f, "{}", self.factor(w))?;
        }
        Ok(())
    }
}

/// Probabilities of a single-qubit Pauli channel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliChannelProbs {
    pub p_i: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
}

impl PauliChannelProbs {
    pub fn new(p_i: f64, p_x: f64, p_y: f64, p_z: f64) -> Result<Self> {
        let probs = Self { p_i, p_x, p_y, p_z };
        if probs.as_array().iter().any(|&p| p < -TOLERANCE)
            || (probs.as_array().iter().sum::<f64>() - 1.0).abs() > TOLERANCE
        {
            return Err(Error::InvalidParameter(format!(
                "not a probability vector: {:?}",
                probs.as_array()
            )));
        }
        Ok(probs)
    }

    pub fn get(&self, p: Pauli1) -> f64 {
        self.as_array()[p.index()]
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.p_i, self.p_x, self.p_y, self.p_z]
    }

    /// `max(|p_X − p_Y|, |p_X − p_Z|)`.
    pub fn asymmetry(&self) -> f64 {
        (self.p_x - self.p_y).abs().max((self.p_x - self.p_z).abs())
    }

    pub fn is_depolarizing(&self) -> bool {
        self.asymmetry() <= TOLERANCE
    }
}
