//! Operator families the protocols draw randomness from, and the twirls
//! used to average over them.

mod clifford;
mod gf2;
mod haar;
mod operation_group;
mod pauli;
mod twirl;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{cplx, UnitaryOp};

pub use clifford::{clifford_group, enumerate_single_qubit_cliffords, SingleQubitClifford};
pub use gf2::{count_gf2_invertible, enumerate_gf2_invertible, sample_gf2_invertible, GF2InvertibleMap};
pub use haar::{frame_potential, haar_sample_1q, icosahedral_design};
pub use operation_group::OperationGroup;
pub use pauli::{Pauli1, PauliChannelProbs, PauliOp};
pub use twirl::{
    clifford_twirl, clifford_twirl_channel, dephasing_twirl, depolarizing_channel,
    gf2_linear_twirl, gf2_linear_twirl_enumerated, pauli_weights, haar_twirl_equals_clifford_twirl,
    pauli_channel, twirl_over, HaarTwirlCheck,
};

/// Angle `θ = kπ/4` with `k ∈ {0,…,7}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Angle(u8);

impl Angle {
    pub fn new(k: u8) -> Result<Self> {
        if k > 7 {
            return Err(Error::InvalidParameter(format!(
                "angle index {k} is outside 0..=7"
            )));
        }
        Ok(Self(k))
    }

    pub fn all() -> impl Iterator<Item = Angle> {
        (0..8).map(Angle)
    }

    pub fn k(self) -> u8 {
        self.0
    }

    pub fn radians(self) -> f64 {
        self.0 as f64 * FRAC_PI_4
    }

    /// `-θ` taken modulo 2π.
    pub fn negated(self) -> Angle {
        Angle((8 - self.0) % 8)
    }
}

impl TryFrom<u8> for Angle {
    type Error = Error;

    fn try_from(k: u8) -> Result<Self> {
        Angle::new(k)
    }
}

impl From<Angle> for u8 {
    fn from(a: Angle) -> u8 {
        a.0
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}pi/4", self.0)
    }
}

impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let k: u8 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("invalid angle index {s:?}")))?;
        Angle::new(k)
    }
}

fn c(re: f64) -> Complex64 {
    cplx(re, 0.0)
}

/// `R_Z(θ) = diag(1, e^{iθ})`, so that `R_Z(θ)|+⟩ = |+_θ⟩`.
pub fn rotation_z(theta: Angle) -> UnitaryOp {
    rotation_z_radians(theta.radians())
}

pub fn rotation_z_radians(theta: f64) -> UnitaryOp {
    UnitaryOp::single_qubit([c(1.0), c(0.0), c(0.0), Complex64::from_polar(1.0, theta)])
        .expect("diagonal phase matrix is unitary")
}

pub fn pauli_x_power(b: bool) -> UnitaryOp {
    if b {
        pauli_x()
    } else {
        UnitaryOp::identity(1)
    }
}

pub fn pauli_z_power(d: bool) -> UnitaryOp {
    if d {
        pauli_z()
    } else {
        UnitaryOp::identity(1)
    }
}

pub fn pauli_x() -> UnitaryOp {
    Pauli1::X.unitary()
}

pub fn pauli_y() -> UnitaryOp {
    Pauli1::Y.unitary()
}

pub fn pauli_z() -> UnitaryOp {
    Pauli1::Z.unitary()
}

pub fn hadamard() -> UnitaryOp {
    let s = FRAC_1_SQRT_2;
    UnitaryOp::single_qubit([c(s), c(s), c(s), c(-s)]).expect("Hadamard is unitary")
}

pub fn phase_s() -> UnitaryOp {
    UnitaryOp::single_qubit([c(1.0), c(0.0), c(0.0), cplx(0.0, 1.0)]).expect("S is unitary")
}

/// CNOT with control on the first listed wire.
pub fn cnot() -> UnitaryOp {
    let mut m = crate::qstate::CMatrix::zeros(4, 4);
    for (i, j) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m[(i, j)] = c(1.0);
    }
    UnitaryOp::new(m).expect("CNOT is unitary")
}

/// Tensor power `X^{a_1} ⊗ … ⊗ X^{a_m}` for a mask read with the first bit leftmost.
pub fn x_string(mask: &crate::qstate::BitString) -> UnitaryOp {
    PauliOp::new(*mask, crate::qstate::BitString::zeros(mask.len()))
        .expect("masks of equal length")
        .unitary()
}

/// Tensor power of `Z^{d_i}`.
pub fn z_string(mask: &crate::qstate::BitString) -> UnitaryOp {
    PauliOp::new(crate::qstate::BitString::zeros(mask.len()), *mask)
        .expect("masks of equal length")
        .unitary()
}

#[cfg(test)]
mod tests;
