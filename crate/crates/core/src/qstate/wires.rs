//! Index bookkeeping for sub-registers of a multi-qubit register.
//!
//! Wire 0 is the leftmost tensor factor and therefore the most significant
//! bit of a basis index.

use crate::error::{Error, Result};

/// Largest register any state in the crate may occupy.
pub const MAX_QUBITS: usize = 8;

pub(crate) fn check_register(num_qubits: usize) -> Result<()> {
    if num_qubits > MAX_QUBITS {
        return Err(Error::RegisterTooLarge(num_qubits));
    }
    Ok(())
}

pub(crate) fn validate_wires(wires: &[usize], num_qubits: usize) -> Result<()> {
    let mut seen = 0u64;
    for &w in wires {
        if w >= num_qubits {
            return Err(Error::WireOutOfRange {
                wire: w,
                num_qubits,
            });
        }
        if seen & (1 << w) != 0 {
            return Err(Error::DuplicateWire(w));
        }
        seen |= 1 << w;
    }
    Ok(())
}

/// Bit of `index` carried by `wire` in an `num_qubits` register.
#[inline]
pub fn bit_at(index: usize, wire: usize, num_qubits: usize) -> usize {
    (index >> (num_qubits - 1 - wire)) & 1
}

/// Split of a register into a selected sub-register and its complement.
///
/// `selected[l]` is the global index contribution of local value `l` on the
/// selected wires (first listed wire is the most significant local bit);
/// `rest[m]` is the same for the complementary wires in ascending order.
#[derive(Debug, Clone)]
pub(crate) struct WireSplit {
    pub selected: Vec<usize>,
    pub rest: Vec<usize>,
}

impl WireSplit {
    pub fn new(num_qubits: usize, wires: &[usize]) -> Result<Self> {
        validate_wires(wires, num_qubits)?;
        let rest_wires: Vec<usize> = (0..num_qubits).filter(|w| !wires.contains(w)).collect();
        Ok(Self {
            selected: offsets(num_qubits, wires),
            rest: offsets(num_qubits, &rest_wires),
        })
    }
}

fn offsets(num_qubits: usize, wires: &[usize]) -> Vec<usize> {
    let k = wires.len();
    (0..1usize << k)
        .map(|local| {
            wires.iter().enumerate().fold(0, |acc, (t, &w)| {
                let bit = (local >> (k - 1 - t)) & 1;
                acc | (bit << (num_qubits - 1 - w))
            })
        })
        .collect()
}
