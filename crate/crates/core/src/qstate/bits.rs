use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A classical bit string read with wire 0 as the most significant bit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct BitString {
    len: usize,
    value: u64,
}

impl BitString {
    pub fn new(len: usize, value: u64) -> Result<Self> {
        if len > 32 || (len < 64 && value >> len != 0) {
            return Err(Error::InvalidParameter(format!(
                "value {value} does not fit in {len} bits"
            )));
        }
        Ok(Self { len, value })
    }

    pub fn zeros(len: usize) -> Self {
        Self { len, value: 0 }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let value = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        Self {
            len: bits.len(),
            value,
        }
    }

    /// Every string of the given length in increasing numeric order.
    pub fn all(len: usize) -> impl Iterator<Item = BitString> {
        (0..1u64 << len).map(move |value| BitString { len, value })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn index(&self) -> usize {
        self.value as usize
    }

    /// Bit carried by position `i` (position 0 is the leftmost character).
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.value >> (self.len - 1 - i)) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn weight(&self) -> u32 {
        self.value.count_ones()
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                expected: self.len,
                actual: other.len,
            });
        }
        Ok(BitString {
            len: self.len,
            value: self.value ^ other.value,
        })
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        BitString {
            len: self.len + other.len,
            value: (self.value << other.len) | other.value,
        }
    }

    /// Drops the leading bit.
    pub fn tail(&self) -> BitString {
        assert!(self.len > 0);
        BitString {
            len: self.len - 1,
            value: self.value & ((1u64 << (self.len - 1)) - 1),
        }
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.bit(i)).collect()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidParameter(format!(
                    "invalid bit character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.len() > 32 {
            return Err(Error::InvalidParameter("bit string too long".into()));
        }
        Ok(BitString::from_bits(&bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn msb_is_first_character() {
        let b: BitString = "100".parse().unwrap();
        assert_eq!(b.value(), 4);
        assert!(b.bit(0));
        assert!(!b.bit(2));
        assert_eq!(b.to_string(), "100");
        assert_eq!(b.tail().to_string(), "00");
    }

    #[test]
    fn concat_and_xor() {
        let a: BitString = "10".parse().unwrap();
        let b: BitString = "011".parse().unwrap();
        assert_eq!(a.concat(&b).to_string(), "10011");
        assert_eq!(a.xor(&"11".parse().unwrap()).unwrap().to_string(), "01");
        assert!(a.xor(&b).is_err());
        assert!(BitString::new(2, 4).is_err());
    }
}
