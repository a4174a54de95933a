use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{cplx, BitString, CMatrix, UnitaryOp};

const MAX_N: usize = 5;

fn check_n(n: usize) -> Result<()> {
    if !(1..=MAX_N).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "GF(2) dimension {n} is outside 1..={MAX_N}"
        )));
    }
    Ok(())
}

/// Rank over GF(2) of vectors packed into integers.
fn rank(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut x = v;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Invertible linear map `g(x) = x_1 b_1 ⊕ … ⊕ x_n b_n` on `{0,1}^n`.
///
/// `x_1` is the leading (wire 0) bit of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GF2InvertibleMap {
    n: usize,
    basis: Vec<u64>,
}

impl GF2InvertibleMap {
    /// Builds the map from the images `b_1, …, b_n` of the unit vectors.
    pub fn from_basis(n: usize, basis: Vec<u64>) -> Result<Self> {
        check_n(n)?;
        if basis.len() != n || basis.iter().any(|&b| b >> n != 0) {
            return Err(Error::InvalidParameter(format!(
                "expected {n} vectors of {n} bits"
            )));
        }
        if rank(&basis) != n {
            return Err(Error::InvalidParameter("basis vectors are dependent".into()));
        }
        Ok(Self { n, basis })
    }

    /// Builds the map from a row-major bit matrix `M` with `g(x) = M x`.
    pub fn from_matrix(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        check_n(n)?;
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("matrix is not square".into()));
        }
        let basis = (0..n)
            .map(|col| {
                rows.iter()
                    .fold(0u64, |acc, row| (acc << 1) | row[col] as u64)
            })
            .collect();
        Self::from_basis(n, basis)
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            n,
            basis: (0..n).map(|i| 1u64 << (n - 1 - i)).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    /// Row-major bit matrix: entry `(r, c)` is bit `r` of `b_c`.
    pub fn matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|r| {
                self.basis
                    .iter()
                    .map(|b| (b >> (self.n - 1 - r)) & 1 == 1)
                    .collect()
            })
            .collect()
    }

    pub fn is_invertible(&self) -> bool {
        rank(&self.basis) == self.n
    }

    pub fn apply_value(&self, x: u64) -> u64 {
        (0..self.n)
            .filter(|i| (x >> (self.n - 1 - i)) & 1 == 1)
            .fold(0, |acc, i| acc ^ self.basis[i])
    }

    pub fn apply(&self, x: &BitString) -> Result<BitString> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        BitString::new(self.n, self.apply_value(x.value()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GF2InvertibleMap) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        Self::from_basis(
            self.n,
            other.basis.iter().map(|&b| self.apply_value(b)).collect(),
        )
    }

    pub fn inverse(&self) -> Self {
        let dim = 1u64 << self.n;
        let mut inv = vec![0u64; self.n];
        for x in 0..dim {
            let y = self.apply_value(x);
            for (i, slot) in inv.iter_mut().enumerate() {
                if y == 1u64 << (self.n - 1 - i) {
                    *slot = x;
                }
            }
        }
        Self::from_basis(self.n, inv).expect("inverse of a bijection")
    }

    /// `U_g|x⟩ = |g(x)⟩`.
    pub fn permutation_unitary(&self) -> UnitaryOp {
        let dim = 1usize << self.n;
        let mut m = CMatrix::zeros(dim, dim);
        for x in 0..dim {
            m[(self.apply_value(x as u64) as usize, x)] = cplx(1.0, 0.0);
        }
        UnitaryOp::new(m).expect("permutation matrix is unitary")
    }
}

impl fmt::Display for GF2InvertibleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<String> = self
            .basis
            .iter()
            .map(|&b| BitString::new(self.n, b).expect("fits").to_string())
            .collect();
        write!(f, "[{}]", cols.join(","))
    }
}

/// `G_n = ∏_{i<n} (2^n − 2^i)`.
pub fn count_gf2_invertible(n: usize) -> Result<u64> {
    check_n(n)?;
    Ok((0..n).map(|i| (1u64 << n) - (1u64 << i)).product())
}

/// All invertible maps, in ascending order of their basis lists.
///
/// Brute force over every `n × n` bit matrix; limited to `n ≤ 4`.
pub fn enumerate_gf2_invertible(n: usize) -> Result<Vec<GF2InvertibleMap>> {
    check_n(n)?;
    if n > 4 {
        return Err(Error::InvalidParameter(
            "exhaustive GL(n,2) enumeration is limited to n <= 4".into(),
        ));
    }
    let mask = (1u64 << n) - 1;
    let mut out = Vec::new();
    for packed in 0..1u64 << (n * n) {
        let basis: Vec<u64> = (0..n)
            .map(|i| (packed >> (n * (n - 1 - i))) & mask)
            .collect();
        if rank(&basis) == n {
            out.push(GF2InvertibleMap { n, basis });
        }
    }
    Ok(out)
}

/// Uniform sample: draws basis vectors one at a time, rejecting any that
/// fall in the span of those already chosen.
pub fn sample_gf2_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<GF2InvertibleMap> {
    check_n(n)?;
    let dim = 1u64 << n;
    let mut basis = Vec::with_capacity(n);
    while basis.len() < n {
        let v = rng.random_range(0..dim);
        let mut candidate = basis.clone();
        candidate.push(v);
        if rank(&candidate) == candidate.len() {
            basis = candidate;
        }
    }
    Ok(GF2InvertibleMap { n, basis })
}
