use super::{
    check_register, cplx, max_abs_entry, qubits_for_dim, CMatrix, DensityMatrix, UnitaryOp,
    TOLERANCE,
};
use crate::error::{Error, Result};

/// CPTP map given by Kraus operators.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumChannel {
    num_qubits_in: usize,
    num_qubits_out: usize,
    kraus: Vec<CMatrix>,
}

impl QuantumChannel {
    /// Validates dimensions and completeness `Σ K†K = I`.
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let num_qubits_out = qubits_for_dim(first.nrows())?;
        let num_qubits_in = qubits_for_dim(first.ncols())?;
        if kraus
            .iter()
            .any(|k| k.nrows() != first.nrows() || k.ncols() != first.ncols())
        {
            return Err(Error::InvalidChannel("inconsistent Kraus shapes".into()));
        }
        let dim_in = first.ncols();
        let mut sum = CMatrix::zeros(dim_in, dim_in);
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let dev = max_abs_entry(&(sum - CMatrix::identity(dim_in, dim_in)));
        if dev > TOLERANCE {
            return Err(Error::InvalidChannel(format!(
                "completeness deviation {dev:.3e}"
            )));
        }
        Ok(Self {
            num_qubits_in,
            num_qubits_out,
            kraus,
        })
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self::from_unitary(&UnitaryOp::identity(num_qubits))
    }

    pub fn from_unitary(u: &UnitaryOp) -> Self {
        Self {
            num_qubits_in: u.num_qubits(),
            num_qubits_out: u.num_qubits(),
            kraus: vec![u.matrix().clone()],
        }
    }

    /// Uniform mixture of unitary conjugations.
    pub fn uniform_mixture(unitaries: &[UnitaryOp]) -> Result<Self> {
        let first = unitaries
            .first()
            .ok_or_else(|| Error::InvalidChannel("empty mixture".into()))?;
        let scale = cplx((1.0 / unitaries.len() as f64).sqrt(), 0.0);
        let kraus = unitaries
            .iter()
            .map(|u| {
                if u.num_qubits() != first.num_qubits() {
                    Err(Error::DimensionMismatch {
                        expected: first.num_qubits(),
                        actual: u.num_qubits(),
                    })
                } else {
                    Ok(u.matrix() * scale)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(kraus)
    }

    pub fn num_qubits_in(&self) -> usize {
        self.num_qubits_in
    }

    pub fn num_qubits_out(&self) -> usize {
        self.num_qubits_out
    }

    pub fn kraus_operators(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// Applies the channel to a state of exactly `num_qubits_in` qubits.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.num_qubits() != self.num_qubits_in {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits_in,
                actual: rho.num_qubits(),
            });
        }
        let dim = 1usize << self.num_qubits_out;
        let mut out = CMatrix::zeros(dim, dim);
        for k in &self.kraus {
            out += k * rho.matrix() * k.adjoint();
        }
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &QuantumChannel) -> Result<Self> {
        if self.num_qubits_out != other.num_qubits_in {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits_out,
                actual: other.num_qubits_in,
            });
        }
        let kraus = other
            .kraus
            .iter()
            .flat_map(|b| self.kraus.iter().map(move |a| b * a))
            .collect();
        Ok(Self {
            num_qubits_in: self.num_qubits_in,
            num_qubits_out: other.num_qubits_out,
            kraus,
        })
    }

    /// `ρ ↦ W† E(W ρ W†) W`.
    pub fn conjugated_by(&self, w: &UnitaryOp) -> Result<Self> {
        if self.num_qubits_in != self.num_qubits_out || w.num_qubits() != self.num_qubits_in {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits_in,
                actual: w.num_qubits(),
            });
        }
        let kraus = self
            .kraus
            .iter()
            .map(|k| w.matrix().adjoint() * k * w.matrix())
            .collect();
        Ok(Self {
            num_qubits_in: self.num_qubits_in,
            num_qubits_out: self.num_qubits_out,
            kraus,
        })
    }

    /// Multiplies every Kraus operator by a phase; the channel is unchanged.
    pub fn with_kraus_phase(&self, phi: f64) -> Self {
        let phase = num_complex::Complex64::from_polar(1.0, phi);
        Self {
            num_qubits_in: self.num_qubits_in,
            num_qubits_out: self.num_qubits_out,
            kraus: self.kraus.iter().map(|k| k * phase).collect(),
        }
    }

    /// Tensor product; `self` acts on the low-index wires.
    pub fn tensor(&self, other: &QuantumChannel) -> Result<Self> {
        check_register(self.num_qubits_in + other.num_qubits_in)?;
        check_register(self.num_qubits_out + other.num_qubits_out)?;
        let kraus = self
            .kraus
            .iter()
            .flat_map(|a| other.kraus.iter().map(move |b| a.kronecker(b)))
            .collect();
        Ok(Self {
            num_qubits_in: self.num_qubits_in + other.num_qubits_in,
            num_qubits_out: self.num_qubits_out + other.num_qubits_out,
            kraus,
        })
    }
}

/// Choi matrix `Σ_ij |i⟩⟨j| ⊗ E(|i⟩⟨j|)` on the unnormalised maximally
/// entangled state; the input reference occupies the leading wires.
pub fn choi_matrix(channel: &QuantumChannel) -> CMatrix {
    let din = 1usize << channel.num_qubits_in();
    let dout = 1usize << channel.num_qubits_out();
    let mut choi = CMatrix::zeros(din * dout, din * dout);
    for k in channel.kraus_operators() {
        // vec(K) in the reference ⊗ output ordering
        let v = nalgebra::DVector::from_fn(din * dout, |idx, _| {
            let (i, o) = (idx / dout, idx % dout);
            k[(o, i)]
        });
        choi += &v * v.adjoint();
    }
    choi
}

/// Channel equality decided entrywise on Choi matrices.
pub fn channels_equal(a: &QuantumChannel, b: &QuantumChannel) -> bool {
    if a.num_qubits_in() != b.num_qubits_in() || a.num_qubits_out() != b.num_qubits_out() {
        return false;
    }
    max_abs_entry(&(choi_matrix(a) - choi_matrix(b))) <= TOLERANCE
}

/// Largest Choi-entry difference between two channels of equal shape.
pub fn choi_distance(a: &QuantumChannel, b: &QuantumChannel) -> f64 {
    if a.num_qubits_in() != b.num_qubits_in() || a.num_qubits_out() != b.num_qubits_out() {
        return f64::INFINITY;
    }
    max_abs_entry(&(choi_matrix(a) - choi_matrix(b)))
}
