//! Exact dense state and channel arithmetic.
//!
//! Every protocol wire in the crate carries a [`DensityMatrix`]. States are
//! immutable; operations return new values. Wire 0 is the leftmost tensor
//! factor and the most significant bit of basis indices and bit strings.

mod bits;
mod channel;
mod cq;
pub mod random;
mod wires;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use bits::BitString;
pub use channel::{channels_equal, choi_distance, choi_matrix, QuantumChannel};
pub use cq::CqState;
pub use wires::{bit_at, MAX_QUBITS};

pub(crate) use wires::{check_register, validate_wires, WireSplit};

use crate::error::{Error, Result};

/// Dense complex matrix used for all operators.
pub type CMatrix = DMatrix<Complex64>;

/// Absolute tolerance for every equality and invariant check.
pub const TOLERANCE: f64 = 1e-9;

pub fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    let k = dim.trailing_zeros() as usize;
    check_register(k)?;
    Ok(k)
}

/// `K · mat` with `K` embedded on the selected wires.
pub(crate) fn apply_left(mat: &CMatrix, k: &CMatrix, split: &WireSplit) -> CMatrix {
    let rows = mat.nrows();
    let local = split.selected.len();
    let kd = k.as_slice();
    let src = mat.as_slice();
    let mut out = CMatrix::zeros(rows, mat.ncols());
    let dst = out.as_mut_slice();
    let mut buf = vec![Complex64::new(0.0, 0.0); local];
    // storage is column-major: entry (r, c) sits at r + c * rows
    for col in 0..mat.ncols() {
        let offset = col * rows;
        for &base in &split.rest {
            for (slot, &sel) in buf.iter_mut().zip(&split.selected) {
                *slot = src[offset + (base | sel)];
            }
            for (lo, &sel) in split.selected.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (l, v) in buf.iter().enumerate() {
                    acc += kd[lo + l * local] * v;
                }
                dst[offset + (base | sel)] = acc;
            }
        }
    }
    out
}

/// `mat · K†` with `K` embedded on the selected wires.
pub(crate) fn apply_right_adjoint(mat: &CMatrix, k: &CMatrix, split: &WireSplit) -> CMatrix {
    let rows = mat.nrows();
    let local = split.selected.len();
    let kd = k.as_slice();
    let src = mat.as_slice();
    let mut out = CMatrix::zeros(rows, mat.ncols());
    let dst = out.as_mut_slice();
    // (mat K†)(r, base|sel_lo) = Σ_l mat(r, base|sel_l) conj(K(lo, l)); whole columns at a time
    for &base in &split.rest {
        for (lo, &sel_lo) in split.selected.iter().enumerate() {
            let out_col = (base | sel_lo) * rows;
            for (l, &sel) in split.selected.iter().enumerate() {
                let w = kd[lo + l * local].conj();
                if w == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let in_col = (base | sel) * rows;
                for r in 0..rows {
                    dst[out_col + r] += src[in_col + r] * w;
                }
            }
        }
    }
    out
}

/// For a matrix with one nonzero per column, the row and value of each.
fn monomial_columns(k: &CMatrix) -> Option<Vec<(usize, Complex64)>> {
    let zero = Complex64::new(0.0, 0.0);
    (0..k.ncols())
        .map(|c| {
            let mut hit = None;
            for (r, &v) in k.column(c).iter().enumerate() {
                if v != zero {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some((r, v));
                }
            }
            hit
        })
        .collect()
}

pub(crate) fn conjugate_on(mat: &CMatrix, k: &CMatrix, split: &WireSplit) -> CMatrix {
    if mat.nrows() == mat.ncols() {
        if let Some(cols) = monomial_columns(k) {
            // K maps |base|sel_l⟩ to v_l |base|sel_lo⟩, so entries move with phases
            let dim = mat.nrows();
            let mut target = vec![0usize; dim];
            let mut phase = vec![Complex64::new(0.0, 0.0); dim];
            for &base in &split.rest {
                for (l, &(lo, v)) in cols.iter().enumerate() {
                    target[base | split.selected[l]] = base | split.selected[lo];
                    phase[base | split.selected[l]] = v;
                }
            }
            let src = mat.as_slice();
            let mut out = CMatrix::zeros(dim, dim);
            let dst = out.as_mut_slice();
            for j in 0..dim {
                let pj = phase[j].conj();
                let tj = target[j] * dim;
                for i in 0..dim {
                    dst[target[i] + tj] = phase[i] * src[i + j * dim] * pj;
                }
            }
            return out;
        }
    }
    apply_right_adjoint(&apply_left(mat, k, split), k, split)
}

/// Sum of absolute eigenvalues of the Hermitian part of `h`.
pub fn trace_norm(h: &CMatrix) -> f64 {
    let herm = (h + h.adjoint()) * cplx(0.5, 0.0);
    herm.symmetric_eigenvalues().iter().map(|e| e.abs()).sum()
}

fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Mixed state on `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validating constructor: Hermitian, unit trace and PSD within tolerance.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        let num_qubits = qubits_for_dim(matrix.nrows())?;
        let state = Self { num_qubits, matrix };
        state.validate()?;
        Ok(state)
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        let num_qubits = matrix.nrows().trailing_zeros() as usize;
        debug_assert_eq!(1usize << num_qubits, matrix.nrows());
        Self { num_qubits, matrix }
    }

    /// `|ψ⟩⟨ψ|` for a normalised amplitude vector.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let num_qubits = qubits_for_dim(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "state vector has squared norm {norm}"
            )));
        }
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        Ok(Self {
            num_qubits,
            matrix: &v * v.adjoint(),
        })
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_register(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut m = CMatrix::zeros(dim, dim);
        m[(index, index)] = cplx(1.0, 0.0);
        Ok(Self {
            num_qubits,
            matrix: m,
        })
    }

    pub fn from_bits(bits: &BitString) -> Result<Self> {
        Self::basis(bits.len(), bits.index())
    }

    pub fn zero_state(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        check_register(num_qubits)?;
        let dim = 1usize << num_qubits;
        Ok(Self {
            num_qubits,
            matrix: CMatrix::identity(dim, dim) * cplx(1.0 / dim as f64, 0.0),
        })
    }

    /// Empty register (the scalar 1).
    pub fn trivial() -> Self {
        Self {
            num_qubits: 0,
            matrix: CMatrix::from_element(1, 1, cplx(1.0, 0.0)),
        }
    }

    pub fn ket0() -> Self {
        Self::basis(1, 0).expect("valid")
    }

    pub fn ket1() -> Self {
        Self::basis(1, 1).expect("valid")
    }

    /// `(|0⟩ + e^{iφ}|1⟩)/√2`.
    pub fn equatorial(phi: f64) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_pure(&[cplx(s, 0.0), Complex64::from_polar(s, phi)]).expect("normalised")
    }

    pub fn plus() -> Self {
        Self::equatorial(0.0)
    }

    pub fn minus() -> Self {
        Self::equatorial(std::f64::consts::PI)
    }

    pub fn plus_i() -> Self {
        Self::equatorial(std::f64::consts::FRAC_PI_2)
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn bell() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = cplx(0.0, 0.0);
        Self::from_pure(&[cplx(s, 0.0), z, z, cplx(s, 0.0)]).expect("normalised")
    }

    /// Convex combination; weights must be nonnegative and sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut m = CMatrix::zeros(dim, dim);
        let mut total = 0.0;
        for (w, s) in parts {
            if *w < -TOLERANCE {
                return Err(Error::InvalidParameter(format!("negative weight {w}")));
            }
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: s.dim(),
                });
            }
            m += &s.matrix * cplx(*w, 0.0);
            total += w;
        }
        if (total - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "mixture weights sum to {total}"
            )));
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.matrix + self.matrix.adjoint()) * cplx(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks Hermiticity, unit trace and positivity within [`TOLERANCE`].
    pub fn validate(&self) -> Result<()> {
        let herm_dev = max_abs_entry(&(&self.matrix - self.matrix.adjoint()));
        if herm_dev > TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {herm_dev:.3e})"
            )));
        }
        let tr = self.trace();
        if (tr - cplx(1.0, 0.0)).norm() > TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }

    /// Kronecker product; `self` occupies the low-index wires.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        check_register(self.num_qubits + other.num_qubits)?;
        Ok(Self {
            num_qubits: self.num_qubits + other.num_qubits,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    /// `U ρ U†` with `U` acting on `wires` (in the listed order).
    pub fn apply_unitary(&self, u: &UnitaryOp, wires: &[usize]) -> Result<Self> {
        if wires.len() != u.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: u.num_qubits(),
                actual: wires.len(),
            });
        }
        let split = WireSplit::new(self.num_qubits, wires)?;
        Ok(Self {
            num_qubits: self.num_qubits,
            matrix: conjugate_on(&self.matrix, u.matrix(), &split),
        })
    }

    /// Applies a channel whose input and output sizes agree.
    pub fn apply_channel(&self, channel: &QuantumChannel, wires: &[usize]) -> Result<Self> {
        if channel.num_qubits_in() != channel.num_qubits_out() {
            return Err(Error::Precondition(
                "in-place channel application needs equal input and output sizes".into(),
            ));
        }
        if wires.len() != channel.num_qubits_in() {
            return Err(Error::DimensionMismatch {
                expected: channel.num_qubits_in(),
                actual: wires.len(),
            });
        }
        let split = WireSplit::new(self.num_qubits, wires)?;
        let dim = self.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for k in channel.kraus_operators() {
            out += conjugate_on(&self.matrix, k, &split);
        }
        Ok(Self::from_matrix_unchecked(out))
    }

    /// Traces out `discard`; the remaining wires keep their relative order.
    pub fn partial_trace(&self, discard: &[usize]) -> Result<Self> {
        let split = WireSplit::new(self.num_qubits, discard)?;
        let keep = split.rest.len();
        let mut out = CMatrix::zeros(keep, keep);
        for i in 0..keep {
            for j in 0..keep {
                let mut acc = cplx(0.0, 0.0);
                for &t in &split.selected {
                    acc += self.matrix[(split.rest[i] | t, split.rest[j] | t)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(Self {
            num_qubits: self.num_qubits - discard.len(),
            matrix: out,
        })
    }

    /// Keeps only `keep` (in the given order), tracing out everything else.
    pub fn reduced(&self, keep: &[usize]) -> Result<Self> {
        validate_wires(keep, self.num_qubits)?;
        let discard: Vec<usize> = (0..self.num_qubits).filter(|w| !keep.contains(w)).collect();
        let traced = self.partial_trace(&discard)?;
        // remaining wires are in ascending order; permute into the requested order
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        let order: Vec<usize> = keep
            .iter()
            .map(|w| sorted.iter().position(|s| s == w).expect("present"))
            .collect();
        traced.permute_wires(&order)
    }

    /// Reorders wires: new wire `i` is old wire `order[i]`.
    pub fn permute_wires(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: order.len(),
            });
        }
        let split = WireSplit::new(self.num_qubits, order)?;
        let dim = self.dim();
        // split.selected[new_index] is the old global index
        let m = CMatrix::from_fn(dim, dim, |i, j| {
            self.matrix[(split.selected[i], split.selected[j])]
        });
        Ok(Self::from_matrix_unchecked(m))
    }

    /// Projective computational-basis measurement of `wires`.
    ///
    /// Outcome bit strings list the measured wires in the given order.
    /// Post-measurement states live on the unmeasured wires only.
    pub fn measure_computational(&self, wires: &[usize]) -> Result<OutcomeDistribution> {
        let split = WireSplit::new(self.num_qubits, wires)?;
        let keep = split.rest.len();
        let mut outcomes = Vec::with_capacity(split.selected.len());
        for (value, &off) in split.selected.iter().enumerate() {
            let block = CMatrix::from_fn(keep, keep, |i, j| {
                self.matrix[(split.rest[i] | off, split.rest[j] | off)]
            });
            let probability = block.trace().re.max(0.0);
            let state = if probability > TOLERANCE {
                Some(Self::from_matrix_unchecked(
                    block * cplx(1.0 / probability, 0.0),
                ))
            } else {
                None
            };
            outcomes.push(Outcome {
                bits: BitString::new(wires.len(), value as u64)?,
                probability,
                state,
            });
        }
        Ok(OutcomeDistribution { outcomes })
    }

    /// `(1/2)‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(0.5 * trace_norm(&(&self.matrix - &other.matrix)))
    }

    /// `Tr(ρσ)`, which is the fidelity when `pure` is a pure state.
    pub fn overlap(&self, pure: &DensityMatrix) -> f64 {
        (&self.matrix * &pure.matrix).trace().re
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_abs_entry(&(&self.matrix - &other.matrix))
    }

    /// Entrywise equality within [`TOLERANCE`].
    pub fn approx_eq(&self, other: &DensityMatrix) -> bool {
        self.max_abs_diff(other) <= TOLERANCE
    }
}

/// Unitary operator on `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryOp {
    num_qubits: usize,
    matrix: CMatrix,
}

impl UnitaryOp {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        let num_qubits = qubits_for_dim(matrix.nrows())?;
        let dim = matrix.nrows();
        let dev = max_abs_entry(&(matrix.adjoint() * &matrix - CMatrix::identity(dim, dim)));
        if dev > TOLERANCE {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { num_qubits, matrix })
    }

    /// For matrices unitary by construction; checked in debug builds only.
    pub(crate) fn new_unchecked(matrix: CMatrix) -> Self {
        debug_assert!(Self::new(matrix.clone()).is_ok());
        let num_qubits = matrix.nrows().trailing_zeros() as usize;
        Self { num_qubits, matrix }
    }

    /// Builds a 2×2 unitary from row-major entries.
    pub fn single_qubit(entries: [Complex64; 4]) -> Result<Self> {
        Self::new(CMatrix::from_row_slice(2, 2, &entries))
    }

    pub fn identity(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        Self {
            num_qubits,
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            num_qubits: self.num_qubits,
            matrix: self.matrix.adjoint(),
        }
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn mul(&self, other: &UnitaryOp) -> Result<Self> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: other.num_qubits,
            });
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// Product of a sequence of operators, leftmost factor applied last.
    pub fn product<'a>(ops: impl IntoIterator<Item = &'a UnitaryOp>) -> Result<Self> {
        let mut iter = ops.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::InvalidParameter("empty product".into()))?
            .clone();
        iter.try_fold(first, |acc, op| acc.mul(op))
    }

    pub fn tensor(&self, other: &UnitaryOp) -> Result<Self> {
        check_register(self.num_qubits + other.num_qubits)?;
        Ok(Self {
            num_qubits: self.num_qubits + other.num_qubits,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    /// `U|index⟩⟨index|U†`.
    pub fn prepare_basis(&self, index: usize) -> Result<DensityMatrix> {
        DensityMatrix::basis(self.num_qubits, index)?.apply_unitary(self, &self.all_wires())
    }

    pub fn all_wires(&self) -> Vec<usize> {
        (0..self.num_qubits).collect()
    }

    /// Largest entry deviation from `other` after optimal global-phase alignment.
    pub fn distance_mod_phase(&self, other: &UnitaryOp) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        let overlap = (self.matrix.adjoint() * &other.matrix).trace();
        if overlap.norm() < 1e-12 {
            return max_abs_entry(&(&self.matrix - &other.matrix)).max(1.0);
        }
        let phase = overlap / overlap.norm();
        max_abs_entry(&(&self.matrix * phase - &other.matrix))
    }

    /// Equal as channels (equal up to global phase) within [`TOLERANCE`].
    pub fn same_channel(&self, other: &UnitaryOp) -> bool {
        self.distance_mod_phase(other) <= TOLERANCE
    }

    pub fn to_channel(&self) -> QuantumChannel {
        QuantumChannel::from_unitary(self)
    }

    /// `self` acting on `wires` of a `num_qubits` register, identity elsewhere.
    pub fn embed(&self, wires: &[usize], num_qubits: usize) -> Result<UnitaryOp> {
        check_register(num_qubits)?;
        if wires.len() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: wires.len(),
            });
        }
        let split = WireSplit::new(num_qubits, wires)?;
        let dim = 1usize << num_qubits;
        let mut m = CMatrix::zeros(dim, dim);
        for &rest in &split.rest {
            for (a, &oa) in split.selected.iter().enumerate() {
                for (b, &ob) in split.selected.iter().enumerate() {
                    m[(rest | oa, rest | ob)] = self.matrix[(a, b)];
                }
            }
        }
        Ok(UnitaryOp { num_qubits, matrix: m })
    }
}

/// One branch of a computational-basis measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub bits: BitString,
    pub probability: f64,
    /// Normalised post-measurement state; `None` when the outcome has
    /// probability at most [`TOLERANCE`].
    pub state: Option<DensityMatrix>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    pub outcomes: Vec<Outcome>,
}

impl OutcomeDistribution {
    pub fn probability_of(&self, bits: &BitString) -> f64 {
        self.outcomes
            .iter()
            .find(|o| &o.bits == bits)
            .map_or(0.0, |o| o.probability)
    }

    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    /// Outcomes with nonzero probability.
    pub fn support(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| o.state.is_some())
    }

    /// Draws one outcome according to the Born rule.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> &Outcome {
        let x: f64 = rng.random::<f64>() * self.total_probability();
        let mut acc = 0.0;
        let mut last = None;
        for o in self.support() {
            acc += o.probability;
            last = Some(o);
            if x < acc {
                return o;
            }
        }
        last.expect("distribution has support")
    }
}

pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    a.tensor(b)
}

pub fn apply_unitary(rho: &DensityMatrix, u: &UnitaryOp, wires: &[usize]) -> Result<DensityMatrix> {
    rho.apply_unitary(u, wires)
}

pub fn partial_trace(rho: &DensityMatrix, wires_to_discard: &[usize]) -> Result<DensityMatrix> {
    rho.partial_trace(wires_to_discard)
}

pub fn measure_computational(rho: &DensityMatrix, wires: &[usize]) -> Result<OutcomeDistribution> {
    rho.measure_computational(wires)
}

pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    a.trace_distance(b)
}

#[cfg(test)]
mod tests;
