//! Random states for strategy suites and property tests.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{cplx, CMatrix, DensityMatrix, QuantumChannel, UnitaryOp};
use crate::error::{Error, Result};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> num_complex::Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    cplx(re, im)
}

/// Uniformly random pure state (normalised complex Gaussian vector).
pub fn random_pure_state<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<DensityMatrix> {
    let dim = 1usize << num_qubits;
    let v: Vec<_> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v: Vec<_> = v.iter().map(|z| z / norm).collect();
    DensityMatrix::from_pure(&v)
}

/// Full-rank random mixed state `G G† / Tr(G G†)` from a Ginibre matrix.
pub fn random_density_matrix<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<DensityMatrix> {
    let dim = 1usize << num_qubits;
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m * cplx(1.0 / tr, 0.0))
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of `R`'s
/// diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<UnitaryOp> {
    let dim = 1usize << num_qubits;
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j && r[(i, i)].norm() > 0.0 {
            r[(i, i)] / r[(i, i)].norm()
        } else {
            cplx(0.0, 0.0)
        }
    });
    UnitaryOp::new(q * phases)
}

/// Random channel with `num_kraus` Kraus operators cut from a Haar
/// unitary, renormalised by `(Σ K†K)^{-1/2}` from the Cholesky factor.
pub fn random_channel<R: Rng + ?Sized>(num_qubits: usize, num_kraus: usize, rng: &mut R) -> Result<QuantumChannel> {
    let dim = 1usize << num_qubits;
    let env_qubits = num_kraus.max(1).next_power_of_two().trailing_zeros() as usize;
    let v = random_unitary(num_qubits + env_qubits, rng)?;
    let kraus: Vec<CMatrix> = (0..num_kraus.max(1))
        .map(|k| v.matrix().view((k * dim, 0), (dim, dim)).into_owned())
        .collect();
    let total: CMatrix = kraus.iter().map(|k| k.adjoint() * k).sum();
    let inv = total
        .cholesky()
        .and_then(|c| c.l().adjoint().try_inverse())
        .ok_or_else(|| Error::InvalidChannel("degenerate random isometry".into()))?;
    QuantumChannel::new(kraus.into_iter().map(|k| k * &inv).collect())
}
