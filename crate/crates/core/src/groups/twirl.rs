use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    clifford_group, enumerate_gf2_invertible, haar_sample_1q, icosahedral_design, Pauli1,
    PauliChannelProbs, PauliOp,
};
use crate::error::{Error, Result};
use crate::qstate::{
    choi_distance, cplx, BitString, CMatrix, DensityMatrix, QuantumChannel, UnitaryOp, WireSplit,
    TOLERANCE,
};

/// `(1/2^m) Σ_d Z^d ρ Z^d` over the listed wires, summed term by term.
pub fn dephasing_twirl(rho: &DensityMatrix, wires: &[usize]) -> Result<DensityMatrix> {
    let m = wires.len();
    let mut acc = CMatrix::zeros(rho.dim(), rho.dim());
    for d in BitString::all(m) {
        let zd = PauliOp::new(BitString::zeros(m), d)?.unitary();
        acc += rho.apply_unitary(&zd, wires)?.into_matrix();
    }
    DensityMatrix::new(acc * cplx(1.0 / (1u64 << m) as f64, 0.0))
}

/// Exact GL(n,2) twirl `(1/G_n) Σ_g U_g ρ U_g†` of a state that is
/// block-diagonal in the computational basis of `wires`.
///
/// Every nonzero string lies in one orbit of GL(n,2) and the stabiliser of
/// a nonzero string has the same size for all of them, so the average maps
/// the block of `0…0` to itself and spreads the sum of all other blocks
/// uniformly over the `2^n − 1` nonzero strings.
pub fn gf2_linear_twirl(rho: &DensityMatrix, wires: &[usize]) -> Result<DensityMatrix> {
    let split = WireSplit::new(rho.num_qubits(), wires)?;
    let m = rho.matrix();
    for (s, &os) in split.selected.iter().enumerate() {
        for (t, &ot) in split.selected.iter().enumerate() {
            if s == t {
                continue;
            }
            for &i in &split.rest {
                for &j in &split.rest {
                    if m[(i | os, j | ot)].norm() > TOLERANCE {
                        return Err(Error::Precondition(
                            "GF(2) twirl needs a state diagonal on the twirled wires".into(),
                        ));
                    }
                }
            }
        }
    }
    let keep = split.rest.len();
    let block = |off: usize| {
        CMatrix::from_fn(keep, keep, |i, j| m[(split.rest[i] | off, split.rest[j] | off)])
    };
    let nonzero = split.selected.len() - 1;
    let mut spread = CMatrix::zeros(keep, keep);
    for &off in &split.selected[1..] {
        spread += block(off);
    }
    if nonzero > 0 {
        spread *= cplx(1.0 / nonzero as f64, 0.0);
    }
    let zero_block = block(split.selected[0]);
    let mut out = CMatrix::zeros(rho.dim(), rho.dim());
    for (s, &off) in split.selected.iter().enumerate() {
        let b = if s == 0 { &zero_block } else { &spread };
        for i in 0..keep {
            for j in 0..keep {
                out[(split.rest[i] | off, split.rest[j] | off)] = b[(i, j)];
            }
        }
    }
    DensityMatrix::new(out)
}

/// The same twirl by literal summation over every invertible map (n ≤ 4).
pub fn gf2_linear_twirl_enumerated(rho: &DensityMatrix, wires: &[usize]) -> Result<DensityMatrix> {
    let maps = enumerate_gf2_invertible(wires.len())?;
    let terms: Vec<CMatrix> = maps
        .par_iter()
        .map(|g| {
            rho.apply_unitary(&g.permutation_unitary(), wires)
                .map(DensityMatrix::into_matrix)
        })
        .collect::<Result<_>>()?;
    let mut acc = CMatrix::zeros(rho.dim(), rho.dim());
    for t in terms {
        acc += t;
    }
    DensityMatrix::new(acc * cplx(1.0 / maps.len() as f64, 0.0))
}

/// `(1/N) Σ_W W† ∘ e ∘ W`.
pub fn twirl_over(e: &QuantumChannel, unitaries: &[UnitaryOp]) -> Result<QuantumChannel> {
    let scale = cplx((1.0 / unitaries.len() as f64).sqrt(), 0.0);
    let mut kraus = Vec::new();
    for w in unitaries {
        for k in e.conjugated_by(w)?.kraus_operators() {
            kraus.push(k * scale);
        }
    }
    QuantumChannel::new(kraus)
}

pub fn clifford_twirl(e: &QuantumChannel) -> Result<QuantumChannel> {
    let cliffords: Vec<UnitaryOp> = clifford_group().iter().map(|c| c.matrix().clone()).collect();
    twirl_over(e, &cliffords)
}

fn check_single_qubit(e: &QuantumChannel) -> Result<()> {
    if e.num_qubits_in() != 1 || e.num_qubits_out() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            actual: e.num_qubits_in().max(e.num_qubits_out()),
        });
    }
    Ok(())
}

/// `ρ ↦ Σ_P p_P P ρ P`.
pub fn pauli_channel(probs: &PauliChannelProbs) -> QuantumChannel {
    let kraus = Pauli1::ALL
        .iter()
        .map(|&p| p.unitary().matrix() * cplx(probs.get(p).max(0.0).sqrt(), 0.0))
        .collect();
    QuantumChannel::new(kraus).expect("Pauli probabilities sum to one")
}

/// `p_X = p_Y = p_Z = p`, `p_I = 1 − 3p`.
pub fn depolarizing_channel(p: f64) -> Result<QuantumChannel> {
    let probs = PauliChannelProbs::new(1.0 - 3.0 * p, p, p, p)?;
    Ok(pauli_channel(&probs))
}

/// Diagonal of the Pauli process matrix, `p_P = Σ_k |Tr(P K_k)|²/4`.
pub fn pauli_weights(e: &QuantumChannel) -> Result<[f64; 4]> {
    check_single_qubit(e)?;
    Ok(Pauli1::ALL.map(|p| {
        let pm = p.unitary().matrix().clone();
        e.kraus_operators()
            .iter()
            .map(|k| (&pm * k).trace().norm_sqr() / 4.0)
            .sum()
    }))
}

/// Pauli weights of the Clifford-twirled channel.
pub fn clifford_twirl_channel(e: &QuantumChannel) -> Result<PauliChannelProbs> {
    check_single_qubit(e)?;
    let twirled = clifford_twirl(e)?;
    let [pi, px, py, pz] = pauli_weights(&twirled)?;
    let probs = PauliChannelProbs::new(pi, px, py, pz)?;
    let gap = choi_distance(&twirled, &pauli_channel(&probs));
    if gap > TOLERANCE {
        return Err(Error::Precondition(format!(
            "twirled channel is not a Pauli channel (Choi gap {gap:.3e})"
        )));
    }
    Ok(probs)
}

/// Outcome of comparing a channel's Clifford twirl with Haar averaging.
#[derive(Clone, Debug, Serialize)]
pub struct HaarTwirlCheck {
    pub probs: PauliChannelProbs,
    /// Largest Choi deviation of `W† D W` from `D` over the 24 Cliffords.
    pub clifford_covariance: f64,
    /// Same over the 60 elements of the icosahedral design.
    pub design_covariance: f64,
    /// Same over the sampled Haar unitaries.
    pub haar_covariance: f64,
    /// Choi gap between the Clifford twirl and the icosahedral twirl of `e`.
    pub twirl_gap: f64,
    pub samples: usize,
}

impl HaarTwirlCheck {
    pub fn holds(&self) -> bool {
        self.clifford_covariance <= TOLERANCE
            && self.design_covariance <= TOLERANCE
            && self.haar_covariance <= TOLERANCE
            && self.twirl_gap <= TOLERANCE
    }
}

/// Checks that the depolarising channel obtained from the Clifford twirl
/// of `e` is invariant under conjugation by every Clifford, every element
/// of an independent design and `samples` Haar unitaries, and that the
/// Clifford twirl agrees with the exact Haar twirl.
pub fn haar_twirl_equals_clifford_twirl<R: Rng + ?Sized>(
    e: &QuantumChannel,
    samples: usize,
    rng: &mut R,
) -> Result<HaarTwirlCheck> {
    let probs = clifford_twirl_channel(e)?;
    let d = pauli_channel(&probs);
    let covariance = |set: &[UnitaryOp]| -> Result<f64> {
        set.iter().try_fold(0.0f64, |acc, w| {
            Ok(acc.max(choi_distance(&d.conjugated_by(w)?, &d)))
        })
    };
    let cliffords: Vec<UnitaryOp> = clifford_group().iter().map(|c| c.matrix().clone()).collect();
    let haar: Vec<UnitaryOp> = (0..samples).map(|_| haar_sample_1q(rng)).collect();
    let twirl_gap = choi_distance(&clifford_twirl(e)?, &twirl_over(e, icosahedral_design())?);
    Ok(HaarTwirlCheck {
        probs,
        clifford_covariance: covariance(&cliffords)?,
        design_covariance: covariance(icosahedral_design())?,
        haar_covariance: covariance(&haar)?,
        twirl_gap,
        samples,
    })
}
