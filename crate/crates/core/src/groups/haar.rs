use std::sync::OnceLock;

use rand::Rng;
use rand_distr::StandardNormal;

use super::clifford::closure_mod_phase;
use crate::qstate::{cplx, CMatrix, UnitaryOp};

/// Haar-random 2×2 unitary: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_sample_1q<R: Rng + ?Sized>(rng: &mut R) -> UnitaryOp {
    let z = CMatrix::from_fn(2, 2, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        cplx(re * std::f64::consts::FRAC_1_SQRT_2, im * std::f64::consts::FRAC_1_SQRT_2)
    });
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q.clone();
    for j in 0..2 {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { cplx(1.0, 0.0) };
        for i in 0..2 {
            u[(i, j)] = q[(i, j)] * phase;
        }
    }
    UnitaryOp::new(u).expect("QR factor is unitary")
}

fn quaternion(w: f64, x: f64, y: f64, z: f64) -> UnitaryOp {
    UnitaryOp::single_qubit([cplx(w, x), cplx(y, z), cplx(-y, z), cplx(w, -x)])
        .expect("unit quaternion gives an SU(2) matrix")
}

/// The binary icosahedral group acting by conjugation: 60 distinct
/// channels forming a unitary 5-design on one qubit.
///
/// It shares no structure with the Clifford group beyond the Paulis, so
/// averages over it are an independent exact stand-in for Haar averages.
pub fn icosahedral_design() -> &'static [UnitaryOp] {
    static DESIGN: OnceLock<Vec<UnitaryOp>> = OnceLock::new();
    DESIGN.get_or_init(|| {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        closure_mod_phase(&[
            quaternion(0.5, 0.5, 0.5, 0.5),
            quaternion(phi / 2.0, 0.5 / phi, 0.5, 0.0),
        ])
    })
}

/// `(1/N²) Σ_{U,V} |Tr(U†V)|^{2t}`; equals the Haar value exactly for a
/// unitary t-design (2 for t = 2 on one qubit).
pub fn frame_potential(set: &[UnitaryOp], t: u32) -> f64 {
    let n = set.len() as f64;
    let mut total = 0.0;
    for u in set {
        for v in set {
            let tr = (u.matrix().adjoint() * v.matrix()).trace();
            total += tr.norm_sqr().powi(t as i32);
        }
    }
    total / (n * n)
}
