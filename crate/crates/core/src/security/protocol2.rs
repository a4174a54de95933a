use rayon::prelude::*;
use serde::Serialize;

use super::{theorem_bound, world_pair, AttackStrategy, HarnessOptions, SenderSecret};
use crate::error::{Error, Result};
use crate::groups::SingleQubitClifford;
use crate::protocols::{Adversary, GlAveraging, Receiver2, ABORT};
use crate::qstate::{BitString, TOLERANCE};

/// Closed forms for the `(s, a)` attack family with weight `p_0` on `|0…0⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Protocol2ClosedForms {
    pub n: usize,
    pub p0: f64,
    /// Acceptance probability when `a = 0`.
    pub p1: f64,
    /// Acceptance probability when `a ≠ 0`.
    pub p2: f64,
    /// Accepted-state distance for `a = 0` as printed in the source,
    /// `(1 − p_0)/(2^n − 2p_0 + 1)`.
    pub delta1_printed: f64,
    /// Accepted-state distance for `a = 0` consistent with `p_1 δ_1`,
    /// `(1 − p_0)/((2^n − 2)p_0 + 1)`.
    pub delta1: f64,
    pub delta2: f64,
    /// `(1 − p_0)/(2^n − 1)`, the value of both `p_1 δ_1` and `p_2 δ_2`.
    pub weighted: f64,
    pub bound: f64,
}

pub fn protocol2_closed_forms(n: usize, p0: f64) -> Protocol2ClosedForms {
    let two_n = (1u64 << n) as f64;
    let q = (1.0 - p0) / (two_n - 1.0);
    Protocol2ClosedForms {
        n,
        p0,
        p1: p0 + q,
        p2: 2.0 * q,
        delta1_printed: (1.0 - p0) / (two_n - 2.0 * p0 + 1.0),
        delta1: (1.0 - p0) / ((two_n - 2.0) * p0 + 1.0),
        delta2: 0.5,
        weighted: q,
        bound: 1.0 / (two_n - 1.0),
    }
}

/// State-level values for one `(n, p_0)` point.
#[derive(Clone, Debug, Serialize)]
pub struct Protocol2Measured {
    pub p1: f64,
    pub p2: f64,
    /// `None` when the branch is never accepted.
    pub delta1: Option<f64>,
    pub delta2: Option<f64>,
    /// Accept-branch distance for `a = 0`, i.e. `p_1 δ_1`.
    pub weighted1: f64,
    /// Accept-branch distance for `a ≠ 0`, i.e. `p_2 δ_2`.
    pub weighted2: f64,
    /// Largest abort-branch distance seen over the family.
    pub abort_distance: f64,
    /// Largest advantage over the whole family.
    pub advantage: f64,
    pub argmax: String,
}

/// Every `(s, a)` with `s ≠ 0`, as receivers sending
/// `p_0|0⟩⟨0| + (1 − p_0)|s⟩⟨s|`.
pub fn protocol2_attack_family(n: usize, p0: f64) -> Result<Vec<(String, Receiver2)>> {
    let mut out = Vec::new();
    for s in BitString::all(n).filter(|s| !s.is_zero()) {
        for a in BitString::all(n - 1) {
            out.push((format!("p0={p0};s={s};a={a}"), Receiver2::attack_mixture(p0, s, a)?));
        }
    }
    Ok(out)
}

fn conditional(weighted: f64, p: f64) -> Option<f64> {
    (p > TOLERANCE).then(|| weighted / p)
}

pub fn protocol2_measure(
    n: usize,
    p0: f64,
    c: &SingleQubitClifford,
    averaging: GlAveraging,
) -> Result<Protocol2Measured> {
    let opts = HarnessOptions {
        averaging,
        labels: Vec::new(),
        design: Vec::new(),
    };
    let secret = SenderSecret::Clifford(c.clone());
    let family = protocol2_attack_family(n, p0)?;
    let evaluated: Vec<(String, f64, f64, f64, bool)> = family
        .par_iter()
        .map(|(name, rx)| {
            let pair = world_pair(&secret, &AttackStrategy::new(name.clone(), Adversary::P2(rx.clone())), &opts)?;
            let accept = pair.real.partial_distance(&pair.ideal, |k| !k.ends_with(ABORT))?;
            let abort = pair.real.partial_distance(&pair.ideal, |k| k.ends_with(ABORT))?;
            let p_real = pair.accept_probability_real();
            if (p_real - pair.accept_probability_ideal()).abs() > TOLERANCE {
                return Err(Error::Precondition(format!("acceptance differs between worlds for {name}")));
            }
            let flip_free = name.ends_with(&format!("a={}", BitString::zeros(n - 1)));
            Ok((name.clone(), accept + abort, p_real, accept, flip_free))
        })
        .collect::<Result<_>>()?;
    let pick = |flip_free: bool| {
        evaluated
            .iter()
            .find(|e| e.4 == flip_free)
            .map(|e| (e.2, e.3))
            .expect("family covers both cases")
    };
    let (p1, weighted1) = pick(true);
    let (p2, weighted2) = pick(false);
    let (argmax, advantage) = evaluated
        .iter()
        .fold((String::new(), -1.0), |(who, best), e| if e.1 > best { (e.0.clone(), e.1) } else { (who, best) });
    let abort_distance = evaluated.iter().map(|e| e.1 - e.3).fold(0.0, f64::max);
    Ok(Protocol2Measured {
        p1,
        p2,
        delta1: conditional(weighted1, p1),
        delta2: conditional(weighted2, p2),
        weighted1,
        weighted2,
        abort_distance,
        advantage,
        argmax,
    })
}

/// Closed forms next to their state-level recomputation.
#[derive(Clone, Debug, Serialize)]
pub struct Protocol2Point {
    pub closed: Protocol2ClosedForms,
    pub measured: Protocol2Measured,
}

impl Protocol2Point {
    pub fn row(&self) -> SweepRow {
        // `+ 0.0` turns a negative zero into a plain zero
        SweepRow {
            n: self.closed.n,
            p_0: self.closed.p0,
            p_1: self.measured.p1 + 0.0,
            p_2: self.measured.p2 + 0.0,
            delta_1: self.measured.delta1.map(|d| d + 0.0),
            delta_2: self.measured.delta2.map(|d| d + 0.0),
            advantage: self.measured.advantage + 0.0,
            bound: self.closed.bound,
        }
    }

    /// Every closed form that the state-level numbers reproduce, by name.
    /// The printed `δ_1` is included, so a failure there shows up here.
    pub fn checks(&self) -> Vec<(&'static str, f64, Option<f64>)> {
        let c = &self.closed;
        let m = &self.measured;
        vec![
            ("p1", c.p1, Some(m.p1)),
            ("p2", c.p2, Some(m.p2)),
            ("delta1_printed", c.delta1_printed, m.delta1),
            ("delta1", c.delta1, m.delta1),
            ("delta2", c.delta2, m.delta2),
            ("p1_delta1", c.weighted, Some(m.weighted1)),
            ("p2_delta2", c.weighted, Some(m.weighted2)),
            ("advantage", c.weighted, Some(m.advantage)),
            ("abort_branch", 0.0, Some(m.abort_distance)),
        ]
    }
}

/// One CSV row of the sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub p_0: f64,
    pub p_1: f64,
    pub p_2: f64,
    pub delta_1: Option<f64>,
    pub delta_2: Option<f64>,
    pub advantage: f64,
    pub bound: f64,
}

pub fn protocol2_sweep(
    n: usize,
    grid: &[f64],
    c: &SingleQubitClifford,
    averaging: GlAveraging,
) -> Result<Vec<Protocol2Point>> {
    if !(2..=5).contains(&n) {
        return Err(Error::InvalidParameter(format!("n = {n} outside 2..=5")));
    }
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty p0 grid".into()));
    }
    if let Some(bad) = grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidParameter(format!("p0 = {bad} outside [0, 1]")));
    }
    debug_assert!((theorem_bound(crate::protocols::ProtocolId::P2, n) - protocol2_closed_forms(n, 0.0).bound).abs() < TOLERANCE);
    grid.iter()
        .map(|&p0| {
            Ok(Protocol2Point {
                closed: protocol2_closed_forms(n, p0),
                measured: protocol2_measure(n, p0, c, averaging)?,
            })
        })
        .collect()
}
