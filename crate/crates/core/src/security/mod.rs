//! Distinguisher harness.
//!
//! For a fixed strategy the real and ideal worlds are evaluated exactly and
//! compared by trace distance over the joint classical-quantum record,
//! which is the best any distinguisher committing to that strategy can do.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{haar_sample_1q, Angle, OperationGroup, SingleQubitClifford};
use crate::protocols::{
    compose_sequential, composed_conditioned, protocol1_averaged, protocol2_averaged, protocol3_conditioned,
    protocol3_corrected_average, protocol4_averaged, protocol5_averaged, Adversary, ComposedReceiver, GlAveraging,
    ProtocolId, Receiver3, ABORT,
};
use crate::qstate::{cplx, CqState, DensityMatrix, UnitaryOp, TOLERANCE};
use crate::rng::stream;
use crate::simulators::{
    clifford_design, composed_ideal_conditioned, simulator1_world, simulator2_world, simulator3_run_with,
    simulator3_world, simulator4_world, simulator5_world,
};

mod protocol2;
pub mod suites;


pub use protocol2::{
    protocol2_attack_family, protocol2_closed_forms, protocol2_measure, protocol2_sweep, Protocol2ClosedForms,
    Protocol2Measured, Protocol2Point, SweepRow,
};

/// A distinguisher's behaviour together with a stable name for reports.
#[derive(Clone, Debug)]
pub struct AttackStrategy {
    pub descriptor: String,
    pub adversary: Adversary,
}

impl AttackStrategy {
    pub fn new(descriptor: impl Into<String>, adversary: Adversary) -> Self {
        Self {
            descriptor: descriptor.into(),
            adversary,
        }
    }

    pub fn protocol(&self) -> ProtocolId {
        self.adversary.protocol()
    }
}

/// The honest sender's input, hidden from the distinguisher.
#[derive(Clone, Debug)]
pub enum SenderSecret {
    Angle(Angle),
    Clifford(SingleQubitClifford),
    Unitary(UnitaryOp),
    GroupElement { group: OperationGroup, u: UnitaryOp },
}

/// How the exact averages are carried out.
#[derive(Clone, Debug)]
pub struct HarnessOptions {
    pub averaging: GlAveraging,
    /// Announced corrections the Haar-labelled views are conditioned on.
    pub labels: Vec<UnitaryOp>,
    /// Finite set standing in for Haar averages inside simulators.
    pub design: Vec<UnitaryOp>,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        Self {
            averaging: GlAveraging::Orbit,
            labels: test_labels(8),
            design: clifford_design(),
        }
    }
}

/// Fixed pseudo-random set of announced corrections.
pub fn test_labels(count: usize) -> Vec<UnitaryOp> {
    let mut r = stream(0, "security/labels");
    (0..count).map(|_| haar_sample_1q(&mut r)).collect()
}

/// Real-world and ideal-world views of one strategy.
#[derive(Clone, Debug)]
pub struct WorldPair {
    pub real: CqState,
    pub ideal: CqState,
}

fn is_abort(key: &str) -> bool {
    key.ends_with(ABORT)
}

impl WorldPair {
    pub fn advantage(&self) -> Result<f64> {
        self.real.trace_distance(&self.ideal)
    }

    pub fn accept_probability_real(&self) -> f64 {
        self.real.probability_where(|k| !is_abort(k))
    }

    pub fn accept_probability_ideal(&self) -> f64 {
        self.ideal.probability_where(|k| !is_abort(k))
    }

    /// Weighted trace distances restricted to the accept and abort records.
    pub fn branch_distances(&self) -> Result<BTreeMap<String, f64>> {
        let mut out = BTreeMap::new();
        out.insert("accept".to_string(), self.real.partial_distance(&self.ideal, |k| !is_abort(k))?);
        out.insert("abort".to_string(), self.real.partial_distance(&self.ideal, is_abort)?);
        Ok(out)
    }
}

fn labelled(labels: &[UnitaryOp], mut view: impl FnMut(&UnitaryOp) -> Result<CqState>) -> Result<CqState> {
    let w = 1.0 / labels.len() as f64;
    let mut out = CqState::new();
    for (i, label) in labels.iter().enumerate() {
        for (key, block) in view(label)?.blocks() {
            let key = if key.is_empty() {
                format!("L={i}")
            } else {
                format!("L={i}|{key}")
            };
            out.add_operator(key, &(block * cplx(w, 0.0)));
        }
    }
    Ok(out)
}

/// Exact real and ideal views with every hidden choice averaged out.
pub fn world_pair(secret: &SenderSecret, strategy: &AttackStrategy, opts: &HarnessOptions) -> Result<WorldPair> {
    let mismatch = || {
        Error::Precondition(format!(
            "sender input does not fit {} strategy {}",
            strategy.protocol(),
            strategy.descriptor
        ))
    };
    match (&strategy.adversary, secret) {
        (Adversary::P1(rx), SenderSecret::Angle(theta)) => Ok(WorldPair {
            real: protocol1_averaged(*theta, rx)?,
            ideal: simulator1_world(*theta, rx)?,
        }),
        (Adversary::P2(rx), SenderSecret::Clifford(c)) => Ok(WorldPair {
            real: protocol2_averaged(rx.n, c, rx, opts.averaging)?,
            ideal: simulator2_world(c, rx, opts.averaging)?,
        }),
        (Adversary::P3(rx), SenderSecret::Unitary(u)) => {
            let real = labelled(&opts.labels, |l| Ok(CqState::single("", &protocol3_conditioned(u, rx, l)?)))?;
            let ideal = simulator3_world(u, rx, &opts.labels, &opts.design)?;
            Ok(WorldPair { real, ideal })
        }
        (Adversary::P4(rx), SenderSecret::Unitary(u)) => Ok(WorldPair {
            real: protocol4_averaged(u, rx)?,
            ideal: simulator4_world(u, rx)?,
        }),
        (Adversary::P5(c), SenderSecret::GroupElement { group, u }) => Ok(WorldPair {
            real: protocol5_averaged(group, u, c)?,
            ideal: simulator5_world(group, u, c)?,
        }),
        _ => Err(mismatch()),
    }
}

pub fn advantage(secret: &SenderSecret, strategy: &AttackStrategy, opts: &HarnessOptions) -> Result<f64> {
    world_pair(secret, strategy, opts)?.advantage()
}

/// `1/(2^n − 1)` for the Clifford-state protocol; the others are perfect.
pub fn theorem_bound(protocol: ProtocolId, n: usize) -> f64 {
    match protocol {
        ProtocolId::P2 => 1.0 / ((1u64 << n) - 1) as f64,
        _ => 0.0,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SecurityReport {
    pub protocol_id: ProtocolId,
    pub strategy: String,
    pub advantage: f64,
    pub accept_probability_real: f64,
    pub accept_probability_ideal: f64,
    pub branch_distances: BTreeMap<String, f64>,
    pub bound: f64,
    pub within_bound: bool,
}

pub fn evaluate(
    secret: &SenderSecret,
    strategy: &AttackStrategy,
    opts: &HarnessOptions,
    bound: f64,
) -> Result<SecurityReport> {
    let pair = world_pair(secret, strategy, opts)?;
    let advantage = pair.advantage()?;
    Ok(SecurityReport {
        protocol_id: strategy.protocol(),
        strategy: strategy.descriptor.clone(),
        advantage,
        accept_probability_real: pair.accept_probability_real(),
        accept_probability_ideal: pair.accept_probability_ideal(),
        branch_distances: pair.branch_distances()?,
        bound,
        within_bound: advantage <= bound + TOLERANCE,
    })
}

/// Evaluates every `(secret, strategy)` case of a perfectly secure protocol
/// and fails on the first advantage above the tolerance. Reports come back
/// sorted by strategy name.
pub fn verify_perfect_construction(
    protocol: ProtocolId,
    cases: &[(SenderSecret, AttackStrategy)],
    opts: &HarnessOptions,
) -> Result<Vec<SecurityReport>> {
    if protocol == ProtocolId::P2 {
        return Err(Error::Precondition("P2 is not perfectly secure; use the sweep".into()));
    }
    if let Some((_, s)) = cases.iter().find(|(_, s)| s.protocol() != protocol) {
        return Err(Error::Precondition(format!(
            "strategy {} targets {}, not {protocol}",
            s.descriptor,
            s.protocol()
        )));
    }
    let mut reports: Vec<SecurityReport> = cases
        .par_iter()
        .map(|(secret, strategy)| evaluate(secret, strategy, opts, 0.0))
        .collect::<Result<_>>()?;
    reports.sort_by(|a, b| a.strategy.cmp(&b.strategy));
    if let Some(bad) = reports.iter().find(|r| r.advantage > TOLERANCE) {
        return Err(Error::VerificationFailure {
            strategy: bad.strategy.clone(),
            advantage: bad.advantage,
            threshold: TOLERANCE,
        });
    }
    Ok(reports)
}

/// Outcome of comparing one scalar statistic of sampled ideal-world runs
/// with its exact real-world value.
#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloCheck {
    pub samples: usize,
    pub mean: f64,
    pub target: f64,
    pub standard_error: f64,
    pub within_three_sigma: bool,
}

/// Samples Simulator 3 with Haar `V_1`, `V_2` and compares the mean overlap
/// `Tr(ρ_real ρ_sample)` of the corrected register with `Tr(ρ_real²)`, where
/// `ρ_real` is the exact real-world corrected average.
pub fn protocol3_monte_carlo<R: Rng + ?Sized>(
    u: &UnitaryOp,
    receiver: &Receiver3,
    samples: usize,
    rng: &mut R,
) -> Result<MonteCarloCheck> {
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let real = protocol3_corrected_average(u, receiver)?;
    let target = (real.matrix() * real.matrix()).trace().re;
    let phi = u.prepare_basis(0)?;
    let mut values = Vec::with_capacity(samples);
    for _ in 0..samples {
        let v1 = haar_sample_1q(rng);
        let v2 = haar_sample_1q(rng);
        let t = simulator3_run_with(&phi, receiver, &v1, &v2)?;
        values.push((real.matrix() * t.final_state.matrix()).trace().re);
    }
    let n = samples as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let standard_error = (var / n).sqrt();
    let gap = (mean - target).abs();
    Ok(MonteCarloCheck {
        samples,
        mean,
        target,
        standard_error,
        within_three_sigma: gap <= 3.0 * standard_error || gap <= TOLERANCE,
    })
}

/// Real and ideal views of the composed protocol over the label set.
pub fn composed_world_pair(u: &UnitaryOp, receiver: &ComposedReceiver, opts: &HarnessOptions) -> Result<WorldPair> {
    let comp = compose_sequential(ProtocolId::P2, ProtocolId::P3)?;
    let real = labelled(&opts.labels, |l| composed_conditioned(&comp, u, receiver, l, opts.averaging))?;
    let ideal = labelled(&opts.labels, |l| {
        composed_ideal_conditioned(u, receiver, l, &opts.design, opts.averaging)
    })?;
    Ok(WorldPair { real, ideal })
}

/// Additive loss after `calls` uses of the `n`-qubit Clifford-state leg.
pub fn composition_loss_bound(n: usize, calls: usize) -> f64 {
    calls as f64 / ((1u64 << n) - 1) as f64
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositionCheck {
    pub n: usize,
    pub calls: usize,
    pub bound: f64,
    /// Largest composed advantage over the inner attack family; zero when
    /// there are no calls.
    pub measured_advantage: f64,
    pub worst_strategy: Option<String>,
    /// Fidelity of the honest composed output with `U|0⟩`, minimised over
    /// the targets and labels.
    pub honest_fidelity: f64,
    pub within_bound: bool,
}

/// Runs the composed protocol against every `(s, a)` attack on its inner
/// leg for the given targets and compares with the additive bound.
pub fn composition_loss_check(
    n: usize,
    calls: usize,
    targets: &[UnitaryOp],
    opts: &HarnessOptions,
) -> Result<CompositionCheck> {
    let bound = composition_loss_bound(n, calls);
    if calls == 0 {
        return Ok(CompositionCheck {
            n,
            calls,
            bound,
            measured_advantage: 0.0,
            worst_strategy: None,
            honest_fidelity: 1.0,
            within_bound: true,
        });
    }
    let comp = compose_sequential(ProtocolId::P2, ProtocolId::P3)?;
    let honest = ComposedReceiver::honest(n)?;
    let mut honest_fidelity = f64::INFINITY;
    for u in targets {
        let target = u.prepare_basis(0)?;
        for label in &opts.labels {
            let view = composed_conditioned(&comp, u, &honest, label, opts.averaging)?;
            let merged = view
                .merged_where(|_| true)
                .ok_or_else(|| Error::Precondition("empty composed view".into()))?;
            let out = DensityMatrix::new(merged)?.apply_unitary(label, &[0])?.reduced(&[0])?;
            honest_fidelity = honest_fidelity.min(out.overlap(&target));
        }
    }
    let family = protocol2_attack_family(n, 0.0)?;
    let cases: Vec<(usize, &UnitaryOp)> = (0..family.len())
        .flat_map(|i| targets.iter().map(move |u| (i, u)))
        .collect();
    let results: Vec<(f64, String)> = cases
        .par_iter()
        .map(|&(i, u)| {
            let rx = ComposedReceiver::new(family[i].1.clone(), DensityMatrix::trivial(), None)?;
            Ok((composed_world_pair(u, &rx, opts)?.advantage()?, family[i].0.clone()))
        })
        .collect::<Result<_>>()?;
    let (measured, worst) = results
        .into_iter()
        .fold((0.0, None), |(best, who), (adv, name)| {
            if adv > best {
                (adv, Some(name))
            } else {
                (best, who)
            }
        });
    Ok(CompositionCheck {
        n,
        calls,
        bound,
        measured_advantage: measured,
        worst_strategy: worst,
        honest_fidelity,
        within_bound: measured <= bound + TOLERANCE,
    })
}
