use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::report::{Check, Report};
use super::{CliError, RunConfig, TwirlKind};
use crate::groups::{
    clifford_group, dephasing_twirl, frame_potential, gf2_linear_twirl, gf2_linear_twirl_enumerated, haar_sample_1q,
    haar_twirl_equals_clifford_twirl, icosahedral_design, pauli_weights, clifford_twirl_channel, Angle,
    OperationGroup,
};
use crate::protocols::{
    protocol1_averaged, protocol2_averaged, protocol3_corrected_average, protocol4_averaged, protocol5_run,
    Adversary5, GlAveraging, ProtocolId, Receiver1, Receiver2, Receiver3, Receiver4, ABORT,
};
use crate::qstate::random::{random_channel, random_density_matrix};
use crate::qstate::{CqState, DensityMatrix, UnitaryOp};
use crate::resources::{c_rsp, rsp, sp_rsp};
use crate::rng::stream;
use crate::security::suites::{p1_suite, p2_family, p3_suite, p4_suite, p5_coalitions};
use crate::security::{
    composition_loss_check, evaluate, protocol2_sweep, protocol3_monte_carlo, theorem_bound, AttackStrategy,
    HarnessOptions, SenderSecret,
};

type Res<T> = Result<T, CliError>;

pub(super) fn execute(cfg: &RunConfig) -> Res<Report> {
    match cfg.command {
        "correctness" => correctness(cfg),
        "twirl-check" => twirl_check(cfg),
        "security" => security(cfg),
        "sweep" => sweep(cfg),
        "compose" => compose(cfg),
        "collaborative" => collaborative(cfg),
        other => Err(CliError::Usage(format!("unknown command {other}"))),
    }
}

fn rng(cfg: &RunConfig, label: &str) -> ChaCha8Rng {
    stream(cfg.seed, &format!("{}/{label}", cfg.command))
}

fn one_n(cfg: &RunConfig, default: usize) -> usize {
    cfg.n.first().copied().unwrap_or(default)
}

fn angles(cfg: &RunConfig) -> Vec<Angle> {
    match cfg.theta {
        Some(k) => vec![Angle::new(k).expect("validated")],
        None => Angle::all().collect(),
    }
}

fn group_or_default(cfg: &RunConfig) -> Res<OperationGroup> {
    Ok(cfg.group()?.unwrap_or(OperationGroup::Clifford1q))
}

fn fidelity_check(name: String, state: &DensityMatrix, target: &DensityMatrix) -> Check {
    Check::pair(name, 1.0, state.overlap(target))
}

/// Smallest fidelity with `target` over the accepted records of `cq`.
fn accepted_fidelity(cq: &CqState, target: &DensityMatrix) -> f64 {
    cq.keys()
        .filter(|k| !k.ends_with(ABORT))
        .filter_map(|k| cq.conditional(k))
        .map(|s| s.overlap(target))
        .fold(f64::INFINITY, f64::min)
}

fn correctness(cfg: &RunConfig) -> Res<Report> {
    let mut checks = Vec::new();
    let mut r = rng(cfg, "targets");
    let samples = cfg.samples.unwrap_or(20);
    match cfg.protocol.expect("validated") {
        ProtocolId::P1 => {
            for theta in angles(cfg) {
                let cq = protocol1_averaged(theta, &Receiver1::honest())?;
                let out = cq.conditional("").ok_or_else(|| crate::Error::Precondition("empty view".into()))?;
                checks.push(fidelity_check(format!("theta={theta} fidelity"), &out, &sp_rsp(theta)));
            }
        }
        ProtocolId::P2 => {
            let n = one_n(cfg, 2);
            for (i, c) in clifford_group().iter().enumerate() {
                let cq = protocol2_averaged(n, c, &Receiver2::honest(n)?, GlAveraging::Orbit)?;
                let p = cq.probability_where(|k| !k.ends_with(ABORT));
                checks.push(Check::pair(format!("C={i} acceptance"), 1.0, p));
                checks.push(Check::pair(format!("C={i} fidelity"), 1.0, accepted_fidelity(&cq, &c_rsp(c))));
            }
        }
        ProtocolId::P3 => {
            for i in 0..samples {
                let u = haar_sample_1q(&mut r);
                let out = protocol3_corrected_average(&u, &Receiver3::honest())?;
                checks.push(fidelity_check(format!("U={i} fidelity"), &out, &rsp(&u)?));
            }
        }
        ProtocolId::P4 => {
            for i in 0..samples {
                let u = haar_sample_1q(&mut r);
                let cq = protocol4_averaged(&u, &Receiver4::honest())?;
                checks.push(Check::pair(format!("U={i} fidelity"), 1.0, accepted_fidelity(&cq, &rsp(&u)?)));
            }
        }
        ProtocolId::P5 => checks.extend(honest_remote_operation(cfg, &mut r)?),
    }
    Ok(Report::new(cfg, checks))
}

fn honest_remote_operation(cfg: &RunConfig, r: &mut ChaCha8Rng) -> Res<Vec<Check>> {
    let group = group_or_default(cfg)?;
    let clients = cfg.clients.unwrap_or(3);
    let honest = Adversary5::Honest {
        input: DensityMatrix::ket0(),
        clients,
    };
    let mut checks = Vec::new();
    for i in 0..cfg.samples.unwrap_or(20) {
        let u = group.sample(r);
        let t = protocol5_run(&group, &u, &honest, r)?;
        checks.push(fidelity_check(format!("{group} run={i} fidelity"), &t.final_state, &u.prepare_basis(0)?));
    }
    Ok(checks)
}

/// Catalan numbers: Haar frame potentials of U(2).
const HAAR_FRAME_POTENTIAL: [f64; 5] = [1.0, 2.0, 5.0, 14.0, 42.0];

fn twirl_check(cfg: &RunConfig) -> Res<Report> {
    let mut r = rng(cfg, "channels");
    let mut checks = Vec::new();
    match cfg.which.expect("validated") {
        TwirlKind::Clifford => {
            for i in 0..cfg.samples.unwrap_or(20) {
                let e = random_channel(1, 3, &mut r)?;
                let probs = clifford_twirl_channel(&e)?;
                // the twirl keeps p_I, so the common weight is fixed by `e` alone
                let p = (1.0 - pauli_weights(&e)?[0]) / 3.0;
                checks.push(Check::pair(format!("channel={i} p_X"), p, probs.p_x));
                checks.push(Check::pair(format!("channel={i} p_Y"), p, probs.p_y));
                checks.push(Check::pair(format!("channel={i} p_Z"), p, probs.p_z));
            }
        }
        TwirlKind::Haar => {
            let samples = cfg.samples.unwrap_or(100);
            for i in 0..20 {
                let e = random_channel(1, 3, &mut r)?;
                let h = haar_twirl_equals_clifford_twirl(&e, samples, &mut r)?;
                checks.push(
                    Check::flag(format!("channel={i} haar twirl"), h.holds())
                        .with("twirl_gap", h.twirl_gap)
                        .with("haar_covariance", h.haar_covariance)
                        .with("design_covariance", h.design_covariance),
                );
            }
        }
        TwirlKind::Gl => {
            let ns = if cfg.n.is_empty() { vec![2, 3] } else { cfg.n.clone() };
            for n in ns {
                for i in 0..cfg.samples.unwrap_or(5) {
                    let wires: Vec<usize> = (0..n).collect();
                    // the GF(2) twirl acts on states already diagonal on its wires
                    let rho = dephasing_twirl(&random_density_matrix(n, &mut r)?, &wires)?;
                    let gap = gf2_linear_twirl(&rho, &wires)?.max_abs_diff(&gf2_linear_twirl_enumerated(&rho, &wires)?);
                    checks.push(Check::at_most(format!("n={n} state={i} orbit vs enumeration"), gap, 0.0));
                }
            }
        }
        TwirlKind::Design => {
            let cliffords: Vec<UnitaryOp> = clifford_group().iter().map(|c| c.matrix().clone()).collect();
            for t in 1..=3u32 {
                let f = frame_potential(&cliffords, t);
                checks.push(Check::pair(format!("clifford t={t}"), HAAR_FRAME_POTENTIAL[t as usize - 1], f));
            }
            let f4 = frame_potential(&cliffords, 4);
            checks.push(Check::flag("clifford is not a 4-design", f4 > HAAR_FRAME_POTENTIAL[3] + 1e-6).with("value", f4));
            for t in 1..=5u32 {
                let f = frame_potential(icosahedral_design(), t);
                checks.push(Check::pair(format!("icosahedral t={t}"), HAAR_FRAME_POTENTIAL[t as usize - 1], f));
            }
        }
    }
    Ok(Report::new(cfg, checks))
}

/// Worst advantage over `cases`, one check per secret label.
fn perfect_checks(groups: Vec<(String, Vec<(SenderSecret, AttackStrategy)>)>, opts: &HarnessOptions) -> Res<Vec<Check>> {
    groups
        .into_par_iter()
        .map(|(label, cases)| {
            let mut worst = (0.0f64, String::new());
            for (secret, strategy) in &cases {
                let rep = evaluate(secret, strategy, opts, 0.0)?;
                if rep.advantage > worst.0 || worst.1.is_empty() {
                    worst = (rep.advantage, rep.strategy);
                }
            }
            Ok(Check::at_most(format!("{label} max advantage"), worst.0, 0.0)
                .with("strategies", cases.len())
                .with("worst_strategy", worst.1))
        })
        .collect::<Result<Vec<_>, crate::Error>>()
        .map_err(CliError::from)
}

fn with_secret(secret: SenderSecret, suite: Vec<AttackStrategy>) -> Vec<(SenderSecret, AttackStrategy)> {
    suite.into_iter().map(|s| (secret.clone(), s)).collect()
}

fn coalition_groups(cfg: &RunConfig, r: &mut ChaCha8Rng) -> Res<Vec<(String, Vec<(SenderSecret, AttackStrategy)>)>> {
    let group = group_or_default(cfg)?;
    let clients = cfg.clients.unwrap_or(3);
    let mut groups = Vec::new();
    for h in 1..=clients {
        let u = group.sample(r);
        let suite = p5_coalitions(&group, clients, h, r)?;
        let secret = SenderSecret::GroupElement { group: group.clone(), u };
        groups.push((format!("{group} honest={h}"), with_secret(secret, suite)));
    }
    Ok(groups)
}

fn security(cfg: &RunConfig) -> Res<Report> {
    let mut r = rng(cfg, "strategies");
    let opts = HarnessOptions::default();
    let checks = match cfg.protocol.expect("validated") {
        ProtocolId::P1 => {
            let suite = p1_suite(&mut r)?;
            let groups = angles(cfg)
                .into_iter()
                .map(|t| (format!("theta={t}"), with_secret(SenderSecret::Angle(t), suite.clone())))
                .collect();
            perfect_checks(groups, &opts)?
        }
        ProtocolId::P2 => {
            let n = one_n(cfg, 2);
            let grid = if cfg.p0.is_empty() { vec![0.0] } else { cfg.p0.clone() };
            let c = clifford_group()[r.random_range(0..24)].clone();
            let bound = theorem_bound(ProtocolId::P2, n);
            let mut checks = Vec::new();
            for p0 in grid {
                let worst = p2_family(n, p0)?
                    .par_iter()
                    .map(|s| evaluate(&SenderSecret::Clifford(c.clone()), s, &opts, bound))
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter()
                    .fold(None::<crate::security::SecurityReport>, |acc, rep| match acc {
                        Some(a) if a.advantage >= rep.advantage => Some(a),
                        _ => Some(rep),
                    })
                    .expect("family is nonempty");
                let closed = (1.0 - p0) / ((1u64 << n) - 1) as f64;
                checks.push(
                    Check::pair(format!("n={n} p0={p0} advantage"), closed, worst.advantage)
                        .with("bound", bound)
                        .with("worst_strategy", &worst.strategy)
                        .with("branch_distances", &worst.branch_distances),
                );
                checks.push(Check::at_most(format!("n={n} p0={p0} within bound"), worst.advantage, bound));
            }
            checks
        }
        ProtocolId::P3 => {
            let samples = cfg.samples.unwrap_or(2000).max(2);
            let mut groups = Vec::new();
            let mut mc = Vec::new();
            for i in 0..20 {
                let u = haar_sample_1q(&mut r);
                let suite = p3_suite(&mut r)?;
                if i < 3 {
                    mc.push((i, u.clone(), suite[i * 7].clone()));
                }
                groups.push((format!("U={i}"), with_secret(SenderSecret::Unitary(u), suite)));
            }
            let mut checks = perfect_checks(groups, &opts)?;
            for (i, u, s) in mc {
                let crate::protocols::Adversary::P3(rx) = &s.adversary else { unreachable!() };
                let m = protocol3_monte_carlo(&u, rx, samples, &mut r)?;
                checks.push(
                    Check::flag(format!("U={i} haar sampling within 3 sigma"), m.within_three_sigma)
                        .with("strategy", &s.descriptor)
                        .with("mean", m.mean)
                        .with("target", m.target)
                        .with("standard_error", m.standard_error),
                );
            }
            checks
        }
        ProtocolId::P4 => {
            let suite = p4_suite(&mut r)?;
            let groups = (0..cfg.samples.unwrap_or(5))
                .map(|i| (format!("U={i}"), with_secret(SenderSecret::Unitary(haar_sample_1q(&mut r)), suite.clone())))
                .collect();
            perfect_checks(groups, &opts)?
        }
        ProtocolId::P5 => perfect_checks(coalition_groups(cfg, &mut r)?, &opts)?,
    };
    Ok(Report::new(cfg, checks))
}

fn sweep(cfg: &RunConfig) -> Res<Report> {
    let mut r = rng(cfg, "clifford");
    let ns = if cfg.n.is_empty() { vec![2] } else { cfg.n.clone() };
    let grid: Vec<f64> = if cfg.p0.is_empty() {
        (0..=10).map(|k| k as f64 / 10.0).collect()
    } else {
        cfg.p0.clone()
    };
    let c = clifford_group()[r.random_range(0..24)].clone();
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for n in ns {
        for point in protocol2_sweep(n, &grid, &c, GlAveraging::Orbit)? {
            let p0 = point.closed.p0;
            for (name, closed, measured) in point.checks() {
                let label = format!("n={n} p0={p0} {name}");
                match measured {
                    // kept for reference; the corrected expression is the one checked
                    _ if name == "delta1_printed" => {}
                    Some(m) => checks.push(Check::pair(label, closed, m)),
                    None => checks.push(Check::flag(label, true).with("note", "branch never accepted")),
                }
            }
            checks.push(
                Check::at_most(format!("n={n} p0={p0} within bound"), point.measured.advantage, point.closed.bound)
                    .with("delta1_printed", point.closed.delta1_printed),
            );
            rows.push(point.row());
        }
    }
    let mut report = Report::new(cfg, checks);
    report.rows = Some(rows);
    Ok(report)
}

fn compose(cfg: &RunConfig) -> Res<Report> {
    let mut r = rng(cfg, "targets");
    let ns = if cfg.n.is_empty() { vec![2, 3] } else { cfg.n.clone() };
    let targets: Vec<UnitaryOp> = (0..cfg.samples.unwrap_or(2)).map(|_| haar_sample_1q(&mut r)).collect();
    let opts = HarnessOptions::default();
    let mut checks = Vec::new();
    for n in ns {
        let c = composition_loss_check(n, 1, &targets, &opts)?;
        checks.push(Check::pair(format!("n={n} honest fidelity"), 1.0, c.honest_fidelity));
        checks.push(
            Check::at_most(format!("n={n} composed advantage"), c.measured_advantage, c.bound)
                .with("worst_strategy", c.worst_strategy),
        );
    }
    Ok(Report::new(cfg, checks))
}

fn collaborative(cfg: &RunConfig) -> Res<Report> {
    let mut r = rng(cfg, "runs");
    let mut checks = honest_remote_operation(cfg, &mut r)?;
    let mut s = rng(cfg, "coalitions");
    checks.extend(perfect_checks(coalition_groups(cfg, &mut s)?, &HarnessOptions::default())?);
    Ok(Report::new(cfg, checks))
}
