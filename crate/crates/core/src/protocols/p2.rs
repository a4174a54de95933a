use rand::Rng;

use super::{apply_optional, check_channel_size, MessageValue, Party, Transcript};
use crate::error::{Error, Result};
use crate::groups::{
    dephasing_twirl, gf2_linear_twirl, gf2_linear_twirl_enumerated, sample_gf2_invertible, x_string,
    GF2InvertibleMap, Pauli1, SingleQubitClifford,
};
use crate::qstate::{BitString, CqState, DensityMatrix, QuantumChannel};
use crate::resources::{m_rc_on, CliffordDescription, StructuredClifford};

/// Reply recorded when the sender aborts.
pub const ABORT: &str = "abort";

fn check_n(n: usize) -> Result<()> {
    if !(2..=5).contains(&n) {
        return Err(Error::InvalidParameter(format!("security parameter n = {n} outside 2..=5")));
    }
    Ok(())
}

/// Receiver of the Clifford-state protocol.
///
/// Wires `0..n` of `input` go into M-RC, the rest is an ancilla. After the
/// qubits return, `intervention` acts on all wires, wires `1..n` are
/// measured and the outcome is reported faithfully. On acceptance the
/// receiver undoes the one-time pad on wire 0.
#[derive(Clone, Debug)]
pub struct Receiver2 {
    pub n: usize,
    pub input: DensityMatrix,
    pub intervention: Option<QuantumChannel>,
}

impl Receiver2 {
    pub fn honest(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            n,
            input: DensityMatrix::zero_state(n)?,
            intervention: None,
        })
    }

    pub fn new(n: usize, input: DensityMatrix, intervention: Option<QuantumChannel>) -> Result<Self> {
        check_n(n)?;
        if input.num_qubits() < n {
            return Err(Error::Precondition(format!(
                "receiver input has {} qubits, protocol needs {n}",
                input.num_qubits()
            )));
        }
        check_channel_size(intervention.as_ref(), input.num_qubits())?;
        Ok(Self {
            n,
            input,
            intervention,
        })
    }

    /// Sends `|s⟩` and flips the returned test qubits by `X^a`.
    pub fn attack(s: BitString, a: BitString) -> Result<Self> {
        Self::attack_mixture(0.0, s, a)
    }

    /// Sends `p_0|0⟩⟨0| + (1 − p_0)|s⟩⟨s|` and flips by `X^a`.
    pub fn attack_mixture(p0: f64, s: BitString, a: BitString) -> Result<Self> {
        let n = s.len();
        check_n(n)?;
        if a.len() + 1 != n {
            return Err(Error::InvalidParameter(format!(
                "flip mask has length {}, expected {}",
                a.len(),
                n - 1
            )));
        }
        if !(0.0..=1.0).contains(&p0) {
            return Err(Error::InvalidParameter(format!("p_0 = {p0} is not a probability")));
        }
        let zero = DensityMatrix::zero_state(n)?;
        let input = DensityMatrix::mixture(&[(p0, &zero), (1.0 - p0, &DensityMatrix::from_bits(&s)?)])?;
        let flip = x_string(&BitString::zeros(1).concat(&a)).to_channel();
        Self::new(n, input, Some(flip))
    }

    fn test_wires(&self) -> Vec<usize> {
        (1..self.n).collect()
    }
}

/// The sender's hidden choices.
#[derive(Clone, Debug, PartialEq)]
pub struct Protocol2Choices {
    pub d: BitString,
    pub g: GF2InvertibleMap,
    pub r: BitString,
    pub pauli: Pauli1,
}

impl Protocol2Choices {
    pub fn sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            d: BitString::new(n, rng.random_range(0..1u64 << n))?,
            g: sample_gf2_invertible(n, rng)?,
            r: BitString::new(n - 1, rng.random_range(0..1u64 << (n - 1)))?,
            pauli: Pauli1::ALL[rng.random_range(0..4)],
        })
    }

    pub fn clifford(&self, c: &SingleQubitClifford) -> Result<StructuredClifford> {
        StructuredClifford::new(self.pauli, c.clone(), self.r, self.g.clone(), self.d)
    }
}

/// The sender's test; a reply of the wrong length never matches.
pub fn sender_accepts(r: &BitString, r_prime: &BitString) -> bool {
    r.len() == r_prime.len() && r.value() == r_prime.value()
}

pub fn protocol2_run<R: Rng + ?Sized>(
    n: usize,
    c: &SingleQubitClifford,
    receiver: &Receiver2,
    rng: &mut R,
) -> Result<Transcript> {
    let choices = Protocol2Choices::sample(n, rng)?;
    protocol2_run_with(n, c, receiver, &choices, rng)
}

/// One execution with fixed sender choices; `rng` drives the measurement.
pub fn protocol2_run_with<R: Rng + ?Sized>(
    n: usize,
    c: &SingleQubitClifford,
    receiver: &Receiver2,
    choices: &Protocol2Choices,
    rng: &mut R,
) -> Result<Transcript> {
    check_receiver(n, receiver)?;
    let desc = CliffordDescription::Structured(choices.clifford(c)?);
    let wires: Vec<usize> = (0..n).collect();
    let returned = m_rc_on(&desc, &receiver.input, &wires)?;
    let acted = apply_optional(returned, receiver.intervention.as_ref())?;
    let outcomes = acted.measure_computational(&receiver.test_wires())?;
    let outcome = outcomes.sample(rng);
    let post = outcome.state.clone().expect("sampled outcomes have support");
    let r_prime = outcome.bits;

    let accepted = sender_accepts(&choices.r, &r_prime);
    let final_state = if accepted {
        post.apply_unitary(&choices.pauli.unitary().adjoint(), &[0])?
    } else {
        // without the key the receiver holds the pad-averaged qubit
        pad_average(&post)?
    };
    let mut t = Transcript::new(final_state);
    t.push(3, Party::Receiver, MessageValue::Bits(r_prime));
    if accepted {
        t.push(4, Party::Sender, MessageValue::Key(choices.pauli));
    } else {
        t.push(4, Party::Sender, MessageValue::Abort);
        t.aborted = true;
    }
    Ok(t)
}

pub(crate) fn pad_average(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let branches = Pauli1::ALL
        .iter()
        .map(|p| rho.apply_unitary(&p.unitary(), &[0]))
        .collect::<Result<Vec<_>>>()?;
    let parts: Vec<(f64, &DensityMatrix)> = branches.iter().map(|b| (0.25, b)).collect();
    DensityMatrix::mixture(&parts)
}

fn check_receiver(n: usize, receiver: &Receiver2) -> Result<()> {
    check_n(n)?;
    if receiver.n != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: receiver.n,
        });
    }
    Ok(())
}

/// How the average over invertible maps `g` is carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlAveraging {
    /// Closed-form orbit average: `|0⟩` is fixed and every other basis
    /// state is spread uniformly over the nonzero strings.
    Orbit,
    /// Literal sum over every invertible map (feasible for `n ≤ 4`).
    Enumerated,
}

/// `(1 / 2^n |GL|) Σ_{d,g} U_g Z^d ρ Z^d U_g†` on the protocol wires.
pub(crate) fn twirled_input(n: usize, input: &DensityMatrix, averaging: GlAveraging) -> Result<DensityMatrix> {
    let wires: Vec<usize> = (0..n).collect();
    let dephased = dephasing_twirl(input, &wires)?;
    match averaging {
        GlAveraging::Orbit => gf2_linear_twirl(&dephased, &wires),
        GlAveraging::Enumerated => gf2_linear_twirl_enumerated(&dephased, &wires),
    }
}

/// Receiver's side after the returned register is in hand: intervention,
/// measurement, reply and decryption. `accept(r')` is the sender's
/// decision, returning the key on acceptance. Blocks are added to `out`
/// scaled by `weight`.
pub(crate) fn receiver2_respond(
    receiver: &Receiver2,
    returned: &DensityMatrix,
    accept: impl Fn(&BitString) -> Option<Pauli1>,
    weight: f64,
    out: &mut CqState,
) -> Result<()> {
    let acted = apply_optional(returned.clone(), receiver.intervention.as_ref())?;
    for o in acted.measure_computational(&receiver.test_wires())?.support() {
        let post = o.state.as_ref().expect("support has states");
        let w = weight * o.probability;
        match accept(&o.bits) {
            Some(key) => {
                let decrypted = post.apply_unitary(&key.unitary().adjoint(), &[0])?;
                out.add(format!("r'={}|key={key}", o.bits), w, &decrypted);
            }
            None => out.add(format!("r'={}|{ABORT}", o.bits), w, post),
        }
    }
    Ok(())
}

/// Exact distinguisher view averaged over `d`, `g`, `r` and `P_2`.
pub fn protocol2_averaged(
    n: usize,
    c: &SingleQubitClifford,
    receiver: &Receiver2,
    averaging: GlAveraging,
) -> Result<CqState> {
    averaged_inner(n, c, receiver, averaging, &Pauli1::ALL)
}

/// Same as [`protocol2_averaged`] with the pad fixed to `pauli`.
pub fn protocol2_averaged_given_pauli(
    n: usize,
    c: &SingleQubitClifford,
    receiver: &Receiver2,
    averaging: GlAveraging,
    pauli: Pauli1,
) -> Result<CqState> {
    averaged_inner(n, c, receiver, averaging, &[pauli])
}

fn averaged_inner(
    n: usize,
    c: &SingleQubitClifford,
    receiver: &Receiver2,
    averaging: GlAveraging,
    paulis: &[Pauli1],
) -> Result<CqState> {
    check_receiver(n, receiver)?;
    let twirled = twirled_input(n, &receiver.input, averaging)?;
    let weight = 1.0 / (paulis.len() as f64 * (1u64 << (n - 1)) as f64);
    let test_wires: Vec<usize> = (1..n).collect();
    let mut out = CqState::new();
    for r in BitString::all(n - 1) {
        for &p in paulis {
            let returned = twirled
                .apply_unitary(&p.unitary().mul(c.matrix())?, &[0])?
                .apply_unitary(&x_string(&r), &test_wires)?;
            receiver2_respond(
                receiver,
                &returned,
                |rp| sender_accepts(&r, rp).then_some(p),
                weight,
                &mut out,
            )?;
        }
    }
    Ok(out.pruned())
}
