use std::collections::BTreeMap;

use super::{cplx, trace_norm, CMatrix, DensityMatrix, TOLERANCE};
use crate::error::{Error, Result};

/// Classical-quantum state `Σ_m |m⟩⟨m| ⊗ ρ_m` keyed by a classical transcript.
///
/// Each entry holds a subnormalised operator whose trace is the probability
/// of that classical record. Distinct keys are orthogonal flags, so one trace
/// distance covers both the classical messages and the quantum registers.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CqState {
    blocks: BTreeMap<String, CMatrix>,
}

impl CqState {
    pub fn new() -> Self {
        Self::default()
    }

    /// A single classical record holding `state` with probability one.
    pub fn single(key: impl Into<String>, state: &DensityMatrix) -> Self {
        let mut cq = Self::new();
        cq.add(key, 1.0, state);
        cq
    }

    /// Accumulates `weight · state` under `key`.
    pub fn add(&mut self, key: impl Into<String>, weight: f64, state: &DensityMatrix) {
        self.add_operator(key, &(state.matrix() * cplx(weight, 0.0)));
    }

    pub fn add_operator(&mut self, key: impl Into<String>, op: &CMatrix) {
        let key = key.into();
        match self.blocks.get_mut(&key) {
            Some(existing) => {
                assert_eq!(existing.shape(), op.shape(), "register mismatch under key {key}");
                *existing += op;
            }
            None => {
                self.blocks.insert(key, op.clone());
            }
        }
    }

    /// Adds every block of `other` scaled by `weight`.
    pub fn absorb(&mut self, weight: f64, other: &CqState) {
        for (k, m) in &other.blocks {
            self.add_operator(k.clone(), &(m * cplx(weight, 0.0)));
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &String> {
        self.blocks.keys()
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&String, &CMatrix)> {
        self.blocks.iter()
    }

    pub fn block(&self, key: &str) -> Option<&CMatrix> {
        self.blocks.get(key)
    }

    pub fn probability(&self, key: &str) -> f64 {
        self.blocks.get(key).map_or(0.0, |m| m.trace().re)
    }

    /// Total probability of records whose key satisfies `pred`.
    pub fn probability_where(&self, pred: impl Fn(&str) -> bool) -> f64 {
        self.blocks
            .iter()
            .filter(|(k, _)| pred(k))
            .map(|(_, m)| m.trace().re)
            .sum()
    }

    pub fn total_trace(&self) -> f64 {
        self.probability_where(|_| true)
    }

    /// Normalised quantum state conditioned on `key`.
    pub fn conditional(&self, key: &str) -> Option<DensityMatrix> {
        let m = self.blocks.get(key)?;
        let p = m.trace().re;
        (p > TOLERANCE).then(|| DensityMatrix::from_matrix_unchecked(m * cplx(1.0 / p, 0.0)))
    }

    /// Sum of the blocks whose key satisfies `pred` (a subnormalised operator).
    pub fn merged_where(&self, pred: impl Fn(&str) -> bool) -> Option<CMatrix> {
        let mut acc: Option<CMatrix> = None;
        for (k, m) in &self.blocks {
            if pred(k) {
                acc = Some(match acc {
                    Some(a) => a + m,
                    None => m.clone(),
                });
            }
        }
        acc
    }

    /// Drops records of negligible weight.
    pub fn pruned(mut self) -> Self {
        self.blocks.retain(|_, m| m.iter().any(|z| z.norm() > 1e-15));
        self
    }

    /// `(1/2) Σ_m ‖A_m − B_m‖₁` over records satisfying `pred`; a record
    /// missing on one side counts as the zero operator.
    pub fn partial_distance(&self, other: &CqState, pred: impl Fn(&str) -> bool) -> Result<f64> {
        let mut keys: Vec<&String> = self.blocks.keys().chain(other.blocks.keys()).collect();
        keys.sort();
        keys.dedup();
        let mut total = 0.0;
        for k in keys.into_iter().filter(|k| pred(k)) {
            let d = match (self.blocks.get(k), other.blocks.get(k)) {
                (Some(a), Some(b)) => {
                    if a.shape() != b.shape() {
                        return Err(Error::DimensionMismatch {
                            expected: a.nrows(),
                            actual: b.nrows(),
                        });
                    }
                    trace_norm(&(a - b))
                }
                (Some(a), None) | (None, Some(a)) => trace_norm(a),
                (None, None) => 0.0,
            };
            total += 0.5 * d;
        }
        Ok(total)
    }

    pub fn trace_distance(&self, other: &CqState) -> Result<f64> {
        self.partial_distance(other, |_| true)
    }

    /// Largest entrywise difference over all records.
    pub fn max_abs_diff(&self, other: &CqState) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, a) in &self.blocks {
            let d = match other.blocks.get(k) {
                Some(b) if b.shape() == a.shape() => (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max),
                Some(_) => f64::INFINITY,
                None => a.iter().map(|z| z.norm()).fold(0.0, f64::max),
            };
            worst = worst.max(d);
        }
        for (k, b) in &other.blocks {
            if !self.blocks.contains_key(k) {
                worst = worst.max(b.iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        worst
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}
