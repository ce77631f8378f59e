use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::labels::{BellIndex, GhzIndex};
use super::state::{StateVector, FRAC_1_SQRT_2};
use super::{make_bell, make_ghz, QcoreError, NORM_TOLERANCE};

/// Projective measurement bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Z,
    X,
    Bell,
    Ghz,
}

impl Basis {
    /// Number of qubits measured jointly.
    pub const fn arity(self) -> usize {
        match self {
            Basis::Z | Basis::X => 1,
            Basis::Bell => 2,
            Basis::Ghz => 3,
        }
    }

    pub const fn outcome_count(self) -> usize {
        1 << self.arity()
    }

    /// Outcome with the given code (see [`Outcome::index`]).
    pub fn outcome(self, index: usize) -> Outcome {
        match self {
            Basis::Z | Basis::X => Outcome::Bit(index & 1 == 1),
            Basis::Bell => Outcome::Bell(BellIndex::from_index(index)),
            Basis::Ghz => Outcome::Ghz(GhzIndex::from_index(index)),
        }
    }

    pub fn outcomes(self) -> impl Iterator<Item = Outcome> {
        (0..self.outcome_count()).map(move |i| self.outcome(i))
    }

    /// Basis vector for outcome `index` over the measured qubits, the first
    /// listed qubit being the most significant.
    pub fn vector(self, index: usize) -> StateVector {
        match self {
            Basis::Z => StateVector::basis(1, index & 1),
            Basis::X => {
                let sign = if index & 1 == 1 { -1.0 } else { 1.0 };
                StateVector::from_parts_unchecked(
                    1,
                    vec![
                        Complex64::new(FRAC_1_SQRT_2, 0.0),
                        Complex64::new(sign * FRAC_1_SQRT_2, 0.0),
                    ],
                )
            }
            Basis::Bell => make_bell(BellIndex::from_index(index)),
            Basis::Ghz => make_ghz(GhzIndex::from_index(index)),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Z => "Z",
            Basis::X => "X",
            Basis::Bell => "BELL",
            Basis::Ghz => "GHZ",
        })
    }
}

/// Result of a single projective measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Z: `|0⟩`/`|1⟩`; X: `|+⟩`/`|−⟩`.
    Bit(bool),
    Bell(BellIndex),
    Ghz(GhzIndex),
}

impl Outcome {
    pub fn index(self) -> usize {
        match self {
            Outcome::Bit(b) => b as usize,
            Outcome::Bell(b) => b.index(),
            Outcome::Ghz(g) => g.index(),
        }
    }

    pub fn matches(self, basis: Basis) -> bool {
        matches!(
            (self, basis),
            (Outcome::Bit(_), Basis::Z | Basis::X)
                | (Outcome::Bell(_), Basis::Bell)
                | (Outcome::Ghz(_), Basis::Ghz)
        )
    }

    /// Bits charged when the outcome is announced.
    pub fn bit_len(self) -> usize {
        match self {
            Outcome::Bit(_) => 1,
            Outcome::Bell(_) => 2,
            Outcome::Ghz(_) => 3,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Bit(b) => write!(f, "{}", *b as u8),
            Outcome::Bell(b) => b.fmt(f),
            Outcome::Ghz(g) => g.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub basis: Basis,
    pub qubits: Vec<usize>,
    pub outcome: Outcome,
}

/// Exact outcome probabilities for one measurement, indexed by outcome code.
#[derive(Clone, Debug, PartialEq)]
pub struct BornTable {
    pub basis: Basis,
    pub probabilities: Vec<f64>,
}

impl BornTable {
    pub fn probability(&self, outcome: Outcome) -> f64 {
        self.probabilities[outcome.index()]
    }

    /// Outcomes whose probability exceeds `tol`.
    pub fn support(&self, tol: f64) -> Vec<Outcome> {
        self.probabilities
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > tol)
            .map(|(i, _)| self.basis.outcome(i))
            .collect()
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

fn validate(state: &StateVector, basis: Basis, qubits: &[usize]) -> Result<(), QcoreError> {
    if qubits.len() != basis.arity() {
        return Err(QcoreError::ArityMismatch {
            basis,
            expected: basis.arity(),
            got: qubits.len(),
        });
    }
    for (n, &q) in qubits.iter().enumerate() {
        state.check_qubit(q)?;
        if qubits[..n].contains(&q) {
            return Err(QcoreError::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// Applies `⟨basis vector| ⊗ I` on `qubits` and returns the (unnormalised)
/// residual over the remaining qubits in their original order.
fn project(state: &StateVector, qubits: &[usize], vector: &StateVector) -> StateVector {
    let n = state.n_qubits();
    let k = qubits.len();
    let rest: Vec<usize> = (0..n).filter(|q| !qubits.contains(q)).collect();
    let measured_offsets: Vec<usize> = (0..1usize << k)
        .map(|m| {
            qubits
                .iter()
                .enumerate()
                .filter(|(pos, _)| m & (1 << (k - 1 - pos)) != 0)
                .fold(0, |acc, (_, &q)| acc | state.bit_mask(q))
        })
        .collect();
    let residual_len = 1usize << rest.len();
    let amps = state.amplitudes();
    let coeffs = vector.amplitudes();
    let mut out = Vec::with_capacity(residual_len);
    for r in 0..residual_len {
        let base = rest
            .iter()
            .enumerate()
            .filter(|(pos, _)| r & (1 << (rest.len() - 1 - pos)) != 0)
            .fold(0, |acc, (_, &q)| acc | state.bit_mask(q));
        let amp: Complex64 = measured_offsets
            .iter()
            .zip(coeffs)
            .map(|(off, c)| c.conj() * amps[base | off])
            .sum();
        out.push(amp);
    }
    StateVector::from_parts_unchecked(rest.len(), out)
}

/// Exact Born distribution of measuring `qubits` of `state` in `basis`.
pub fn born_distribution(
    state: &StateVector,
    basis: Basis,
    qubits: &[usize],
) -> Result<BornTable, QcoreError> {
    validate(state, basis, qubits)?;
    let probabilities = (0..basis.outcome_count())
        .map(|i| project(state, qubits, &basis.vector(i)).norm_sqr())
        .collect();
    Ok(BornTable {
        basis,
        probabilities,
    })
}

/// Post-measurement state for a given outcome, with its probability. The
/// measured qubits are removed; the rest keep their relative order.
pub fn collapse(
    state: &StateVector,
    basis: Basis,
    qubits: &[usize],
    outcome: Outcome,
) -> Result<(f64, StateVector), QcoreError> {
    validate(state, basis, qubits)?;
    if !outcome.matches(basis) {
        return Err(QcoreError::OutcomeBasisMismatch { basis, outcome });
    }
    let residual = project(state, qubits, &basis.vector(outcome.index()));
    let probability = residual.norm_sqr();
    if probability <= NORM_TOLERANCE {
        return Err(QcoreError::ImpossibleOutcome(outcome));
    }
    let scale = 1.0 / libm::sqrt(probability);
    let amps = residual.amplitudes().iter().map(|a| a * scale).collect();
    Ok((
        probability,
        StateVector::from_parts_unchecked(residual.n_qubits(), amps),
    ))
}

/// Samples an outcome from the exact Born distribution and returns the
/// record together with the renormalised state on the unmeasured qubits.
pub fn measure<R: Rng + ?Sized>(
    state: &StateVector,
    basis: Basis,
    qubits: &[usize],
    rng: &mut R,
) -> Result<(MeasurementRecord, StateVector), QcoreError> {
    let table = born_distribution(state, basis, qubits)?;
    let draw: f64 = rng.gen::<f64>() * table.total();
    let mut acc = 0.0;
    let mut chosen = None;
    for (i, p) in table.probabilities.iter().enumerate() {
        if *p <= NORM_TOLERANCE {
            continue;
        }
        chosen = Some(i);
        acc += p;
        if draw < acc {
            break;
        }
    }
    let index = chosen.ok_or(QcoreError::NotNormalized(table.total()))?;
    let outcome = basis.outcome(index);
    let (_, residual) = collapse(state, basis, qubits, outcome)?;
    Ok((
        MeasurementRecord {
            basis,
            qubits: qubits.to_vec(),
            outcome,
        },
        residual,
    ))
}

/// Joint outcome distribution of several measurements performed in sequence
/// on disjoint qubit sets. Qubit numbers refer to the original state.
/// Only outcome tuples with probability above `tol` are returned, in
/// lexicographic order of outcome codes.
pub fn joint_born_distribution(
    state: &StateVector,
    measurements: &[(Basis, Vec<usize>)],
    tol: f64,
) -> Result<Vec<(Vec<Outcome>, f64)>, QcoreError> {
    let mut all: Vec<usize> = Vec::new();
    for (basis, qubits) in measurements {
        validate(state, *basis, qubits)?;
        for &q in qubits {
            if all.contains(&q) {
                return Err(QcoreError::DuplicateQubit(q));
            }
            all.push(q);
        }
    }
    // One projection onto the product basis vector per outcome tuple.
    let mut out = Vec::new();
    let counts: Vec<usize> = measurements.iter().map(|(b, _)| b.outcome_count()).collect();
    let total: usize = counts.iter().product();
    for code in 0..total {
        let mut rem = code;
        let mut idx = vec![0; measurements.len()];
        for (slot, count) in counts.iter().enumerate().rev() {
            idx[slot] = rem % count;
            rem /= count;
        }
        let mut vector = StateVector::basis(0, 0);
        for ((basis, _), &i) in measurements.iter().zip(&idx) {
            vector = vector.tensor(&basis.vector(i));
        }
        let p = project(state, &all, &vector).norm_sqr();
        if p > tol {
            let outcomes = measurements
                .iter()
                .zip(&idx)
                .map(|((basis, _), &i)| basis.outcome(i))
                .collect();
            out.push((outcomes, p));
        }
    }
    Ok(out)
}
