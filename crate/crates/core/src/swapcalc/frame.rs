use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::qcore::{
    joint_born_distribution, prepare, Basis, PauliEncoding, QcoreError, StateLabel, StateVector,
    NORM_TOLERANCE,
};

/// Pauli operator `⊗ X^x Z^z` (up to phase) over a block of qubits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PauliFrame {
    x: Vec<bool>,
    z: Vec<bool>,
}

impl PauliFrame {
    pub fn identity(n_qubits: usize) -> Self {
        PauliFrame {
            x: vec![false; n_qubits],
            z: vec![false; n_qubits],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.x.len()
    }

    /// Multiplies in `σx^p σz^q` on `qubit`.
    pub fn apply(&mut self, qubit: usize, e: PauliEncoding) {
        self.x[qubit] ^= e.p;
        self.z[qubit] ^= e.q;
    }

    /// Multiplies in the Pauli that takes the all-zero label to `label`
    /// for a state occupying qubits `offset..`.
    pub fn apply_label(&mut self, offset: usize, label: StateLabel) {
        match label {
            // X^x Z^z on the first qubit.
            StateLabel::Bell(b) => self.apply(offset, PauliEncoding::new(b.x, b.z)),
            // X^j on qubit 0, X^i on qubit 1, Z^k on qubit 0.
            StateLabel::Ghz(g) => {
                self.apply(offset, PauliEncoding::new(g.j, g.k));
                self.apply(offset + 1, PauliEncoding::new(g.i, false));
            }
        }
    }

    pub fn xor_with(&mut self, other: &PauliFrame) {
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            *a ^= b;
        }
        for (a, b) in self.z.iter_mut().zip(&other.z) {
            *a ^= b;
        }
    }

    pub fn x_bit(&self, qubit: usize) -> bool {
        self.x[qubit]
    }

    pub fn z_bit(&self, qubit: usize) -> bool {
        self.z[qubit]
    }
}

/// XOR mask on the outcome code of a measurement of `qubits` in `basis`
/// induced by the Pauli `frame`: if the measured state is `P|ψ⟩`, outcome
/// `o` occurs with the probability of outcome `o ⊕ shift` on `|ψ⟩`.
pub fn outcome_shift(basis: Basis, qubits: &[usize], frame: &PauliFrame) -> usize {
    let x = |n: usize| frame.x_bit(qubits[n]);
    let z_parity = qubits.iter().fold(false, |acc, &q| acc ^ frame.z_bit(q));
    let x_parity = qubits.iter().fold(false, |acc, &q| acc ^ frame.x_bit(q));
    match basis {
        Basis::Z => x(0) as usize,
        Basis::X => frame.z_bit(qubits[0]) as usize,
        Basis::Bell => (x_parity as usize) << 1 | z_parity as usize,
        Basis::Ghz => {
            let i = x(1) ^ x(2);
            let j = x(0) ^ x(2);
            (i as usize) << 2 | (j as usize) << 1 | z_parity as usize
        }
    }
}

/// A product of entangled states measured jointly by several parties.
///
/// The reference outcome set (all labels zero, no encoding) is computed once
/// from the exact simulator; every other configuration is a Pauli frame away
/// from it, so its outcome set is the reference shifted by
/// [`outcome_shift`].
#[derive(Clone, Debug, PartialEq)]
pub struct SwapLayout {
    kinds: Vec<StateLabel>,
    offsets: Vec<usize>,
    n_qubits: usize,
    measurements: Vec<(Basis, Vec<usize>)>,
    reference: BTreeSet<Vec<usize>>,
}

impl SwapLayout {
    /// `kinds` gives the state types in qubit order (the label values are
    /// ignored); `measurements` address qubits of the whole product.
    pub fn new(
        kinds: &[StateLabel],
        measurements: Vec<(Basis, Vec<usize>)>,
    ) -> Result<Self, QcoreError> {
        let kinds: Vec<StateLabel> = kinds.iter().map(|k| zero_label(*k)).collect();
        let mut offsets = Vec::with_capacity(kinds.len());
        let mut state = StateVector::basis(0, 0);
        for k in &kinds {
            offsets.push(state.n_qubits());
            state = state.tensor(&prepare(*k));
        }
        let reference = joint_born_distribution(&state, &measurements, NORM_TOLERANCE)?
            .into_iter()
            .map(|(outcomes, _)| outcomes.iter().map(|o| o.index()).collect())
            .collect();
        Ok(SwapLayout {
            kinds,
            offsets,
            n_qubits: state.n_qubits(),
            measurements,
            reference,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn offset(&self, state: usize) -> usize {
        self.offsets[state]
    }

    pub fn measurements(&self) -> &[(Basis, Vec<usize>)] {
        &self.measurements
    }

    /// Outcome-code tuples reachable from the all-zero configuration.
    pub fn reference(&self) -> &BTreeSet<Vec<usize>> {
        &self.reference
    }

    /// Frame preparing the given labels from the all-zero product.
    pub fn label_frame(&self, labels: &[StateLabel]) -> PauliFrame {
        let mut frame = PauliFrame::identity(self.n_qubits);
        for (label, &offset) in labels.iter().zip(&self.offsets) {
            frame.apply_label(offset, *label);
        }
        frame
    }

    pub fn shifts(&self, frame: &PauliFrame) -> Vec<usize> {
        self.measurements
            .iter()
            .map(|(basis, qubits)| outcome_shift(*basis, qubits, frame))
            .collect()
    }

    /// Outcome tuples possible under `frame`, each equally likely.
    pub fn outcome_set(&self, frame: &PauliFrame) -> BTreeSet<Vec<usize>> {
        let shifts = self.shifts(frame);
        self.reference
            .iter()
            .map(|t| t.iter().zip(&shifts).map(|(o, s)| o ^ s).collect())
            .collect()
    }

    pub fn is_consistent(&self, frame: &PauliFrame, outcomes: &[usize]) -> bool {
        let shifted: Vec<usize> = outcomes
            .iter()
            .zip(self.shifts(frame))
            .map(|(o, s)| o ^ s)
            .collect();
        self.reference.contains(&shifted)
    }

    /// Probability of one outcome tuple under `frame`.
    pub fn probability(&self, frame: &PauliFrame, outcomes: &[usize]) -> f64 {
        if self.is_consistent(frame, outcomes) {
            1.0 / self.reference.len() as f64
        } else {
            0.0
        }
    }
}

fn zero_label(k: StateLabel) -> StateLabel {
    match k {
        StateLabel::Bell(_) => StateLabel::Bell(Default::default()),
        StateLabel::Ghz(_) => StateLabel::Ghz(Default::default()),
    }
}
