use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::labels::PauliEncoding;
use super::{QcoreError, NORM_TOLERANCE};

pub(crate) const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// Exact amplitude vector over `n_qubits` qubits.
///
/// Qubit 0 is the most significant bit of a basis-state label, so
/// `|q0 q1 … q(n-1)⟩` is read left to right as written.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    /// Builds a state from raw amplitudes, checking length and normalisation.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, QcoreError> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(QcoreError::BadLength(len));
        }
        let state = StateVector {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(QcoreError::NotNormalized(norm));
        }
        Ok(state)
    }

    pub(crate) fn from_parts_unchecked(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Kronecker product `self ⊗ other`; `self` keeps the low qubit numbers.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amplitudes = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes,
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|`; 1 means equal up to a global phase.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        if self.n_qubits != other.n_qubits {
            return 0.0;
        }
        self.inner(other).norm()
    }

    pub fn equal_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        self.n_qubits == other.n_qubits && (self.fidelity(other) - 1.0).abs() <= tol
    }

    /// Amplitude-wise comparison, global phase included.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.n_qubits == other.n_qubits
            && self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    pub(crate) fn bit_mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<(), QcoreError> {
        if qubit >= self.n_qubits {
            Err(QcoreError::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            })
        } else {
            Ok(())
        }
    }

    /// Applies `σx^p σz^q` to `qubit`, σz first.
    pub fn apply_pauli(&self, qubit: usize, e: PauliEncoding) -> Result<StateVector, QcoreError> {
        self.check_qubit(qubit)?;
        let mask = self.bit_mask(qubit);
        let mut out = self.amplitudes.clone();
        if e.q {
            for (idx, amp) in out.iter_mut().enumerate() {
                if idx & mask != 0 {
                    *amp = -*amp;
                }
            }
        }
        if e.p {
            for idx in 0..out.len() {
                if idx & mask == 0 {
                    out.swap(idx, idx | mask);
                }
            }
        }
        Ok(StateVector::from_parts_unchecked(self.n_qubits, out))
    }

    /// Controlled-not with the given control and target qubits.
    pub fn apply_cnot(&self, control: usize, target: usize) -> Result<StateVector, QcoreError> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(QcoreError::DuplicateQubit(control));
        }
        let c = self.bit_mask(control);
        let t = self.bit_mask(target);
        let mut out = self.amplitudes.clone();
        for idx in 0..out.len() {
            if idx & c != 0 && idx & t == 0 {
                out.swap(idx, idx | t);
            }
        }
        Ok(StateVector::from_parts_unchecked(self.n_qubits, out))
    }

    /// Applies a two-qubit gate given row-major over `|q_a q_b⟩ ∈ {00,01,10,11}`.
    pub fn apply_two_qubit(
        &self,
        qubit_a: usize,
        qubit_b: usize,
        gate: &[[Complex64; 4]; 4],
    ) -> Result<StateVector, QcoreError> {
        self.check_qubit(qubit_a)?;
        self.check_qubit(qubit_b)?;
        if qubit_a == qubit_b {
            return Err(QcoreError::DuplicateQubit(qubit_a));
        }
        let ma = self.bit_mask(qubit_a);
        let mb = self.bit_mask(qubit_b);
        let mut out = self.amplitudes.clone();
        for base in 0..self.amplitudes.len() {
            if base & (ma | mb) != 0 {
                continue;
            }
            let idx = [base, base | mb, base | ma, base | ma | mb];
            let input = idx.map(|i| self.amplitudes[i]);
            for (row, &target) in idx.iter().enumerate() {
                out[target] = gate[row]
                    .iter()
                    .zip(&input)
                    .map(|(g, a)| g * a)
                    .sum();
            }
        }
        Ok(StateVector::from_parts_unchecked(self.n_qubits, out))
    }

    /// Reorders qubits: qubit `n` of the result is qubit `order[n]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<StateVector, QcoreError> {
        let n = self.n_qubits;
        if order.len() != n {
            return Err(QcoreError::BadLength(order.len()));
        }
        for (pos, &q) in order.iter().enumerate() {
            self.check_qubit(q)?;
            if order[..pos].contains(&q) {
                return Err(QcoreError::DuplicateQubit(q));
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let mut new_idx = 0;
            for (pos, &q) in order.iter().enumerate() {
                if idx & self.bit_mask(q) != 0 {
                    new_idx |= 1 << (n - 1 - pos);
                }
            }
            out[new_idx] = *amp;
        }
        Ok(StateVector::from_parts_unchecked(n, out))
    }

    /// Inserts a fresh qubit in the single-qubit state `(c0, c1)` so that it
    /// becomes qubit number `position`.
    pub fn insert_qubit(
        &self,
        position: usize,
        single: [Complex64; 2],
    ) -> Result<StateVector, QcoreError> {
        if position > self.n_qubits {
            return Err(QcoreError::QubitOutOfRange {
                qubit: position,
                n_qubits: self.n_qubits + 1,
            });
        }
        let n = self.n_qubits + 1;
        // Bits below the inserted qubit stay in place, bits above shift up.
        let low_bits = n - 1 - position;
        let low_mask = (1usize << low_bits) - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let high = (idx & !low_mask) << 1;
            let low = idx & low_mask;
            out[high | low] = amp * single[0];
            out[high | (1 << low_bits) | low] = amp * single[1];
        }
        Ok(StateVector::from_parts_unchecked(n, out))
    }
}
