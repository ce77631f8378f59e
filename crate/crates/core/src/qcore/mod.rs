//! Small exact quantum engine.
//!
//! Everything the protocol does to qubits goes through here: preparing Bell
//! and GHZ states, local Pauli operations, and projective measurements in the
//! Z, X, Bell and GHZ bases. [`born_distribution`] is the exact oracle that
//! the symbolic layers are checked against.

mod labels;
mod measure;
mod state;

use alloc::vec;

use num_complex::Complex64;
use thiserror::Error;

pub use labels::{BellIndex, GhzIndex, PauliEncoding, StateLabel};
pub use measure::{
    born_distribution, collapse, joint_born_distribution, measure, Basis, BornTable,
    MeasurementRecord, Outcome,
};
pub use state::StateVector;

use state::FRAC_1_SQRT_2;

/// Tolerance for exact-arithmetic checks.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum QcoreError {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("{basis} measurement needs {expected} qubits, got {got}")]
    ArityMismatch {
        basis: Basis,
        expected: usize,
        got: usize,
    },
    #[error("qubit {0} listed twice")]
    DuplicateQubit(usize),
    #[error("amplitude vector length {0} is not a power of two")]
    BadLength(usize),
    #[error("state norm² is {0}, expected 1")]
    NotNormalized(f64),
    #[error("outcome {outcome} does not belong to the {basis} basis")]
    OutcomeBasisMismatch { basis: Basis, outcome: Outcome },
    #[error("outcome {0} has zero probability")]
    ImpossibleOutcome(Outcome),
}

/// Bell state `(|0,x⟩ + (−1)^z |1,1⊕x⟩)/√2`.
pub fn make_bell(idx: BellIndex) -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); 4];
    let x = idx.x as usize;
    let sign = if idx.z { -1.0 } else { 1.0 };
    amps[x] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[0b10 | (1 - x)] = Complex64::new(sign * FRAC_1_SQRT_2, 0.0);
    StateVector::from_parts_unchecked(2, amps)
}

/// GHZ state `(|j,i,0⟩ + (−1)^k |¬j,¬i,1⟩)/√2`.
pub fn make_ghz(idx: GhzIndex) -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    let first = (idx.j as usize) << 2 | (idx.i as usize) << 1;
    let sign = if idx.k { -1.0 } else { 1.0 };
    amps[first] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[first ^ 0b111] = Complex64::new(sign * FRAC_1_SQRT_2, 0.0);
    StateVector::from_parts_unchecked(3, amps)
}

/// Prepares the state named by `label`.
pub fn prepare(label: StateLabel) -> StateVector {
    match label {
        StateLabel::Bell(b) => make_bell(b),
        StateLabel::Ghz(g) => make_ghz(g),
    }
}

pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    a.tensor(b)
}

pub fn apply_pauli(
    s: &StateVector,
    qubit: usize,
    e: PauliEncoding,
) -> Result<StateVector, QcoreError> {
    s.apply_pauli(qubit, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const H: f64 = FRAC_1_SQRT_2;

    fn real(v: &[f64]) -> StateVector {
        StateVector::from_amplitudes(v.iter().map(|&r| Complex64::new(r, 0.0)).collect()).unwrap()
    }

    #[test]
    fn bell_states_match_written_kets() {
        assert!(make_bell(BellIndex::PHI_PLUS).approx_eq(&real(&[H, 0.0, 0.0, H]), 1e-15));
        assert!(make_bell(BellIndex::PHI_MINUS).approx_eq(&real(&[H, 0.0, 0.0, -H]), 1e-15));
        assert!(make_bell(BellIndex::PSI_PLUS).approx_eq(&real(&[0.0, H, H, 0.0]), 1e-15));
        assert!(make_bell(BellIndex::PSI_MINUS).approx_eq(&real(&[0.0, H, -H, 0.0]), 1e-15));
        for b in BellIndex::ALL {
            assert!((make_bell(b).norm_sqr() - 1.0).abs() < NORM_TOLERANCE);
        }
    }

    #[test]
    fn ghz_states_match_written_kets() {
        let ket = |pairs: &[(usize, f64)]| {
            let mut v = [0.0; 8];
            for &(i, a) in pairs {
                v[i] = a;
            }
            real(&v)
        };
        let expect = [
            ket(&[(0b000, H), (0b111, H)]),
            ket(&[(0b000, H), (0b111, -H)]),
            ket(&[(0b100, H), (0b011, H)]),
            ket(&[(0b100, H), (0b011, -H)]),
            ket(&[(0b010, H), (0b101, H)]),
            ket(&[(0b010, H), (0b101, -H)]),
            ket(&[(0b110, H), (0b001, H)]),
            ket(&[(0b110, H), (0b001, -H)]),
        ];
        for (n, want) in expect.iter().enumerate() {
            assert!(make_ghz(GhzIndex::from_index(n)).approx_eq(want, 1e-15), "φ{n:03b}");
        }
    }

    #[test]
    fn tensor_of_two_phi_plus_is_uniform_over_four_terms() {
        let s = tensor(&make_bell(BellIndex::PHI_PLUS), &make_bell(BellIndex::PHI_PLUS));
        let mut want = [0.0; 16];
        for idx in [0b0000, 0b0011, 0b1100, 0b1111] {
            want[idx] = 0.5;
        }
        assert!(s.approx_eq(&real(&want), 1e-15));
    }

    #[test]
    fn pauli_on_phi_plus() {
        let phi = make_bell(BellIndex::PHI_PLUS);
        assert_eq!(apply_pauli(&phi, 1, PauliEncoding::IDENTITY).unwrap(), phi);
        let flipped = apply_pauli(&phi, 0, PauliEncoding::X).unwrap();
        assert!(flipped.approx_eq(&make_bell(BellIndex::PSI_PLUS), 1e-15));
        let iy = apply_pauli(&phi, 0, PauliEncoding::XZ).unwrap();
        let minus_psi_minus = real(&[0.0, -H, H, 0.0]);
        assert!(iy.approx_eq(&minus_psi_minus, 1e-15));
    }

    #[test]
    fn measurement_arity_is_checked() {
        let s = make_bell(BellIndex::PHI_PLUS);
        assert_eq!(
            born_distribution(&s, Basis::Bell, &[0]),
            Err(QcoreError::ArityMismatch {
                basis: Basis::Bell,
                expected: 2,
                got: 1
            })
        );
        assert_eq!(
            born_distribution(&s, Basis::Bell, &[1, 1]),
            Err(QcoreError::DuplicateQubit(1))
        );
        assert!(matches!(
            born_distribution(&s, Basis::Z, &[5]),
            Err(QcoreError::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn z_measure_of_zero_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (rec, rest) = measure(&StateVector::zero(2), Basis::Z, &[0], &mut rng).unwrap();
        assert_eq!(rec.outcome, Outcome::Bit(false));
        assert_eq!(rest, StateVector::zero(1));
        let table = born_distribution(&StateVector::zero(2), Basis::Z, &[0]).unwrap();
        assert_eq!(table.probabilities, vec![1.0, 0.0]);
    }

    #[test]
    fn bell_basis_on_own_pair_is_deterministic() {
        for b in BellIndex::ALL {
            let table = born_distribution(&make_bell(b), Basis::Bell, &[0, 1]).unwrap();
            assert!((table.probability(Outcome::Bell(b)) - 1.0).abs() < NORM_TOLERANCE);
            assert!((table.total() - 1.0).abs() < NORM_TOLERANCE);
        }
    }

    #[test]
    fn swapping_two_phi_plus_pairs() {
        let s = tensor(&make_bell(BellIndex::PHI_PLUS), &make_bell(BellIndex::PHI_PLUS));
        // Qubits numbered 1..4 in the written identity are 0..3 here.
        let table = born_distribution(&s, Basis::Bell, &[0, 3]).unwrap();
        for p in &table.probabilities {
            assert!((p - 0.25).abs() < NORM_TOLERANCE);
        }
        for b in BellIndex::ALL {
            let (_, rest) = collapse(&s, Basis::Bell, &[0, 3], Outcome::Bell(b)).unwrap();
            assert!(rest.equal_up_to_phase(&make_bell(b), NORM_TOLERANCE));
        }
    }

    #[test]
    fn residual_pair_index_is_xor_of_inputs() {
        // Exhaustive over the 16 input pairs.
        for b1 in BellIndex::ALL {
            for b2 in BellIndex::ALL {
                let s = tensor(&make_bell(b1), &make_bell(b2));
                let joint = joint_born_distribution(
                    &s,
                    &[(Basis::Bell, vec![0, 3]), (Basis::Bell, vec![1, 2])],
                    NORM_TOLERANCE,
                )
                .unwrap();
                assert_eq!(joint.len(), 4);
                for (outcomes, p) in joint {
                    let (Outcome::Bell(m), Outcome::Bell(r)) = (outcomes[0], outcomes[1]) else {
                        unreachable!()
                    };
                    assert!((p - 0.25).abs() < NORM_TOLERANCE);
                    assert_eq!(r, m.xor(b1).xor(b2), "inputs {b1} {b2}");
                }
            }
        }
    }

    #[test]
    fn joint_distribution_matches_sequential_collapse() {
        let s = tensor(&make_ghz(GhzIndex::new(true, false, true)), &make_bell(BellIndex::PSI_MINUS));
        let joint = joint_born_distribution(
            &s,
            &[(Basis::X, vec![4]), (Basis::Bell, vec![0, 3]), (Basis::Z, vec![2])],
            0.0,
        )
        .unwrap();
        let total: f64 = joint.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < NORM_TOLERANCE);
        for (outcomes, p) in joint {
            let first = born_distribution(&s, Basis::X, &[4]).unwrap();
            let p0 = first.probability(outcomes[0]);
            if p0 <= NORM_TOLERANCE {
                assert!(p <= NORM_TOLERANCE);
                continue;
            }
            let (_, rest) = collapse(&s, Basis::X, &[4], outcomes[0]).unwrap();
            let second = born_distribution(&rest, Basis::Bell, &[0, 3]).unwrap();
            let p1 = second.probability(outcomes[1]);
            if p1 <= NORM_TOLERANCE {
                assert!(p <= NORM_TOLERANCE);
                continue;
            }
            let (_, rest) = collapse(&rest, Basis::Bell, &[0, 3], outcomes[1]).unwrap();
            // Remaining qubits are 1, 2 of the original; qubit 2 is now index 1.
            let p2 = born_distribution(&rest, Basis::Z, &[1]).unwrap().probability(outcomes[2]);
            assert!((p - p0 * p1 * p2).abs() < 1e-12);
        }
    }

    #[test]
    fn collapse_rejects_impossible_outcome() {
        let s = make_bell(BellIndex::PHI_PLUS);
        assert_eq!(
            collapse(&s, Basis::Bell, &[0, 1], Outcome::Bell(BellIndex::PSI_PLUS)).unwrap_err(),
            QcoreError::ImpossibleOutcome(Outcome::Bell(BellIndex::PSI_PLUS))
        );
        assert!(matches!(
            collapse(&s, Basis::Z, &[0], Outcome::Bell(BellIndex::PSI_PLUS)),
            Err(QcoreError::OutcomeBasisMismatch { .. })
        ));
    }

    fn arb_state(n: usize) -> impl Strategy<Value = StateVector> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map(
            "nonzero",
            move |v| {
                let amps: Vec<Complex64> = v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect();
                let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
                if norm < 1e-6 {
                    return None;
                }
                let s = 1.0 / norm.sqrt();
                StateVector::from_amplitudes(amps.into_iter().map(|a| a * s).collect()).ok()
            },
        )
    }

    proptest! {
        #[test]
        fn pauli_and_tensor_preserve_norm(a in arb_state(2), b in arb_state(1), q in 0usize..3, e in 0usize..4) {
            let t = tensor(&a, &b);
            prop_assert!((t.norm_sqr() - 1.0).abs() < NORM_TOLERANCE);
            let p = apply_pauli(&t, q, PauliEncoding::from_index(e)).unwrap();
            prop_assert!((p.norm_sqr() - 1.0).abs() < NORM_TOLERANCE);
        }

        #[test]
        fn pauli_orders(s in arb_state(3), q in 0usize..3) {
            for e in [PauliEncoding::X, PauliEncoding::Z] {
                let twice = s.apply_pauli(q, e).unwrap().apply_pauli(q, e).unwrap();
                prop_assert!(twice.approx_eq(&s, 1e-12));
            }
            let mut four = s.clone();
            for _ in 0..4 {
                four = four.apply_pauli(q, PauliEncoding::XZ).unwrap();
            }
            prop_assert!((s.inner(&four).norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn born_tables_sum_to_one(s in arb_state(3), q in 0usize..3) {
            for basis in [Basis::Z, Basis::X] {
                let t = born_distribution(&s, basis, &[q]).unwrap();
                prop_assert!((t.total() - 1.0).abs() < NORM_TOLERANCE);
            }
            let t = born_distribution(&s, Basis::Ghz, &[2, 0, 1]).unwrap();
            prop_assert!((t.total() - 1.0).abs() < NORM_TOLERANCE);
            let t = born_distribution(&s, Basis::Bell, &[q, (q + 1) % 3]).unwrap();
            prop_assert!((t.total() - 1.0).abs() < NORM_TOLERANCE);
        }
    }
}
