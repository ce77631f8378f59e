use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::frame::{outcome_shift, PauliFrame};
use crate::qcore::{
    joint_born_distribution, make_bell, make_ghz, tensor, Basis, BellIndex, GhzIndex, Outcome,
    PauliEncoding, StateLabel, NORM_TOLERANCE,
};

/// Label after applying `e` to qubit `position` (0..3) of a GHZ state.
pub fn ghz_apply_pauli(label: GhzIndex, position: usize, e: PauliEncoding) -> GhzIndex {
    let mut frame = PauliFrame::identity(3);
    frame.apply(position, e);
    GhzIndex::from_index(label.index() ^ outcome_shift(Basis::Ghz, &[0, 1, 2], &frame))
}

/// Measured triples for a GHZ × GHZ swap over qubits `abcdef`: `(a,d,b)`
/// and `(e,c,f)`.
pub const GHZ_SWAP_TRIPLES: [[usize; 3]; 2] = [[0, 3, 1], [4, 2, 5]];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhzSwapTerm {
    pub outcome_a: GhzIndex,
    pub outcome_b: GhzIndex,
    pub sign: i8,
}

/// `|φ_left⟩ ⊗ |φ_right⟩` rewritten over the measured triples; every term
/// carries amplitude `sign/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhzSwapRow {
    pub left: GhzIndex,
    pub right: GhzIndex,
    pub terms: [GhzSwapTerm; 4],
}

const fn g(code: u8) -> GhzIndex {
    GhzIndex::from_index(code as usize)
}

const fn t(a: u8, b: u8, sign: i8) -> GhzSwapTerm {
    GhzSwapTerm {
        outcome_a: g(a),
        outcome_b: g(b),
        sign,
    }
}

const fn row(right: u8, terms: [GhzSwapTerm; 4]) -> GhzSwapRow {
    GhzSwapRow {
        left: GhzIndex::ZERO,
        right: g(right),
        terms,
    }
}

// Codes are the subscripts ijk read as binary.
static GHZ_SWAP_ROWS: [GhzSwapRow; 8] = [
    row(0b000, [t(0b000, 0b000, 1), t(0b100, 0b100, 1), t(0b001, 0b001, 1), t(0b101, 0b101, -1)]),
    row(0b001, [t(0b000, 0b001, 1), t(0b001, 0b000, 1), t(0b100, 0b101, 1), t(0b101, 0b100, -1)]),
    row(0b010, [t(0b100, 0b000, 1), t(0b101, 0b001, 1), t(0b000, 0b100, 1), t(0b001, 0b101, -1)]),
    row(0b011, [t(0b101, 0b000, 1), t(0b100, 0b001, 1), t(0b000, 0b101, 1), t(0b001, 0b100, -1)]),
    row(0b100, [t(0b000, 0b010, 1), t(0b001, 0b011, 1), t(0b100, 0b110, 1), t(0b101, 0b111, -1)]),
    row(0b101, [t(0b000, 0b011, 1), t(0b001, 0b010, 1), t(0b100, 0b111, 1), t(0b101, 0b110, -1)]),
    row(0b110, [t(0b100, 0b010, 1), t(0b101, 0b011, 1), t(0b000, 0b110, 1), t(0b001, 0b111, -1)]),
    row(0b111, [t(0b100, 0b011, 1), t(0b101, 0b010, 1), t(0b000, 0b111, 1), t(0b001, 0b110, -1)]),
];

/// The eight swap rows with `φ000` on the left.
pub fn ghz_swap_table() -> &'static [GhzSwapRow; 8] {
    &GHZ_SWAP_ROWS
}

/// Bell pairs for the GHZ → Bell expansion: `(a,b)`, `(c,d)`, `(e,f)`.
pub const GHZ_BELL_PAIRS: [[usize; 2]; 3] = [[0, 1], [2, 3], [4, 5]];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhzBellTerm {
    pub outcomes: [BellIndex; 3],
    pub sign: i8,
}

const fn bt(a: BellIndex, b: BellIndex, c: BellIndex, sign: i8) -> GhzBellTerm {
    GhzBellTerm {
        outcomes: [a, b, c],
        sign,
    }
}

/// `|φ000⟩ ⊗ |φ000⟩` over [`GHZ_BELL_PAIRS`]; amplitude `sign/(2√2)` each.
pub const GHZ_BELL_EXPANSION: [GhzBellTerm; 8] = {
    const PP: BellIndex = BellIndex::PHI_PLUS;
    const PM: BellIndex = BellIndex::PHI_MINUS;
    const SP: BellIndex = BellIndex::PSI_PLUS;
    const SM: BellIndex = BellIndex::PSI_MINUS;
    [
        bt(PP, PP, PP, 1),
        bt(PM, PP, PM, 1),
        bt(PP, PM, PM, 1),
        bt(PM, PM, PP, 1),
        bt(PP, SP, PP, 1),
        bt(PM, SM, PP, 1),
        bt(PP, SM, PM, -1),
        bt(PM, SP, PM, -1),
    ]
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellDecomposition {
    pub left: GhzIndex,
    pub right: GhzIndex,
    pub terms: Vec<([BellIndex; 3], f64)>,
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("{left}×{right}: outcome ({}, {}, {}) has probability {got}, expected {expected}", outcome[0], outcome[1], outcome[2])]
pub struct DecompositionMismatch {
    pub left: GhzIndex,
    pub right: GhzIndex,
    pub outcome: [BellIndex; 3],
    pub expected: f64,
    pub got: f64,
}

/// Bell-measures the pairs of [`GHZ_BELL_PAIRS`] on `|φ_left⟩ ⊗ |φ_right⟩`
/// and checks the result against the printed expansion, moved to
/// `(left, right)` by the Pauli frame that prepares those labels.
pub fn ghz_bell_decomposition_check(
    left: GhzIndex,
    right: GhzIndex,
) -> Result<BellDecomposition, DecompositionMismatch> {
    let state = tensor(&make_ghz(left), &make_ghz(right));
    let measurements: Vec<(Basis, Vec<usize>)> = GHZ_BELL_PAIRS
        .iter()
        .map(|p| (Basis::Bell, p.to_vec()))
        .collect();
    let joint = joint_born_distribution(&state, &measurements, 0.0)
        .expect("fixed measurement layout is valid");

    let mut frame = PauliFrame::identity(6);
    frame.apply_label(0, StateLabel::Ghz(left));
    frame.apply_label(3, StateLabel::Ghz(right));
    let shifts: Vec<usize> = GHZ_BELL_PAIRS
        .iter()
        .map(|p| outcome_shift(Basis::Bell, p, &frame))
        .collect();
    let expected: Vec<[BellIndex; 3]> = GHZ_BELL_EXPANSION
        .iter()
        .map(|term| {
            let mut o = term.outcomes;
            for (b, s) in o.iter_mut().zip(&shifts) {
                *b = BellIndex::from_index(b.index() ^ s);
            }
            o
        })
        .collect();

    let mut terms = Vec::new();
    for (outcomes, p) in joint {
        let triple = outcomes.map_bell();
        let want = if expected.contains(&triple) { 0.125 } else { 0.0 };
        if (p - want).abs() > NORM_TOLERANCE {
            return Err(DecompositionMismatch {
                left,
                right,
                outcome: triple,
                expected: want,
                got: p,
            });
        }
        if p > NORM_TOLERANCE {
            terms.push((triple, p));
        }
    }
    Ok(BellDecomposition { left, right, terms })
}

/// Amplitude of `|b1⟩|b2⟩|b3⟩` over [`GHZ_BELL_PAIRS`] in `|φ000⟩⊗|φ000⟩`.
pub(crate) fn ghz_bell_amplitude(outcomes: [BellIndex; 3]) -> f64 {
    let state = tensor(&make_ghz(GhzIndex::ZERO), &make_ghz(GhzIndex::ZERO));
    let target = tensor(
        &tensor(&make_bell(outcomes[0]), &make_bell(outcomes[1])),
        &make_bell(outcomes[2]),
    );
    target.inner(&state).re
}

/// Amplitude of `|φ_a⟩|φ_b⟩` over [`GHZ_SWAP_TRIPLES`] in
/// `|φ_left⟩⊗|φ_right⟩`.
pub(crate) fn ghz_swap_amplitude(
    left: GhzIndex,
    right: GhzIndex,
    a: GhzIndex,
    b: GhzIndex,
) -> f64 {
    let order: Vec<usize> = GHZ_SWAP_TRIPLES.iter().flatten().copied().collect();
    let state = tensor(&make_ghz(left), &make_ghz(right))
        .permuted(&order)
        .expect("six-qubit permutation");
    tensor(&make_ghz(a), &make_ghz(b)).inner(&state).re
}

trait MapBell {
    fn map_bell(&self) -> [BellIndex; 3];
}

impl MapBell for Vec<Outcome> {
    fn map_bell(&self) -> [BellIndex; 3] {
        let mut out = [BellIndex::PHI_PLUS; 3];
        for (slot, o) in out.iter_mut().zip(self) {
            if let Outcome::Bell(b) = o {
                *slot = *b;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{born_distribution, collapse};
    use alloc::vec;

    #[test]
    fn pauli_label_updates_match_states() {
        for label in GhzIndex::all() {
            for pos in 0..3 {
                for e in PauliEncoding::ALL {
                    let s = make_ghz(label).apply_pauli(pos, e).unwrap();
                    let want = make_ghz(ghz_apply_pauli(label, pos, e));
                    assert!(s.equal_up_to_phase(&want, NORM_TOLERANCE), "{label} {pos} {e}");
                }
            }
        }
    }

    #[test]
    fn every_printed_row_has_four_terms() {
        for row in ghz_swap_table() {
            let weight: f64 = row.terms.iter().map(|_| 0.25).sum();
            assert_eq!(weight, 1.0);
            assert_eq!(row.left, GhzIndex::ZERO);
        }
    }

    #[test]
    fn printed_rows_reproduce_in_simulator() {
        for row in ghz_swap_table() {
            let s = tensor(&make_ghz(row.left), &make_ghz(row.right));
            let joint = joint_born_distribution(
                &s,
                &[
                    (Basis::Ghz, GHZ_SWAP_TRIPLES[0].to_vec()),
                    (Basis::Ghz, GHZ_SWAP_TRIPLES[1].to_vec()),
                ],
                NORM_TOLERANCE,
            )
            .unwrap();
            assert_eq!(joint.len(), 4);
            for (o, p) in joint {
                assert!((p - 0.25).abs() < NORM_TOLERANCE);
                let (Outcome::Ghz(a), Outcome::Ghz(b)) = (o[0], o[1]) else {
                    unreachable!()
                };
                let term = row
                    .terms
                    .iter()
                    .find(|t| t.outcome_a == a && t.outcome_b == b)
                    .expect("outcome listed in the printed row");
                let amp = ghz_swap_amplitude(row.left, row.right, a, b);
                assert!((amp - 0.5 * term.sign as f64).abs() < NORM_TOLERANCE);
            }
        }
    }

    #[test]
    fn ghz_measure_on_first_triple_is_restricted() {
        let s = tensor(&make_ghz(GhzIndex::ZERO), &make_ghz(GhzIndex::ZERO));
        let table = born_distribution(&s, Basis::Ghz, &GHZ_SWAP_TRIPLES[0]).unwrap();
        let support = table.support(NORM_TOLERANCE);
        let first_row: Vec<Outcome> = ghz_swap_table()[0]
            .terms
            .iter()
            .map(|t| Outcome::Ghz(t.outcome_a))
            .collect();
        assert_eq!(support.len(), 4);
        for o in &support {
            assert!(first_row.contains(o));
            let (_, rest) = collapse(&s, Basis::Ghz, &GHZ_SWAP_TRIPLES[0], *o).unwrap();
            let Outcome::Ghz(a) = o else { unreachable!() };
            let partner = ghz_swap_table()[0]
                .terms
                .iter()
                .find(|t| t.outcome_a == *a)
                .unwrap()
                .outcome_b;
            // Remaining qubits c, e, f in that order; the partner triple is (e, c, f).
            let rest = rest.permuted(&[1, 0, 2]).unwrap();
            assert!(rest.equal_up_to_phase(&make_ghz(partner), NORM_TOLERANCE));
        }
    }

    #[test]
    fn printed_bell_expansion_amplitudes() {
        let total: f64 = GHZ_BELL_EXPANSION
            .iter()
            .map(|t| {
                let amp = ghz_bell_amplitude(t.outcomes);
                let want = t.sign as f64 / (2.0 * core::f64::consts::SQRT_2);
                assert!((amp - want).abs() < NORM_TOLERANCE, "{:?}", t.outcomes);
                amp * amp
            })
            .sum();
        assert!((total - 1.0).abs() < NORM_TOLERANCE);
    }

    #[test]
    fn decomposition_check_reference_pair() {
        let d = ghz_bell_decomposition_check(GhzIndex::ZERO, GhzIndex::ZERO).unwrap();
        assert_eq!(d.terms.len(), 8);
        let pp = BellIndex::PHI_PLUS;
        let triples: Vec<[BellIndex; 3]> = d.terms.iter().map(|t| t.0).collect();
        assert!(triples.contains(&[pp, pp, pp]));
        assert!(triples.contains(&[BellIndex::PHI_MINUS, BellIndex::PSI_MINUS, pp]));
        for (_, p) in d.terms {
            assert!((p - 0.125).abs() < NORM_TOLERANCE);
        }
    }

    #[test]
    fn decomposition_check_all_label_pairs() {
        for l in GhzIndex::all() {
            for r in GhzIndex::all() {
                let d = ghz_bell_decomposition_check(l, r).unwrap();
                assert_eq!(d.terms.len(), 8);
                let total: f64 = d.terms.iter().map(|t| t.1).sum();
                assert!((total - 1.0).abs() < NORM_TOLERANCE);
            }
        }
    }

    #[test]
    fn other_pairings_do_not_reproduce_the_expansion() {
        // Pairing the two GHZ states qubit by qubit gives a different set.
        let s = tensor(&make_ghz(GhzIndex::ZERO), &make_ghz(GhzIndex::ZERO));
        let joint = joint_born_distribution(
            &s,
            &[(Basis::Bell, vec![0, 3]), (Basis::Bell, vec![1, 4]), (Basis::Bell, vec![2, 5])],
            NORM_TOLERANCE,
        )
        .unwrap();
        let printed: Vec<[BellIndex; 3]> = GHZ_BELL_EXPANSION.iter().map(|t| t.outcomes).collect();
        assert_eq!(joint.len(), 8);
        assert!(joint.iter().any(|(o, _)| !printed.contains(&o.map_bell())));
    }
}
