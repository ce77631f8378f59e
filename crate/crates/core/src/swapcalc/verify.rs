//! Cell-by-cell checks of every transcribed table against the exact
//! simulator, in a form the command-line tool can print.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::bell::{group_members, EncodedPairState, SwapGroup, OUTCOME_GROUPS, SWAP_GROUP_TABLE};
use super::ghz::{
    ghz_bell_amplitude, ghz_bell_decomposition_check, ghz_swap_amplitude, ghz_swap_table,
    GHZ_BELL_EXPANSION, GHZ_SWAP_TRIPLES,
};
use crate::qcore::{
    joint_born_distribution, make_bell, make_ghz, tensor, Basis, BellIndex, GhzIndex, Outcome,
    PauliEncoding, NORM_TOLERANCE,
};

/// One cell of an encoding table: `sign · |pair_i⟩|pair_j⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingCell {
    pub sign: i8,
    pub pair_i: BellIndex,
    pub pair_j: BellIndex,
}

const PP: BellIndex = BellIndex::PHI_PLUS;
const PM: BellIndex = BellIndex::PHI_MINUS;
const SP: BellIndex = BellIndex::PSI_PLUS;
const SM: BellIndex = BellIndex::PSI_MINUS;

const fn e(sign: i8, pair_i: BellIndex, pair_j: BellIndex) -> EncodingCell {
    EncodingCell {
        sign,
        pair_i,
        pair_j,
    }
}

/// Alice's operation on the first qubit of pair `i`. Rows: encodings
/// `00, 01, 10, 11`; columns: both pairs initially `φ+, φ−, ψ+, ψ−`.
pub const ALICE_ENCODING_TABLE: [[EncodingCell; 4]; 4] = [
    [e(1, PP, PP), e(1, PM, PM), e(1, SP, SP), e(1, SM, SM)],
    [e(1, PM, PP), e(1, PP, PM), e(1, SM, SP), e(1, SP, SM)],
    [e(1, SP, PP), e(-1, SM, PM), e(1, PP, SP), e(-1, PM, SM)],
    [e(-1, SM, PP), e(1, SP, PM), e(-1, PM, SP), e(1, PP, SM)],
];

/// Bob's operation on the second qubit of pair `j`, laid out as
/// [`ALICE_ENCODING_TABLE`].
pub const BOB_ENCODING_TABLE: [[EncodingCell; 4]; 4] = [
    [e(1, PP, PP), e(1, PM, PM), e(1, SP, SP), e(1, SM, SM)],
    [e(1, PP, PM), e(1, PM, PP), e(-1, SP, SM), e(-1, SM, SP)],
    [e(1, PP, SP), e(1, PM, SM), e(1, SP, PP), e(1, SM, PM)],
    [e(1, PP, SM), e(1, PM, SP), e(-1, SP, PM), e(-1, SM, PP)],
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCheck {
    pub cell: String,
    pub printed: String,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub name: String,
    pub cells: Vec<CellCheck>,
}

impl TableReport {
    pub fn verified(&self) -> usize {
        self.cells.iter().filter(|c| c.verified).count()
    }

    pub fn all_verified(&self) -> bool {
        self.cells.iter().all(|c| c.verified)
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= NORM_TOLERANCE
}

/// Exact distribution of (Alice outcome, Bob outcome) for Bell pairs
/// `(A_i B_i)(A_j B_j)` with Alice measuring `A_i A_j` and Bob `B_i B_j`.
fn swap_distribution(pair_i: BellIndex, pair_j: BellIndex) -> Vec<((BellIndex, BellIndex), f64)> {
    let s = tensor(&make_bell(pair_i), &make_bell(pair_j));
    joint_born_distribution(
        &s,
        &[(Basis::Bell, alloc::vec![0, 2]), (Basis::Bell, alloc::vec![1, 3])],
        NORM_TOLERANCE,
    )
    .expect("fixed layout")
    .into_iter()
    .map(|(o, p)| match (o[0], o[1]) {
        (Outcome::Bell(a), Outcome::Bell(b)) => ((a, b), p),
        _ => unreachable!("Bell measurements give Bell outcomes"),
    })
    .collect()
}

/// Each cell: the simulator's outcome pairs for the two encoded states are
/// exactly the four members of the printed group, at 1/4 each.
pub fn verify_swap_group_table() -> TableReport {
    let mut cells = Vec::new();
    for (r, row) in SWAP_GROUP_TABLE.iter().enumerate() {
        for (c, g) in row.iter().enumerate() {
            let (x, y) = (BellIndex::from_index(r), BellIndex::from_index(c));
            let dist = swap_distribution(x, y);
            let members = group_members(*g);
            let verified = dist.len() == 4
                && dist.iter().all(|(o, p)| members.contains(o) && close(*p, 0.25));
            cells.push(CellCheck {
                cell: format!("{x} × {y}"),
                printed: format!("{g}"),
                verified,
            });
        }
    }
    TableReport {
        name: "swap groups".into(),
        cells,
    }
}

/// Each member of `C_g` occurs with probability 1/4 when the pairs are
/// `(φ+, label g)`, whose group is `C_g` by the closed form.
pub fn verify_outcome_groups() -> TableReport {
    let mut cells = Vec::new();
    for (g, members) in OUTCOME_GROUPS.iter().enumerate() {
        let pair_j = BellIndex::from_index(g);
        let dist = swap_distribution(PP, pair_j);
        for m in members {
            let p = dist.iter().find(|(o, _)| o == m).map_or(0.0, |(_, p)| *p);
            cells.push(CellCheck {
                cell: format!("{}", SwapGroup::ALL[g]),
                printed: format!("({}, {})", m.0, m.1),
                verified: close(p, 0.25),
            });
        }
    }
    TableReport {
        name: "outcome groups".into(),
        cells,
    }
}

fn verify_encoding_table(
    name: &str,
    table: &[[EncodingCell; 4]; 4],
    qubit: usize,
) -> TableReport {
    let mut cells = Vec::new();
    for (r, row) in table.iter().enumerate() {
        let enc = PauliEncoding::from_index(r);
        for (c, cell) in row.iter().enumerate() {
            let init = BellIndex::from_index(c);
            let s = tensor(&make_bell(init), &make_bell(init))
                .apply_pauli(qubit, enc)
                .expect("qubit in range");
            let want = tensor(&make_bell(cell.pair_i), &make_bell(cell.pair_j));
            let overlap = want.inner(&s);
            // Exact including the printed sign; the label algebra must agree too.
            let (a, b) = if qubit == 0 { (enc, PauliEncoding::IDENTITY) } else { (PauliEncoding::IDENTITY, enc) };
            let algebra = EncodedPairState::encode(init, init, a, b);
            let verified = close(overlap.re, cell.sign as f64)
                && overlap.im.abs() <= NORM_TOLERANCE
                && algebra.pair_i == cell.pair_i
                && algebra.pair_j == cell.pair_j;
            let sign = if cell.sign < 0 { "−" } else { "" };
            cells.push(CellCheck {
                cell: format!("{enc} on {init}{init}"),
                printed: format!("{sign}{}{}", cell.pair_i, cell.pair_j),
                verified,
            });
        }
    }
    TableReport {
        name: name.into(),
        cells,
    }
}

/// Both encoding tables, signs included.
pub fn verify_encoding_tables() -> [TableReport; 2] {
    [
        verify_encoding_table("alice encoding", &ALICE_ENCODING_TABLE, 0),
        verify_encoding_table("bob encoding", &BOB_ENCODING_TABLE, 3),
    ]
}

/// Each printed GHZ swap row: exactly its four terms occur, at 1/4 each,
/// and each term's amplitude matches the printed sign.
pub fn verify_ghz_swap_table() -> TableReport {
    let mut cells = Vec::new();
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
        .expect("fixed layout");
        let support_ok = joint.len() == 4
            && joint.iter().all(|(o, p)| {
                close(*p, 0.25)
                    && row.terms.iter().any(|t| {
                        o[0] == Outcome::Ghz(t.outcome_a) && o[1] == Outcome::Ghz(t.outcome_b)
                    })
            });
        let signs_ok = row.terms.iter().all(|t| {
            close(
                ghz_swap_amplitude(row.left, row.right, t.outcome_a, t.outcome_b),
                0.5 * t.sign as f64,
            )
        });
        let printed = row
            .terms
            .iter()
            .map(|t| format!("{}{}{}", if t.sign < 0 { "−" } else { "+" }, t.outcome_a, t.outcome_b))
            .collect::<Vec<_>>()
            .join(" ");
        cells.push(CellCheck {
            cell: format!("{} × {}", row.left, row.right),
            printed,
            verified: support_ok && signs_ok,
        });
    }
    TableReport {
        name: "ghz swap".into(),
        cells,
    }
}

/// The printed GHZ → Bell expansion term by term (amplitude and sign),
/// plus the probability check of every label pair.
pub fn verify_ghz_bell_expansion() -> TableReport {
    let mut cells: Vec<CellCheck> = GHZ_BELL_EXPANSION
        .iter()
        .map(|t| {
            let want = t.sign as f64 / (2.0 * core::f64::consts::SQRT_2);
            CellCheck {
                cell: format!("{}{}{}", t.outcomes[0], t.outcomes[1], t.outcomes[2]),
                printed: format!("{}1/(2√2)", if t.sign < 0 { "−" } else { "+" }),
                verified: close(ghz_bell_amplitude(t.outcomes), want),
            }
        })
        .collect();
    let all_pairs = GhzIndex::all()
        .flat_map(|l| GhzIndex::all().map(move |r| (l, r)))
        .all(|(l, r)| ghz_bell_decomposition_check(l, r).is_ok());
    cells.push(CellCheck {
        cell: "all 64 label pairs".into(),
        printed: "8 triples at 1/8".into(),
        verified: all_pairs,
    });
    TableReport {
        name: "ghz to bell".into(),
        cells,
    }
}

pub fn verify_all() -> Vec<TableReport> {
    let [alice, bob] = verify_encoding_tables();
    alloc::vec![
        verify_swap_group_table(),
        verify_outcome_groups(),
        alice,
        bob,
        verify_ghz_swap_table(),
        verify_ghz_bell_expansion(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_transcribed_cell_verifies() {
        for t in verify_all() {
            for c in &t.cells {
                assert!(c.verified, "{}: {} {}", t.name, c.cell, c.printed);
            }
        }
    }

    #[test]
    fn cell_counts() {
        let counts: Vec<usize> = verify_all().iter().map(|t| t.cells.len()).collect();
        assert_eq!(counts, [16, 16, 16, 16, 8, 9]);
    }

    #[test]
    fn a_wrong_sign_is_caught() {
        let mut bad = ALICE_ENCODING_TABLE;
        bad[2][1].sign = 1;
        let r = verify_encoding_table("bad", &bad, 0);
        assert_eq!(r.verified(), 15);
    }
}
