use core::fmt;

use serde::{Deserialize, Serialize};

use crate::qcore::{BellIndex, PauliEncoding};

/// One of the four swap groups `C0..C3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SwapGroup(u8);

impl SwapGroup {
    pub const C0: SwapGroup = SwapGroup(0);
    pub const C1: SwapGroup = SwapGroup(1);
    pub const C2: SwapGroup = SwapGroup(2);
    pub const C3: SwapGroup = SwapGroup(3);
    pub const ALL: [SwapGroup; 4] = [Self::C0, Self::C1, Self::C2, Self::C3];

    pub const fn new(g: u8) -> Option<SwapGroup> {
        if g < 4 {
            Some(SwapGroup(g))
        } else {
            None
        }
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SwapGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.0)
    }
}

const PP: BellIndex = BellIndex::PHI_PLUS;
const PM: BellIndex = BellIndex::PHI_MINUS;
const SP: BellIndex = BellIndex::PSI_PLUS;
const SM: BellIndex = BellIndex::PSI_MINUS;

/// Swap group of two encoded pair states; rows are the first pair
/// (`φ⁺, φ⁻, ψ⁺, ψ⁻`), columns the second.
pub const SWAP_GROUP_TABLE: [[SwapGroup; 4]; 4] = {
    use SwapGroup as G;
    [
        [G::C0, G::C1, G::C2, G::C3],
        [G::C1, G::C0, G::C3, G::C2],
        [G::C2, G::C3, G::C0, G::C1],
        [G::C3, G::C2, G::C1, G::C0],
    ]
};

/// Members `(Alice outcome, Bob outcome)` of each group, in printed order.
pub const OUTCOME_GROUPS: [[(BellIndex, BellIndex); 4]; 4] = [
    [(PP, PP), (PM, PM), (SP, SP), (SM, SM)],
    [(PM, PP), (PP, PM), (SP, SM), (SM, SP)],
    [(PP, SP), (PM, SM), (SP, PP), (SM, PM)],
    [(PM, SP), (PP, SM), (SM, PP), (SP, PM)],
];

/// Label after applying `e` to either qubit of a Bell pair (global phase
/// dropped).
pub const fn encode_index(initial: BellIndex, e: PauliEncoding) -> BellIndex {
    BellIndex::new(initial.x ^ e.p, initial.z ^ e.q)
}

pub fn swap_group(pair_i: BellIndex, pair_j: BellIndex) -> SwapGroup {
    SWAP_GROUP_TABLE[pair_i.index()][pair_j.index()]
}

pub fn group_members(g: SwapGroup) -> [(BellIndex, BellIndex); 4] {
    OUTCOME_GROUPS[g.index()]
}

/// Group containing an observed `(Alice, Bob)` outcome pair.
pub fn group_of_outcomes(out_a: BellIndex, out_b: BellIndex) -> SwapGroup {
    SwapGroup::ALL
        .into_iter()
        .find(|g| group_members(*g).contains(&(out_a, out_b)))
        .expect("the four groups partition all 16 outcome pairs")
}

/// The two pair states of one message group after both parties encoded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedPairState {
    pub pair_i: BellIndex,
    pub pair_j: BellIndex,
}

impl EncodedPairState {
    /// Alice encodes on pair `i`, Bob on pair `j`.
    pub fn encode(
        initial_i: BellIndex,
        initial_j: BellIndex,
        alice: PauliEncoding,
        bob: PauliEncoding,
    ) -> Self {
        EncodedPairState {
            pair_i: encode_index(initial_i, alice),
            pair_j: encode_index(initial_j, bob),
        }
    }

    pub fn group(self) -> SwapGroup {
        swap_group(self.pair_i, self.pair_j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellRole {
    Alice,
    Bob,
}

/// Recovers the peer's encoding from the announced initial states, the
/// caller's own encoding and both announced outcomes.
///
/// Each of the four candidate peer encodings is pushed forward through
/// [`swap_group`]; the one landing in the observed group is returned.
pub fn decode_peer(
    initial_i: BellIndex,
    initial_j: BellIndex,
    own: PauliEncoding,
    own_role: BellRole,
    out_a: BellIndex,
    out_b: BellIndex,
) -> PauliEncoding {
    let observed = group_of_outcomes(out_a, out_b);
    PauliEncoding::ALL
        .into_iter()
        .find(|peer| {
            let (alice, bob) = match own_role {
                BellRole::Alice => (own, *peer),
                BellRole::Bob => (*peer, own),
            };
            EncodedPairState::encode(initial_i, initial_j, alice, bob).group() == observed
        })
        .expect("exactly one peer encoding reaches each group")
}
