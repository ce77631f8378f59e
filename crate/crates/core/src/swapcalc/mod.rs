//! Symbolic index algebra for Pauli encoding and entanglement swapping.
//!
//! Bell states are tracked by their two-bit labels, GHZ states by three-bit
//! labels, and local Paulis act on labels by XOR. The tables transcribed here
//! (the swap-group grid, the four outcome groups, the GHZ swap rows and the
//! GHZ→Bell expansion) are checked cell by cell against [`crate::qcore`].

mod bell;
mod frame;
mod ghz;
pub mod verify;

pub use bell::{
    decode_peer, encode_index, group_members, group_of_outcomes, swap_group, BellRole,
    EncodedPairState, SwapGroup, OUTCOME_GROUPS, SWAP_GROUP_TABLE,
};
pub use frame::{outcome_shift, PauliFrame, SwapLayout};
pub use ghz::{
    ghz_apply_pauli, ghz_bell_decomposition_check, ghz_swap_table, BellDecomposition,
    DecompositionMismatch, GhzBellTerm, GhzSwapRow, GhzSwapTerm, GHZ_BELL_EXPANSION,
    GHZ_BELL_PAIRS, GHZ_SWAP_TRIPLES,
};
