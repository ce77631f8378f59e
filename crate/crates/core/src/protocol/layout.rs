use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{Alphabet, DirectionSplit, NetworkLayout, Scenario};
use crate::qcore::{Basis, BellIndex, GhzIndex, PauliEncoding, StateLabel};
use crate::swapcalc::{PauliFrame, SwapLayout};
use crate::PartyRole;

use PartyRole::{Alice, Bob, Elena};

/// One Pauli a party applies: `σx^p` always, `σz^q` only if `phase`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingSlot {
    pub party: PartyRole,
    /// 0 for the first state of the group, 1 for the second.
    pub state: usize,
    pub slot: usize,
    pub phase: bool,
}

impl EncodingSlot {
    pub fn bits(&self) -> usize {
        1 + self.phase as usize
    }
}

/// A party's joint measurement on its group qubits, listed as
/// `(state in group, slot)` in measurement order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyMeasurement {
    pub party: PartyRole,
    pub basis: Basis,
    pub qubits: Vec<(usize, usize)>,
}

/// How many peer messages one party can tell apart from its view of a
/// group (own message, announced labels and all announced outcomes).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyDecodability {
    pub party: PartyRole,
    pub peer_bits: usize,
    /// Number of distinguishable peer-message classes; `2^peer_bits` means
    /// every peer message is recovered exactly.
    pub classes: usize,
    pub decodable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decodability {
    pub alphabet: Alphabet,
    pub parties: Vec<PartyDecodability>,
    pub decodable: bool,
}

/// Everything about one message group that does not depend on the run:
/// state kinds, who holds what, where each party encodes and what each
/// party measures.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupLayout {
    kinds: [StateLabel; 2],
    holders: [Vec<PartyRole>; 2],
    slots: Vec<EncodingSlot>,
    measurements: Vec<PartyMeasurement>,
    swap: SwapLayout,
    alphabet: Alphabet,
}

fn slot(party: PartyRole, state: usize, slot: usize, phase: bool) -> EncodingSlot {
    EncodingSlot {
        party,
        state,
        slot,
        phase,
    }
}

fn meas(party: PartyRole, basis: Basis, qubits: &[(usize, usize)]) -> PartyMeasurement {
    PartyMeasurement {
        party,
        basis,
        qubits: qubits.to_vec(),
    }
}

impl GroupLayout {
    /// Layout for a scenario with an explicit alphabet (`Auto` is treated
    /// as `Full`; see [`GroupLayout::resolve`]).
    pub fn build(
        scenario: Scenario,
        network: NetworkLayout,
        split: DirectionSplit,
        alphabet: Alphabet,
    ) -> Self {
        let reduced = alphabet == Alphabet::Reduced;
        let alphabet = if reduced { Alphabet::Reduced } else { Alphabet::Full };
        let bell = StateLabel::Bell(BellIndex::PHI_PLUS);
        let ghz = StateLabel::Ghz(GhzIndex::ZERO);
        let (kinds, holders, slots, measurements) = match scenario {
            Scenario::BellBidirectional => {
                // Every Bell slot carries two bits, so both alphabets agree.
                let (a, b) = match split {
                    DirectionSplit::AliceFirst => (0, 1),
                    DirectionSplit::BobFirst => (1, 0),
                };
                (
                    [bell, bell],
                    [vec![Alice, Bob], vec![Alice, Bob]],
                    vec![slot(Alice, a, 0, true), slot(Bob, b, 1, true)],
                    vec![
                        meas(Alice, Basis::Bell, &[(0, 0), (1, 0)]),
                        meas(Bob, Basis::Bell, &[(0, 1), (1, 1)]),
                    ],
                )
            }
            Scenario::GhzBidirectional => (
                // Qubits a0 a1 b0 | a2 b1 b2; Alice measures (a0, a2, a1),
                // Bob (b1, b0, b2).
                [ghz, ghz],
                [vec![Alice, Alice, Bob], vec![Alice, Bob, Bob]],
                vec![
                    slot(Alice, 0, 0, true),
                    slot(Alice, 0, 1, !reduced),
                    slot(Bob, 1, 1, true),
                    slot(Bob, 1, 2, !reduced),
                ],
                vec![
                    meas(Alice, Basis::Ghz, &[(0, 0), (1, 0), (0, 1)]),
                    meas(Bob, Basis::Ghz, &[(1, 1), (0, 2), (1, 2)]),
                ],
            ),
            Scenario::Network => {
                let slots = match network {
                    NetworkLayout::A => vec![
                        slot(Alice, 0, 0, !reduced),
                        slot(Bob, 1, 1, !reduced),
                        slot(Elena, 1, 2, !reduced),
                    ],
                    NetworkLayout::B => vec![
                        slot(Alice, 0, 0, !reduced),
                        slot(Bob, 0, 1, !reduced),
                        slot(Elena, 0, 2, !reduced),
                    ],
                };
                (
                    [ghz, ghz],
                    [vec![Alice, Bob, Elena], vec![Alice, Bob, Elena]],
                    slots,
                    vec![
                        meas(Alice, Basis::Bell, &[(0, 0), (1, 0)]),
                        meas(Bob, Basis::Bell, &[(0, 1), (1, 1)]),
                        meas(Elena, Basis::Bell, &[(0, 2), (1, 2)]),
                    ],
                )
            }
        };
        let offsets = [0, kinds[0].n_qubits()];
        let flat = measurements
            .iter()
            .map(|m| {
                (
                    m.basis,
                    m.qubits.iter().map(|&(s, q)| offsets[s] + q).collect(),
                )
            })
            .collect();
        let swap = SwapLayout::new(&kinds, flat).expect("static layouts are well formed");
        GroupLayout {
            kinds,
            holders,
            slots,
            measurements,
            swap,
            alphabet,
        }
    }

    /// Resolves `Auto` to the full alphabet if it is decodable and to the
    /// reduced one otherwise.
    pub fn resolve(
        scenario: Scenario,
        network: NetworkLayout,
        split: DirectionSplit,
        alphabet: Alphabet,
    ) -> Self {
        match alphabet {
            Alphabet::Auto => {
                let full = Self::build(scenario, network, split, Alphabet::Full);
                if full.analyze().decodable {
                    full
                } else {
                    Self::build(scenario, network, split, Alphabet::Reduced)
                }
            }
            other => Self::build(scenario, network, split, other),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn kinds(&self) -> &[StateLabel; 2] {
        &self.kinds
    }

    pub fn holders(&self, state: usize) -> &[PartyRole] {
        &self.holders[state]
    }

    pub fn slots(&self) -> &[EncodingSlot] {
        &self.slots
    }

    pub fn measurements(&self) -> &[PartyMeasurement] {
        &self.measurements
    }

    pub fn swap_layout(&self) -> &SwapLayout {
        &self.swap
    }

    /// Parties that encode, in slot order without repeats.
    pub fn senders(&self) -> Vec<PartyRole> {
        let mut out: Vec<PartyRole> = Vec::new();
        for s in &self.slots {
            if !out.contains(&s.party) {
                out.push(s.party);
            }
        }
        out
    }

    /// Message bits `party` sends per group.
    pub fn bits_per_group(&self, party: PartyRole) -> usize {
        self.slots
            .iter()
            .filter(|s| s.party == party)
            .map(EncodingSlot::bits)
            .sum()
    }

    pub fn qubits_per_group(&self) -> usize {
        self.kinds.iter().map(|k| k.n_qubits()).sum()
    }

    /// Paulis `party` applies for the message `bits`, as
    /// `(state in group, slot, encoding)`.
    pub fn encodings(&self, party: PartyRole, bits: &[bool]) -> Vec<(usize, usize, PauliEncoding)> {
        let mut it = bits.iter().copied();
        self.slots
            .iter()
            .filter(|s| s.party == party)
            .map(|s| {
                let p = it.next().unwrap_or(false);
                let q = if s.phase { it.next().unwrap_or(false) } else { false };
                (s.state, s.slot, PauliEncoding::new(p, q))
            })
            .collect()
    }

    /// Pauli frame of the whole group for the given initial labels and
    /// per-party messages.
    pub fn frame(&self, labels: &[StateLabel; 2], messages: &[(PartyRole, &[bool])]) -> PauliFrame {
        let mut frame = PauliFrame::identity(self.swap.n_qubits());
        for (n, label) in labels.iter().enumerate() {
            frame.apply_label(self.swap.offset(n), *label);
        }
        for (party, bits) in messages {
            for (state, slot, e) in self.encodings(*party, bits) {
                frame.apply(self.swap.offset(state) + slot, e);
            }
        }
        frame
    }

    /// All peer-message assignments consistent with what `party` sees.
    /// Each assignment lists the peers in [`GroupLayout::senders`] order.
    pub fn consistent_peer_messages(
        &self,
        labels: &[StateLabel; 2],
        party: PartyRole,
        own: &[bool],
        outcomes: &[usize],
    ) -> Vec<Vec<(PartyRole, Vec<bool>)>> {
        self.peer_assignments(party)
            .into_iter()
            .filter(|peers| {
                let mut msgs: Vec<(PartyRole, &[bool])> = vec![(party, own)];
                msgs.extend(peers.iter().map(|(p, b)| (*p, b.as_slice())));
                self.swap.is_consistent(&self.frame(labels, &msgs), outcomes)
            })
            .collect()
    }

    fn peer_assignments(&self, party: PartyRole) -> Vec<Vec<(PartyRole, Vec<bool>)>> {
        let peers: Vec<(PartyRole, usize)> = self
            .senders()
            .into_iter()
            .filter(|p| *p != party)
            .map(|p| (p, self.bits_per_group(p)))
            .collect();
        let total: usize = peers.iter().map(|p| p.1).sum();
        (0..1usize << total)
            .map(|code| {
                let mut shift = total;
                peers
                    .iter()
                    .map(|&(p, n)| {
                        shift -= n;
                        let bits = (0..n).map(|b| code >> (shift + n - 1 - b) & 1 == 1).collect();
                        (p, bits)
                    })
                    .collect()
            })
            .collect()
    }

    /// Checks, for every sender, whether the outcome sets reachable from
    /// distinct peer messages are disjoint. The outcome sets are cosets of
    /// one subgroup, so distinct sets never overlap and counting distinct
    /// sets counts distinguishable messages.
    pub fn analyze(&self) -> Decodability {
        let zero = self.kinds;
        let parties: Vec<PartyDecodability> = self
            .senders()
            .into_iter()
            .map(|party| {
                let own = vec![false; self.bits_per_group(party)];
                let assignments = self.peer_assignments(party);
                let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
                let mut sets: Vec<BTreeSet<Vec<usize>>> = Vec::new();
                for peers in &assignments {
                    let mut msgs: Vec<(PartyRole, &[bool])> = vec![(party, own.as_slice())];
                    msgs.extend(peers.iter().map(|(p, b)| (*p, b.as_slice())));
                    let set = self.swap.outcome_set(&self.frame(&zero, &msgs));
                    if !sets.contains(&set) {
                        debug_assert!(set.is_disjoint(&seen));
                        seen.extend(set.iter().cloned());
                        sets.push(set);
                    }
                }
                PartyDecodability {
                    party,
                    peer_bits: assignments.len().trailing_zeros() as usize,
                    classes: sets.len(),
                    decodable: sets.len() == assignments.len(),
                }
            })
            .collect();
        let decodable = parties.iter().all(|p| p.decodable);
        Decodability {
            alphabet: self.alphabet,
            parties,
            decodable,
        }
    }
}
