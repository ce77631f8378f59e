use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ProtocolError;
use crate::qcore::{measure, prepare, Basis, Outcome, PauliEncoding, StateLabel, StateVector};
use crate::PartyRole;

/// Identifies one physical qubit of the run: slot `slot` of prepared state
/// `state`, or Eve's ancilla attached to that qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitTag {
    Routed {
        state: usize,
        slot: usize,
        holder: PartyRole,
    },
    Ancilla {
        state: usize,
        slot: usize,
    },
}

/// A set of qubits that may be entangled with each other but not with
/// anything outside the unit.
#[derive(Clone, Debug, PartialEq)]
pub struct Unit {
    state: StateVector,
    tags: Vec<QubitTag>,
}

impl Unit {
    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn tags(&self) -> &[QubitTag] {
        &self.tags
    }
}

/// One hop of a qubit from the controller to a party.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteEvent {
    pub step: u8,
    pub state: usize,
    pub slot: usize,
    pub from: PartyRole,
    pub to: PartyRole,
    pub tapped: bool,
}

/// Quantum side of a run. Units are never removed, so the unit index of a
/// prepared state stays valid after merges; merged-away units are empty.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Channel {
    units: Vec<Unit>,
    unit_of_state: Vec<usize>,
    route: Vec<RouteEvent>,
}

impl Channel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Prepares `label` as a new state; `holders[s]` receives slot `s`.
    /// Returns the state number.
    pub fn prepare(&mut self, label: StateLabel, holders: &[PartyRole]) -> usize {
        debug_assert_eq!(holders.len(), label.n_qubits());
        let state = self.unit_of_state.len();
        self.unit_of_state.push(self.units.len());
        self.units.push(Unit {
            state: prepare(label),
            tags: holders
                .iter()
                .enumerate()
                .map(|(slot, &holder)| QubitTag::Routed {
                    state,
                    slot,
                    holder,
                })
                .collect(),
        });
        state
    }

    pub fn n_states(&self) -> usize {
        self.unit_of_state.len()
    }

    pub fn unit_of(&self, state: usize) -> &Unit {
        &self.units[self.unit_of_state[state]]
    }

    pub fn units(&self) -> impl Iterator<Item = &Unit> {
        self.units.iter().filter(|u| !u.tags.is_empty())
    }

    pub fn record_route(&mut self, event: RouteEvent) {
        self.route.push(event);
    }

    pub fn route(&self) -> &[RouteEvent] {
        &self.route
    }

    fn locate(&self, tag_matches: impl Fn(&QubitTag) -> bool, state: usize) -> Option<(usize, usize)> {
        let unit = *self.unit_of_state.get(state)?;
        let pos = self.units[unit].tags.iter().position(tag_matches)?;
        Some((unit, pos))
    }

    fn locate_routed(&self, state: usize, slot: usize) -> Result<(usize, usize), ProtocolError> {
        self.locate(
            |t| matches!(t, QubitTag::Routed { state: s, slot: q, .. } if *s == state && *q == slot),
            state,
        )
        .ok_or(ProtocolError::MissingQubit { state, slot })
    }

    /// Current holder of a routed qubit, if it has not been measured yet.
    pub fn holder(&self, state: usize, slot: usize) -> Option<PartyRole> {
        let (unit, pos) = self.locate_routed(state, slot).ok()?;
        match self.units[unit].tags[pos] {
            QubitTag::Routed { holder, .. } => Some(holder),
            QubitTag::Ancilla { .. } => None,
        }
    }

    pub fn apply_pauli(
        &mut self,
        state: usize,
        slot: usize,
        e: PauliEncoding,
    ) -> Result<(), ProtocolError> {
        let (unit, pos) = self.locate_routed(state, slot)?;
        let u = &mut self.units[unit];
        u.state = u.state.apply_pauli(pos, e)?;
        Ok(())
    }

    /// Appends Eve's ancilla, prepared in `init`, next to the routed qubit
    /// and applies `gate` on (routed qubit, ancilla).
    pub(crate) fn attach_ancilla(
        &mut self,
        state: usize,
        slot: usize,
        init: [Complex64; 2],
        gate: &[[Complex64; 4]; 4],
    ) -> Result<(), ProtocolError> {
        let (unit, pos) = self.locate_routed(state, slot)?;
        let u = &mut self.units[unit];
        let anc = u.tags.len();
        u.state = u.state.insert_qubit(anc, init)?.apply_two_qubit(pos, anc, gate)?;
        u.tags.push(QubitTag::Ancilla { state, slot });
        Ok(())
    }

    /// Measures a routed qubit in Z or X and replaces it with a fresh qubit
    /// in the observed eigenstate, keeping its tag.
    pub(crate) fn measure_and_resend<R: Rng + ?Sized>(
        &mut self,
        state: usize,
        slot: usize,
        basis: Basis,
        rng: &mut R,
    ) -> Result<bool, ProtocolError> {
        let (unit, pos) = self.locate_routed(state, slot)?;
        let u = &mut self.units[unit];
        let (record, rest) = measure(&u.state, basis, &[pos], rng)?;
        let bit = matches!(record.outcome, Outcome::Bit(true));
        let v = basis.vector(bit as usize);
        let amps = v.amplitudes();
        u.state = rest.insert_qubit(pos, [amps[0], amps[1]])?;
        Ok(bit)
    }

    /// Brings the units of all listed states together.
    fn merge(&mut self, states: &[usize]) -> usize {
        let target = self.unit_of_state[states[0]];
        for &s in &states[1..] {
            let other = self.unit_of_state[s];
            if other == target {
                continue;
            }
            let moved = core::mem::replace(
                &mut self.units[other],
                Unit {
                    state: StateVector::basis(0, 0),
                    tags: Vec::new(),
                },
            );
            let t = &mut self.units[target];
            t.state = t.state.tensor(&moved.state);
            t.tags.extend(moved.tags);
            for u in self.unit_of_state.iter_mut() {
                if *u == other {
                    *u = target;
                }
            }
        }
        target
    }

    /// `party` measures its qubits `(state, slot)` jointly in `basis`. The
    /// measured qubits leave the channel.
    pub fn measure_held<R: Rng + ?Sized>(
        &mut self,
        party: PartyRole,
        basis: Basis,
        qubits: &[(usize, usize)],
        rng: &mut R,
    ) -> Result<Outcome, ProtocolError> {
        for &(state, slot) in qubits {
            match self.holder(state, slot) {
                Some(h) if h == party => {}
                _ => return Err(ProtocolError::NotHeld { party, state, slot }),
            }
        }
        let states: Vec<usize> = qubits.iter().map(|q| q.0).collect();
        let unit = self.merge(&states);
        let positions: Vec<usize> = qubits
            .iter()
            .map(|&(state, slot)| self.locate_routed(state, slot).map(|p| p.1))
            .collect::<Result<_, _>>()?;
        let u = &mut self.units[unit];
        let (record, rest) = measure(&u.state, basis, &positions, rng)?;
        u.state = rest;
        let mut keep = vec![true; u.tags.len()];
        for p in positions {
            keep[p] = false;
        }
        let mut n = 0;
        u.tags.retain(|_| {
            n += 1;
            keep[n - 1]
        });
        Ok(record.outcome)
    }
}
