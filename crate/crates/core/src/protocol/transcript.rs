use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::qcore::{Basis, Outcome, PauliEncoding, StateLabel};
use crate::PartyRole;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Receiver {
    Party(PartyRole),
    Broadcast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MessageKind {
    ReceiptAck,
    CheckPositions,
    CheckBasesResults,
    CheckInitialStates,
    MeasurementResult,
    PermissionAnnounce,
    Abort,
}

/// One party's check measurement on one check state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub position: usize,
    pub basis: Basis,
    /// `(slot, outcome bit)` for each qubit of the state the sender holds.
    pub bits: Vec<(usize, bool)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    ReceiptAck { qubits: usize },
    CheckPositions { positions: Vec<usize> },
    CheckBasesResults { results: Vec<CheckResult> },
    CheckInitialStates { labels: Vec<(usize, StateLabel)> },
    MeasurementResult { group: usize, outcome: Outcome },
    PermissionAnnounce { group: usize, labels: Vec<StateLabel> },
    Abort { error_rate: f64 },
}

impl Payload {
    pub fn kind(&self) -> MessageKind {
        match self {
            Payload::ReceiptAck { .. } => MessageKind::ReceiptAck,
            Payload::CheckPositions { .. } => MessageKind::CheckPositions,
            Payload::CheckBasesResults { .. } => MessageKind::CheckBasesResults,
            Payload::CheckInitialStates { .. } => MessageKind::CheckInitialStates,
            Payload::MeasurementResult { .. } => MessageKind::MeasurementResult,
            Payload::PermissionAnnounce { .. } => MessageKind::PermissionAnnounce,
            Payload::Abort { .. } => MessageKind::Abort,
        }
    }

    /// Bits charged to `b_k`. Only measurement outcomes and the
    /// controller's label announcement are charged; receipts, checking
    /// traffic and aborts are not.
    pub fn bit_cost(&self) -> usize {
        match self {
            Payload::MeasurementResult { outcome, .. } => outcome.bit_len(),
            Payload::PermissionAnnounce { labels, .. } => labels.iter().map(|l| l.bit_len()).sum(),
            _ => 0,
        }
    }
}

/// A record on the public classical channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalMessage {
    pub seq: usize,
    pub step: u8,
    pub sender: PartyRole,
    pub receiver: Receiver,
    pub kind: MessageKind,
    pub payload: Payload,
    pub bit_cost: usize,
}

/// What one party knows privately after a run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrivateRecord {
    pub party: Option<PartyRole>,
    /// Controller only: every prepared label in preparation order.
    pub initial_labels: Vec<StateLabel>,
    pub secret: Vec<bool>,
    /// `(group, state number, slot, encoding)`.
    pub encodings: Vec<(usize, usize, usize, PauliEncoding)>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub messages: Vec<ClassicalMessage>,
    pub private: Vec<PrivateRecord>,
}

impl Transcript {
    pub fn push(&mut self, step: u8, sender: PartyRole, receiver: Receiver, payload: Payload) {
        let seq = self.messages.len();
        self.messages.push(ClassicalMessage {
            seq,
            step,
            sender,
            receiver,
            kind: payload.kind(),
            bit_cost: payload.bit_cost(),
            payload,
        });
    }

    /// The part an outsider sees.
    pub fn public(&self) -> &[ClassicalMessage] {
        &self.messages
    }

    pub fn private_of(&self, party: PartyRole) -> Option<&PrivateRecord> {
        self.private.iter().find(|r| r.party == Some(party))
    }

    pub fn private_mut(&mut self, party: PartyRole) -> &mut PrivateRecord {
        if let Some(n) = self.private.iter().position(|r| r.party == Some(party)) {
            return &mut self.private[n];
        }
        self.private.push(PrivateRecord {
            party: Some(party),
            ..PrivateRecord::default()
        });
        self.private.last_mut().expect("just pushed")
    }

    /// Sum of charged classical bits.
    pub fn charged_bits(&self) -> usize {
        self.messages.iter().map(|m| m.bit_cost).sum()
    }
}
