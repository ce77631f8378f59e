//! The five-step controlled protocol.
//!
//! A [`Session`] owns one run: the controller prepares `2N + c` entangled
//! states and routes them (step 1), Alice samples `c` of them for channel
//! checking (step 2), the users encode on their group qubits (step 3),
//! measure and announce (step 4), and the controller's label announcement
//! lets each user decode the others (step 5). Each step only reads what
//! its party may know; decoding runs on the public transcript plus the
//! decoding party's private record.

mod channel;
mod layout;
mod session;
mod transcript;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversary::{AdversaryError, AttackModel, EveRecord};
use crate::qcore::{BellIndex, GhzIndex, QcoreError, StateLabel};
use crate::PartyRole;

pub use channel::{Channel, QubitTag, RouteEvent, Unit};
pub use layout::{
    Decodability, EncodingSlot, GroupLayout, PartyDecodability, PartyMeasurement,
};
pub use session::{
    assign_groups, check_error, decode_party, run_scenario, run_trial, run_with_inputs, Session,
};
pub use transcript::{
    CheckResult, ClassicalMessage, MessageKind, Payload, PrivateRecord, Receiver, Transcript,
};

pub const DEFAULT_ERROR_THRESHOLD: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    BellBidirectional,
    GhzBidirectional,
    Network,
}

impl Scenario {
    /// Label kind of every prepared state (value is the all-zero label).
    pub fn state_kind(self) -> StateLabel {
        match self {
            Scenario::BellBidirectional => StateLabel::Bell(BellIndex::PHI_PLUS),
            Scenario::GhzBidirectional | Scenario::Network => StateLabel::Ghz(GhzIndex::ZERO),
        }
    }

    pub fn users(self) -> &'static [PartyRole] {
        match self {
            Scenario::Network => &[PartyRole::Alice, PartyRole::Bob, PartyRole::Elena],
            _ => &[PartyRole::Alice, PartyRole::Bob],
        }
    }
}

/// Basis choice for channel checking.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckPolicy {
    #[default]
    Random,
    ZOnly,
    XOnly,
}

/// Network encoding layout: `A` has Alice on `A_i`, Bob on `B_j`, Elena on
/// `C_j`; `B` has all three on state `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetworkLayout {
    #[default]
    A,
    B,
}

/// Message alphabet per encoding slot. `Full` uses both Pauli bits on every
/// slot; `Reduced` drops the phase bit where the layout cannot carry it;
/// `Auto` picks `Full` when decodable and `Reduced` otherwise.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alphabet {
    #[default]
    Auto,
    Full,
    Reduced,
}

/// Which pair of a Bell group carries Alice's encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionSplit {
    /// Alice encodes on the first (odd) pair, Bob on the second (even).
    #[default]
    AliceFirst,
    BobFirst,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub scenario: Scenario,
    /// `N`, the number of message groups.
    pub n_message_pairs: usize,
    /// `c`, the number of check states.
    pub n_check: usize,
    pub error_threshold: f64,
    pub seed: u64,
    pub attack: AttackModel,
    pub permission_granted: bool,
    pub check_policy: CheckPolicy,
    pub network_layout: NetworkLayout,
    pub alphabet: Alphabet,
    pub split: DirectionSplit,
}

impl RunConfig {
    pub fn new(scenario: Scenario, n_message_pairs: usize, n_check: usize, seed: u64) -> Self {
        RunConfig {
            scenario,
            n_message_pairs,
            n_check,
            error_threshold: DEFAULT_ERROR_THRESHOLD,
            seed,
            attack: AttackModel::none(),
            permission_granted: true,
            check_policy: CheckPolicy::Random,
            network_layout: NetworkLayout::A,
            alphabet: Alphabet::Auto,
            split: DirectionSplit::AliceFirst,
        }
    }

    pub fn total_states(&self) -> usize {
        2 * self.n_message_pairs + self.n_check
    }

    pub fn layout(&self) -> GroupLayout {
        GroupLayout::resolve(self.scenario, self.network_layout, self.split, self.alphabet)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_message_pairs == 0 {
            return Err(ConfigError::NoMessagePairs);
        }
        if !(0.0..=1.0).contains(&self.error_threshold) {
            return Err(ConfigError::Threshold(self.error_threshold));
        }
        self.attack.validate()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ConfigError {
    #[error("at least one message pair is required")]
    NoMessagePairs,
    #[error("error threshold {0} is outside [0, 1]")]
    Threshold(f64),
    #[error(transparent)]
    Attack(#[from] AdversaryError),
    #[error("{party} secret has {got} bits, expected {expected}")]
    SecretLength {
        party: PartyRole,
        expected: usize,
        got: usize,
    },
    #[error("{party} does not send in this scenario")]
    UnexpectedSender { party: PartyRole },
    #[error("{got} initial labels given, expected {expected}")]
    LabelCount { expected: usize, got: usize },
    #[error("initial label {0} does not match the scenario")]
    LabelKind(StateLabel),
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
    #[error("qubit {slot} of state {state} is not in the channel")]
    MissingQubit { state: usize, slot: usize },
    #[error("{party} does not hold qubit {slot} of state {state}")]
    NotHeld {
        party: PartyRole,
        state: usize,
        slot: usize,
    },
    #[error("step {step} called out of order")]
    OutOfOrder { step: u8 },
    #[error("at least one trial is required")]
    NoTrials,
}

impl From<AdversaryError> for ProtocolError {
    fn from(e: AdversaryError) -> Self {
        ProtocolError::Config(e.into())
    }
}

/// Optional fixed inputs; anything left `None` is drawn from the run's
/// random stream.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunInputs {
    pub initial_labels: Option<Vec<StateLabel>>,
    pub secrets: Option<BTreeMap<PartyRole, Vec<bool>>>,
}

/// Two prepared states that together carry one round of messages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub index: usize,
    pub states: [usize; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Continue,
    Abort { error_rate: f64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckStats {
    pub total: u64,
    pub errors: u64,
    pub z_checks: u64,
    pub z_errors: u64,
    pub x_checks: u64,
    pub x_errors: u64,
    pub error_rate: f64,
}

/// A peer's message as reconstructed by one party; `None` if some group
/// did not single out one candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeerMessage {
    pub peer: PartyRole,
    pub bits: Option<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyDecode {
    pub party: PartyRole,
    pub peers: Vec<PeerMessage>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodeOutcome {
    Decoded(Vec<PartyDecode>),
    Withheld,
    Aborted,
}

/// Resource counters: secret bits, message-state qubits and charged
/// classical bits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub m_u: usize,
    pub q_k: usize,
    pub b_k: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub trial: u64,
    pub layout: Decodability,
    pub verdict: Verdict,
    pub checks: CheckStats,
    pub initial_labels: Vec<StateLabel>,
    pub check_positions: Vec<usize>,
    pub groups: Vec<Group>,
    pub secrets: BTreeMap<PartyRole, Vec<bool>>,
    pub decode: DecodeOutcome,
    /// Peer messages decoded wrongly or not at all.
    pub decode_errors: usize,
    pub counters: Counters,
    pub transcript: Transcript,
    pub route: Vec<RouteEvent>,
    pub eve: EveRecord,
}

impl RunReport {
    /// `Some(true)` when every party recovered every peer message.
    pub fn decoded_correctly(&self) -> Option<bool> {
        match self.decode {
            DecodeOutcome::Decoded(_) => Some(self.decode_errors == 0),
            _ => None,
        }
    }
}
