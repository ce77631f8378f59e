use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::channel::{Channel, RouteEvent};
use super::layout::GroupLayout;
use super::transcript::{CheckResult, ClassicalMessage, Payload, PrivateRecord, Receiver, Transcript};
use super::{
    CheckPolicy, CheckStats, ConfigError, Counters, DecodeOutcome, Group, PartyDecode,
    PeerMessage, ProtocolError, RunConfig, RunInputs, RunReport, Scenario, Verdict,
};
use crate::adversary::{apply_tap, EveRecord};
use crate::qcore::{Basis, BellIndex, GhzIndex, Outcome, StateLabel};
use crate::swapcalc::{decode_peer, BellRole};
use crate::PartyRole;

use PartyRole::{Alice, Bob, Controller, Elena};

/// Holders of each slot of prepared state `n`.
fn holders(scenario: Scenario, n: usize) -> &'static [PartyRole] {
    match scenario {
        Scenario::BellBidirectional => &[Alice, Bob],
        // Alternating a0 a1 b0 / a2 b1 b2 triples.
        Scenario::GhzBidirectional if n.is_multiple_of(2) => &[Alice, Alice, Bob],
        Scenario::GhzBidirectional => &[Alice, Bob, Bob],
        Scenario::Network => &[Alice, Bob, Elena],
    }
}

/// Pairs up the states left after checking. In the GHZ scenario the two
/// triple types alternate, so the k-th remaining state of each type forms
/// group k; elsewhere consecutive remaining states are paired.
pub fn assign_groups(scenario: Scenario, total: usize, check_positions: &[usize]) -> Vec<Group> {
    let remaining: Vec<usize> = (0..total).filter(|n| !check_positions.contains(n)).collect();
    let pairs: Vec<[usize; 2]> = match scenario {
        Scenario::GhzBidirectional => {
            let first = remaining.iter().filter(|n| *n % 2 == 0);
            let second = remaining.iter().filter(|n| *n % 2 == 1);
            first.zip(second).map(|(a, b)| [*a, *b]).collect()
        }
        _ => remaining.chunks_exact(2).map(|c| [c[0], c[1]]).collect(),
    };
    pairs
        .into_iter()
        .enumerate()
        .map(|(index, states)| Group { index, states })
        .collect()
}

/// Whether a check on a state labelled `label` failed, given the outcome
/// bit of every slot in slot order. Bell: Z parity must equal `x`, X parity
/// must equal `z`. GHZ: in Z, slot0⊕slot2 = `j` and slot1⊕slot2 = `i`; in
/// X the parity must equal `k`.
pub fn check_error(label: StateLabel, basis: Basis, bits: &[bool]) -> bool {
    let parity = bits.iter().fold(false, |a, b| a ^ b);
    match (label, basis) {
        (StateLabel::Bell(b), Basis::Z) => parity != b.x,
        (StateLabel::Bell(b), Basis::X) => parity != b.z,
        (StateLabel::Ghz(g), Basis::Z) => (bits[0] ^ bits[2]) != g.j || (bits[1] ^ bits[2]) != g.i,
        (StateLabel::Ghz(g), Basis::X) => parity != g.k,
        _ => true,
    }
}

fn random_label<R: Rng + ?Sized>(scenario: Scenario, rng: &mut R) -> StateLabel {
    match scenario.state_kind() {
        StateLabel::Bell(_) => StateLabel::Bell(BellIndex::from_index(rng.gen_range(0..4))),
        StateLabel::Ghz(_) => StateLabel::Ghz(GhzIndex::from_index(rng.gen_range(0..8))),
    }
}

fn same_kind(a: StateLabel, b: StateLabel) -> bool {
    matches!(
        (a, b),
        (StateLabel::Bell(_), StateLabel::Bell(_)) | (StateLabel::Ghz(_), StateLabel::Ghz(_))
    )
}

/// One protocol run, stepped explicitly.
pub struct Session {
    cfg: RunConfig,
    trial: u64,
    layout: GroupLayout,
    rng: ChaCha8Rng,
    channel: Channel,
    transcript: Transcript,
    eve: EveRecord,
    fixed_labels: Option<Vec<StateLabel>>,
    labels: Vec<StateLabel>,
    secrets: BTreeMap<PartyRole, Vec<bool>>,
    check_positions: Vec<usize>,
    groups: Vec<Group>,
    checks: CheckStats,
    verdict: Option<Verdict>,
    decode: Option<DecodeOutcome>,
    step: u8,
}

impl Session {
    /// Trial `trial` of `cfg`: the random stream is ChaCha8 seeded with
    /// `cfg.seed`, on stream number `trial`.
    pub fn new(cfg: RunConfig, trial: u64) -> Result<Self, ProtocolError> {
        Self::with_inputs(cfg, trial, RunInputs::default())
    }

    pub fn with_inputs(cfg: RunConfig, trial: u64, inputs: RunInputs) -> Result<Self, ProtocolError> {
        cfg.validate()?;
        let layout = cfg.layout();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(trial);
        let n = cfg.n_message_pairs;
        let senders = layout.senders();
        let secrets = match inputs.secrets {
            Some(given) => {
                for (party, bits) in &given {
                    if !senders.contains(party) {
                        return Err(ConfigError::UnexpectedSender { party: *party }.into());
                    }
                    let expected = layout.bits_per_group(*party) * n;
                    if bits.len() != expected {
                        return Err(ConfigError::SecretLength {
                            party: *party,
                            expected,
                            got: bits.len(),
                        }
                        .into());
                    }
                }
                for party in &senders {
                    if !given.contains_key(party) {
                        return Err(ConfigError::SecretLength {
                            party: *party,
                            expected: layout.bits_per_group(*party) * n,
                            got: 0,
                        }
                        .into());
                    }
                }
                given
            }
            None => senders
                .iter()
                .map(|p| {
                    let bits = (0..layout.bits_per_group(*p) * n).map(|_| rng.gen()).collect();
                    (*p, bits)
                })
                .collect(),
        };
        if let Some(labels) = &inputs.initial_labels {
            if labels.len() != cfg.total_states() {
                return Err(ConfigError::LabelCount {
                    expected: cfg.total_states(),
                    got: labels.len(),
                }
                .into());
            }
            if let Some(bad) = labels.iter().find(|l| !same_kind(**l, cfg.scenario.state_kind())) {
                return Err(ConfigError::LabelKind(*bad).into());
            }
        }
        Ok(Session {
            cfg,
            trial,
            layout,
            rng,
            channel: Channel::new(),
            transcript: Transcript::default(),
            eve: EveRecord::default(),
            fixed_labels: inputs.initial_labels,
            labels: Vec::new(),
            secrets,
            check_positions: Vec::new(),
            groups: Vec::new(),
            checks: CheckStats::default(),
            verdict: None,
            decode: None,
            step: 0,
        })
    }

    fn advance(&mut self, step: u8) -> Result<(), ProtocolError> {
        if self.step + 1 != step {
            return Err(ProtocolError::OutOfOrder { step });
        }
        self.step = step;
        Ok(())
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    pub fn layout(&self) -> &GroupLayout {
        &self.layout
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn check_stats(&self) -> CheckStats {
        self.checks
    }

    /// Step 1: the controller prepares and routes `2N + c` states; Eve's
    /// taps act on the tapped lines; every user acknowledges.
    pub fn step1_distribute(&mut self) -> Result<(), ProtocolError> {
        self.advance(1)?;
        let scenario = self.cfg.scenario;
        for n in 0..self.cfg.total_states() {
            let label = match &self.fixed_labels {
                Some(l) => l[n],
                None => random_label(scenario, &mut self.rng),
            };
            self.labels.push(label);
            let hold = holders(scenario, n);
            let state = self.channel.prepare(label, hold);
            for (slot, &to) in hold.iter().enumerate() {
                let tapped = self.cfg.attack.taps(to);
                self.channel.record_route(RouteEvent {
                    step: 1,
                    state,
                    slot,
                    from: Controller,
                    to,
                    tapped,
                });
                if tapped {
                    let attack = self.cfg.attack;
                    if let Some(ev) = apply_tap(&attack, &mut self.channel, state, slot, &mut self.rng)? {
                        self.eve.events.push(ev);
                    }
                }
            }
        }
        self.transcript.private_mut(Controller).initial_labels = self.labels.clone();
        for &party in scenario.users() {
            let qubits = (0..self.cfg.total_states())
                .map(|n| holders(scenario, n).iter().filter(|h| **h == party).count())
                .sum();
            self.transcript.push(1, party, Receiver::Party(Controller), Payload::ReceiptAck { qubits });
        }
        Ok(())
    }

    fn choose_checks(&mut self) -> Vec<usize> {
        let total = self.cfg.total_states();
        let c = self.cfg.n_check;
        let mut picked: Vec<usize> = match self.cfg.scenario {
            Scenario::GhzBidirectional => {
                // Keep exactly N states of each triple type.
                let n = self.cfg.n_message_pairs;
                let mut out = Vec::new();
                for parity in 0..2 {
                    let class: Vec<usize> = (0..total).filter(|k| k % 2 == parity).collect();
                    let take = class.len() - n;
                    out.extend(sample(&mut self.rng, class.len(), take).into_iter().map(|k| class[k]));
                }
                out
            }
            _ => sample(&mut self.rng, total, c).into_vec(),
        };
        picked.sort_unstable();
        picked
    }

    /// Step 2: Alice picks `c` check states and a basis for each; every
    /// holder measures its qubits of those states in that basis; the
    /// controller reveals their labels and the error rate decides.
    pub fn step2_verify_channel(&mut self) -> Result<Verdict, ProtocolError> {
        self.advance(2)?;
        let scenario = self.cfg.scenario;
        let positions = self.choose_checks();
        self.transcript.push(
            2,
            Alice,
            Receiver::Broadcast,
            Payload::CheckPositions { positions: positions.clone() },
        );
        let bases: Vec<Basis> = positions
            .iter()
            .map(|_| match self.cfg.check_policy {
                CheckPolicy::ZOnly => Basis::Z,
                CheckPolicy::XOnly => Basis::X,
                CheckPolicy::Random => {
                    if self.rng.gen::<bool>() {
                        Basis::X
                    } else {
                        Basis::Z
                    }
                }
            })
            .collect();
        let mut bits: Vec<Vec<bool>> = positions
            .iter()
            .map(|&p| vec![false; holders(scenario, p).len()])
            .collect();
        for &party in scenario.users() {
            let mut results = Vec::new();
            for ((&pos, &basis), row) in positions.iter().zip(&bases).zip(bits.iter_mut()) {
                let mut mine = Vec::new();
                for (slot, h) in holders(scenario, pos).iter().enumerate() {
                    if *h != party {
                        continue;
                    }
                    let o = self.channel.measure_held(party, basis, &[(pos, slot)], &mut self.rng)?;
                    let b = matches!(o, Outcome::Bit(true));
                    row[slot] = b;
                    mine.push((slot, b));
                }
                if !mine.is_empty() {
                    results.push(CheckResult {
                        position: pos,
                        basis,
                        bits: mine,
                    });
                }
            }
            self.transcript.push(2, party, Receiver::Broadcast, Payload::CheckBasesResults { results });
        }
        let announced: Vec<(usize, StateLabel)> = positions.iter().map(|&p| (p, self.labels[p])).collect();
        self.transcript.push(
            2,
            Controller,
            Receiver::Broadcast,
            Payload::CheckInitialStates { labels: announced },
        );
        let mut s = CheckStats::default();
        for ((&pos, &basis), row) in positions.iter().zip(&bases).zip(&bits) {
            let err = check_error(self.labels[pos], basis, row) as u64;
            s.total += 1;
            s.errors += err;
            match basis {
                Basis::Z => {
                    s.z_checks += 1;
                    s.z_errors += err;
                }
                _ => {
                    s.x_checks += 1;
                    s.x_errors += err;
                }
            }
        }
        s.error_rate = if s.total == 0 { 0.0 } else { s.errors as f64 / s.total as f64 };
        self.checks = s;
        self.groups = assign_groups(scenario, self.cfg.total_states(), &positions);
        self.check_positions = positions;
        let verdict = if s.error_rate > self.cfg.error_threshold {
            self.transcript.push(2, Alice, Receiver::Broadcast, Payload::Abort { error_rate: s.error_rate });
            Verdict::Abort { error_rate: s.error_rate }
        } else {
            Verdict::Continue
        };
        self.verdict = Some(verdict);
        Ok(verdict)
    }

    /// Step 3: every sender applies its Paulis to its group qubits.
    pub fn step3_encode(&mut self) -> Result<(), ProtocolError> {
        self.advance(3)?;
        if self.verdict != Some(Verdict::Continue) {
            return Err(ProtocolError::OutOfOrder { step: 3 });
        }
        for party in self.layout.senders() {
            let per = self.layout.bits_per_group(party);
            let secret = self.secrets[&party].clone();
            let mut record = Vec::new();
            for g in &self.groups {
                let chunk = &secret[g.index * per..(g.index + 1) * per];
                for (st, slot, e) in self.layout.encodings(party, chunk) {
                    let state = g.states[st];
                    self.channel.apply_pauli(state, slot, e)?;
                    record.push((g.index, state, slot, e));
                }
            }
            let private = self.transcript.private_mut(party);
            private.secret = secret;
            private.encodings = record;
        }
        Ok(())
    }

    /// Step 4: every user measures its group qubits jointly and announces
    /// the outcome.
    pub fn step4_measure_and_exchange(&mut self) -> Result<(), ProtocolError> {
        self.advance(4)?;
        let groups = self.groups.clone();
        let measurements = self.layout.measurements().to_vec();
        for g in &groups {
            for m in &measurements {
                let qubits: Vec<(usize, usize)> =
                    m.qubits.iter().map(|&(st, slot)| (g.states[st], slot)).collect();
                let outcome = self.channel.measure_held(m.party, m.basis, &qubits, &mut self.rng)?;
                self.transcript.push(
                    4,
                    m.party,
                    Receiver::Broadcast,
                    Payload::MeasurementResult { group: g.index, outcome },
                );
            }
        }
        Ok(())
    }

    /// Step 5: with permission, the controller announces each group's two
    /// initial labels and every sender decodes its peers.
    pub fn step5_permission_and_decode(&mut self) -> Result<DecodeOutcome, ProtocolError> {
        self.advance(5)?;
        let outcome = if self.cfg.permission_granted {
            for g in &self.groups {
                let labels = vec![self.labels[g.states[0]], self.labels[g.states[1]]];
                self.transcript.push(
                    5,
                    Controller,
                    Receiver::Broadcast,
                    Payload::PermissionAnnounce { group: g.index, labels },
                );
            }
            let decoded = self
                .layout
                .senders()
                .into_iter()
                .map(|p| {
                    let own = self.transcript.private_of(p).cloned().unwrap_or_default();
                    decode_party(&self.cfg, self.transcript.public(), &own)
                        .unwrap_or(PartyDecode { party: p, peers: Vec::new() })
                })
                .collect();
            DecodeOutcome::Decoded(decoded)
        } else {
            DecodeOutcome::Withheld
        };
        self.decode = Some(outcome.clone());
        Ok(outcome)
    }

    /// Runs whatever steps remain, stopping after an abort.
    pub fn run_to_end(&mut self) -> Result<(), ProtocolError> {
        if self.step < 1 {
            self.step1_distribute()?;
        }
        if self.step < 2 {
            self.step2_verify_channel()?;
        }
        if self.verdict != Some(Verdict::Continue) {
            self.decode = Some(DecodeOutcome::Aborted);
            return Ok(());
        }
        if self.step < 3 {
            self.step3_encode()?;
        }
        if self.step < 4 {
            self.step4_measure_and_exchange()?;
        }
        if self.step < 5 {
            self.step5_permission_and_decode()?;
        }
        Ok(())
    }

    pub fn finish(self) -> RunReport {
        let decode = self.decode.unwrap_or(DecodeOutcome::Aborted);
        let decode_errors = match &decode {
            DecodeOutcome::Decoded(parties) => parties
                .iter()
                .map(|d| {
                    let expected = self.secrets.len() - 1;
                    let wrong = d
                        .peers
                        .iter()
                        .filter(|m| m.bits.as_ref() != self.secrets.get(&m.peer))
                        .count();
                    wrong + expected.saturating_sub(d.peers.len())
                })
                .sum(),
            _ => 0,
        };
        let counters = Counters {
            m_u: self.secrets.values().map(Vec::len).sum(),
            q_k: self.layout.qubits_per_group() * self.cfg.n_message_pairs,
            b_k: self.transcript.charged_bits(),
        };
        RunReport {
            layout: self.layout.analyze(),
            trial: self.trial,
            verdict: self.verdict.unwrap_or(Verdict::Continue),
            checks: self.checks,
            initial_labels: self.labels,
            check_positions: self.check_positions,
            groups: self.groups,
            secrets: self.secrets,
            decode,
            decode_errors,
            counters,
            route: self.channel.route().to_vec(),
            transcript: self.transcript,
            eve: self.eve,
            config: self.cfg,
        }
    }
}

/// Decodes every peer of `own.party` from the public transcript and that
/// party's private record alone. `None` if the transcript has no label
/// announcement (permission withheld or run aborted).
pub fn decode_party(
    cfg: &RunConfig,
    public: &[ClassicalMessage],
    own: &PrivateRecord,
) -> Option<PartyDecode> {
    let party = own.party?;
    let layout = cfg.layout();
    let positions = public.iter().find_map(|m| match &m.payload {
        Payload::CheckPositions { positions } => Some(positions.clone()),
        _ => None,
    })?;
    let groups = assign_groups(cfg.scenario, cfg.total_states(), &positions);
    let per = layout.bits_per_group(party);
    let peers: Vec<PartyRole> = layout.senders().into_iter().filter(|p| *p != party).collect();
    let mut bits: Vec<Option<Vec<bool>>> = peers.iter().map(|_| Some(Vec::new())).collect();
    let mut any_labels = false;
    for g in &groups {
        let labels = public.iter().find_map(|m| match &m.payload {
            Payload::PermissionAnnounce { group, labels } if *group == g.index => Some([labels[0], labels[1]]),
            _ => None,
        });
        let Some(labels) = labels else { continue };
        any_labels = true;
        // Outcomes in layout measurement order.
        let outcomes: Vec<Outcome> = layout
            .measurements()
            .iter()
            .filter_map(|m| {
                public.iter().find_map(|msg| match msg.payload {
                    Payload::MeasurementResult { group, outcome }
                        if group == g.index && msg.sender == m.party =>
                    {
                        Some(outcome)
                    }
                    _ => None,
                })
            })
            .collect();
        let chunk = own.secret.get(g.index * per..(g.index + 1) * per)?;
        let found = if outcomes.len() != layout.measurements().len() {
            None
        } else if cfg.scenario == Scenario::BellBidirectional {
            Some(decode_bell_group(cfg, party, &labels, chunk, &outcomes))
        } else {
            let codes: Vec<usize> = outcomes.iter().map(|o| o.index()).collect();
            let mut c = layout.consistent_peer_messages(&labels, party, chunk, &codes);
            if c.len() == 1 {
                c.pop()
            } else {
                None
            }
        };
        for (slot, peer) in bits.iter_mut().zip(&peers) {
            match (slot.as_mut(), &found) {
                (Some(acc), Some(f)) => {
                    let (_, b) = f.iter().find(|(p, _)| p == peer)?;
                    acc.extend(b);
                }
                _ => *slot = None,
            }
        }
    }
    if !any_labels {
        return None;
    }
    Some(PartyDecode {
        party,
        peers: peers
            .into_iter()
            .zip(bits)
            .map(|(peer, bits)| PeerMessage { peer, bits })
            .collect(),
    })
}

/// Bell groups go through the swap-group decoder directly.
fn decode_bell_group(
    cfg: &RunConfig,
    party: PartyRole,
    labels: &[StateLabel; 2],
    own: &[bool],
    outcomes: &[Outcome],
) -> Vec<(PartyRole, Vec<bool>)> {
    let bell = |l: StateLabel| match l {
        StateLabel::Bell(b) => b,
        StateLabel::Ghz(_) => BellIndex::PHI_PLUS,
    };
    let out = |o: Outcome| match o {
        Outcome::Bell(b) => b,
        _ => BellIndex::PHI_PLUS,
    };
    // The pair Alice encodes on plays the role of pair i.
    let (pi, pj) = match cfg.split {
        super::DirectionSplit::AliceFirst => (labels[0], labels[1]),
        super::DirectionSplit::BobFirst => (labels[1], labels[0]),
    };
    let (role, peer) = if party == Alice { (BellRole::Alice, Bob) } else { (BellRole::Bob, Alice) };
    let e = decode_peer(
        bell(pi),
        bell(pj),
        crate::qcore::PauliEncoding::new(own[0], own[1]),
        role,
        out(outcomes[0]),
        out(outcomes[1]),
    );
    vec![(peer, vec![e.p, e.q])]
}

/// Runs trial 0 of `cfg`.
pub fn run_scenario(cfg: &RunConfig) -> Result<RunReport, ProtocolError> {
    run_trial(cfg, 0)
}

pub fn run_trial(cfg: &RunConfig, trial: u64) -> Result<RunReport, ProtocolError> {
    run_with_inputs(cfg, trial, RunInputs::default())
}

pub fn run_with_inputs(cfg: &RunConfig, trial: u64, inputs: RunInputs) -> Result<RunReport, ProtocolError> {
    let mut s = Session::with_inputs(cfg.clone(), trial, inputs)?;
    s.run_to_end()?;
    Ok(s.finish())
}
