use std::collections::BTreeMap;

use cbqsdc_core::adversary::{AttackModel, TargetLine};
use cbqsdc_core::protocol::{
    decode_party, run_scenario, run_trial, run_with_inputs, Alphabet, CheckPolicy, DecodeOutcome,
    DirectionSplit, MessageKind, NetworkLayout, QubitTag, RunConfig, RunInputs, Scenario, Session,
    Verdict,
};
use cbqsdc_core::qcore::{make_bell, BellIndex, PauliEncoding, StateLabel, NORM_TOLERANCE};
use cbqsdc_core::swapcalc::{group_members, group_of_outcomes, swap_group, SwapGroup};
use cbqsdc_core::PartyRole::{self, Alice, Bob, Controller, Elena};

fn bell(i: usize) -> StateLabel {
    StateLabel::Bell(BellIndex::from_index(i))
}

fn bits(e: PauliEncoding) -> Vec<bool> {
    vec![e.p, e.q]
}

fn secrets(pairs: &[(PartyRole, Vec<bool>)]) -> Option<BTreeMap<PartyRole, Vec<bool>>> {
    Some(pairs.iter().cloned().collect())
}

#[test]
fn step1_prepares_2n_plus_c_states() {
    let mut s = Session::new(RunConfig::new(Scenario::BellBidirectional, 1, 0, 5), 0).unwrap();
    s.step1_distribute().unwrap();
    let labels = &s.transcript().private_of(Controller).unwrap().initial_labels;
    assert_eq!(labels.len(), 2);

    let mut s = Session::new(RunConfig::new(Scenario::Network, 1, 2, 5), 0).unwrap();
    s.step1_distribute().unwrap();
    let labels = &s.transcript().private_of(Controller).unwrap().initial_labels;
    assert_eq!(labels.len(), 4);
    assert!(labels.iter().all(|l| matches!(l, StateLabel::Ghz(_))));
    let acks = s.transcript().public().iter().filter(|m| m.kind == MessageKind::ReceiptAck).count();
    assert_eq!(acks, 3);
}

#[test]
fn prepared_labels_are_uniform() {
    let cfg = RunConfig::new(Scenario::BellBidirectional, 1, 0, 11);
    let mut counts = [0usize; 4];
    let runs = 10_000;
    for t in 0..runs {
        let mut s = Session::new(cfg.clone(), t).unwrap();
        s.step1_distribute().unwrap();
        let labels = &s.transcript().private_of(Controller).unwrap().initial_labels;
        counts[labels[0].index()] += 1;
    }
    for c in counts {
        let f = c as f64 / runs as f64;
        assert!((f - 0.25).abs() < 0.02, "{counts:?}");
    }
}

#[test]
fn clean_channel_has_no_check_errors() {
    for scenario in [Scenario::BellBidirectional, Scenario::GhzBidirectional, Scenario::Network] {
        let r = run_scenario(&RunConfig::new(scenario, 3, 40, 2)).unwrap();
        assert_eq!(r.checks.total, 40);
        assert_eq!(r.checks.errors, 0);
        assert_eq!(r.verdict, Verdict::Continue);
    }
}

#[test]
fn worked_example_decodes() {
    let cfg = RunConfig::new(Scenario::BellBidirectional, 1, 0, 0);
    for trial in 0..16 {
        let r = run_with_inputs(
            &cfg,
            trial,
            RunInputs {
                initial_labels: Some(vec![bell(0), bell(1)]),
                secrets: secrets(&[(Alice, vec![false, false]), (Bob, vec![false, true])]),
            },
        )
        .unwrap();
        let outs: Vec<BellIndex> = r
            .transcript
            .public()
            .iter()
            .filter_map(|m| match m.payload {
                cbqsdc_core::protocol::Payload::MeasurementResult { outcome: cbqsdc_core::qcore::Outcome::Bell(b), .. } => Some(b),
                _ => None,
            })
            .collect();
        assert_eq!(group_of_outcomes(outs[0], outs[1]), SwapGroup::C0);
        assert!(group_members(SwapGroup::C0).contains(&(outs[0], outs[1])));
        let DecodeOutcome::Decoded(d) = &r.decode else { panic!() };
        let alice = d.iter().find(|p| p.party == Alice).unwrap();
        let bob = d.iter().find(|p| p.party == Bob).unwrap();
        assert_eq!(alice.peers[0].bits, Some(vec![false, true]));
        assert_eq!(bob.peers[0].bits, Some(vec![false, false]));
        assert_eq!(r.decode_errors, 0);
    }
}

#[test]
fn encoding_iy_on_phi_plus_gives_minus_psi_minus() {
    let cfg = RunConfig::new(Scenario::BellBidirectional, 1, 0, 0);
    let mut s = Session::with_inputs(
        cfg,
        0,
        RunInputs {
            initial_labels: Some(vec![bell(0), bell(0)]),
            secrets: secrets(&[(Alice, vec![true, true]), (Bob, vec![false, false])]),
        },
    )
    .unwrap();
    s.step1_distribute().unwrap();
    s.step2_verify_channel().unwrap();
    s.step3_encode().unwrap();
    let st = s.channel().unit_of(0).state();
    let minus: Vec<_> = make_bell(BellIndex::PSI_MINUS).amplitudes().iter().map(|a| -a).collect();
    let want = cbqsdc_core::qcore::StateVector::from_amplitudes(minus).unwrap();
    assert!(st.approx_eq(&want, NORM_TOLERANCE));
    assert_eq!(s.channel().unit_of(1).state(), &make_bell(BellIndex::PHI_PLUS));
}

#[test]
fn zero_secrets_leave_channel_unchanged() {
    for scenario in [Scenario::BellBidirectional, Scenario::GhzBidirectional, Scenario::Network] {
        let cfg = RunConfig::new(scenario, 2, 0, 9);
        let layout = cfg.layout();
        let zero = layout.senders().into_iter().map(|p| (p, vec![false; 2 * layout.bits_per_group(p)])).collect::<Vec<_>>();
        let mut s = Session::with_inputs(cfg, 0, RunInputs { initial_labels: None, secrets: secrets(&zero) }).unwrap();
        s.step1_distribute().unwrap();
        s.step2_verify_channel().unwrap();
        let before = s.channel().clone();
        s.step3_encode().unwrap();
        assert_eq!(s.channel(), &before);
    }
}

#[test]
fn exhaustive_bell_round_trip() {
    for split in [DirectionSplit::AliceFirst, DirectionSplit::BobFirst] {
        let mut cfg = RunConfig::new(Scenario::BellBidirectional, 1, 0, 1);
        cfg.split = split;
        let mut cases = 0;
        for li in 0..4 {
            for lj in 0..4 {
                for pq in PauliEncoding::ALL {
                    for rs in PauliEncoding::ALL {
                        let r = run_with_inputs(
                            &cfg,
                            cases,
                            RunInputs {
                                initial_labels: Some(vec![bell(li), bell(lj)]),
                                secrets: secrets(&[(Alice, bits(pq)), (Bob, bits(rs))]),
                            },
                        )
                        .unwrap();
                        assert_eq!(r.decoded_correctly(), Some(true), "{li} {lj} {pq} {rs}");
                        cases += 1;
                    }
                }
            }
        }
        assert_eq!(cases, 256);
    }
}

#[test]
fn random_runs_decode_in_every_decodable_scenario() {
    let mut configs = vec![
        RunConfig::new(Scenario::BellBidirectional, 3, 4, 21),
        RunConfig::new(Scenario::GhzBidirectional, 3, 4, 22),
    ];
    for layout in [NetworkLayout::A, NetworkLayout::B] {
        let mut c = RunConfig::new(Scenario::Network, 3, 4, 23);
        c.network_layout = layout;
        configs.push(c);
    }
    for cfg in configs {
        assert!(cfg.layout().analyze().decodable);
        for t in 0..100 {
            let r = run_trial(&cfg, t).unwrap();
            assert_eq!(r.decoded_correctly(), Some(true), "{:?} trial {t}", cfg.scenario);
        }
    }
}

#[test]
fn full_alphabet_on_non_decodable_layout_reports_failures() {
    let mut cfg = RunConfig::new(Scenario::Network, 1, 0, 3);
    cfg.alphabet = Alphabet::Full;
    let r = run_scenario(&cfg).unwrap();
    assert!(!r.layout.decodable);
    let DecodeOutcome::Decoded(d) = &r.decode else { panic!() };
    // Every party sees exactly half of the peer-message space collapse.
    assert!(d.iter().all(|p| p.peers.iter().all(|m| m.bits.is_none())));
    assert!(r.decode_errors > 0);
}

#[test]
fn network_run_has_three_decoders() {
    let r = run_scenario(&RunConfig::new(Scenario::Network, 1, 0, 4)).unwrap();
    let DecodeOutcome::Decoded(d) = &r.decode else { panic!() };
    assert_eq!(d.len(), 3);
    for p in d {
        assert_eq!(p.peers.len(), 2);
        for m in &p.peers {
            assert_eq!(m.bits.as_ref(), r.secrets.get(&m.peer));
        }
    }
    assert!(d.iter().any(|p| p.party == Elena));
}

#[test]
fn bell_counters_reproduce_printed_row() {
    let r = run_scenario(&RunConfig::new(Scenario::BellBidirectional, 1, 0, 7)).unwrap();
    assert_eq!((r.counters.m_u, r.counters.q_k, r.counters.b_k), (4, 4, 8));
}

#[test]
fn permission_gate() {
    let mut cfg = RunConfig::new(Scenario::BellBidirectional, 2, 6, 8);
    let granted = run_scenario(&cfg).unwrap();
    cfg.permission_granted = false;
    let withheld = run_scenario(&cfg).unwrap();
    assert_eq!(withheld.decode, DecodeOutcome::Withheld);
    let before: Vec<_> = granted
        .transcript
        .public()
        .iter()
        .take_while(|m| m.kind != MessageKind::PermissionAnnounce)
        .cloned()
        .collect();
    assert_eq!(before, withheld.transcript.public());
    for party in [Alice, Bob] {
        let own = withheld.transcript.private_of(party).unwrap();
        assert!(decode_party(&cfg, withheld.transcript.public(), own).is_none());
    }
}

#[test]
fn decoding_replays_from_public_view_and_own_record() {
    for scenario in [Scenario::BellBidirectional, Scenario::GhzBidirectional, Scenario::Network] {
        let cfg = RunConfig::new(scenario, 2, 3, 31);
        let r = run_scenario(&cfg).unwrap();
        let DecodeOutcome::Decoded(d) = &r.decode else { panic!() };
        for p in d {
            let own = r.transcript.private_of(p.party).unwrap();
            assert_eq!(decode_party(&cfg, r.transcript.public(), own).as_ref(), Some(p));
        }
    }
}

#[test]
fn runs_are_deterministic() {
    let mut cfg = RunConfig::new(Scenario::GhzBidirectional, 2, 10, 99);
    cfg.attack = AttackModel::intercept_resend(TargetLine::Both);
    cfg.error_threshold = 1.0;
    assert_eq!(run_scenario(&cfg).unwrap(), run_scenario(&cfg).unwrap());
    assert_ne!(run_trial(&cfg, 1).unwrap(), run_trial(&cfg, 2).unwrap());
}

#[test]
fn qubits_only_move_in_step_one() {
    let mut cfg = RunConfig::new(Scenario::Network, 2, 3, 5);
    cfg.attack = AttackModel::controlled_not(TargetLine::Both);
    cfg.error_threshold = 1.0;
    let r = run_scenario(&cfg).unwrap();
    assert_eq!(r.route.len(), 3 * cfg.total_states());
    assert!(r.route.iter().all(|e| e.step == 1 && e.from == Controller && e.tapped));
}

#[test]
fn eve_ancillas_are_never_measured_by_parties() {
    let mut cfg = RunConfig::new(Scenario::BellBidirectional, 2, 4, 6);
    cfg.attack = AttackModel::entangle_measure_beta2(0.3, TargetLine::Both).unwrap();
    cfg.error_threshold = 1.0;
    let mut s = Session::new(cfg, 0).unwrap();
    s.run_to_end().unwrap();
    let left: Vec<QubitTag> = s.channel().units().flat_map(|u| u.tags().to_vec()).collect();
    assert_eq!(left.len(), 2 * 8);
    assert!(left.iter().all(|t| matches!(t, QubitTag::Ancilla { .. })));
    let r = s.finish();
    assert_eq!(r.counters.q_k, 8);
}

#[test]
fn intercept_resend_aborts() {
    let mut cfg = RunConfig::new(Scenario::BellBidirectional, 1, 200, 17);
    cfg.attack = AttackModel::intercept_resend(TargetLine::Bob);
    let r = run_scenario(&cfg).unwrap();
    let Verdict::Abort { error_rate } = r.verdict else { panic!("{:?}", r.verdict) };
    assert!((error_rate - 0.25).abs() < 0.07, "{error_rate}");
    assert_eq!(r.decode, DecodeOutcome::Aborted);
    assert_eq!(r.transcript.public().last().unwrap().kind, MessageKind::Abort);
    assert_eq!(r.transcript.public().last().unwrap().sender, Alice);
}

#[test]
fn entangle_measure_z_checks_err_at_beta2() {
    let mut cfg = RunConfig::new(Scenario::BellBidirectional, 1, 2000, 3);
    cfg.attack = AttackModel::entangle_measure_beta2(0.25, TargetLine::Bob).unwrap();
    cfg.check_policy = CheckPolicy::ZOnly;
    let r = run_scenario(&cfg).unwrap();
    assert!((r.checks.error_rate - 0.25).abs() < 0.04, "{}", r.checks.error_rate);
}

#[test]
fn swap_groups_of_runs_match_closed_form() {
    let cfg = RunConfig::new(Scenario::BellBidirectional, 4, 0, 12);
    for t in 0..20 {
        let r = run_trial(&cfg, t).unwrap();
        for g in &r.groups {
            let enc = |party: PartyRole, st: usize| {
                let own = r.transcript.private_of(party).unwrap();
                own.encodings.iter().find(|e| e.0 == g.index && e.1 == st).map(|e| e.3)
            };
            let label = |st: usize| match r.initial_labels[st] {
                StateLabel::Bell(b) => b,
                _ => unreachable!(),
            };
            let x = cbqsdc_core::swapcalc::encode_index(label(g.states[0]), enc(Alice, g.states[0]).unwrap());
            let y = cbqsdc_core::swapcalc::encode_index(label(g.states[1]), enc(Bob, g.states[1]).unwrap());
            let outs: Vec<BellIndex> = r
                .transcript
                .public()
                .iter()
                .filter_map(|m| match m.payload {
                    cbqsdc_core::protocol::Payload::MeasurementResult { group, outcome: cbqsdc_core::qcore::Outcome::Bell(b) } if group == g.index => Some(b),
                    _ => None,
                })
                .collect();
            assert!(group_members(swap_group(x, y)).contains(&(outs[0], outs[1])));
        }
    }
}

#[test]
fn bad_inputs_are_config_errors() {
    let cfg = RunConfig::new(Scenario::BellBidirectional, 1, 0, 0);
    let short = RunInputs { initial_labels: None, secrets: secrets(&[(Alice, vec![true]), (Bob, vec![true, false])]) };
    assert!(run_with_inputs(&cfg, 0, short).is_err());
    let ghz = RunInputs { initial_labels: Some(vec![StateLabel::Ghz(Default::default()); 2]), secrets: None };
    assert!(run_with_inputs(&cfg, 0, ghz).is_err());
    let zero = RunConfig::new(Scenario::BellBidirectional, 0, 0, 0);
    assert!(run_scenario(&zero).is_err());
}
