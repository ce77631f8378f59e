use cbqsdc_core::metrics::{
    exact_mutual_information, leakage_posterior, mutual_information, posterior_for_view,
    LeakageTarget, LeakageView,
};
use cbqsdc_core::protocol::{run_trial, RunConfig, Scenario};
use cbqsdc_core::qcore::{
    joint_born_distribution, make_bell, tensor, Basis, BellIndex, Outcome, PauliEncoding,
};

/// Independent oracle: joint outcome probabilities straight from the state
/// vector, with Alice encoding qubit 0 and Bob qubit 3.
fn oracle_likelihood(li: BellIndex, lj: BellIndex, pq: PauliEncoding, rs: PauliEncoding, a: BellIndex, b: BellIndex) -> f64 {
    let s = tensor(&make_bell(li), &make_bell(lj))
        .apply_pauli(0, pq)
        .unwrap()
        .apply_pauli(3, rs)
        .unwrap();
    let dist = joint_born_distribution(&s, &[(Basis::Bell, vec![0, 2]), (Basis::Bell, vec![1, 3])], 0.0).unwrap();
    dist.iter()
        .find(|(o, _)| o[0] == Outcome::Bell(a) && o[1] == Outcome::Bell(b))
        .map(|(_, p)| *p)
        .unwrap_or(0.0)
}

fn oracle_posterior(view: LeakageView, target: LeakageTarget) -> Vec<f64> {
    let mut t = vec![0.0; target.values()];
    for li in BellIndex::ALL {
        for lj in BellIndex::ALL {
            if let Some([x, y]) = view.labels {
                if (x, y) != (li, lj) {
                    continue;
                }
            }
            for pq in PauliEncoding::ALL {
                for rs in PauliEncoding::ALL {
                    let k = match target {
                        LeakageTarget::AliceSecret => pq.index(),
                        LeakageTarget::BobSecret => rs.index(),
                        LeakageTarget::Joint => pq.index() * 4 + rs.index(),
                    };
                    t[k] += oracle_likelihood(li, lj, pq, rs, view.out_a, view.out_b);
                }
            }
        }
    }
    let z: f64 = t.iter().sum();
    t.iter().map(|p| p / z).collect()
}

#[test]
fn posteriors_match_state_vector_oracle() {
    for target in [LeakageTarget::AliceSecret, LeakageTarget::BobSecret, LeakageTarget::Joint] {
        for out_a in BellIndex::ALL {
            for out_b in BellIndex::ALL {
                for labels in [None, Some([BellIndex::PHI_MINUS, BellIndex::PSI_PLUS]), Some([BellIndex::PHI_PLUS; 2])] {
                    let view = LeakageView { out_a, out_b, labels };
                    let got = posterior_for_view(view, target).table;
                    let want = oracle_posterior(view, target);
                    for (g, w) in got.iter().zip(&want) {
                        assert!((g - w).abs() < 1e-9, "{view:?} {target:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn single_secret_posteriors_are_uniform() {
    let cfg = RunConfig::new(Scenario::BellBidirectional, 1, 0, 41);
    for t in 0..200 {
        let r = run_trial(&cfg, t).unwrap();
        for target in [LeakageTarget::AliceSecret, LeakageTarget::BobSecret] {
            for include in [false, true] {
                let p = leakage_posterior(r.transcript.public(), target, include).unwrap();
                assert!(p.max_deviation_from_uniform() < 1e-9);
            }
        }
        let joint = leakage_posterior(r.transcript.public(), LeakageTarget::Joint, false).unwrap();
        assert!(joint.max_deviation_from_uniform() < 1e-9);
        let joint = leakage_posterior(r.transcript.public(), LeakageTarget::Joint, true).unwrap();
        assert_eq!(joint.support(), 4);
    }
}

#[test]
fn mutual_information_values() {
    for include in [false, true] {
        assert!(exact_mutual_information(LeakageTarget::AliceSecret, include).abs() < 1e-12);
        assert!(exact_mutual_information(LeakageTarget::BobSecret, include).abs() < 1e-12);
    }
    assert!(exact_mutual_information(LeakageTarget::Joint, false).abs() < 1e-12);
    assert!((exact_mutual_information(LeakageTarget::Joint, true) - 2.0).abs() < 1e-12);

    let cfg = RunConfig::new(Scenario::BellBidirectional, 1, 0, 42);
    let reports: Vec<_> = (0..100).map(|t| run_trial(&cfg, t).unwrap()).collect();
    let est = mutual_information(reports.iter().map(|r| r.transcript.public()), LeakageTarget::Joint, true).unwrap();
    assert!((est - 2.0).abs() < 1e-12);
}

#[test]
fn multi_group_transcripts_are_rejected() {
    let r = run_trial(&RunConfig::new(Scenario::BellBidirectional, 2, 0, 1), 0).unwrap();
    assert!(leakage_posterior(r.transcript.public(), LeakageTarget::Joint, true).is_err());
}
