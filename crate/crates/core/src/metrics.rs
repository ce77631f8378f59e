//! Efficiency accounting and exact leakage analysis of the public
//! transcript.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::protocol::{ClassicalMessage, Payload, RunReport};
use crate::qcore::{BellIndex, Outcome, PauliEncoding, StateLabel};
use crate::swapcalc::{group_of_outcomes, EncodedPairState};
use crate::PartyRole;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum MetricsError {
    #[error("efficiency needs at least one qubit")]
    ZeroQubits,
    #[error("leakage analysis needs a one-group Bell transcript: {0}")]
    UnsupportedTranscript(&'static str),
}

/// `η₁ = m_u/(q_k + b_k)` and `η₂ = m_u/q_k`, both in percent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyReport {
    pub m_u: usize,
    pub q_k: usize,
    pub b_k: usize,
    pub eta1: f64,
    pub eta2: f64,
}

pub fn efficiency(m_u: usize, q_k: usize, b_k: usize) -> Result<EfficiencyReport, MetricsError> {
    if q_k == 0 {
        return Err(MetricsError::ZeroQubits);
    }
    Ok(EfficiencyReport {
        m_u,
        q_k,
        b_k,
        eta1: 100.0 * m_u as f64 / (q_k + b_k) as f64,
        eta2: 100.0 * m_u as f64 / q_k as f64,
    })
}

impl EfficiencyReport {
    pub fn from_run(report: &RunReport) -> Result<Self, MetricsError> {
        let c = report.counters;
        efficiency(c.m_u, c.q_k, c.b_k)
    }
}

/// Rounds a percentage to the two decimals used in printed tables.
pub fn round2(x: f64) -> f64 {
    libm::round(x * 100.0) / 100.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub protocol: String,
    pub kind: String,
    pub m_u: usize,
    pub q_k: usize,
    pub b_k: usize,
    pub eta1: f64,
    pub eta2: f64,
    pub security_checks: String,
    pub channels: String,
    pub direct_sending: String,
    pub measured: bool,
}

struct Printed {
    protocol: &'static str,
    kind: &'static str,
    m_u: usize,
    q_k: usize,
    b_k: usize,
    eta1: f64,
    eta2: f64,
    checks: &'static str,
    channels: &'static str,
    direct: &'static str,
}

const COMPETITORS: [Printed; 3] = [
    Printed { protocol: "[32]", kind: "BCQSDC", m_u: 4, q_k: 8, b_k: 4, eta1: 33.33, eta2: 50.0, checks: "3", channels: "2", direct: "Yes" },
    Printed { protocol: "[34]", kind: "CQSDC", m_u: 2, q_k: 6, b_k: 3, eta1: 22.22, eta2: 33.33, checks: "1", channels: "One way", direct: "No" },
    Printed { protocol: "[41]", kind: "BQSDC", m_u: 4, q_k: 8, b_k: 4, eta1: 33.33, eta2: 50.0, checks: "2", channels: "2", direct: "Yes" },
];

/// The printed row for this protocol, used to check a measured run.
pub const PRINTED_OWN_ROW: (usize, usize, usize, f64, f64) = (4, 4, 8, 33.33, 100.0);

/// The three competitor rows as printed, followed by the row measured
/// from `measured`.
pub fn comparison_table(measured: &EfficiencyReport) -> Vec<ComparisonRow> {
    let mut rows: Vec<ComparisonRow> = COMPETITORS
        .iter()
        .map(|p| ComparisonRow {
            protocol: p.protocol.to_string(),
            kind: p.kind.to_string(),
            m_u: p.m_u,
            q_k: p.q_k,
            b_k: p.b_k,
            eta1: p.eta1,
            eta2: p.eta2,
            security_checks: p.checks.to_string(),
            channels: p.channels.to_string(),
            direct_sending: p.direct.to_string(),
            measured: false,
        })
        .collect();
    rows.push(ComparisonRow {
        protocol: "this simulator".to_string(),
        kind: "BCQSDC".to_string(),
        m_u: measured.m_u,
        q_k: measured.q_k,
        b_k: measured.b_k,
        eta1: round2(measured.eta1),
        eta2: round2(measured.eta2),
        security_checks: "1".to_string(),
        channels: "1".to_string(),
        direct_sending: "No".to_string(),
        measured: true,
    });
    rows
}

/// Whether a measured report reproduces the printed row exactly (η to two
/// decimals).
pub fn matches_printed_row(e: &EfficiencyReport) -> bool {
    let (m, q, b, e1, e2) = PRINTED_OWN_ROW;
    e.m_u == m && e.q_k == q && e.b_k == b && round2(e.eta1) == e1 && round2(e.eta2) == e2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeakageTarget {
    AliceSecret,
    BobSecret,
    Joint,
}

impl LeakageTarget {
    pub fn values(self) -> usize {
        match self {
            LeakageTarget::Joint => 16,
            _ => 4,
        }
    }

    fn value(self, pq: PauliEncoding, rs: PauliEncoding) -> usize {
        match self {
            LeakageTarget::AliceSecret => pq.index(),
            LeakageTarget::BobSecret => rs.index(),
            LeakageTarget::Joint => pq.index() * 4 + rs.index(),
        }
    }
}

/// What an outsider sees of a one-group Bell run: both announced outcomes
/// and, if it was announced and is included, the controller's labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LeakageView {
    pub out_a: BellIndex,
    pub out_b: BellIndex,
    pub labels: Option<[BellIndex; 2]>,
}

impl LeakageView {
    pub fn from_public(
        public: &[ClassicalMessage],
        include_permission: bool,
    ) -> Result<Self, MetricsError> {
        let mut out_a = None;
        let mut out_b = None;
        let mut labels = None;
        for m in public {
            match &m.payload {
                Payload::MeasurementResult { group, outcome } => {
                    if *group != 0 {
                        return Err(MetricsError::UnsupportedTranscript("more than one group"));
                    }
                    let Outcome::Bell(b) = outcome else {
                        return Err(MetricsError::UnsupportedTranscript("non-Bell outcome"));
                    };
                    match m.sender {
                        PartyRole::Alice => out_a = Some(*b),
                        PartyRole::Bob => out_b = Some(*b),
                        _ => return Err(MetricsError::UnsupportedTranscript("unexpected sender")),
                    }
                }
                Payload::PermissionAnnounce { labels: l, .. } if include_permission => {
                    match l.as_slice() {
                        [StateLabel::Bell(i), StateLabel::Bell(j)] => labels = Some([*i, *j]),
                        _ => return Err(MetricsError::UnsupportedTranscript("non-Bell labels")),
                    }
                }
                _ => {}
            }
        }
        match (out_a, out_b) {
            (Some(out_a), Some(out_b)) => Ok(LeakageView { out_a, out_b, labels }),
            _ => Err(MetricsError::UnsupportedTranscript("missing measurement results")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeakagePosterior {
    pub target: LeakageTarget,
    pub include_permission: bool,
    pub view: LeakageView,
    /// Probability per target value (`pq`, `rs`, or `pq*4 + rs`).
    pub table: Vec<f64>,
}

impl LeakagePosterior {
    pub fn support(&self) -> usize {
        self.table.iter().filter(|p| **p > 1e-12).count()
    }

    pub fn max_deviation_from_uniform(&self) -> f64 {
        let u = 1.0 / self.table.len() as f64;
        self.table.iter().map(|p| (p - u).abs()).fold(0.0, f64::max)
    }
}

/// Probability of `view` for the given initial labels and secrets, under
/// the Alice-on-first-pair convention; all four outcome pairs of the
/// resulting group are equally likely.
fn likelihood(view: &LeakageView, li: BellIndex, lj: BellIndex, pq: PauliEncoding, rs: PauliEncoding) -> f64 {
    if let Some([a, b]) = view.labels {
        if a != li || b != lj {
            return 0.0;
        }
    }
    let g = EncodedPairState::encode(li, lj, pq, rs).group();
    if g == group_of_outcomes(view.out_a, view.out_b) {
        0.25
    } else {
        0.0
    }
}

/// Exact posterior of the target given the view, by enumerating all
/// initial label pairs and secret pairs with uniform priors.
pub fn posterior_for_view(view: LeakageView, target: LeakageTarget) -> LeakagePosterior {
    let mut table = alloc::vec![0.0; target.values()];
    for li in BellIndex::ALL {
        for lj in BellIndex::ALL {
            for pq in PauliEncoding::ALL {
                for rs in PauliEncoding::ALL {
                    table[target.value(pq, rs)] += likelihood(&view, li, lj, pq, rs);
                }
            }
        }
    }
    let total: f64 = table.iter().sum();
    for p in table.iter_mut() {
        *p /= total;
    }
    LeakagePosterior {
        target,
        include_permission: view.labels.is_some(),
        view,
        table,
    }
}

/// Posterior of the target given a completed run's public transcript.
pub fn leakage_posterior(
    public: &[ClassicalMessage],
    target: LeakageTarget,
    include_permission: bool,
) -> Result<LeakagePosterior, MetricsError> {
    let view = LeakageView::from_public(public, include_permission)?;
    let mut p = posterior_for_view(view, target);
    p.include_permission = include_permission;
    Ok(p)
}

fn entropy(table: &[f64]) -> f64 {
    table
        .iter()
        .filter(|p| **p > 0.0)
        .map(|p| -p * libm::log2(*p))
        .sum()
}

/// `I(target ; view)` in bits over the whole space of one-group Bell runs
/// with uniform labels, secrets and outcomes.
pub fn exact_mutual_information(target: LeakageTarget, include_permission: bool) -> f64 {
    let prior = libm::log2(target.values() as f64);
    let mut expected_h = 0.0;
    let label_choices: Vec<Option<[BellIndex; 2]>> = if include_permission {
        BellIndex::ALL
            .iter()
            .flat_map(|a| BellIndex::ALL.iter().map(move |b| Some([*a, *b])))
            .collect()
    } else {
        alloc::vec![None]
    };
    for labels in label_choices {
        for out_a in BellIndex::ALL {
            for out_b in BellIndex::ALL {
                let view = LeakageView { out_a, out_b, labels };
                // P(view) = Σ prior × likelihood.
                let mut pv = 0.0;
                for li in BellIndex::ALL {
                    for lj in BellIndex::ALL {
                        for pq in PauliEncoding::ALL {
                            for rs in PauliEncoding::ALL {
                                pv += likelihood(&view, li, lj, pq, rs) / 256.0;
                            }
                        }
                    }
                }
                if pv > 0.0 {
                    expected_h += pv * entropy(&posterior_for_view(view, target).table);
                }
            }
        }
    }
    prior - expected_h
}

/// Mean information gain `H(prior) − H(posterior)` over an ensemble of
/// public transcripts. With uniformly drawn labels and secrets this is an
/// unbiased estimate of the mutual information.
pub fn mutual_information<'a>(
    transcripts: impl IntoIterator<Item = &'a [ClassicalMessage]>,
    target: LeakageTarget,
    include_permission: bool,
) -> Result<f64, MetricsError> {
    let prior = libm::log2(target.values() as f64);
    let mut sum = 0.0;
    let mut n = 0usize;
    for t in transcripts {
        let p = leakage_posterior(t, target, include_permission)?;
        sum += prior - entropy(&p.table);
        n += 1;
    }
    if n == 0 {
        return Err(MetricsError::UnsupportedTranscript("empty ensemble"));
    }
    Ok(sum / n as f64)
}
