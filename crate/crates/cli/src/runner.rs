//! Parallel trial execution. Trial `t` always uses stream `t` of the
//! master seed, so results do not depend on the worker count.

use cbqsdc_core::adversary::{estimate_detection_rate, AttackModel, DetectionEstimate};
use cbqsdc_core::protocol::{
    run_trial, CheckStats, Counters, DecodeOutcome, ProtocolError, RunConfig, RunReport, Verdict,
};
use rayon::prelude::*;
use serde::Serialize;

/// The part of a run that batch reports aggregate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialSummary {
    pub trial: u64,
    pub verdict: Verdict,
    pub checks: CheckStats,
    pub withheld: bool,
    pub decoded_correctly: Option<bool>,
    pub decode_errors: usize,
    pub counters: Counters,
}

impl TrialSummary {
    pub fn from_report(r: &RunReport) -> Self {
        TrialSummary {
            trial: r.trial,
            verdict: r.verdict,
            checks: r.checks,
            withheld: r.decode == DecodeOutcome::Withheld,
            decoded_correctly: r.decoded_correctly(),
            decode_errors: r.decode_errors,
            counters: r.counters,
        }
    }
}

pub struct Batch {
    /// Full report of trial 0, kept for transcripts and leakage.
    pub first: RunReport,
    pub trials: Vec<TrialSummary>,
}

pub fn run_batch(cfg: &RunConfig, trials: u64) -> Result<Batch, ProtocolError> {
    if trials == 0 {
        return Err(ProtocolError::NoTrials);
    }
    let first = run_trial(cfg, 0)?;
    let mut rest: Vec<TrialSummary> = (1..trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t).map(|r| TrialSummary::from_report(&r)))
        .collect::<Result<_, _>>()?;
    let mut all = Vec::with_capacity(trials as usize);
    all.push(TrialSummary::from_report(&first));
    all.append(&mut rest);
    Ok(Batch { first, trials: all })
}

/// Detection estimates for each attack model, in input order.
pub fn sweep(
    cfg: &RunConfig,
    attacks: &[AttackModel],
    trials: u64,
) -> Result<Vec<DetectionEstimate>, ProtocolError> {
    attacks
        .par_iter()
        .map(|a| estimate_detection_rate(cfg, a, trials))
        .collect()
}
