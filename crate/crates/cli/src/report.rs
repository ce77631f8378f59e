//! Report assembly and rendering. Text and JSON are produced from the same
//! structs, so both carry identical numbers.

use std::fmt::Write as _;

use cbqsdc_core::adversary::{AttackKind, AttackModel, DetectionEstimate};
use cbqsdc_core::metrics::{
    comparison_table, exact_mutual_information, leakage_posterior, matches_printed_row,
    ComparisonRow, EfficiencyReport, LeakagePosterior, LeakageTarget,
};
use cbqsdc_core::protocol::{ClassicalMessage, RunConfig, Verdict};
use cbqsdc_core::stats::RateEstimate;
use cbqsdc_core::swapcalc::BellDecomposition;
use cbqsdc_core::swapcalc::verify::TableReport;
use serde::Serialize;

use crate::args::CliConfig;
use crate::error::CliError;
use crate::runner::Batch;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigSection {
    #[serde(flatten)]
    pub run: RunConfig,
    pub trials: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictCounts {
    #[serde(rename = "continue")]
    pub cont: u64,
    pub abort: u64,
    pub abort_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecodeSection {
    pub decoded: u64,
    pub withheld: u64,
    pub aborted: u64,
    pub correct: u64,
    /// Share of decoded runs where every peer message was recovered;
    /// `None` when no run reached decoding.
    pub success_rate: Option<f64>,
    pub peer_message_errors: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorRates {
    pub checks: u64,
    pub errors: u64,
    pub per_check: f64,
    pub z_checks: u64,
    pub z_errors: u64,
    pub z_rate: Option<f64>,
    pub x_checks: u64,
    pub x_errors: u64,
    pub x_rate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EfficiencySection {
    pub trial: u64,
    pub measured: EfficiencyReport,
    pub matches_printed_row: bool,
    pub comparison: Vec<ComparisonRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InformationEntry {
    pub target: LeakageTarget,
    pub include_permission: bool,
    pub bits: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeakageSection {
    /// Exact mutual information over all one-group Bell runs.
    pub mutual_information: Vec<InformationEntry>,
    /// Posteriors for the public transcript of trial 0, if it decoded.
    pub trial0_posteriors: Vec<LeakagePosterior>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableSummary {
    pub name: String,
    pub cells: usize,
    pub verified: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub config: ConfigSection,
    pub verdicts: VerdictCounts,
    pub decode: DecodeSection,
    pub error_rates: ErrorRates,
    pub efficiency: Option<EfficiencySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leakage: Option<LeakageSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_checks: Option<Vec<TableSummary>>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn table_summaries(tables: &[TableReport]) -> Vec<TableSummary> {
    tables
        .iter()
        .map(|t| TableSummary {
            name: t.name.clone(),
            cells: t.cells.len(),
            verified: t.verified(),
        })
        .collect()
}

pub fn leakage_section(public: Option<&[ClassicalMessage]>) -> Result<LeakageSection, CliError> {
    let targets = [LeakageTarget::AliceSecret, LeakageTarget::BobSecret, LeakageTarget::Joint];
    let mut mutual_information = Vec::new();
    let mut trial0_posteriors = Vec::new();
    for include_permission in [false, true] {
        for target in targets {
            mutual_information.push(InformationEntry {
                target,
                include_permission,
                bits: exact_mutual_information(target, include_permission),
            });
            if let Some(p) = public {
                trial0_posteriors.push(leakage_posterior(p, target, include_permission)?);
            }
        }
    }
    Ok(LeakageSection {
        mutual_information,
        trial0_posteriors,
    })
}

pub fn build_run_summary(cfg: &CliConfig, batch: &Batch) -> Result<RunSummary, CliError> {
    let n = batch.trials.len() as u64;
    let abort = batch
        .trials
        .iter()
        .filter(|t| matches!(t.verdict, Verdict::Abort { .. }))
        .count() as u64;
    let withheld = batch.trials.iter().filter(|t| t.withheld).count() as u64;
    let decoded = batch.trials.iter().filter(|t| t.decoded_correctly.is_some()).count() as u64;
    let correct = batch.trials.iter().filter(|t| t.decoded_correctly == Some(true)).count() as u64;
    let sum = |f: fn(&crate::runner::TrialSummary) -> u64| batch.trials.iter().map(f).sum::<u64>();
    let (checks, errors) = (sum(|t| t.checks.total), sum(|t| t.checks.errors));
    let (z_checks, z_errors) = (sum(|t| t.checks.z_checks), sum(|t| t.checks.z_errors));
    let (x_checks, x_errors) = (sum(|t| t.checks.x_checks), sum(|t| t.checks.x_errors));

    let efficiency = match batch.trials.iter().find(|t| t.verdict == Verdict::Continue) {
        Some(t) => {
            let c = t.counters;
            let measured = cbqsdc_core::metrics::efficiency(c.m_u, c.q_k, c.b_k)?;
            Some(EfficiencySection {
                trial: t.trial,
                measured,
                matches_printed_row: matches_printed_row(&measured),
                comparison: comparison_table(&measured),
            })
        }
        None => None,
    };

    let leakage = if cfg.leakage {
        let public = batch.first.transcript.public();
        let usable = batch.first.verdict == Verdict::Continue;
        Some(leakage_section(usable.then_some(public))?)
    } else {
        None
    };

    Ok(RunSummary {
        config: ConfigSection {
            run: cfg.run.clone(),
            trials: n,
        },
        verdicts: VerdictCounts {
            cont: n - abort,
            abort,
            abort_rate: abort as f64 / n as f64,
        },
        decode: DecodeSection {
            decoded,
            withheld,
            aborted: abort,
            correct,
            success_rate: ratio(correct, decoded),
            peer_message_errors: sum(|t| t.decode_errors as u64),
        },
        error_rates: ErrorRates {
            checks,
            errors,
            per_check: ratio(errors, checks).unwrap_or(0.0),
            z_checks,
            z_errors,
            z_rate: ratio(z_errors, z_checks),
            x_checks,
            x_errors,
            x_rate: ratio(x_errors, x_checks),
        },
        efficiency,
        leakage,
        table_checks: cfg
            .table_checks
            .then(|| table_summaries(&cbqsdc_core::swapcalc::verify::verify_all())),
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| x.to_string())
}

fn scenario_name(cfg: &RunConfig) -> String {
    serde_json::to_value(cfg.scenario)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn attack_name(kind: AttackKind) -> String {
    serde_json::to_value(kind)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

pub fn render_run_text(r: &RunSummary) -> String {
    let c = &r.config.run;
    let mut s = String::new();
    let _ = writeln!(s, "config");
    let _ = writeln!(
        s,
        "  scenario {}  pairs {}  check {}  threshold {}  seed {}  trials {}",
        scenario_name(c),
        c.n_message_pairs,
        c.n_check,
        c.error_threshold,
        c.seed,
        r.config.trials
    );
    let _ = writeln!(
        s,
        "  attack {}  beta2 {}  permission {}",
        attack_name(c.attack.kind),
        c.attack.beta2(),
        c.permission_granted
    );
    let _ = writeln!(s, "verdicts");
    let v = &r.verdicts;
    let _ = writeln!(s, "  continue {}  abort {}  abort_rate {}", v.cont, v.abort, v.abort_rate);
    let d = &r.decode;
    let _ = writeln!(s, "decode");
    let _ = writeln!(
        s,
        "  decoded {}  withheld {}  aborted {}  correct {}  success_rate {}  peer_message_errors {}",
        d.decoded,
        d.withheld,
        d.aborted,
        d.correct,
        opt(d.success_rate),
        d.peer_message_errors
    );
    let e = &r.error_rates;
    let _ = writeln!(s, "error_rates");
    let _ = writeln!(s, "  checks {}  errors {}  per_check {}", e.checks, e.errors, e.per_check);
    let _ = writeln!(s, "  z_checks {}  z_errors {}  z_rate {}", e.z_checks, e.z_errors, opt(e.z_rate));
    let _ = writeln!(s, "  x_checks {}  x_errors {}  x_rate {}", e.x_checks, e.x_errors, opt(e.x_rate));
    let _ = writeln!(s, "efficiency");
    match &r.efficiency {
        Some(eff) => {
            let m = &eff.measured;
            let _ = writeln!(
                s,
                "  trial {}  m_u {}  q_k {}  b_k {}  eta1 {}  eta2 {}  matches_printed_row {}",
                eff.trial, m.m_u, m.q_k, m.b_k, m.eta1, m.eta2, eff.matches_printed_row
            );
            let _ = writeln!(
                s,
                "  {:<16} {:<7} {:>4} {:>4} {:>4} {:>7} {:>7}  {:<6} {:<8} direct",
                "protocol", "kind", "m_u", "q_k", "b_k", "eta1", "eta2", "checks", "channels"
            );
            for row in &eff.comparison {
                let _ = writeln!(
                    s,
                    "  {:<16} {:<7} {:>4} {:>4} {:>4} {:>7} {:>7}  {:<6} {:<8} {}",
                    row.protocol,
                    row.kind,
                    row.m_u,
                    row.q_k,
                    row.b_k,
                    row.eta1,
                    row.eta2,
                    row.security_checks,
                    row.channels,
                    row.direct_sending
                );
            }
        }
        None => {
            let _ = writeln!(s, "  n/a (every trial aborted)");
        }
    }
    if let Some(l) = &r.leakage {
        render_leakage(&mut s, l);
    }
    if let Some(t) = &r.table_checks {
        render_table_summaries(&mut s, t);
    }
    s
}

fn render_leakage(s: &mut String, l: &LeakageSection) {
    let _ = writeln!(s, "leakage");
    for m in &l.mutual_information {
        let _ = writeln!(
            s,
            "  mutual_information target {:?} permission {} bits {}",
            m.target, m.include_permission, m.bits
        );
    }
    for p in &l.trial0_posteriors {
        let table: Vec<String> = p.table.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(
            s,
            "  posterior target {:?} permission {} support {} table [{}]",
            p.target,
            p.include_permission,
            p.support(),
            table.join(", ")
        );
    }
}

fn render_table_summaries(s: &mut String, t: &[TableSummary]) {
    let _ = writeln!(s, "table_checks");
    for t in t {
        let _ = writeln!(s, "  {}: {}/{} verified", t.name, t.verified, t.cells);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TablesReport {
    pub table_checks: Vec<TableReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ghz_bell: Option<BellDecomposition>,
}

impl TablesReport {
    pub fn all_verified(&self) -> bool {
        self.table_checks.iter().all(TableReport::all_verified)
    }
}

pub fn build_tables_report(ghz: bool, ghz_bell: bool) -> TablesReport {
    use cbqsdc_core::swapcalc::verify::*;
    let [alice, bob] = verify_encoding_tables();
    let mut tables = vec![verify_swap_group_table(), verify_outcome_groups(), alice, bob];
    if ghz {
        tables.push(verify_ghz_swap_table());
    }
    let mut decomposition = None;
    if ghz_bell {
        tables.push(verify_ghz_bell_expansion());
        let zero = cbqsdc_core::qcore::GhzIndex::ZERO;
        decomposition = cbqsdc_core::swapcalc::ghz_bell_decomposition_check(zero, zero).ok();
    }
    TablesReport {
        table_checks: tables,
        ghz_bell: decomposition,
    }
}

pub fn render_tables_text(r: &TablesReport) -> String {
    let mut s = String::new();
    for t in &r.table_checks {
        let _ = writeln!(s, "{} ({}/{} verified)", t.name, t.verified(), t.cells.len());
        for c in &t.cells {
            let mark = if c.verified { "verified" } else { "FAILED" };
            let _ = writeln!(s, "  {:<24} {:<40} {}", c.cell, c.printed, mark);
        }
    }
    if let Some(d) = &r.ghz_bell {
        let _ = writeln!(s, "ghz to bell outcomes for {} x {}", d.left, d.right);
        for (triple, p) in &d.terms {
            let _ = writeln!(s, "  ({}, {}, {})  {}", triple[0], triple[1], triple[2], p);
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub attack: AttackKind,
    pub beta2: f64,
    pub trials: u64,
    pub per_check: RateEstimate,
    pub z_basis: RateEstimate,
    pub x_basis: RateEstimate,
    pub abort: RateEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub config: RunConfig,
    pub rows: Vec<SweepRow>,
}

pub fn build_sweep_report(cfg: &RunConfig, attacks: &[AttackModel], est: &[DetectionEstimate]) -> SweepReport {
    SweepReport {
        config: cfg.clone(),
        rows: attacks
            .iter()
            .zip(est)
            .map(|(a, e)| SweepRow {
                attack: a.kind,
                beta2: a.beta2(),
                trials: e.trials,
                per_check: e.per_check,
                z_basis: e.z_basis,
                x_basis: e.x_basis,
                abort: e.abort,
            })
            .collect(),
    }
}

/// Tab-separated, one row per grid point, ready for plotting tools.
pub fn render_sweep_text(r: &SweepReport) -> String {
    let mut s = String::from(
        "attack\tbeta2\ttrials\tchecks\tper_check\tz_checks\tz_rate\tz_low\tz_high\tx_checks\tx_rate\tx_low\tx_high\tabort_rate\n",
    );
    for row in &r.rows {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            attack_name(row.attack),
            row.beta2,
            row.trials,
            row.per_check.trials,
            row.per_check.rate,
            row.z_basis.trials,
            row.z_basis.rate,
            row.z_basis.low,
            row.z_basis.high,
            row.x_basis.trials,
            row.x_basis.rate,
            row.x_basis.low,
            row.x_basis.high,
            row.abort.rate
        );
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyzeReport {
    pub messages: usize,
    pub leakage: LeakageSection,
}

pub fn render_analyze_text(r: &AnalyzeReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "messages {}", r.messages);
    render_leakage(&mut s, &r.leakage);
    s
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
