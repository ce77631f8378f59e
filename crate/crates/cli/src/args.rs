use std::path::PathBuf;

use cbqsdc_core::adversary::{AttackKind, AttackModel, ResendBasis, TargetLine};
use cbqsdc_core::protocol::{
    Alphabet, CheckPolicy, DirectionSplit, NetworkLayout, RunConfig, Scenario,
    DEFAULT_ERROR_THRESHOLD,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "cbqsdc", version, about = "Controlled bidirectional QSDC simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run seeded protocol trials and report verdicts, decoding and efficiency.
    Run(RunArgs),
    /// Print the transcribed tables with their verification status.
    Tables(TablesArgs),
    /// Sweep attack parameters and report detection rates.
    AttackSweep(SweepArgs),
    /// Exact leakage posteriors for a saved one-group Bell transcript.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    Bell,
    Ghz,
    Network,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Bell => Scenario::BellBidirectional,
            ScenarioArg::Ghz => Scenario::GhzBidirectional,
            ScenarioArg::Network => Scenario::Network,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AttackArg {
    None,
    InterceptResend,
    Cnot,
    EntangleMeasure,
}

impl From<AttackArg> for AttackKind {
    fn from(a: AttackArg) -> Self {
        match a {
            AttackArg::None => AttackKind::None,
            AttackArg::InterceptResend => AttackKind::InterceptResend,
            AttackArg::Cnot => AttackKind::ControlledNot,
            AttackArg::EntangleMeasure => AttackKind::EntangleMeasure,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Alice,
    Bob,
    Both,
}

impl From<TargetArg> for TargetLine {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Alice => TargetLine::Alice,
            TargetArg::Bob => TargetLine::Bob,
            TargetArg::Both => TargetLine::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlphabetArg {
    Auto,
    Full,
    Reduced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckPolicyArg {
    Random,
    Z,
    X,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    AliceFirst,
    BobFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ResendArg {
    Random,
    Z,
    X,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

/// Attack flags shared by `run` and `attack-sweep`.
#[derive(Clone, Debug, Args)]
pub struct AttackArgs {
    #[arg(long, value_enum, default_value = "none")]
    pub attack: AttackArg,
    #[arg(long, value_enum, default_value = "bob")]
    pub target_line: TargetArg,
    #[arg(long, value_enum, default_value = "random")]
    pub resend_basis: ResendArg,
}

impl AttackArgs {
    pub fn model(&self, beta2: Option<f64>) -> Result<AttackModel, CliError> {
        let target = self.target_line.into();
        let mut model = match self.attack {
            AttackArg::None => AttackModel::none(),
            AttackArg::InterceptResend => AttackModel::intercept_resend(target),
            AttackArg::Cnot => AttackModel::controlled_not(target),
            AttackArg::EntangleMeasure => {
                let b = beta2.ok_or_else(|| CliError::Argument("entangle-measure needs --beta2".into()))?;
                AttackModel::entangle_measure_beta2(b, target).map_err(|e| CliError::Config(e.into()))?
            }
        };
        if beta2.is_some() && self.attack != AttackArg::EntangleMeasure {
            return Err(CliError::Argument("--beta2 only applies to entangle-measure".into()));
        }
        model.resend = match self.resend_basis {
            ResendArg::Random => ResendBasis::Random,
            ResendArg::Z => ResendBasis::Z,
            ResendArg::X => ResendBasis::X,
        };
        Ok(model)
    }
}

/// Protocol flags shared by `run` and `attack-sweep`.
#[derive(Clone, Debug, Args)]
pub struct ProtocolArgs {
    #[arg(long, value_enum, default_value = "bell")]
    pub scenario: ScenarioArg,
    /// Number of message groups `N`.
    #[arg(long, default_value_t = 1)]
    pub pairs: usize,
    /// Number of check states `c`.
    #[arg(long, default_value_t = 0)]
    pub check: usize,
    #[arg(long, default_value_t = DEFAULT_ERROR_THRESHOLD)]
    pub threshold: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Network encoding layout.
    #[arg(long, value_enum, default_value = "a")]
    pub layout: LayoutArg,
    #[arg(long, value_enum, default_value = "auto")]
    pub alphabet: AlphabetArg,
    #[arg(long, value_enum, default_value = "random")]
    pub check_basis: CheckPolicyArg,
    #[arg(long, value_enum, default_value = "alice-first")]
    pub split: SplitArg,
}

impl ProtocolArgs {
    pub fn run_config(&self, attack: AttackModel, permission: bool) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::new(self.scenario.into(), self.pairs, self.check, self.seed);
        cfg.error_threshold = self.threshold;
        cfg.attack = attack;
        cfg.permission_granted = permission;
        cfg.network_layout = match self.layout {
            LayoutArg::A => NetworkLayout::A,
            LayoutArg::B => NetworkLayout::B,
        };
        cfg.alphabet = match self.alphabet {
            AlphabetArg::Auto => Alphabet::Auto,
            AlphabetArg::Full => Alphabet::Full,
            AlphabetArg::Reduced => Alphabet::Reduced,
        };
        cfg.check_policy = match self.check_basis {
            CheckPolicyArg::Random => CheckPolicy::Random,
            CheckPolicyArg::Z => CheckPolicy::ZOnly,
            CheckPolicyArg::X => CheckPolicy::XOnly,
        };
        cfg.split = match self.split {
            SplitArg::AliceFirst => DirectionSplit::AliceFirst,
            SplitArg::BobFirst => DirectionSplit::BobFirst,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    pub format: ReportFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[command(flatten)]
    pub attack: AttackArgs,
    /// |β|² for entangle-measure.
    #[arg(long)]
    pub beta2: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Withhold the controller's label announcement.
    #[arg(long)]
    pub no_permission: bool,
    /// Add exact leakage posteriors (Bell, one group only).
    #[arg(long)]
    pub leakage: bool,
    /// Add the table verification summary.
    #[arg(long)]
    pub table_checks: bool,
    /// Save the public transcript of trial 0 as JSON lines.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct TablesArgs {
    /// Add the GHZ swap table.
    #[arg(long)]
    pub ghz: bool,
    /// Add the GHZ to Bell decomposition.
    #[arg(long)]
    pub ghz_bell: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[command(flatten)]
    pub attack: AttackArgs,
    /// Comma-separated |β|² grid for entangle-measure.
    #[arg(long, value_delimiter = ',')]
    pub beta2: Vec<f64>,
    /// Trials per grid point; each checks `--check` states.
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct AnalyzeArgs {
    /// JSON-lines transcript written by `run --transcript`.
    #[arg(long)]
    pub transcript: PathBuf,
    /// Ignore the label announcement even if present.
    #[arg(long)]
    pub no_permission: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Everything a batch run needs, resolved and validated.
#[derive(Clone, Debug, PartialEq)]
pub struct CliConfig {
    pub run: RunConfig,
    pub trials: u64,
    pub output_path: Option<PathBuf>,
    pub report_format: ReportFormat,
    pub leakage: bool,
    pub table_checks: bool,
    pub transcript_path: Option<PathBuf>,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<CliConfig, CliError> {
        if self.trials == 0 {
            return Err(CliError::Argument("--trials must be at least 1".into()));
        }
        let attack = self.attack.model(self.beta2)?;
        let run = self.protocol.run_config(attack, !self.no_permission)?;
        if self.leakage && (run.scenario != Scenario::BellBidirectional || run.n_message_pairs != 1) {
            return Err(CliError::Argument("--leakage needs --scenario bell --pairs 1".into()));
        }
        Ok(CliConfig {
            run,
            trials: self.trials,
            output_path: self.output.out.clone(),
            report_format: self.output.format,
            leakage: self.leakage,
            table_checks: self.table_checks,
            transcript_path: self.transcript.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Command {
        Cli::try_parse_from(std::iter::once("cbqsdc").chain(args.iter().copied())).unwrap().command
    }

    #[test]
    fn run_flags_map_onto_config() {
        let Command::Run(a) = parse(&[
            "run", "--scenario", "network", "--pairs", "3", "--check", "5", "--threshold", "0.1",
            "--seed", "9", "--attack", "entangle-measure", "--beta2", "0.25", "--target-line", "both",
            "--no-permission", "--layout", "b", "--trials", "4",
        ]) else {
            panic!()
        };
        let c = a.resolve().unwrap();
        assert_eq!(c.run.scenario, Scenario::Network);
        assert_eq!((c.run.n_message_pairs, c.run.n_check, c.run.seed), (3, 5, 9));
        assert_eq!(c.run.error_threshold, 0.1);
        assert_eq!(c.run.network_layout, NetworkLayout::B);
        assert!(!c.run.permission_granted);
        assert_eq!(c.run.attack.target, TargetLine::Both);
        assert!((c.run.attack.beta2() - 0.25).abs() < 1e-12);
        assert_eq!(c.trials, 4);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        for args in [
            &["run", "--trials", "0"][..],
            &["run", "--pairs", "0"],
            &["run", "--threshold", "2"],
            &["run", "--attack", "entangle-measure"],
            &["run", "--attack", "entangle-measure", "--beta2", "1.5"],
            &["run", "--beta2", "0.2"],
            &["run", "--scenario", "ghz", "--leakage"],
        ] {
            let Command::Run(a) = parse(args) else { panic!() };
            assert_eq!(a.resolve().unwrap_err().exit_code(), 1, "{args:?}");
        }
    }
}
