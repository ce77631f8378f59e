use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::process::ExitCode;

use cbqsdc_cli::args::{AnalyzeArgs, AttackArg, RunArgs, SweepArgs, TablesArgs};
use cbqsdc_cli::report::{self, AnalyzeReport};
use cbqsdc_cli::runner::{run_batch, sweep};
use cbqsdc_cli::transcript_io::{read_jsonl, write_jsonl};
use cbqsdc_cli::{Cli, CliError, Command, ReportFormat};
use cbqsdc_core::metrics::LeakageView;
use clap::Parser;

fn emit(text: String, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let cfg = args.resolve()?;
    let batch = run_batch(&cfg.run, cfg.trials)?;
    if let Some(path) = &cfg.transcript_path {
        let io = |source| CliError::Io {
            path: path.clone(),
            source,
        };
        let file = File::create(path).map_err(io)?;
        write_jsonl(batch.first.transcript.public(), file)?;
    }
    let summary = report::build_run_summary(&cfg, &batch)?;
    let text = match cfg.report_format {
        ReportFormat::Json => report::to_json(&summary),
        ReportFormat::Text => report::render_run_text(&summary),
    };
    emit(text, cfg.output_path.as_deref())?;
    if let Some(t) = &summary.table_checks {
        if t.iter().any(|t| t.verified != t.cells) {
            return Err(CliError::Verification("a transcribed table cell disagrees with the simulator".into()));
        }
    }
    Ok(())
}

fn cmd_tables(args: &TablesArgs) -> Result<(), CliError> {
    let r = report::build_tables_report(args.ghz, args.ghz_bell);
    let text = match args.output.format {
        ReportFormat::Json => report::to_json(&r),
        ReportFormat::Text => report::render_tables_text(&r),
    };
    emit(text, args.output.out.as_deref())?;
    if !r.all_verified() || (args.ghz_bell && r.ghz_bell.is_none()) {
        return Err(CliError::Verification("a transcribed table cell disagrees with the simulator".into()));
    }
    Ok(())
}

fn cmd_attack_sweep(args: &SweepArgs) -> Result<(), CliError> {
    if args.trials == 0 {
        return Err(CliError::Argument("--trials must be at least 1".into()));
    }
    let attacks = if args.attack.attack == AttackArg::EntangleMeasure {
        if args.beta2.is_empty() {
            return Err(CliError::Argument("entangle-measure needs a --beta2 grid".into()));
        }
        args.beta2
            .iter()
            .map(|b| args.attack.model(Some(*b)))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        if !args.beta2.is_empty() {
            return Err(CliError::Argument("--beta2 only applies to entangle-measure".into()));
        }
        vec![args.attack.model(None)?]
    };
    let cfg = args.protocol.run_config(attacks[0], true)?;
    let est = sweep(&cfg, &attacks, args.trials)?;
    let r = report::build_sweep_report(&cfg, &attacks, &est);
    let text = match args.output.format {
        ReportFormat::Json => report::to_json(&r),
        ReportFormat::Text => report::render_sweep_text(&r),
    };
    emit(text, args.output.out.as_deref())
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let file = File::open(&args.transcript).map_err(|source| CliError::Io {
        path: args.transcript.clone(),
        source,
    })?;
    let messages = read_jsonl(BufReader::new(file))?;
    LeakageView::from_public(&messages, !args.no_permission)?;
    let leakage = report::leakage_section(Some(&messages))?;
    let mut leakage = leakage;
    if args.no_permission {
        leakage.trial0_posteriors.retain(|p| !p.include_permission);
    }
    let r = AnalyzeReport {
        messages: messages.len(),
        leakage,
    };
    let text = match args.output.format {
        ReportFormat::Json => report::to_json(&r),
        ReportFormat::Text => report::render_analyze_text(&r),
    };
    emit(text, args.output.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Tables(a) => cmd_tables(a),
        Command::AttackSweep(a) => cmd_attack_sweep(a),
        Command::Analyze(a) => cmd_analyze(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
