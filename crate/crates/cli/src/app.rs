//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use secsel_core::asymptotics::{esr_asymptote, esr_high_snr_ots, sop_asymptote};
use secsel_core::monte_carlo::DEFAULT_BATCH_SIZE;
use secsel_core::{McConfig, Metric, Scenario, Scheme, SchemeSpec, SecrecyReport};

use crate::config::ConfigFile;
use crate::output::{format_number, write_csv, write_json};
use crate::sweep::{run_family, Family, FamilyResult, Output};
use crate::{presets, verify, CliError};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_VERIFY_TRIALS: u64 = 1_000_000;

/// N = 5, s = 0.9, 20 dB destination, eavesdroppers at 6/9/13 dB, R_th = 1.
pub fn default_scenario() -> Scenario {
    Scenario::from_db(5, 0.9, 20.0, presets::THREE_EAVESDROPPERS_DB, 1.0).expect("valid default scenario")
}

#[derive(Debug, Parser)]
#[command(name = "secsel", version, about = "Secrecy of transmitter selection with unreliable backhaul")]
struct Cli {
    /// Repeat for more log output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep a scenario file or a figure preset and emit curve data.
    Sweep(SweepArgs),
    /// Check closed forms, quadrature and Monte Carlo against each other.
    Verify(VerifyArgs),
    /// Exact metrics and high-SNR quantities for one scenario.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    scenario: Option<PathBuf>,
    #[arg(long, value_parser = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7"])]
    preset: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Monte Carlo trials per sweep point.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated subset of sop,nzsr,esr.
    #[arg(long, value_delimiter = ',', value_parser = parse_metric)]
    metrics: Option<Vec<Metric>>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Scenario file; the built-in default scenario when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e: secsel_core::Error| e.to_string())
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Sweep(args) => sweep(args),
        Command::Verify(args) => verify_cmd(args),
        Command::Report(args) => report(args),
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| CliError::Io {
            context: format!("cannot write {}", path.display()),
            source,
        }),
        None => std::io::stdout().write_all(bytes).map_err(|source| CliError::Io {
            context: "cannot write to stdout".into(),
            source,
        }),
    }
}

/// Families and Monte Carlo settings resolved from a preset or a scenario file.
fn sweep_plan(args: &SweepArgs) -> Result<(Vec<Family>, Option<McConfig>), CliError> {
    let seed = args.seed.unwrap_or(DEFAULT_SEED);
    let (mut families, mc) = if let Some(name) = &args.preset {
        let preset = presets::find(name).ok_or_else(|| CliError::Usage(format!("unknown preset `{name}`")))?;
        let mc = args
            .trials
            .map(|t| McConfig::with_batch_size(t, seed, DEFAULT_BATCH_SIZE))
            .transpose()?;
        (preset.families()?, mc)
    } else {
        let path = args.scenario.as_deref().expect("clap requires --scenario or --preset");
        let file = ConfigFile::load(path)?;
        let section = file.sweep.as_ref().ok_or_else(|| {
            CliError::Usage(format!("{} has no [sweep] section", path.display()))
        })?;
        let range = section.range()?;
        let wants_mc = range.wants(Output::Mc) || args.trials.is_some();
        let mc = match (&file.mc, wants_mc) {
            (_, false) => None,
            (Some(m), true) => Some(m.config(args.seed, args.trials)?),
            (None, true) => match args.trials {
                Some(t) => Some(McConfig::with_batch_size(t, seed, DEFAULT_BATCH_SIZE)?),
                None => return Err(CliError::Usage("the mc output needs an [mc] section or --trials".into())),
            },
        };
        let family = Family {
            label: path.display().to_string(),
            base: file.scenario.build()?,
            range,
            crossover: false,
        };
        (vec![family], mc)
    };
    if let Some(metrics) = &args.metrics {
        for f in &mut families {
            f.range = f.range.clone().with_metrics(metrics)?;
        }
    }
    Ok((families, mc))
}

fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let (families, mc) = sweep_plan(&args)?;
    let results: Vec<FamilyResult> = families.iter().map(|f| run_family(f, mc.as_ref())).collect();
    let mut buf = Vec::new();
    let written = match args.format {
        Format::Csv => write_csv(&mut buf, &results),
        Format::Json => write_json(&mut buf, &results),
    };
    written.map_err(|source| CliError::Io {
        context: "cannot format output".into(),
        source,
    })?;
    emit(args.out.as_deref(), &buf)?;
    let failures: usize = results.iter().map(FamilyResult::failures).sum();
    if failures > 0 {
        return Err(CliError::PartialSweep(failures));
    }
    Ok(())
}

fn load_scenario(path: Option<&Path>) -> Result<(Scenario, Option<ConfigFile>), CliError> {
    match path {
        Some(p) => {
            let file = ConfigFile::load(p)?;
            Ok((file.scenario.build()?, Some(file)))
        }
        None => Ok((default_scenario(), None)),
    }
}

fn verify_cmd(args: VerifyArgs) -> Result<(), CliError> {
    let (scenario, file) = load_scenario(args.scenario.as_deref())?;
    let config = match file.as_ref().and_then(|f| f.mc.as_ref()) {
        Some(m) => m.config(args.seed, args.trials)?,
        None => McConfig::with_batch_size(
            args.trials.unwrap_or(DEFAULT_VERIFY_TRIALS),
            args.seed.unwrap_or(DEFAULT_SEED),
            DEFAULT_BATCH_SIZE,
        )?,
    };
    let report = verify::verify(&scenario, &config)?;
    print!("{}", report.table());
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{} of {} checks failed",
            report.failures(),
            report.checks.len()
        )))
    }
}

#[derive(Debug, Serialize)]
struct ReportRow {
    scheme: &'static str,
    knowledge: &'static str,
    nzsr: f64,
    sop: f64,
    esr: f64,
    esr_method: &'static str,
    sop_floor: f64,
    esr_slope: Option<f64>,
    esr_offset_nats: Option<f64>,
    esr_offset_db: Option<f64>,
    esr_high_snr: f64,
}

fn report_row(scenario: &Scenario, spec: SchemeSpec) -> Result<ReportRow, CliError> {
    let r = SecrecyReport::new(scenario, spec)?;
    let line = if spec.scheme == Scheme::Ots && scenario.n_eavesdroppers() > 1 {
        None
    } else {
        Some(esr_asymptote(scenario, spec)?)
    };
    let high = match spec.scheme {
        Scheme::Ots => esr_high_snr_ots(scenario, spec)?,
        _ => line.expect("line exists").value_at(scenario.dest_rate()),
    };
    Ok(ReportRow {
        scheme: spec.scheme.label(),
        knowledge: spec.knowledge.label(),
        nzsr: r.nzsr,
        sop: r.sop,
        esr: r.esr,
        esr_method: r.esr_method.label(),
        sop_floor: sop_asymptote(scenario, spec).value,
        esr_slope: line.map(|l| l.slope),
        esr_offset_nats: line.map(|l| l.offset),
        esr_offset_db: line.map(|l| l.offset_db()),
        esr_high_snr: high,
    })
}

fn report(args: ReportArgs) -> Result<(), CliError> {
    let (scenario, _) = load_scenario(args.scenario.as_deref())?;
    let rows = SchemeSpec::ALL
        .into_iter()
        .map(|spec| report_row(&scenario, spec))
        .collect::<Result<Vec<_>, _>>()?;
    let bytes = match args.format {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(&rows).expect("rows serialize");
            v.push(b'\n');
            v
        }
        Format::Csv => {
            let cell = |v: Option<f64>| v.map(format_number).unwrap_or_default();
            let mut s = String::from(
                "scheme,knowledge,nzsr,sop,esr,esr_method,sop_floor,esr_slope,esr_offset_nats,esr_offset_db,esr_high_snr\n",
            );
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{}\n",
                    r.scheme,
                    r.knowledge,
                    format_number(r.nzsr),
                    format_number(r.sop),
                    format_number(r.esr),
                    r.esr_method,
                    format_number(r.sop_floor),
                    cell(r.esr_slope),
                    cell(r.esr_offset_nats),
                    cell(r.esr_offset_db),
                    format_number(r.esr_high_snr),
                ));
            }
            s.into_bytes()
        }
    };
    emit(args.out.as_deref(), &bytes)
}
