use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cvqss::config::{
    Format, GainSpec, ObjectiveKind, PairKind, QuadKind, ScenarioConfig, SchemeKind, SourceKind,
    Sweep,
};
use cvqss::error::{CliError, Result};
use cvqss::report::{emit, render, to_json};
use cvqss::table::{table, TableConfig};
use cvqss::tv_curve::{parse_noise_list, tv_curve, TvCurveConfig};
use cvqss::verify::{parse_fixture, verify, Grid, DEFAULT_FIXTURE, DEFAULT_TOLERANCE};

#[derive(Parser)]
#[command(
    name = "cvqss",
    version,
    about = "Continuous-variable (2,3) threshold secret sharing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario, or a sweep over r and/or gain.
    Run(RunArgs),
    /// Feedforward (T_q, V_q) against gain, plus the single-player point.
    TvCurve(TvArgs),
    /// Best (T_q, V_q) for every adversary and access structure.
    Table(TableArgs),
    /// Compare simulation with the closed forms and a golden fixture.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON scenario file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    scheme: Option<SchemeKind>,
    /// Squeezing parameter: `x`, `x1,x2,...` or `start:stop:step`.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<Sweep>,
    /// Modulation noise in dB above shot noise.
    #[arg(long, allow_hyphen_values = true)]
    vm_db: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// `optimal`, a number, a list or `start:stop:step`.
    #[arg(long)]
    gain: Option<GainSpec>,
    /// Secret sideband means as `plus,minus`.
    #[arg(long, value_parser = parse_means, allow_hyphen_values = true)]
    means: Option<(f64, f64)>,
    #[arg(long, value_enum)]
    pair: Option<PairKind>,
    #[arg(long, value_enum)]
    source: Option<SourceKind>,
    #[arg(long, value_enum)]
    quadrature: Option<QuadKind>,
    /// Criterion for `--gain optimal` in the feedforward scheme.
    #[arg(long, value_enum)]
    objective: Option<ObjectiveKind>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TvArgs {
    /// Squeezing in percent of shot noise removed, comma separated.
    #[arg(long, default_value = "0,40,99")]
    squeezing_pct: String,
    #[arg(long, default_value = "0:8:0.5")]
    gains: Sweep,
    /// Noise levels in dB, `none` for no modulation.
    #[arg(long, default_value = "none,20")]
    vm_db: String,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, value_enum, default_value = "23")]
    pair: PairKind,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, default_value_t = TableConfig::default().large_r)]
    large_r: f64,
    #[arg(long, default_value_t = TableConfig::default().large_vm_db)]
    large_vm_db: f64,
    /// V_q above this is printed as infinite.
    #[arg(long, default_value_t = TableConfig::default().cap)]
    cap: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Golden tuple file replacing the built-in one.
    #[arg(long)]
    fixture: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Where to write the JSON summary; standard output by default.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_means(s: &str) -> std::result::Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => match (a.trim().parse(), b.trim().parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => Err(format!("'{s}' is not two numbers")),
        },
        _ => Err(format!("expected plus,minus but got '{s}'")),
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => ScenarioConfig::from_json_file(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(v) = args.scheme {
        cfg.scheme = v;
    }
    if let Some(v) = args.r {
        cfg.r = v;
    }
    if args.vm_db.is_some() {
        cfg.v_m_db = args.vm_db;
    }
    if let Some(v) = args.eta {
        cfg.eta = v;
    }
    if let Some(v) = args.gain {
        cfg.gain = v;
    }
    if let Some(v) = args.means {
        cfg.secret_means = v;
    }
    if let Some(v) = args.pair {
        cfg.pair = v;
    }
    if let Some(v) = args.source {
        cfg.source = v;
    }
    if let Some(v) = args.quadrature {
        cfg.quadrature = v;
    }
    if let Some(v) = args.objective {
        cfg.objective = v;
    }
    if let Some(v) = args.format {
        cfg.format = v;
    }
    if args.output.is_some() {
        cfg.output = args.output;
    }
    let rows = cvqss::scenario::run(&cfg)?;
    emit(&render(&rows, cfg.format)?, cfg.output.as_deref())
}

fn cmd_tv_curve(args: TvArgs) -> Result<()> {
    let squeezing = args
        .squeezing_pct
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map(|p| p / 100.0)
                .map_err(|_| CliError::usage(format!("bad squeezing percentage '{t}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    let cfg = TvCurveConfig {
        squeezing,
        gains: args.gains,
        noise_db: parse_noise_list(&args.vm_db)?,
        eta: args.eta,
        pair: args.pair,
        ..TvCurveConfig::default()
    };
    emit(
        &render(&tv_curve(&cfg)?, args.format)?,
        args.output.as_deref(),
    )
}

fn cmd_table(args: TableArgs) -> Result<()> {
    if !(args.large_r >= 0.0 && args.large_vm_db >= 0.0 && args.cap > 0.0) {
        return Err(CliError::usage(
            "large-r and large-vm-db must be >= 0, cap > 0",
        ));
    }
    let cfg = TableConfig {
        large_r: args.large_r,
        large_vm_db: args.large_vm_db,
        cap: args.cap,
        ..TableConfig::default()
    };
    emit(&render(&table(&cfg)?, args.format)?, args.output.as_deref())
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let text = match &args.fixture {
        Some(path) => std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => DEFAULT_FIXTURE.to_string(),
    };
    let fixture = parse_fixture(&text)?;
    let summary = verify(&Grid::default(), &fixture, args.tolerance)?;
    emit(&to_json(&summary)?, args.output.as_deref())?;
    if summary.pass {
        Ok(())
    } else {
        for f in &summary.failures {
            eprintln!("{f}");
        }
        Err(CliError::Verification(format!(
            "{} comparison(s) outside tolerance {:e}",
            summary.failures.len(),
            summary.tolerance
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::TvCurve(a) => cmd_tv_curve(a),
        Command::Table(a) => cmd_table(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
