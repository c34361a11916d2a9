//! Command-line front end.
//!
//! Settings resolve in three layers: command-line flags override a JSON
//! configuration file (`--config`), which overrides the built-in simulation
//! defaults. Configuration keys are the flag names in snake_case.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::curves::CurveTable;
use crate::error::Error;
use crate::models::walfisch::MetroFactor;
use crate::models::{Environment, FidelityMode, PathLossResult};
use crate::reference::{
    compare_against_reference, parse_reference, published_table, CompareOptions, DiscrepancyLedger,
    Verdict, DEFAULT_TOLERANCE_DB,
};
use crate::scenario::{
    default_geometry, default_shadow_margin_db, evaluate, invert_cell_range, sweep, ModelId,
    Scenario, Spacing,
};

pub const CURVES_ENV_VAR: &str = "PATHCAST_CURVES";

pub const EXIT_OK: i32 = 0;
pub const EXIT_EVALUATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_STRICT_MISMATCH: i32 = 3;

const DEFAULT_SWEEP_MIN_M: f64 = 1000.0;
const DEFAULT_SWEEP_MAX_M: f64 = 10_000.0;
const DEFAULT_SWEEP_STEPS: usize = 50;
const DEFAULT_RANGE_MIN_M: f64 = 1000.0;
const DEFAULT_RANGE_MAX_M: f64 = 20_000.0;

#[derive(Debug, Parser)]
#[command(
    name = "pathcast",
    version,
    about = "Empirical path-loss models for LTE planning: SUI, Okumura, COST-231 Hata, COST-231 Walfisch-Ikegami, Ericsson 9999",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Path loss for one link.
    Pathloss {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Path loss over a range of distances (log-spaced by default).
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Compare every model against the published comparison table.
    Compare {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        compare: CompareArgs,
    },
    /// Largest distance whose path loss stays within a budget.
    CellRange {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        range: RangeArgs,
    },
}

/// Scenario overrides shared by every command.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
struct ScenarioArgs {
    /// JSON configuration file (keys are flag names in snake_case)
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    config: Option<PathBuf>,

    /// Model: sui, okumura, cost231_hata, walfisch_ikegami, ericsson9999
    #[arg(long)]
    model: Option<ModelId>,

    /// Environment: urban, suburban, rural [default: urban]
    #[arg(long)]
    env: Option<Environment>,

    /// Carrier frequency in MHz [default: 1900]
    #[arg(long, value_name = "MHZ")]
    freq_mhz: Option<f64>,

    /// Tx-Rx distance in meters [default: 5000]
    #[arg(long, value_name = "M", conflicts_with = "dist_km")]
    dist_m: Option<f64>,

    /// Tx-Rx distance in kilometers (alternative to --dist-m)
    #[arg(long, value_name = "KM")]
    dist_km: Option<f64>,

    /// Base-station antenna height in meters [default: 30]
    #[arg(long, value_name = "M")]
    bs_m: Option<f64>,

    /// Receiver antenna height in meters [default: 3]
    #[arg(long, value_name = "M")]
    rx_m: Option<f64>,

    /// SUI reference distance d0 in meters [default: 100]
    #[arg(long, value_name = "M")]
    sui_d0_m: Option<f64>,

    /// Omit the SUI shadowing term
    #[arg(long)]
    no_sui_shadowing: bool,

    /// Street width in meters [default: 25]
    #[arg(long, value_name = "M")]
    street_width_m: Option<f64>,

    /// Building-to-building separation in meters [default: 50]
    #[arg(long, value_name = "M")]
    building_sep_m: Option<f64>,

    /// Average roof height in meters [default: 15]
    #[arg(long, value_name = "M")]
    roof_m: Option<f64>,

    /// Street orientation in degrees, 0-90 [default: 30 urban, 40 suburban/rural]
    #[arg(long, value_name = "DEG")]
    orientation_deg: Option<f64>,

    /// Walfisch-Ikegami city class: metropolitan (k=1.5) or suburban (k=0.7) [default: metropolitan urban, suburban otherwise]
    #[arg(long, value_name = "CLASS")]
    metro: Option<MetroClass>,

    /// Explicit k factor overriding --metro
    #[arg(long, value_name = "K")]
    metro_k_override: Option<f64>,

    /// Force the Walfisch-Ikegami LOS formula [default: LOS for rural only]
    #[arg(long)]
    los: bool,

    /// Ericsson 9999 a0 [default: 36.2]
    #[arg(long)]
    ericsson_a0: Option<f64>,
    /// Ericsson 9999 a1 [default: 30.2]
    #[arg(long)]
    ericsson_a1: Option<f64>,
    /// Ericsson 9999 a2 [default: 12.0]
    #[arg(long)]
    ericsson_a2: Option<f64>,
    /// Ericsson 9999 a3 [default: 0.1]
    #[arg(long)]
    ericsson_a3: Option<f64>,

    /// Shadowing margin in dB [default: 10.6 urban, 8.2 suburban/rural]
    #[arg(long, value_name = "DB")]
    shadow_margin_db: Option<f64>,

    /// Add the shadowing margin to every model's loss [default: off]
    #[arg(long)]
    apply_shadow_margin: bool,

    /// Formula fidelity: corrected or as_printed [default: corrected]
    #[arg(long)]
    mode: Option<FidelityMode>,

    /// Output format: csv, json, table [default: csv]
    #[arg(long)]
    output: Option<OutputFormat>,

    /// Okumura curve CSV, or "builtin" for the bundled table [env: PATHCAST_CURVES]
    #[arg(long, value_name = "PATH")]
    curves: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
struct SweepArgs {
    /// Sweep start in meters [default: 1000]
    #[arg(long, value_name = "M")]
    d_min_m: Option<f64>,
    /// Sweep end in meters [default: 10000]
    #[arg(long, value_name = "M")]
    d_max_m: Option<f64>,
    /// Number of sample points, >= 2 [default: 50]
    #[arg(long)]
    steps: Option<usize>,
    /// Linear instead of log spacing
    #[arg(long)]
    linear: bool,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
struct CompareArgs {
    /// Match tolerance in dB [default: 0.5]
    #[arg(long, value_name = "DB")]
    tolerance_db: Option<f64>,
    /// Exit with status 3 if any cell mismatches
    #[arg(long)]
    strict: bool,
    /// Alternative reference CSV [default: embedded comparison table]
    #[arg(long, value_name = "FILE")]
    reference: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
struct RangeArgs {
    /// Maximum allowed path loss in dB
    #[arg(long, value_name = "DB")]
    max_loss_db: Option<f64>,
    /// Search bracket start in meters [default: 1000]
    #[arg(long, value_name = "M")]
    d_min_m: Option<f64>,
    /// Search bracket end in meters [default: 20000]
    #[arg(long, value_name = "M")]
    d_max_m: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Table,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "table" => Ok(OutputFormat::Table),
            other => Err(format!(
                "unknown output '{other}' (expected csv, json or table)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum MetroClass {
    Metropolitan,
    Suburban,
}

impl std::str::FromStr for MetroClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "metropolitan" => Ok(MetroClass::Metropolitan),
            "suburban" => Ok(MetroClass::Suburban),
            other => Err(format!(
                "unknown city class '{other}' (expected metropolitan or suburban)"
            )),
        }
    }
}

/// Where to read the Okumura curves from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveSource {
    Builtin,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Pathloss,
    Sweep {
        d_min_m: f64,
        d_max_m: f64,
        steps: usize,
        spacing: Spacing,
    },
    Compare {
        tolerance_db: f64,
        strict: bool,
        reference: Option<PathBuf>,
    },
    CellRange {
        max_loss_db: f64,
        d_min_m: f64,
        d_max_m: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Pathloss => "pathloss",
            Command::Sweep { .. } => "sweep",
            Command::Compare { .. } => "compare",
            Command::CellRange { .. } => "cell-range",
        }
    }
}

/// Fully resolved invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Absent only for `compare`, which evaluates every model.
    pub model: Option<ModelId>,
    pub scenario: Scenario,
    pub output: OutputFormat,
    pub curves: Option<CurveSource>,
}

/// A command-line problem; reported with exit status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError {
    pub message: String,
    /// Exit status; 0 for `--help` and `--version`.
    pub exit_code: i32,
}

impl UsageError {
    fn new(message: impl Into<String>) -> Self {
        UsageError {
            message: format!(
                "error: {}\n\nFor more information, try '--help'.",
                message.into()
            ),
            exit_code: EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for UsageError {}

/// Parses `argv` (including the program name), reading the curve-file
/// fallback from the environment.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    parse_args_with_env(argv, std::env::var(CURVES_ENV_VAR).ok())
}

pub fn parse_args_with_env<I, T>(
    argv: I,
    curves_env: Option<String>,
) -> Result<RunConfig, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| UsageError {
        message: e.render().to_string(),
        exit_code: e.exit_code(),
    })?;

    let (flags, cmd) = match cli.command {
        CliCommand::Pathloss { scenario } => (scenario, CommandFlags::Pathloss),
        CliCommand::Sweep { scenario, sweep } => (scenario, CommandFlags::Sweep(sweep)),
        CliCommand::Compare { scenario, compare } => (scenario, CommandFlags::Compare(compare)),
        CliCommand::CellRange { scenario, range } => (scenario, CommandFlags::CellRange(range)),
    };

    let mut file = match &flags.config {
        Some(path) => load_config(path)?,
        None => ConfigFile::default(),
    };
    let s = flags.merge(std::mem::take(&mut file.scenario));
    resolve(s, cmd, file, curves_env)
}

enum CommandFlags {
    Pathloss,
    Sweep(SweepArgs),
    Compare(CompareArgs),
    CellRange(RangeArgs),
}

#[derive(Default)]
struct ConfigFile {
    scenario: ScenarioArgs,
    sweep: SweepArgs,
    compare: CompareArgs,
    range: RangeArgs,
}

fn known_config_keys() -> BTreeSet<String> {
    let mut cmd = clap::Command::new("keys");
    cmd = ScenarioArgs::augment_args(cmd);
    cmd = SweepArgs::augment_args(cmd);
    cmd = CompareArgs::augment_args(cmd);
    cmd = RangeArgs::augment_args(cmd);
    cmd.get_arguments()
        .map(|a| a.get_id().to_string())
        .filter(|id| id != "config")
        .collect()
}

fn load_config(path: &PathBuf) -> Result<ConfigFile, UsageError> {
    let file = File::open(path)
        .map_err(|e| UsageError::new(format!("--config: cannot open {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_reader(io::BufReader::new(file))
        .map_err(|e| UsageError::new(format!("--config: {}: {e}", path.display())))?;
    let obj = value
        .as_object()
        .ok_or_else(|| UsageError::new("--config: top level must be a JSON object"))?;
    let known = known_config_keys();
    if let Some(unknown) = obj.keys().find(|k| !known.contains(k.as_str())) {
        return Err(UsageError::new(format!(
            "--config: unknown key '{unknown}'"
        )));
    }
    let part = |what: &str| UsageError::new(format!("--config: {}: {what}", path.display()));
    Ok(ConfigFile {
        scenario: serde_json::from_value(value.clone()).map_err(|e| part(&e.to_string()))?,
        sweep: serde_json::from_value(value.clone()).map_err(|e| part(&e.to_string()))?,
        compare: serde_json::from_value(value.clone()).map_err(|e| part(&e.to_string()))?,
        range: serde_json::from_value(value).map_err(|e| part(&e.to_string()))?,
    })
}

macro_rules! prefer {
    ($flag:expr, $file:expr; $($field:ident),+ $(,)?) => {
        $( $flag.$field = $flag.$field.take().or($file.$field.take()); )+
    };
}

impl ScenarioArgs {
    fn merge(mut self, mut file: ScenarioArgs) -> ScenarioArgs {
        prefer!(self, file; model, env, freq_mhz, bs_m, rx_m, sui_d0_m,
            street_width_m, building_sep_m, roof_m, orientation_deg, metro,
            metro_k_override, ericsson_a0, ericsson_a1, ericsson_a2, ericsson_a3,
            shadow_margin_db, mode, output, curves);
        // Distance units: a flag in either unit replaces the file's distance.
        if self.dist_m.is_none() && self.dist_km.is_none() {
            self.dist_m = file.dist_m;
            self.dist_km = file.dist_km;
        }
        self.no_sui_shadowing |= file.no_sui_shadowing;
        self.los |= file.los;
        self.apply_shadow_margin |= file.apply_shadow_margin;
        self
    }
}

fn positive(flag: &str, value: f64) -> Result<f64, UsageError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(UsageError::new(format!(
            "--{flag}: must be a positive number (got {value})"
        )))
    }
}

fn resolve(
    s: ScenarioArgs,
    cmd: CommandFlags,
    mut file: ConfigFile,
    curves_env: Option<String>,
) -> Result<RunConfig, UsageError> {
    if s.dist_m.is_some() && s.dist_km.is_some() {
        return Err(UsageError::new(
            "--dist-m and --dist-km are conflicting units; give one",
        ));
    }
    let environment = s.env.unwrap_or(Environment::Urban);
    let freq = positive(
        "freq-mhz",
        s.freq_mhz.unwrap_or(Scenario::DEFAULT_FREQUENCY_MHZ),
    )?;
    let bs = positive("bs-m", s.bs_m.unwrap_or(Scenario::DEFAULT_BS_HEIGHT_M))?;
    let rx = positive("rx-m", s.rx_m.unwrap_or(Scenario::DEFAULT_RX_HEIGHT_M))?;
    let dist = match (s.dist_m, s.dist_km) {
        (_, Some(km)) => positive("dist-km", km)? * 1000.0,
        (Some(m), None) => positive("dist-m", m)?,
        (None, None) => Scenario::DEFAULT_DISTANCE_M,
    };
    if bs <= rx {
        return Err(UsageError::new(format!(
            "--bs-m: base-station height {bs} m must exceed receiver height {rx} m"
        )));
    }

    let mut geometry = default_geometry(environment);
    if let Some(v) = s.street_width_m {
        geometry.street_width_m = positive("street-width-m", v)?;
    }
    if let Some(v) = s.building_sep_m {
        geometry.building_separation_m = positive("building-sep-m", v)?;
    }
    if let Some(v) = s.roof_m {
        geometry.roof_height_m = positive("roof-m", v)?;
    }
    if let Some(v) = s.orientation_deg {
        if !(0.0..=90.0).contains(&v) {
            return Err(UsageError::new(format!(
                "--orientation-deg: must lie in [0, 90] (got {v})"
            )));
        }
        geometry.orientation_deg = v;
    }
    match s.metro {
        Some(MetroClass::Metropolitan) => geometry.metro_factor = MetroFactor::Metropolitan,
        Some(MetroClass::Suburban) => geometry.metro_factor = MetroFactor::Suburban,
        None => {}
    }
    if let Some(k) = s.metro_k_override {
        if !k.is_finite() {
            return Err(UsageError::new("--metro-k-override: must be finite"));
        }
        geometry.metro_factor = MetroFactor::Custom(k);
    }
    geometry.los |= s.los;

    let mut scenario =
        Scenario::defaults(environment, freq, bs).map_err(|e| UsageError::new(e.to_string()))?;
    scenario.link.distance_m = dist;
    scenario.link.rx_height_m = rx;
    if let Some(d0) = s.sui_d0_m {
        scenario.link.sui_reference_distance_m = positive("sui-d0-m", d0)?;
    }
    scenario.wi_geometry = geometry;
    let e = &mut scenario.ericsson;
    e.a0 = s.ericsson_a0.unwrap_or(e.a0);
    e.a1 = s.ericsson_a1.unwrap_or(e.a1);
    e.a2 = s.ericsson_a2.unwrap_or(e.a2);
    e.a3 = s.ericsson_a3.unwrap_or(e.a3);
    scenario.mode = s.mode.unwrap_or_default();
    scenario.shadow_margin_db = s
        .shadow_margin_db
        .unwrap_or_else(|| default_shadow_margin_db(environment));
    scenario.apply_shadow_margin = s.apply_shadow_margin;
    scenario.include_sui_shadowing = !s.no_sui_shadowing;

    let command = match cmd {
        CommandFlags::Pathloss => Command::Pathloss,
        CommandFlags::Sweep(mut a) => {
            prefer!(a, file.sweep; d_min_m, d_max_m, steps);
            a.linear |= file.sweep.linear;
            let d_min_m = positive("d-min-m", a.d_min_m.unwrap_or(DEFAULT_SWEEP_MIN_M))?;
            let d_max_m = positive("d-max-m", a.d_max_m.unwrap_or(DEFAULT_SWEEP_MAX_M))?;
            let steps = a.steps.unwrap_or(DEFAULT_SWEEP_STEPS);
            if d_min_m >= d_max_m {
                return Err(UsageError::new("--d-min-m must be below --d-max-m"));
            }
            if steps < 2 {
                return Err(UsageError::new("--steps: at least 2 points required"));
            }
            Command::Sweep {
                d_min_m,
                d_max_m,
                steps,
                spacing: if a.linear {
                    Spacing::Linear
                } else {
                    Spacing::Log
                },
            }
        }
        CommandFlags::Compare(mut a) => {
            prefer!(a, file.compare; tolerance_db, reference);
            a.strict |= file.compare.strict;
            Command::Compare {
                tolerance_db: positive(
                    "tolerance-db",
                    a.tolerance_db.unwrap_or(DEFAULT_TOLERANCE_DB),
                )?,
                strict: a.strict,
                reference: a.reference,
            }
        }
        CommandFlags::CellRange(mut a) => {
            prefer!(a, file.range; max_loss_db, d_min_m, d_max_m);
            let max_loss_db = a
                .max_loss_db
                .ok_or_else(|| UsageError::new("cell-range requires --max-loss-db"))?;
            if !max_loss_db.is_finite() {
                return Err(UsageError::new("--max-loss-db: must be finite"));
            }
            let d_min_m = positive("d-min-m", a.d_min_m.unwrap_or(DEFAULT_RANGE_MIN_M))?;
            let d_max_m = positive("d-max-m", a.d_max_m.unwrap_or(DEFAULT_RANGE_MAX_M))?;
            if d_min_m >= d_max_m {
                return Err(UsageError::new("--d-min-m must be below --d-max-m"));
            }
            Command::CellRange {
                max_loss_db,
                d_min_m,
                d_max_m,
            }
        }
    };

    let model = match (&command, s.model) {
        (Command::Compare { .. }, m) => m,
        (_, Some(m)) => Some(m),
        (c, None) => {
            return Err(UsageError::new(format!("{} requires --model", c.name())));
        }
    };

    let curves = s.curves.or(curves_env).filter(|c| !c.is_empty()).map(|c| {
        if c == "builtin" {
            CurveSource::Builtin
        } else {
            CurveSource::File(PathBuf::from(c))
        }
    });

    Ok(RunConfig {
        command,
        model,
        scenario,
        output: s.output.unwrap_or_default(),
        curves,
    })
}

/// Entry point used by the binary: parses, runs and returns the exit status.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(argv) {
        Ok(config) => run(&config, out, err),
        Err(usage) => {
            let msg = usage.message.trim_end();
            if usage.exit_code == EXIT_OK {
                let _ = writeln!(out, "{msg}");
            } else {
                let _ = writeln!(err, "{msg}");
            }
            usage.exit_code
        }
    }
}

/// Executes a resolved configuration, writing results to `out` and
/// diagnostics to `err`.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(config, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_EVALUATION
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum RunError {
    #[error(transparent)]
    Model(#[from] Error),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

fn load_curves(source: &Option<CurveSource>) -> Result<Option<CurveTable>, RunError> {
    Ok(match source {
        None => None,
        Some(CurveSource::Builtin) => Some(CurveTable::builtin()),
        Some(CurveSource::File(path)) => {
            let file = File::open(path).map_err(|e| {
                Error::InvalidArgument(format!("cannot open curve file {}: {e}", path.display()))
            })?;
            Some(CurveTable::from_reader(io::BufReader::new(file))?)
        }
    })
}

fn execute(config: &RunConfig, out: &mut dyn Write) -> Result<i32, RunError> {
    let curves = load_curves(&config.curves)?;
    let curves = curves.as_ref();
    let scenario = &config.scenario;
    match &config.command {
        Command::Pathloss => {
            let model = config.model.expect("model resolved for pathloss");
            let result = evaluate(model, scenario, curves)?;
            let rows = [(scenario.link.distance_m, result)];
            write_series(out, config.output, model, scenario, &rows)?;
        }
        Command::Sweep {
            d_min_m,
            d_max_m,
            steps,
            spacing,
        } => {
            let model = config.model.expect("model resolved for sweep");
            let rows = sweep(
                model, scenario, *d_min_m, *d_max_m, *steps, *spacing, curves,
            )?;
            write_series(out, config.output, model, scenario, &rows)?;
        }
        Command::Compare {
            tolerance_db,
            strict,
            reference,
        } => {
            let rows = match reference {
                Some(path) => {
                    let file = File::open(path).map_err(|e| {
                        Error::InvalidArgument(format!(
                            "cannot open reference file {}: {e}",
                            path.display()
                        ))
                    })?;
                    parse_reference(io::BufReader::new(file))?
                }
                None => published_table(),
            };
            let rows: Vec<_> = match config.model {
                Some(m) => rows.into_iter().filter(|r| r.model == m).collect(),
                None => rows,
            };
            let options = CompareOptions {
                tolerance_db: *tolerance_db,
                mode: scenario.mode,
                apply_shadow_margin: scenario.apply_shadow_margin,
            };
            let ledger = compare_against_reference(&rows, options, curves)?;
            write_ledger(out, config.output, &ledger)?;
            if *strict && ledger.matched() != ledger.len() {
                return Ok(EXIT_STRICT_MISMATCH);
            }
        }
        Command::CellRange {
            max_loss_db,
            d_min_m,
            d_max_m,
        } => {
            let model = config.model.expect("model resolved for cell-range");
            let d = invert_cell_range(model, scenario, *max_loss_db, *d_min_m, *d_max_m, curves)?;
            write_cell_range(out, config.output, model, scenario, *max_loss_db, d)?;
        }
    }
    Ok(EXIT_OK)
}

fn f2(v: f64) -> String {
    format!("{v:.2}")
}

#[derive(Serialize)]
struct SeriesRecord<'a> {
    distance_m: f64,
    model: ModelId,
    environment: Environment,
    freq_mhz: f64,
    bs_m: f64,
    rx_m: f64,
    mode: FidelityMode,
    path_loss_db: f64,
    components: &'a [crate::models::Component],
    warnings: &'a [String],
}

fn write_series(
    out: &mut dyn Write,
    format: OutputFormat,
    model: ModelId,
    scenario: &Scenario,
    rows: &[(f64, PathLossResult)],
) -> Result<(), RunError> {
    let link = &scenario.link;
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "distance_m",
                "model",
                "environment",
                "freq_mhz",
                "bs_m",
                "rx_m",
                "mode",
                "path_loss_db",
            ])?;
            for (d, r) in rows {
                w.write_record([
                    f2(*d),
                    model.to_string(),
                    scenario.environment.to_string(),
                    f2(link.frequency_mhz),
                    f2(link.bs_height_m),
                    f2(link.rx_height_m),
                    scenario.mode.to_string(),
                    f2(r.total_db),
                ])?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let records: Vec<SeriesRecord> = rows
                .iter()
                .map(|(d, r)| SeriesRecord {
                    distance_m: *d,
                    model,
                    environment: scenario.environment,
                    freq_mhz: link.frequency_mhz,
                    bs_m: link.bs_height_m,
                    rx_m: link.rx_height_m,
                    mode: scenario.mode,
                    path_loss_db: r.total_db,
                    components: &r.components,
                    warnings: &r.warnings,
                })
                .collect();
            if records.len() == 1 {
                serde_json::to_writer_pretty(&mut *out, &records[0])?;
            } else {
                serde_json::to_writer_pretty(&mut *out, &records)?;
            }
            writeln!(out)?;
        }
        OutputFormat::Table => {
            writeln!(
                out,
                "model {model}, {env}, {f:.2} MHz, h_b {bs:.2} m, h_r {rx:.2} m, mode {mode}",
                env = scenario.environment,
                f = link.frequency_mhz,
                bs = link.bs_height_m,
                rx = link.rx_height_m,
                mode = scenario.mode,
            )?;
            for (d, r) in rows {
                writeln!(out, "{:>12} m {:>10} dB", f2(*d), f2(r.total_db))?;
                if rows.len() == 1 {
                    for c in &r.components {
                        writeln!(out, "    {:<22}{:>10}", c.label, f2(c.value_db))?;
                    }
                }
                for w in &r.warnings {
                    writeln!(out, "    warning: {w}")?;
                }
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct LedgerJson<'a> {
    #[serde(flatten)]
    ledger: &'a DiscrepancyLedger,
    matched: usize,
    total: usize,
    summary: String,
}

fn write_ledger(
    out: &mut dyn Write,
    format: OutputFormat,
    ledger: &DiscrepancyLedger,
) -> Result<(), RunError> {
    match format {
        OutputFormat::Json => {
            let doc = LedgerJson {
                ledger,
                matched: ledger.matched(),
                total: ledger.len(),
                summary: ledger.summary(),
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record([
                    "model",
                    "freq_mhz",
                    "dist_km",
                    "bs_m",
                    "rx_m",
                    "environment",
                    "printed_db",
                    "computed_db",
                    "delta_db",
                    "verdict",
                    "mode",
                    "notes",
                ])?;
                for e in &ledger.entries {
                    w.write_record([
                        e.row.model.to_string(),
                        f2(e.row.freq_mhz),
                        f2(e.row.dist_km),
                        f2(e.row.bs_m),
                        f2(e.row.rx_m),
                        e.environment.to_string(),
                        f2(e.printed_db),
                        e.computed_db.map(f2).unwrap_or_default(),
                        e.delta_db.map(f2).unwrap_or_default(),
                        verdict_str(e.verdict).to_string(),
                        e.mode.to_string(),
                        e.notes.join("; "),
                    ])?;
                }
                w.flush()?;
            }
            writeln!(out, "{}", ledger.summary())?;
        }
        OutputFormat::Table => {
            writeln!(
                out,
                "{:<17}{:>6}{:>5}  {:<9}{:>9}{:>10}{:>9}  verdict",
                "model", "MHz", "h_b", "env", "printed", "computed", "delta"
            )?;
            for e in &ledger.entries {
                writeln!(
                    out,
                    "{:<17}{:>6}{:>5}  {:<9}{:>9}{:>10}{:>9}  {}",
                    e.row.model.as_str(),
                    e.row.freq_mhz,
                    e.row.bs_m,
                    e.environment.as_str(),
                    f2(e.printed_db),
                    e.computed_db.map(f2).unwrap_or_else(|| "-".into()),
                    e.delta_db.map(f2).unwrap_or_else(|| "-".into()),
                    verdict_str(e.verdict),
                )?;
            }
            writeln!(out, "{}", ledger.summary())?;
        }
    }
    Ok(())
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Match => "match",
        Verdict::Mismatch => "mismatch",
    }
}

fn write_cell_range(
    out: &mut dyn Write,
    format: OutputFormat,
    model: ModelId,
    scenario: &Scenario,
    max_loss_db: f64,
    range_m: f64,
) -> Result<(), RunError> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "model",
                "environment",
                "freq_mhz",
                "mode",
                "max_loss_db",
                "cell_range_m",
            ])?;
            w.write_record([
                model.to_string(),
                scenario.environment.to_string(),
                f2(scenario.link.frequency_mhz),
                scenario.mode.to_string(),
                f2(max_loss_db),
                f2(range_m),
            ])?;
            w.flush()?;
        }
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "model": model,
                "environment": scenario.environment,
                "freq_mhz": scenario.link.frequency_mhz,
                "mode": scenario.mode,
                "max_loss_db": max_loss_db,
                "cell_range_m": range_m,
            });
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        OutputFormat::Table => {
            writeln!(out, "cell range {} m", f2(range_m))?;
        }
    }
    Ok(())
}

/// Renders `--help` for a subcommand; used to check that defaults are listed.
pub fn help_text(subcommand: &str) -> String {
    let mut cmd = Cli::command();
    cmd.find_subcommand_mut(subcommand)
        .map(|c| c.render_long_help().to_string())
        .unwrap_or_default()
}
