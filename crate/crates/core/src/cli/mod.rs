//! `engage` command-line front end.
//!
//! Exit codes: 0 success, 1 unreadable or malformed input, 2 invalid
//! parameters, 3 no intercept solution.

pub mod analysis;
pub mod scenario;
pub mod sweep;
pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::error::EngageError;
use crate::geometry::TofConvention;
use crate::oracle::{McConfig, GENERATOR_ID};

use analysis::{evaluate, Evaluation, Options};
use scenario::{parse_json, Scenario};
use table::{Cell, ResultTable};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Parse(String),
    Invalid(String),
    NoIntercept(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Parse(_) | Failure::Io(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::NoIntercept(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Parse(m) => write!(f, "parse error: {m}"),
            Failure::Invalid(m) => write!(f, "invalid scenario: {m}"),
            Failure::NoIntercept(m) => write!(f, "no intercept solution: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<EngageError> for Failure {
    fn from(e: EngageError) -> Self {
        match e {
            EngageError::Parse(m) => Failure::Parse(m),
            EngageError::NoInterceptSolution(m) => Failure::NoIntercept(m),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngleUnit {
    #[default]
    Degrees,
    Radians,
}

impl AngleUnit {
    pub fn convert(self, radians: f64) -> f64 {
        match self {
            AngleUnit::Degrees => radians.to_degrees(),
            AngleUnit::Radians => radians,
        }
    }

    pub fn label(self, name: &str) -> String {
        match self {
            AngleUnit::Degrees => format!("{name}_deg"),
            AngleUnit::Radians => format!("{name}_rad"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "engage", version, about = "Engagement, intercept, radar and detection analyses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the scenario and print its result table.
    Analyze(RunArgs),
    /// Evaluate over the cross product of swept fields as long-format CSV.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// `field=v1,v2,...`; repeat for more axes.
        #[arg(long = "sweep", value_name = "FIELD=VALUES")]
        axes: Vec<String>,
    },
    /// Parse and check the scenario without computing anything.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Also write the CSV to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_name = "literal|kinematic")]
    pub tof_convention: Option<TofConvention>,
    /// Report angles in degrees (default).
    #[arg(long, conflicts_with = "radians")]
    pub degrees: bool,
    /// Report angles in radians.
    #[arg(long)]
    pub radians: bool,
    /// Print pursuit traces at full precision instead of two decimals.
    #[arg(long)]
    pub full_precision: bool,
}

impl RunArgs {
    fn options(&self) -> Options {
        Options {
            samples: self.samples,
            seed: self.seed,
            tof_convention: self.tof_convention,
            angles: if self.radians { AngleUnit::Radians } else { AngleUnit::Degrees },
            full_precision: self.full_precision,
        }
    }
}

struct Input {
    value: serde_json::Value,
    sha256: String,
    base_dir: PathBuf,
}

fn read_input(path: &Path) -> Result<Input, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Parse(format!("cannot read {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    Ok(Input {
        value: parse_json(text)?,
        sha256: hex::encode(Sha256::digest(&bytes)),
        base_dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
    })
}

fn provenance(table: &mut ResultTable, input: &Input, mc: Option<McConfig>) {
    table.note("input_sha256", &input.sha256);
    match mc {
        Some(cfg) => {
            table.note("seed", cfg.seed);
            table.note("samples", cfg.samples);
        }
        None => table.note("seed", "none"),
    }
    table.note("generator", GENERATOR_ID);
    table.note("version", VERSION);
}

fn emit(table: &ResultTable, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    let csv = table.to_csv()?;
    if let Some(path) = out {
        std::fs::write(path, &csv).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    stdout.write_all(csv.as_bytes()).map_err(|e| Failure::Io(e.to_string()))
}

fn warn(stderr: &mut dyn Write, warnings: &[String]) {
    for w in warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
}

fn analyze(args: &RunArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let input = read_input(&args.scenario)?;
    let scenario = Scenario::from_value(input.value.clone())?;
    let Evaluation { record, table, warnings, monte_carlo } = evaluate(&scenario, &args.options(), &input.base_dir)?;
    warn(stderr, &warnings);
    let mut table = table.unwrap_or_else(|| record.as_table());
    provenance(&mut table, &input, monte_carlo);
    emit(&table, args.out.as_deref(), stdout)
}

fn run_sweep(args: &RunArgs, axes: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let input = read_input(&args.scenario)?;
    let section = Scenario::from_value(input.value.clone())?.analysis.name();
    let axes = axes.iter().map(|a| sweep::parse_axis(a, section)).collect::<Result<Vec<_>, _>>()?;
    let opts = args.options();

    let mut table = ResultTable::default();
    let mut names: Option<Vec<String>> = None;
    let mut monte_carlo = None;
    let mut warnings: Vec<String> = Vec::new();
    for point in sweep::grid(&axes) {
        let mut doc = input.value.clone();
        for (axis, value) in axes.iter().zip(&point) {
            sweep::assign(&mut doc, &axis.path, value)?;
        }
        let eval = evaluate(&Scenario::from_value(doc)?, &opts, &input.base_dir)?;
        let these: Vec<String> = eval.record.names().into_iter().map(str::to_owned).collect();
        match &names {
            None => {
                table.columns = axes.iter().map(|a| a.name()).chain(these.iter().cloned()).collect();
                names = Some(these);
            }
            Some(prev) if *prev != these => {
                return Err(Failure::Invalid("sweep points produce different result columns".into()));
            }
            Some(_) => {}
        }
        for w in eval.warnings {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
        monte_carlo = monte_carlo.or(eval.monte_carlo);
        let mut row: Vec<Cell> = point.iter().map(|v| Cell::Text(v.to_string())).collect();
        row.extend(eval.record.0.into_iter().map(|(_, c)| c));
        table.rows.push(row);
    }
    warn(stderr, &warnings);
    let axis_names: Vec<String> = axes.iter().map(|a| a.name()).collect();
    table.note("sweep", if axis_names.is_empty() { "none".to_owned() } else { axis_names.join(";") });
    provenance(&mut table, &input, monte_carlo);
    emit(&table, args.out.as_deref(), stdout)
}

fn validate(path: &Path, stderr: &mut dyn Write) -> Result<(), Failure> {
    let input = read_input(path)?;
    let scenario = Scenario::from_value(input.value)?;
    scenario.validate(&input.base_dir)?;
    warn(stderr, &scenario.warnings());
    Ok(())
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Analyze(args) => analyze(args, stdout, stderr),
        Command::Sweep { run, axes } => run_sweep(run, axes, stdout, stderr),
        Command::Validate { scenario } => validate(scenario, stderr),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {f}");
            f.exit_code()
        }
    }
}
