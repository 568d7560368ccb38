//! The `hexsearch` command line.
//!
//! Every subcommand writes its tables into the output directory, each file
//! starting with a comment header that names the crate version and echoes
//! the resolved configuration as JSON. Exit status is 0 on success, 1 for
//! usage or configuration errors and 2 for numerical-analysis errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::lattice::LatticeConfig;
use crate::search::{self, ModeSpec, SearchMode, SearchRun};
use crate::spectral::{self, SpectralSummary};
use crate::walk::{self, LogBase, OracleControl, SearchTarget};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "hexsearch",
    version,
    about = "Quantum-walk search on a periodic honeycomb lattice"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve one search and write its probability time series.
    Simulate(SimulateArgs),
    /// Write the per-k table and the spectral sums for one lattice size.
    Spectrum(SizeArgs),
    /// Write the predicted iteration count and final overlap.
    Predict(SizeArgs),
    /// Run one search per size and fit the growth of the peak time.
    Scaling(ScalingArgs),
    /// Run the plain and ancilla-extended searches side by side.
    TulsiCompare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Directory for output files.
    #[arg(long, env = "HEXSEARCH_OUT_DIR", default_value = ".")]
    pub output_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    /// Marked cell as `n1,n2`.
    #[arg(long, default_value = "0,0", value_parser = parse_cell)]
    pub marked: (usize, usize),
    /// Base of the logarithm in δ = 1/√(log N).
    #[arg(long, value_enum, default_value_t = BaseArg::Natural)]
    pub delta_log_base: BaseArg,
    /// Ancilla value that switches on the oracle in the extended step.
    #[arg(long, value_enum, default_value_t = ControlArg::Zero)]
    pub oracle_control: ControlArg,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Akr)]
    pub mode: ModeArg,
    /// Number of steps, or `auto` for three times the predicted count.
    #[arg(long, default_value = "auto")]
    pub steps: Steps,
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Seed for measurement sampling.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Measurements to sample from the state at the peak; requires `--seed`.
    #[arg(long, default_value_t = 0)]
    pub shots: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SizeArgs {
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    /// Comma-separated values of m; at least four distinct.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Akr)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub walk: WalkArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value = "auto")]
    pub steps: Steps,
    #[command(flatten)]
    pub walk: WalkArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Akr,
    Tulsi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseArg {
    Natural,
    Base2,
    Base10,
}

impl From<BaseArg> for LogBase {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::Natural => LogBase::Natural,
            BaseArg::Base2 => LogBase::Base2,
            BaseArg::Base10 => LogBase::Base10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlArg {
    Zero,
    One,
}

impl From<ControlArg> for OracleControl {
    fn from(c: ControlArg) -> Self {
        match c {
            ControlArg::Zero => OracleControl::Zero,
            ControlArg::One => OracleControl::One,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Steps {
    Auto,
    Fixed(usize),
}

impl FromStr for Steps {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Steps::Auto);
        }
        s.parse()
            .map(Steps::Fixed)
            .map_err(|_| format!("expected a step count or `auto`, got `{s}`"))
    }
}

fn parse_cell(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `n1,n2`, got `{s}`"))?;
    let parse = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad cell coordinate `{x}`"))
    };
    Ok((parse(a)?, parse(b)?))
}

fn mode_spec(mode: ModeArg, walk: &WalkArgs) -> ModeSpec {
    match mode {
        ModeArg::Akr => ModeSpec::Akr,
        ModeArg::Tulsi => ModeSpec::Tulsi {
            log_base: walk.delta_log_base.into(),
            oracle_control: walk.oracle_control.into(),
        },
    }
}

/// A failed command.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "cannot write {}: {e}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

/// Parse `args` (including the program name), run the command and return
/// the exit status. Messages go to standard output and standard error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(written) => {
            for path in written {
                println!("wrote {}", path.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Run a parsed command, returning the files written.
pub fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Predict(a) => predict(a),
        Command::Scaling(a) => scaling(a),
        Command::TulsiCompare(a) => tulsi_compare(a),
    }
}

#[derive(Debug, Serialize)]
struct RunConfig {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    marked: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_log_base: Option<BaseArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_control: Option<ControlArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shots: Option<usize>,
    format: Format,
}

impl RunConfig {
    fn new(command: &'static str, format: Format) -> Self {
        Self {
            command,
            m: None,
            sizes: None,
            marked: None,
            mode: None,
            steps: None,
            delta: None,
            delta_log_base: None,
            oracle_control: None,
            seed: None,
            shots: None,
            format,
        }
    }

    fn with_walk(mut self, walk: &WalkArgs, tulsi: bool) -> Self {
        self.marked = Some(walk.marked);
        if tulsi {
            self.delta_log_base = Some(walk.delta_log_base);
            self.oracle_control = Some(walk.oracle_control);
        }
        self
    }
}

#[derive(Clone, Debug)]
enum Cell {
    Int(usize),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &'static [&'static str]) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn render(&self, config: &RunConfig) -> String {
        let config_json = serde_json::to_string(config).expect("config serializes");
        match config.format {
            Format::Csv => {
                let mut out = String::new();
                let _ = writeln!(out, "# hexsearch {VERSION}");
                let _ = writeln!(out, "# config: {config_json}");
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), v.json()))
                            .collect::<serde_json::Map<_, _>>();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = json!({
                    "hexsearch": VERSION,
                    "config": config,
                    "columns": self.columns,
                    "rows": rows,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
                s.push('\n');
                s
            }
        }
    }
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

/// Write through a temporary file in the same directory, then rename.
fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let io = |e| CliError::Io(path.clone(), e);
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(&path).map_err(|e| io(e.error))?;
    Ok(path)
}

struct Output<'a> {
    args: &'a OutputArgs,
    written: Vec<PathBuf>,
}

impl<'a> Output<'a> {
    fn new(args: &'a OutputArgs) -> Self {
        Self {
            args,
            written: Vec::new(),
        }
    }

    fn write(&mut self, stem: &str, table: &Table, config: &RunConfig) -> Result<(), CliError> {
        let name = format!("{stem}.{}", extension(self.args.format));
        let path = write_atomic(&self.args.output_dir, &name, &table.render(config))?;
        self.written.push(path);
        Ok(())
    }
}

const SERIES_COLUMNS: &[&str] = &["t", "p_support", "overlap_sq"];
const RUN_SUMMARY_COLUMNS: &[&str] = &[
    "m",
    "N",
    "mode",
    "t_star",
    "p_star",
    "T_pred",
    "B_pred",
    "exponent",
    "expected_cost",
];
const K_COLUMNS: &[&str] = &["k1", "k2", "theta", "a_plus", "a_minus", "flag"];
const SPECTRUM_SUMMARY_COLUMNS: &[&str] = &["m", "N", "A", "B", "T", "overlap_sq"];
const PREDICT_COLUMNS: &[&str] = &[
    "m",
    "N",
    "A",
    "B",
    "T",
    "overlap_sq",
    "a0",
    "alpha",
    "A_reduced",
    "B_reduced",
    "excluded",
];

fn series_table(run: &SearchRun) -> Table {
    let mut t = Table::new(SERIES_COLUMNS);
    for p in &run.series {
        t.push(vec![p.t.into(), p.p_support.into(), p.overlap_sq.into()]);
    }
    t
}

fn summary_row(run: &SearchRun, summary: &SpectralSummary, exponent: Option<f64>) -> Vec<Cell> {
    vec![
        run.cfg.m().into(),
        run.cfg.sites().into(),
        run.mode.name().into(),
        run.t_star.into(),
        run.p_star.into(),
        summary.predicted_steps.into(),
        summary.b.spectral.into(),
        exponent.into(),
        run.expected_cost().into(),
    ]
}

fn resolve_steps(steps: Steps, cfg: LatticeConfig) -> Result<usize, CliError> {
    Ok(match steps {
        Steps::Auto => search::default_window(cfg)?,
        Steps::Fixed(n) => n,
    })
}

fn delta_of(mode: &SearchMode) -> Option<f64> {
    match mode {
        SearchMode::Akr => None,
        SearchMode::Tulsi(p) => Some(p.delta()),
    }
}

fn simulate(a: SimulateArgs) -> Result<Vec<PathBuf>, CliError> {
    if a.shots > 0 && a.seed.is_none() {
        return Err(CliError::Usage("--shots requires --seed".into()));
    }
    let cfg = LatticeConfig::new(a.m)?;
    let target = SearchTarget::new(cfg, a.walk.marked.0, a.walk.marked.1)?;
    let mode = mode_spec(a.mode, &a.walk).resolve(cfg)?;
    let steps = resolve_steps(a.steps, cfg)?;
    let summary = spectral::predict(cfg)?;
    let run = search::run_search(cfg, &target, mode, steps)?;

    let mut config =
        RunConfig::new("simulate", a.output.format).with_walk(&a.walk, a.mode == ModeArg::Tulsi);
    config.m = Some(a.m);
    config.mode = Some(mode.name());
    config.steps = Some(steps);
    config.delta = delta_of(&mode);
    config.seed = a.seed;
    config.shots = (a.shots > 0).then_some(a.shots);

    let stem = format!("simulate_m{}_{}", a.m, mode.name());
    let mut out = Output::new(&a.output);
    out.write(&stem, &series_table(&run), &config)?;
    let mut summary_table = Table::new(RUN_SUMMARY_COLUMNS);
    summary_table.push(summary_row(&run, &summary, None));
    out.write(&format!("{stem}_summary"), &summary_table, &config)?;

    if let Some(seed) = a.seed.filter(|_| a.shots > 0) {
        let state = search::evolve(cfg, &target, mode, run.t_star)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut samples = Table::new(&["shot", "ancilla", "j", "s", "n1", "n2", "marked"]);
        for shot in 0..a.shots {
            let meas = walk::sample_measurement(&state, &mut rng);
            let addr = meas.address;
            let hit = (addr.n1, addr.n2) == target.cell();
            samples.push(vec![
                shot.into(),
                meas.ancilla.map_or(Cell::Empty, Cell::Int),
                addr.coin.into(),
                addr.sublattice.into(),
                addr.n1.into(),
                addr.n2.into(),
                Cell::Int(hit as usize),
            ]);
        }
        out.write(&format!("{stem}_samples"), &samples, &config)?;
    }
    println!(
        "m={} mode={} t*={} p*={} T={}",
        a.m,
        mode.name(),
        run.t_star,
        run.p_star,
        summary.predicted_steps
    );
    Ok(out.written)
}

fn spectrum(a: SizeArgs) -> Result<Vec<PathBuf>, CliError> {
    let cfg = LatticeConfig::new(a.m)?;
    let summary = spectral::predict(cfg)?;
    let rows = spectral::k_table(cfg)?;
    let mut config = RunConfig::new("spectrum", a.output.format);
    config.m = Some(a.m);

    let mut table = Table::new(K_COLUMNS);
    for r in rows {
        table.push(vec![
            r.k1.into(),
            r.k2.into(),
            r.theta.into(),
            r.a_plus.into(),
            r.a_minus.into(),
            r.flag.as_str().into(),
        ]);
    }
    let mut s = Table::new(SPECTRUM_SUMMARY_COLUMNS);
    s.push(vec![
        a.m.into(),
        cfg.sites().into(),
        summary.a.spectral.into(),
        summary.b.spectral.into(),
        summary.predicted_steps.into(),
        summary.predicted_overlap_sq.into(),
    ]);
    let mut out = Output::new(&a.output);
    out.write(&format!("spectrum_m{}_k", a.m), &table, &config)?;
    out.write(&format!("spectrum_m{}_summary", a.m), &s, &config)?;
    println!(
        "m={} A={} B={} excluded={}",
        a.m, summary.a.spectral, summary.b.spectral, summary.a.excluded
    );
    Ok(out.written)
}

fn predict(a: SizeArgs) -> Result<Vec<PathBuf>, CliError> {
    let cfg = LatticeConfig::new(a.m)?;
    let s = spectral::predict(cfg)?;
    let mut config = RunConfig::new("predict", a.output.format);
    config.m = Some(a.m);
    let mut table = Table::new(PREDICT_COLUMNS);
    table.push(vec![
        a.m.into(),
        cfg.sites().into(),
        s.a.spectral.into(),
        s.b.spectral.into(),
        s.predicted_steps.into(),
        s.predicted_overlap_sq.into(),
        s.a0.into(),
        s.alpha.into(),
        s.a.reduced.into(),
        s.b.reduced.into(),
        s.a.excluded.into(),
    ]);
    let mut out = Output::new(&a.output);
    out.write(&format!("predict_m{}", a.m), &table, &config)?;
    println!(
        "m={} T={} overlap_sq={}",
        a.m, s.predicted_steps, s.predicted_overlap_sq
    );
    Ok(out.written)
}

fn scaling(a: ScalingArgs) -> Result<Vec<PathBuf>, CliError> {
    let mut distinct = a.sizes.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < search::MIN_FIT_SIZES {
        return Err(CliError::Usage(format!(
            "--sizes needs at least {} distinct values, got {}",
            search::MIN_FIT_SIZES,
            distinct.len()
        )));
    }
    for &m in &a.sizes {
        LatticeConfig::new(m)?;
    }
    let spec = mode_spec(a.mode, &a.walk);
    let runs = search::run_sweep(&a.sizes, spec, a.walk.marked)?;
    let fit = search::fit_scaling(&runs)?;

    let mut config =
        RunConfig::new("scaling", a.output.format).with_walk(&a.walk, a.mode == ModeArg::Tulsi);
    config.sizes = Some(a.sizes.clone());
    config.mode = Some(spec.name());

    let mut out = Output::new(&a.output);
    let mut summary = Table::new(RUN_SUMMARY_COLUMNS);
    for run in &runs {
        let s = spectral::predict(run.cfg)?;
        summary.push(summary_row(run, &s, Some(fit.exponent)));
    }
    let stem = format!("scaling_{}", spec.name());
    out.write(&format!("{stem}_summary"), &summary, &config)?;

    let mut report = Table::new(&[
        "mode",
        "sizes",
        "exponent",
        "intercept",
        "r_squared",
        "sqrt_n_log_n_coefficient",
        "sqrt_n_log_n_residual",
    ]);
    let sizes: Vec<String> = fit.sizes.iter().map(usize::to_string).collect();
    report.push(vec![
        fit.mode.into(),
        sizes.join(";").as_str().into(),
        fit.exponent.into(),
        fit.intercept.into(),
        fit.r_squared.into(),
        fit.sqrt_n_log_n_coefficient.into(),
        fit.sqrt_n_log_n_residual.into(),
    ]);
    out.write(&format!("{stem}_fit"), &report, &config)?;
    for run in &runs {
        out.write(
            &format!("{stem}_m{}", run.cfg.m()),
            &series_table(run),
            &config,
        )?;
    }
    println!(
        "mode={} exponent={} r_squared={}",
        fit.mode, fit.exponent, fit.r_squared
    );
    Ok(out.written)
}

fn tulsi_compare(a: CompareArgs) -> Result<Vec<PathBuf>, CliError> {
    let cfg = LatticeConfig::new(a.m)?;
    let target = SearchTarget::new(cfg, a.walk.marked.0, a.walk.marked.1)?;
    let steps = resolve_steps(a.steps, cfg)?;
    let tulsi = mode_spec(ModeArg::Tulsi, &a.walk).resolve(cfg)?;
    let akr_run = search::run_search(cfg, &target, SearchMode::Akr, steps)?;
    let tulsi_run = search::run_search(cfg, &target, tulsi, steps)?;
    let summary = spectral::predict(cfg)?;

    let mut config = RunConfig::new("tulsi-compare", a.output.format).with_walk(&a.walk, true);
    config.m = Some(a.m);
    config.steps = Some(steps);
    config.delta = delta_of(&tulsi);

    let mut series = Table::new(&["t", "p_akr", "p_tulsi", "overlap_akr", "overlap_tulsi"]);
    for (x, y) in akr_run.series.iter().zip(&tulsi_run.series) {
        series.push(vec![
            x.t.into(),
            x.p_support.into(),
            y.p_support.into(),
            x.overlap_sq.into(),
            y.overlap_sq.into(),
        ]);
    }
    let mut s = Table::new(RUN_SUMMARY_COLUMNS);
    s.push(summary_row(&akr_run, &summary, None));
    s.push(summary_row(&tulsi_run, &summary, None));
    let mut out = Output::new(&a.output);
    out.write(&format!("tulsi_compare_m{}", a.m), &series, &config)?;
    out.write(&format!("tulsi_compare_m{}_summary", a.m), &s, &config)?;
    println!(
        "m={} akr p*={} at t={}; tulsi p*={} at t={}",
        a.m, akr_run.p_star, akr_run.t_star, tulsi_run.p_star, tulsi_run.t_star
    );
    Ok(out.written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_parse() {
        assert_eq!("auto".parse::<Steps>(), Ok(Steps::Auto));
        assert_eq!("12".parse::<Steps>(), Ok(Steps::Fixed(12)));
        assert!("-3".parse::<Steps>().is_err());
    }

    #[test]
    fn cell_parse() {
        assert_eq!(parse_cell("3,5"), Ok((3, 5)));
        assert_eq!(parse_cell(" 3, 5"), Ok((3, 5)));
        assert!(parse_cell("3").is_err());
        assert!(parse_cell("a,1").is_err());
    }

    #[test]
    fn csv_render_has_header_and_rows() {
        let mut t = Table::new(SERIES_COLUMNS);
        t.push(vec![0usize.into(), 0.5.into(), Cell::Empty]);
        let mut cfg = RunConfig::new("simulate", Format::Csv);
        cfg.m = Some(4);
        let text = t.render(&cfg);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("# hexsearch {VERSION}"));
        assert!(lines[1].starts_with("# config: {\"command\":\"simulate\",\"m\":4"));
        assert_eq!(lines[2], "t,p_support,overlap_sq");
        assert_eq!(lines[3], "0,0.5,");
    }

    #[test]
    fn json_render_mirrors_columns() {
        let mut t = Table::new(SERIES_COLUMNS);
        t.push(vec![1usize.into(), 0.25.into(), 0.125.into()]);
        let text = t.render(&RunConfig::new("simulate", Format::Json));
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["rows"][0]["t"], json!(1));
        assert_eq!(v["rows"][0]["overlap_sq"], json!(0.125));
        assert_eq!(v["config"]["command"], json!("simulate"));
    }

    #[test]
    fn numerical_errors_exit_two() {
        let e = CliError::Lib(Error::SingularAmplitude {
            k1: 1,
            k2: 2,
            cos_theta: 0.0,
            numerator: 1.0,
        });
        assert_eq!(e.exit_code(), 2);
        assert_eq!(CliError::Lib(Error::LatticeTooSmall(1)).exit_code(), 1);
        assert_eq!(CliError::Usage(String::new()).exit_code(), 1);
    }
}
