//! Command-line front end: argument parsing, configuration files, sweeps and
//! figure reproduction.
//!
//! Exit codes: 0 on success, 1 for bad input or I/O problems, 2 when a
//! numerical method fails to converge.

pub mod config;
pub mod figures;
pub mod selftest;
pub mod sweep;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::channels::ChannelKind;
use crate::entanglement::{optimal_concurrence_with, Branch, OptimizeOptions};
use crate::error::Error;
use crate::qslt::qslt_ratio;
use crate::spacetime::Scenario;

use config::{parse_config, Axis, ConfigError, ConfigFile, OutputFormat, SweepConfig};
use figures::{reproduce, FigureId, FigureSpec, ReproduceError};
use sweep::{manifest_to_string, run_sweep, sweep_manifest, SweepError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "QSLT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "qslt", version, about = "Quantum speed limit time ratios for a tripartite state near a Schwarzschild black hole")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ratio τ_QSL/τ for one parameter point.
    Eval(EvalArgs),
    /// One-dimensional sweep, from flags or a TOML file.
    Sweep(SweepArgs),
    /// Initial concurrence minimising the ratio.
    OptimalC(OptimalArgs),
    /// Regenerate the data behind a figure.
    Reproduce(ReproduceArgs),
    /// Cross-check the numerical routes against their analytic counterparts.
    Selftest,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Hawking temperature.
    #[arg(long, conflicts_with = "mass")]
    pub temperature: Option<f64>,
    /// Black-hole mass; sets T = 1/(8πM).
    #[arg(long)]
    pub mass: Option<f64>,
}

impl StateArgs {
    fn temperature(&self) -> Result<f64, Failure> {
        match (self.temperature, self.mass) {
            (Some(t), None) => Ok(t),
            (None, Some(m)) => Ok(crate::spacetime::hawking_temperature(m)?),
            _ => Err(Failure::Usage("one of --temperature or --mass is required".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub channel: ChannelKind,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long = "p-tau")]
    pub p_tau: f64,
    #[command(flatten)]
    pub state: StateArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// TOML sweep or figure file. Its values take precedence over flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub channel: Option<ChannelKind>,
    #[arg(long, value_enum)]
    pub axis: Option<Axis>,
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long)]
    pub temperature: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long = "p-tau")]
    pub p_tau: Option<f64>,
    #[arg(long, default_value_t = Branch::Lower)]
    pub branch: Branch,
    /// Data file; a manifest is written next to it. Stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct OptimalArgs {
    #[arg(long)]
    pub channel: ChannelKind,
    #[arg(long = "p-tau")]
    pub p_tau: f64,
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value_t = Branch::Lower)]
    pub branch: Branch,
    #[arg(long, default_value_t = crate::entanglement::DEFAULT_GRID_POINTS)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub figure: FigureId,
    #[arg(long, default_value = ".")]
    pub output_dir: PathBuf,
}

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Compute(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        Failure::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Config(c) => Failure::Config(c),
            SweepError::Compute(c) => Failure::Compute(c),
        }
    }
}

impl From<ReproduceError> for Failure {
    fn from(e: ReproduceError) -> Self {
        match e {
            ReproduceError::Compute(c) => Failure::Compute(c),
            ReproduceError::Io { path, source } => Failure::Io { path, source },
        }
    }
}

fn print_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("json");
    writeln!(out, "{text}").map_err(|e| Failure::io(Path::new("<stdout>"), e))
}

fn eval(args: &EvalArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let t = args.state.temperature()?;
    let scenario = Scenario::new(args.alpha, args.state.omega, t)?;
    let r = qslt_ratio(args.channel, &scenario, args.p_tau)?;
    print_json(
        out,
        &json!({
            "channel": args.channel.label(),
            "alpha": args.alpha,
            "omega": args.state.omega,
            "temperature": t,
            "p_tau": args.p_tau,
            "ratio": r.ratio,
            "distance": r.distance,
            "path_length": r.path_length,
            "frozen": r.frozen,
            "quadrature_error_estimate": r.quadrature_error_estimate,
        }),
    )
}

fn optimal(args: &OptimalArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let t = args.state.temperature()?;
    let options = OptimizeOptions {
        branch: args.branch,
        grid_points: args.grid,
        ..OptimizeOptions::default()
    };
    let r = optimal_concurrence_with(args.channel, args.state.omega, t, args.p_tau, options)?;
    let value = serde_json::to_value(r).expect("json");
    print_json(out, &value)
}

/// Builds the sweep from flags alone.
fn sweep_from_flags(args: &SweepArgs) -> Result<SweepConfig, Failure> {
    let missing = |name: &str| Failure::Usage(format!("--{name} is required without --config"));
    Ok(SweepConfig {
        channel: args.channel.ok_or_else(|| missing("channel"))?,
        axis: args.axis.ok_or_else(|| missing("axis"))?,
        range: [
            args.from.ok_or_else(|| missing("from"))?,
            args.to.ok_or_else(|| missing("to"))?,
        ],
        count: args.count.ok_or_else(|| missing("count"))?,
        omega: args.omega,
        temperature: args.temperature,
        mass: args.mass,
        alpha: args.alpha,
        p_tau: args.p_tau,
        branch: args.branch,
        output: args.output.clone(),
        format: args.format,
    })
}

fn manifest_path(data: &Path) -> PathBuf {
    let stem = data
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".into());
    data.with_file_name(format!("{stem}_manifest.json"))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

fn sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let config = match &args.config {
        None => sweep_from_flags(args)?,
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
            match parse_config(&text)? {
                ConfigFile::Sweep(mut c) => {
                    if c.output.is_none() {
                        c.output = args.output.clone();
                    }
                    c
                }
                ConfigFile::Figure { spec, output_dir } => {
                    let dir = output_dir
                        .or_else(|| args.output.clone())
                        .unwrap_or_else(|| PathBuf::from("."));
                    return reproduce_into(&spec, &dir, out);
                }
            }
        }
    };
    let data = run_sweep(&config)?;
    let body = match config.format {
        OutputFormat::Csv => data.to_csv(),
        OutputFormat::Json => data.to_json(),
    };
    match &config.output {
        None => out
            .write_all(body.as_bytes())
            .map_err(|e| Failure::io(Path::new("<stdout>"), e)),
        Some(path) => {
            write_file(path, &body)?;
            let name = path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let manifest = sweep_manifest(&config, &[name]);
            write_file(&manifest_path(path), &manifest_to_string(&manifest))
        }
    }
}

fn reproduce_into(spec: &FigureSpec, dir: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    for path in reproduce(spec, dir)? {
        writeln!(out, "{}", path.display()).map_err(|e| Failure::io(Path::new("<stdout>"), e))?;
    }
    Ok(())
}

fn selftest(out: &mut dyn Write) -> Result<bool, Failure> {
    let mut all = true;
    for check in selftest::run_selftest()? {
        let status = if check.passed() { "PASS" } else { "FAIL" };
        all &= check.passed();
        writeln!(
            out,
            "{status}  {}  (worst {:.3e}, tolerance {:.0e})",
            check.name, check.worst, check.tolerance
        )
        .map_err(|e| Failure::io(Path::new("<stdout>"), e))?;
    }
    Ok(all)
}

fn configure_threads() {
    let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) else {
        return;
    };
    if n > 0 {
        // A second initialisation in the same process is harmless to ignore.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Executes a parsed command, writing results to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Eval(a) => eval(a, out)?,
        Command::Sweep(a) => sweep(a, out)?,
        Command::OptimalC(a) => optimal(a, out)?,
        Command::Reproduce(a) => reproduce_into(&FigureSpec::new(a.figure), &a.output_dir, out)?,
        Command::Selftest => {
            if !selftest(out)? {
                return Ok(EXIT_NUMERICAL);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    configure_threads();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> (Result<i32, Failure>, String) {
        let cli = Cli::try_parse_from(args).unwrap();
        let mut buf = Vec::new();
        let r = execute(&cli, &mut buf);
        (r, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn eval_prints_ratio() {
        let (r, out) = exec(&["qslt", "eval", "--channel", "pfc", "--alpha", "0.5", "--temperature", "1", "--p-tau", "0.25"]);
        assert_eq!(r.unwrap(), EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["ratio"].as_f64().unwrap() - 0.6).abs() < 1e-8);
    }

    #[test]
    fn bad_input_maps_to_exit_one() {
        let (r, _) = exec(&["qslt", "eval", "--channel", "dpc", "--alpha", "0.5", "--temperature", "1", "--p-tau", "1.5"]);
        assert_eq!(r.unwrap_err().exit_code(), EXIT_INPUT);
        let (r, _) = exec(&["qslt", "eval", "--channel", "dpc", "--alpha", "0.5", "--p-tau", "0.5"]);
        assert_eq!(r.unwrap_err().exit_code(), EXIT_INPUT);
    }

    #[test]
    fn numerical_failure_maps_to_exit_two() {
        let e = Failure::Compute(Error::QuadratureNoConvergence {
            partial: 1.0,
            error_estimate: 1.0,
            max_depth: 40,
        });
        assert_eq!(e.exit_code(), EXIT_NUMERICAL);
    }

    #[test]
    fn sweep_flags_to_stdout() {
        let (r, out) = exec(&[
            "qslt", "sweep", "--channel", "bfc", "--axis", "p-tau", "--from", "0", "--to", "1", "--count", "5",
            "--alpha", "0.25", "--temperature", "3",
        ]);
        assert_eq!(r.unwrap(), EXIT_OK);
        assert_eq!(out.lines().count(), 6);
        assert!(out.starts_with("p_tau,ratio"));
    }

    #[test]
    fn manifest_sits_next_to_data() {
        assert_eq!(manifest_path(Path::new("out/run.csv")), PathBuf::from("out/run_manifest.json"));
    }
}
