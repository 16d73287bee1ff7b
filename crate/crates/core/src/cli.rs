//! The `s1tv` command line tool.
//!
//! Every subcommand prints one JSON line on success. Exit codes: 0 on
//! success, 1 for invalid arguments or malformed input, 2 for I/O failures.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{read_phase_data, write_phase_data, Format};
use crate::lifting::{check_convergence_conditions, check_convergence_conditions_1d, d_inf_between, ConvergenceCheck};
use crate::phase::{PhaseImage, PhaseSignal};
use crate::solver::{cppa_denoise_1d, cppa_denoise_2d, energy_1d, energy_2d, Params1D, Params2D};
use crate::synth::{cmse, synth_signal_1d, synth_surface_2d, NoiseSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "s1tv", version, about = "Total variation denoising of wrapped phase data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Denoise a signal with F + alpha TV1 + beta TV2.
    Denoise1d(Denoise1dArgs),
    /// Denoise an image with F + alpha TV1 + beta TV2hv + gamma TV2d.
    Denoise2d(Denoise2dArgs),
    /// Write a synthetic signal or surface.
    Synth(SynthArgs),
    /// Add wrapped Gaussian noise.
    Noise(NoiseArgs),
    /// Compare two phase files.
    Metrics(MetricsArgs),
    /// Evaluate the sufficient conditions for convergence to a global minimizer.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct IoArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Output format; inferred from the extension when omitted.
    #[arg(long)]
    pub format: Option<Format>,
    /// Input format; inferred from the extension when omitted.
    #[arg(long)]
    pub in_format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long, default_value_t = std::f64::consts::PI)]
    pub lambda0: f64,
    #[arg(long, default_value_t = 4000)]
    pub cycles: usize,
    /// Stop once a cycle moves the iterate by less than this.
    #[arg(long)]
    pub early_stop: Option<f64>,
    /// Ground truth for reporting the cMSE.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Denoise1dArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
}

#[derive(Debug, Args)]
pub struct Weights2d {
    /// TV1 weight for vertical differences.
    #[arg(long, default_value_t = 0.0)]
    pub alpha1: f64,
    /// TV1 weight for horizontal differences.
    #[arg(long, default_value_t = 0.0)]
    pub alpha2: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta2: f64,
    /// Weight of the mixed diagonal term.
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
}

#[derive(Debug, Args)]
pub struct Denoise2dArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub weights: Weights2d,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, conflicts_with = "surface2d", required_unless_present = "surface2d")]
    pub signal1d: bool,
    #[arg(long)]
    pub surface2d: bool,
    /// Samples (signal) or rows (surface).
    #[arg(long)]
    pub n: usize,
    /// Columns of the surface; defaults to `n`.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub format: Option<Format>,
    /// Also write the unwrapped surface (mat-text).
    #[arg(long)]
    pub unwrapped_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub format: Option<Format>,
    /// Signal weights; used when the input is a single row or column.
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[command(flatten)]
    pub weights: Weights2d,
    #[arg(long, default_value_t = std::f64::consts::PI)]
    pub lambda0: f64,
    #[arg(long, default_value_t = 4000)]
    pub cycles: usize,
    #[arg(long)]
    pub epsilon: f64,
}

impl clap::builder::ValueParserFactory for Format {
    type Parser = clap::builder::ValueParser;

    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<Format>().map_err(|e| e.to_string()))
    }
}

/// One-line JSON report.
#[derive(Debug, Default, Serialize)]
pub struct Summary {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cmse: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycles: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_inf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckSummary>,
    pub wall_time_s: f64,
}

#[derive(Debug, Serialize)]
pub struct CheckSummary {
    pub d_inf_f: f64,
    pub tv_budget: f64,
    pub max_weight: f64,
    pub iterate_radius: f64,
    pub dense: bool,
    pub weights_small: bool,
    pub schedule_small: bool,
    pub all_satisfied: bool,
}

impl From<&ConvergenceCheck> for CheckSummary {
    fn from(c: &ConvergenceCheck) -> Self {
        CheckSummary {
            d_inf_f: c.d_inf_f,
            tv_budget: c.tv_budget,
            max_weight: c.max_weight,
            iterate_radius: c.iterate_radius(),
            dense: c.dense(),
            weights_small: c.weights_small(),
            schedule_small: c.schedule_small(),
            all_satisfied: c.all_satisfied(),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. The JSON summary goes to stdout, errors to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(summary) => {
            println!("{}", serde_json::to_string(&summary).expect("summary serialises"));
            EXIT_OK
        }
        Err(e) => {
            eprintln!("s1tv: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_io() {
        EXIT_IO
    } else {
        EXIT_INVALID
    }
}

/// Runs a parsed command.
pub fn execute(command: &Command) -> Result<Summary> {
    let start = Instant::now();
    let mut summary = match command {
        Command::Denoise1d(a) => denoise1d(a)?,
        Command::Denoise2d(a) => denoise2d(a)?,
        Command::Synth(a) => synth(a)?,
        Command::Noise(a) => noise(a)?,
        Command::Metrics(a) => metrics(a)?,
        Command::Check(a) => check(a)?,
    };
    summary.wall_time_s = start.elapsed().as_secs_f64();
    Ok(summary)
}

/// Ground truth, in the format implied by its own extension.
fn read_truth(path: Option<&Path>, shape: (usize, usize)) -> Result<Option<PhaseImage>> {
    let Some(path) = path else { return Ok(None) };
    let truth = read_phase_data(path, None)?;
    if truth.shape() != shape && !(truth.rows() * truth.cols() == shape.0 * shape.1 && (shape.0 == 1 || shape.1 == 1)) {
        return Err(Error::invalid(format!(
            "truth has shape {:?}, data has shape {:?}",
            truth.shape(),
            shape
        )));
    }
    Ok(Some(truth))
}

fn denoise1d(a: &Denoise1dArgs) -> Result<Summary> {
    let params = Params1D {
        early_stop: a.schedule.early_stop,
        ..Params1D::new(a.alpha, a.beta)
            .with_lambda0(a.schedule.lambda0)
            .with_cycles(a.schedule.cycles)
    };
    params.validate()?;
    let f = PhaseSignal::try_from(read_phase_data(&a.io.input, a.io.in_format)?)?;
    let truth = read_truth(a.schedule.truth.as_deref(), (1, f.len()))?;
    let report = cppa_denoise_1d(&f, &params)?;
    let energy = energy_1d(&report.result, &f, &params)?;
    let cmse = match truth {
        Some(t) => Some(cmse(&report.result, &PhaseSignal::try_from(t)?)?),
        None => None,
    };
    let n = report.result.len();
    let out = PhaseImage::from(report.result);
    write_phase_data(&a.io.out, &out, a.io.format)?;
    Ok(Summary {
        command: "denoise1d",
        rows: Some(1),
        cols: Some(n),
        cmse,
        energy: Some(energy),
        cycles: Some(report.cycles_run),
        ..Summary::default()
    })
}

fn params_2d(w: &Weights2d) -> Params2D {
    Params2D::new([w.alpha1, w.alpha2], [w.beta1, w.beta2], w.gamma)
}

fn denoise2d(a: &Denoise2dArgs) -> Result<Summary> {
    let mut params = params_2d(&a.weights)
        .with_lambda0(a.schedule.lambda0)
        .with_cycles(a.schedule.cycles);
    params.early_stop = a.schedule.early_stop;
    params.record_energy = false;
    params.validate()?;
    let f = read_phase_data(&a.io.input, a.io.in_format)?;
    let truth = read_truth(a.schedule.truth.as_deref(), f.shape())?;
    let report = cppa_denoise_2d(&f, &params)?;
    let energy = energy_2d(&report.result, &f, &params)?;
    let cmse = match truth {
        Some(t) => Some(cmse(&report.result, &t)?),
        None => None,
    };
    write_phase_data(&a.io.out, &report.result, a.io.format)?;
    Ok(Summary {
        command: "denoise2d",
        rows: Some(f.rows()),
        cols: Some(f.cols()),
        cmse,
        energy: Some(energy),
        cycles: Some(report.cycles_run),
        ..Summary::default()
    })
}

fn synth(a: &SynthArgs) -> Result<Summary> {
    let img = if a.signal1d {
        if a.m.is_some() || a.unwrapped_out.is_some() {
            return Err(Error::invalid("--m and --unwrapped-out only apply to --surface2d"));
        }
        PhaseImage::from(synth_signal_1d(a.n)?)
    } else {
        let m = a.m.unwrap_or(a.n);
        let s = synth_surface_2d(a.n, m)?;
        if let Some(path) = &a.unwrapped_out {
            let bytes: String = s
                .unwrapped
                .chunks(m)
                .map(|row| row.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(" ") + "\n")
                .collect();
            crate::io::write_atomic(path, bytes.as_bytes())?;
        }
        s.wrapped
    };
    write_phase_data(&a.out, &img, a.format)?;
    Ok(Summary {
        command: "synth",
        rows: Some(img.rows()),
        cols: Some(img.cols()),
        ..Summary::default()
    })
}

fn noise(a: &NoiseArgs) -> Result<Summary> {
    let spec = NoiseSpec::new(a.sigma, a.seed);
    let f = read_phase_data(&a.io.input, a.io.in_format)?;
    let noisy = spec.apply_image(&f)?;
    write_phase_data(&a.io.out, &noisy, a.io.format)?;
    Ok(Summary {
        command: "noise",
        rows: Some(f.rows()),
        cols: Some(f.cols()),
        cmse: Some(cmse(&noisy, &f)?),
        ..Summary::default()
    })
}

fn metrics(a: &MetricsArgs) -> Result<Summary> {
    let x = read_phase_data(&a.a, a.format)?;
    let y = read_phase_data(&a.b, a.format)?;
    Ok(Summary {
        command: "metrics",
        rows: Some(x.rows()),
        cols: Some(x.cols()),
        cmse: Some(cmse(&x, &y)?),
        d_inf: Some(d_inf_between(&x, &y)?),
        ..Summary::default()
    })
}

fn check(a: &CheckArgs) -> Result<Summary> {
    let f = read_phase_data(&a.input, a.format)?;
    let report = if f.rows() == 1 || f.cols() == 1 {
        let params = Params1D::new(a.alpha, a.beta);
        params.validate()?;
        check_convergence_conditions_1d(&PhaseSignal::try_from(f.clone())?, &params, a.lambda0, a.cycles, a.epsilon)?
    } else {
        let params = params_2d(&a.weights);
        params.validate()?;
        check_convergence_conditions(&f, &params, a.lambda0, a.cycles, a.epsilon)?
    };
    Ok(Summary {
        command: "check",
        rows: Some(f.rows()),
        cols: Some(f.cols()),
        check: Some(CheckSummary::from(&report)),
        ..Summary::default()
    })
}
