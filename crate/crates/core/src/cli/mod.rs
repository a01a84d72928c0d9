//! `magtoffoli` command-line front end.
//!
//! Exit codes: 0 success / gate pass, 1 gate fail, 2 usage, 3 numeric or I/O
//! failure, 4 infeasible design.

mod svg;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::analytics::{half_period_flip, period_numeric};
use crate::design::{
    design_collinear_a0, design_collinear_aniso, design_noncollinear, to_physical_units_with, DesignSolution,
};
use crate::dynamics::{integrate_with_stride, CollinearModel, FieldSchedule, Model, NonCollinearModel, DEFAULT_DT};
use crate::error::Error;
use crate::spin::{encode_bit, Axis3, ControlConfig, DEFAULT_THRESHOLD};
use crate::verify::{run_truth_table, GateReport};

pub use svg::render as render_svg;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_GATE_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_INFEASIBLE: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "magtoffoli",
    version,
    about = "Classical-spin Toffoli gate simulator and designer"
)]
pub struct Cli {
    /// Worker threads for verify/sweep fan-out (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one control configuration and write the trajectory as CSV.
    Simulate(SimulateArgs),
    /// Solve the gate-time conditions and print the design as JSON.
    Design(DesignArgs),
    /// Run the eight truth-table rows and print a JSON gate report.
    Verify(VerifyArgs),
    /// Evaluate a design residual or gate error over a parameter grid (CSV).
    Sweep(SweepArgs),
    /// Convert a dimensionless gate into physical units.
    Units(UnitsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Collinear,
    Noncollinear,
    CollinearA0,
    CollinearAniso,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    /// Easy-axis anisotropy of the target.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    /// Longitudinal field (collinear).
    #[arg(long = "h-par", default_value_t = -2.0, allow_negative_numbers = true)]
    pub h_par: f64,
    /// Transverse drive on the target (collinear).
    #[arg(long = "h-perp", allow_negative_numbers = true)]
    pub h_perp: Option<f64>,
    /// Gilbert damping.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eta: f64,
    /// Half-angle between the control axes, radians (non-collinear).
    #[arg(long, conflicts_with = "phi_deg", allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Half-angle between the control axes, degrees (non-collinear).
    #[arg(long = "phi-deg", allow_negative_numbers = true)]
    pub phi_deg: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Control configuration: 00, 01, 10 or 11.
    #[arg(long)]
    pub config: String,
    #[arg(long = "t-end")]
    pub t_end: f64,
    #[arg(long, default_value_t = DEFAULT_DT)]
    pub dt: f64,
    /// Switch the drive off at this time (default: always on).
    #[arg(long = "t-off")]
    pub t_off: Option<f64>,
    /// Initial target bit (1 = north pole).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub target: u8,
    /// Record every k-th step (default: every step, decimated above 1e5 steps).
    #[arg(long)]
    pub stride: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write (x,z)/(y,z) projections as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    /// Gate time.
    #[arg(long = "t-g", conflicts_with = "auto")]
    pub t_g: Option<f64>,
    /// Take the gate time (and the free field or angle) from the matching design.
    #[arg(long)]
    pub auto: bool,
    /// Drive-off relaxation time after the gate.
    #[arg(long, default_value_t = 0.0)]
    pub relax: f64,
    #[arg(long, default_value_t = DEFAULT_DT)]
    pub dt: f64,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    /// Design residual (and solved field/angle).
    Design,
    /// Truth-table max projection error.
    Gate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Param {
    N,
    M,
    A,
    HPar,
    HPerp,
    Eta,
    Phi,
    PhiDeg,
    TG,
}

impl Param {
    fn name(self) -> &'static str {
        match self {
            Param::N => "n",
            Param::M => "m",
            Param::A => "a",
            Param::HPar => "h_par",
            Param::HPerp => "h_perp",
            Param::Eta => "eta",
            Param::Phi => "phi",
            Param::PhiDeg => "phi_deg",
            Param::TG => "t_G",
        }
    }

    fn is_integer(self) -> bool {
        matches!(self, Param::N | Param::M)
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = Metric::Design)]
    pub metric: Metric,
    #[arg(long, value_enum)]
    pub param: Param,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    /// Number of intervals; the grid has steps + 1 points.
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    /// Fixed gate time for the gate metric (default: from the design).
    #[arg(long = "t-g")]
    pub t_g: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub relax: f64,
    #[arg(long, default_value_t = DEFAULT_DT)]
    pub dt: f64,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct UnitsArgs {
    /// Control-target exchange in kelvin.
    #[arg(long = "j-kelvin")]
    pub j_kelvin: f64,
    /// Spin length S.
    #[arg(long)]
    pub spin: f64,
    #[arg(long = "g-s", default_value_t = 2.0)]
    pub g_s: f64,
    /// Dimensionless gate time.
    #[arg(long = "t-g")]
    pub t_g: f64,
    /// Anisotropy in kelvin (default: the minimum 2J).
    #[arg(long = "a-kelvin")]
    pub a_kelvin: Option<f64>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
    Io(PathBuf, io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Lib(Error::Infeasible(_) | Error::Confinement { .. }) => EXIT_INFEASIBLE,
            CliError::Lib(e) if e.is_numeric() => EXIT_NUMERIC,
            CliError::Lib(_) => EXIT_USAGE,
            CliError::Io(..) => EXIT_NUMERIC,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Lib(e) => e.fmt(f),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Entry point used by the binary.
pub fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    ExitCode::from(run(std::env::args_os(), &mut out))
}

/// Parses `args` (including the program name), runs the command, and returns the exit code.
pub fn run<I, T, W>(args: I, out: &mut W) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("magtoffoli: {e}");
            e.exit_code()
        }
    }
}

fn execute<W: Write>(cli: Cli, out: &mut W) -> CliResult<u8> {
    let pool = match cli.threads {
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(e.to_string()))?,
        ),
        None => None,
    };
    let run = || {
        let mut buf = Vec::new();
        let code = match cli.command {
            Command::Simulate(args) => cmd_simulate(args, &mut buf),
            Command::Design(args) => cmd_design(args, &mut buf),
            Command::Verify(args) => cmd_verify(args, &mut buf),
            Command::Sweep(args) => cmd_sweep(args, &mut buf),
            Command::Units(args) => cmd_units(args, &mut buf),
        };
        (code, buf)
    };
    let (code, buf) = match pool {
        Some(pool) => pool.install(run),
        None => run(),
    };
    out.write_all(&buf).and_then(|_| out.flush()).map_err(stdout_err)?;
    code
}

/// Numeric knobs shared by every command, after flag validation.
#[derive(Debug, Clone, Copy)]
struct Knobs {
    scheme: SchemeArg,
    a: f64,
    h_par: f64,
    h_perp: Option<f64>,
    eta: f64,
    phi: Option<f64>,
    n: Option<u32>,
    m: Option<u32>,
    t_g: Option<f64>,
}

impl Knobs {
    fn new(model: &ModelArgs, n: Option<u32>, m: Option<u32>, t_g: Option<f64>) -> CliResult<Self> {
        let phi = match (model.phi, model.phi_deg) {
            (Some(_), Some(_)) => return Err(CliError::Usage("give only one of --phi and --phi-deg".into())),
            (Some(p), None) => Some(p),
            (None, Some(d)) => Some(d.to_radians()),
            (None, None) => None,
        };
        let knobs = Knobs {
            scheme: model.scheme,
            a: model.a,
            h_par: model.h_par,
            h_perp: model.h_perp,
            eta: model.eta,
            phi,
            n,
            m,
            t_g,
        };
        for (name, v) in [("a", knobs.a), ("h-par", knobs.h_par), ("eta", knobs.eta)] {
            if !v.is_finite() {
                return Err(CliError::Usage(format!("--{name} must be finite")));
            }
        }
        Ok(knobs)
    }

    fn set(&mut self, param: Param, value: f64) {
        match param {
            Param::N => self.n = Some(value as u32),
            Param::M => self.m = Some(value as u32),
            Param::A => self.a = value,
            Param::HPar => self.h_par = value,
            Param::HPerp => self.h_perp = Some(value),
            Param::Eta => self.eta = value,
            Param::Phi => self.phi = Some(value),
            Param::PhiDeg => self.phi = Some(value.to_radians()),
            Param::TG => self.t_g = Some(value),
        }
    }

    fn require_m(&self) -> CliResult<u32> {
        self.m
            .ok_or_else(|| CliError::Usage("--m is required for this scheme".into()))
    }

    fn require_h_perp(&self) -> CliResult<f64> {
        self.h_perp
            .ok_or_else(|| CliError::Usage("--h-perp is required for the collinear scheme".into()))
    }

    fn collinear(&self, h_perp: f64) -> CliResult<CollinearModel> {
        Ok(CollinearModel::new(self.a, self.h_par, h_perp, self.eta)?)
    }

    fn model(&self) -> CliResult<Model> {
        match self.scheme {
            SchemeArg::Noncollinear => {
                let phi = self.phi.ok_or_else(|| {
                    CliError::Usage("--phi or --phi-deg is required for the non-collinear scheme".into())
                })?;
                Ok(Model::NonCollinear(NonCollinearModel::new(phi, self.a, self.eta)?))
            }
            _ => Ok(Model::Collinear(self.collinear(self.require_h_perp()?)?)),
        }
    }

    fn design(&self) -> CliResult<DesignSolution> {
        let n = self.n.unwrap_or(0);
        match self.scheme {
            SchemeArg::CollinearA0 => Ok(design_collinear_a0(n, self.require_m()?)?),
            SchemeArg::Noncollinear => Ok(design_noncollinear(n, self.require_m()?, self.a)?),
            SchemeArg::CollinearAniso => Ok(design_collinear_aniso(&self.collinear(self.require_h_perp()?)?, n)?),
            SchemeArg::Collinear => Err(CliError::Usage(
                "design needs --scheme collinear-a0, collinear-aniso or noncollinear".into(),
            )),
        }
    }

    /// Model and gate time for a truth-table run.
    fn gate(&self, auto: bool) -> CliResult<(Model, f64)> {
        if !auto {
            let t_g = self.t_g.ok_or_else(|| CliError::Usage("give --t-g or --auto".into()))?;
            return Ok((self.model()?, t_g));
        }
        let n = self.n.unwrap_or(0);
        match self.scheme {
            SchemeArg::Noncollinear => {
                let d = design_noncollinear(n, self.require_m()?, self.a)?;
                let phi = d.phi.expect("non-collinear design sets phi");
                Ok((
                    Model::NonCollinear(NonCollinearModel::new(phi, self.a, self.eta)?),
                    d.t_gate,
                ))
            }
            SchemeArg::CollinearA0 => self.collinear_a0_gate(n),
            SchemeArg::Collinear | SchemeArg::CollinearAniso if self.a == 0.0 && self.h_perp.is_none() => {
                self.collinear_a0_gate(n)
            }
            SchemeArg::Collinear | SchemeArg::CollinearAniso => {
                let model = self.collinear(self.require_h_perp()?)?;
                let half_turns = 2.0 * n as f64 + 1.0;
                let h_tilde = model.h_tilde(ControlConfig::C11);
                let t_g = if h_tilde == 0.0 {
                    half_turns * half_period_flip(model.h_perp, model.a)?
                } else {
                    let info = period_numeric(&model, ControlConfig::C11, 1.0)?;
                    if !info.flips {
                        return Err(Error::Infeasible("[11] orbit does not reach the opposite pole".into()).into());
                    }
                    0.5 * half_turns * info.period
                };
                Ok((Model::Collinear(model), t_g))
            }
        }
    }

    fn collinear_a0_gate(&self, n: u32) -> CliResult<(Model, f64)> {
        let d = design_collinear_a0(n, self.require_m()?)?;
        let h_perp = d.h_perp.expect("collinear design sets h_perp");
        Ok((
            Model::Collinear(CollinearModel::new(0.0, -2.0, h_perp, self.eta)?),
            d.t_gate,
        ))
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |e| CliError::Io(path.to_path_buf(), e)
}

fn stdout_err(e: io::Error) -> CliError {
    CliError::Io(PathBuf::from("<stdout>"), e)
}

fn cmd_simulate<W: Write>(args: SimulateArgs, out: &mut W) -> CliResult<u8> {
    let knobs = Knobs::new(&args.model, None, None, None)?;
    let model = knobs.model()?;
    let config: ControlConfig = args.config.parse()?;
    let schedule = match args.t_off {
        Some(t) => FieldSchedule::switch_off(t)?,
        None => FieldSchedule::AlwaysOn,
    };
    if !(args.t_end.is_finite() && args.t_end > 0.0 && args.dt > 0.0 && args.dt <= args.t_end) {
        return Err(CliError::Usage("need t-end > 0 and 0 < dt <= t-end".into()));
    }
    if args.stride == Some(0) {
        return Err(CliError::Usage("--stride must be at least 1".into()));
    }
    let s0 = encode_bit(args.target, Axis3::Z);
    let traj = integrate_with_stride(&model, config, s0, schedule, args.t_end, args.dt, args.stride)?;

    let mut w = create(&args.out)?;
    traj.write_csv(&mut w).map_err(io_err(&args.out))?;
    w.flush().map_err(io_err(&args.out))?;
    if let Some(path) = &args.svg {
        let mut w = create(path)?;
        w.write_all(svg::render(&traj).as_bytes()).map_err(io_err(path))?;
        w.flush().map_err(io_err(path))?;
    }
    let last = traj.last();
    writeln!(
        out,
        "wrote {} samples to {}; final s = ({:.6}, {:.6}, {:.6}) at t = {}",
        traj.samples.len(),
        args.out.display(),
        last.s.x(),
        last.s.y(),
        last.s.z(),
        last.t
    )
    .map_err(stdout_err)?;
    Ok(EXIT_PASS)
}

fn cmd_design<W: Write>(args: DesignArgs, out: &mut W) -> CliResult<u8> {
    let knobs = Knobs::new(&args.model, args.n, args.m, None)?;
    let d = knobs.design()?;
    let json = serde_json::to_string_pretty(&d).expect("design serializes");
    writeln!(out, "{json}").map_err(stdout_err)?;
    Ok(EXIT_PASS)
}

fn cmd_verify<W: Write>(args: VerifyArgs, out: &mut W) -> CliResult<u8> {
    let knobs = Knobs::new(&args.model, args.n, args.m, args.t_g)?;
    let (model, t_g) = knobs.gate(args.auto)?;
    let report = run_truth_table(
        &model,
        t_g,
        FieldSchedule::AlwaysOn,
        args.relax,
        args.dt,
        args.threshold,
    )?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(path) = &args.out {
        let mut w = create(path)?;
        writeln!(w, "{json}").map_err(io_err(path))?;
        w.flush().map_err(io_err(path))?;
    }
    writeln!(out, "{json}").map_err(stdout_err)?;
    if !report.pass {
        for r in report.failed_rows() {
            eprintln!(
                "row [{}{}] t={} expected {} decoded {} (proj_error {:.3e})",
                r.c1, r.c2, r.t_in, r.t_expected, r.decoded, r.proj_error
            );
        }
    }
    Ok(if report.pass { EXIT_PASS } else { EXIT_GATE_FAIL })
}

fn grid(args: &SweepArgs) -> CliResult<Vec<f64>> {
    if args.steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    if !(args.from.is_finite() && args.to.is_finite()) {
        return Err(CliError::Usage("--from and --to must be finite".into()));
    }
    let mut pts: Vec<f64> = (0..=args.steps)
        .map(|i| args.from + (args.to - args.from) * i as f64 / args.steps as f64)
        .collect();
    if args.param.is_integer() {
        if args.from.min(args.to) < 0.0 {
            return Err(CliError::Usage(format!(
                "--param {} must be non-negative",
                args.param.name()
            )));
        }
        pts.iter_mut().for_each(|v| *v = v.round());
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    Ok(pts)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn status_of(e: &CliError) -> &'static str {
    match e.exit_code() {
        EXIT_INFEASIBLE => "infeasible",
        EXIT_NUMERIC => "numeric-error",
        _ => "invalid",
    }
}

fn cmd_sweep<W: Write>(args: SweepArgs, out: &mut W) -> CliResult<u8> {
    let base = Knobs::new(&args.model, args.n, args.m, args.t_g)?;
    let points = grid(&args)?;
    if args.metric == Metric::Gate {
        crate::spin::validate_threshold(args.threshold)?;
    }
    let name = args.param.name();
    let rows: Vec<String> = points
        .par_iter()
        .map(|&v| {
            let mut k = base;
            k.set(args.param, v);
            match args.metric {
                Metric::Design => match k.design() {
                    Ok(d) => format!(
                        "{v},ok,{},{},{},{}",
                        d.t_gate,
                        fmt_opt(d.h_perp),
                        fmt_opt(d.phi),
                        d.residual
                    ),
                    Err(e) => format!("{v},{},,,,", status_of(&e)),
                },
                Metric::Gate => {
                    let res: CliResult<(f64, GateReport)> = k.gate(k.t_g.is_none()).and_then(|(model, t_g)| {
                        let r = run_truth_table(
                            &model,
                            t_g,
                            FieldSchedule::AlwaysOn,
                            args.relax,
                            args.dt,
                            args.threshold,
                        )?;
                        Ok((t_g, r))
                    });
                    match res {
                        Ok((t_g, r)) => format!("{v},ok,{t_g},{},{}", r.pass, r.max_proj_error),
                        Err(e) => format!("{v},{},,,", status_of(&e)),
                    }
                }
            }
        })
        .collect();
    let header = match args.metric {
        Metric::Design => format!("{name},status,t_G,h_perp,phi,residual"),
        Metric::Gate => format!("{name},status,t_G,pass,max_proj_error"),
    };
    let write_all = |w: &mut dyn Write| -> io::Result<()> {
        writeln!(w, "{header}")?;
        for r in &rows {
            writeln!(w, "{r}")?;
        }
        w.flush()
    };
    match &args.out {
        Some(path) => {
            let mut w = create(path)?;
            write_all(&mut w).map_err(io_err(path))?;
        }
        None => write_all(out).map_err(stdout_err)?,
    }
    Ok(EXIT_PASS)
}

fn cmd_units<W: Write>(args: UnitsArgs, out: &mut W) -> CliResult<u8> {
    let est = to_physical_units_with(args.j_kelvin, args.spin, args.g_s, args.t_g, args.a_kelvin)?;
    let json = serde_json::to_string_pretty(&est).expect("estimate serializes");
    writeln!(out, "{json}").map_err(stdout_err)?;
    Ok(EXIT_PASS)
}
