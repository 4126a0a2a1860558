//! Batch front end: run configurations, commands and deterministic reports.
//!
//! A run configuration is a JSON document
//!
//! ```json
//! {"stack": {...}, "kappa": [0.0, 0.0],
//!  "omega_grid": {"re_min": 0.2, "re_max": 2.0, "re_steps": 5,
//!                 "im_min": 0.2, "im_max": 2.0, "im_steps": 5},
//!  "z0": -1.0, "z1": 1.0,
//!  "options": {"tol": 1e-5, "quad_points": 2000}}
//! ```
//!
//! Every command writes a report `{config_echo, command, results, anomalies,
//! versions}` with floats printed to 17 significant digits. Wall-clock time
//! only goes into a separate `.meta.json` sidecar, so reports from identical
//! configurations are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analyticity::{self, CertifyOptions, OmegaGrid, CR_THRESHOLD};
use crate::config::{self, MatrixDoc, StackDoc};
use crate::dtn::{self, DtnOptions};
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, C64};
use crate::stack::{self, StackSpec};
use crate::transfer::{self, TangentialState};
use crate::tubular::{self, TrajectorySpec};

pub const REPORT_SCHEMA: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Transfer matrix T(z0, z1) at each grid frequency.
    Transfer,
    /// DtN matrix with flux-form and passivity margins.
    Dtn,
    /// Herglotz certificate over the frequency grid.
    Certify,
    /// Energy balance for the solution with ψ(z0) = psi0.
    Energy,
    /// Tangential DtN entries and margins over the grid, as CSV.
    Sweep,
    /// Trajectory roundtrip and Herglotz certificate along s ↦ Z(s).
    Trajectory,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Transfer => "transfer",
            Command::Dtn => "dtn",
            Command::Certify => "certify",
            Command::Energy => "energy",
            Command::Sweep => "sweep",
            Command::Trajectory => "trajectory",
        }
    }

    fn needs_upper_half_plane(self) -> bool {
        self != Command::Transfer
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Pass = 0,
    InputError = 1,
    CertificateFailure = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Complex numbers in configs are `[re, im]` pairs.
pub type ComplexDoc = [f64; 2];

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunOptions {
    /// Pass threshold: CR residual (certify, sweep, trajectory), relative
    /// energy gap (energy) or roundtrip deviation (trajectory).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_points: Option<usize>,
    /// Real symmetric reference tensor for the trajectory method.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory_l0: Option<MatrixDoc>,
    /// Tangential state (E₁, E₂, H₁, H₂) at z0 for the energy command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi0: Option<[ComplexDoc; 4]>,
    /// Tangential boundary data f for the trajectory command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_data: Option<[ComplexDoc; 6]>,
    /// Grid of trajectory parameters s.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_grid: Option<OmegaGrid>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub stack: StackDoc,
    #[serde(default)]
    pub kappa: [f64; 2],
    pub omega_grid: OmegaGrid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z1: Option<f64>,
    #[serde(default)]
    pub options: RunOptions,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::parse(".", e.to_string()))?;
        config::from_value(&value)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::parse("--config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// Command-line overrides of config options.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub quad_points: Option<usize>,
}

fn default_tol(command: Command) -> f64 {
    match command {
        Command::Energy => 1e-6,
        Command::Trajectory => 1e-12,
        _ => CR_THRESHOLD,
    }
}

fn default_s_grid() -> OmegaGrid {
    OmegaGrid {
        re_min: -1.0,
        re_max: 1.0,
        re_steps: 3,
        im_min: 0.5,
        im_max: 1.5,
        im_steps: 3,
    }
}

fn zero_doc(n: usize) -> MatrixDoc {
    vec![vec![[0.0, 0.0]; n]; n]
}

/// Fills every option the command uses with its effective value.
fn resolve(command: Command, cfg: &RunConfig, stack: &StackSpec, ov: Overrides) -> RunConfig {
    let mut out = cfg.clone();
    out.z0 = Some(cfg.z0.unwrap_or(stack.z_min()));
    out.z1 = Some(cfg.z1.unwrap_or(stack.z_max()));
    let o = &mut out.options;
    if command != Command::Transfer && command != Command::Dtn {
        o.tol = Some(ov.tol.or(o.tol).unwrap_or(default_tol(command)));
    }
    match command {
        Command::Energy => {
            o.quad_points = Some(ov.quad_points.or(o.quad_points).unwrap_or(2000));
            o.psi0.get_or_insert([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]);
        }
        Command::Trajectory => {
            o.trajectory_l0.get_or_insert_with(|| zero_doc(3));
            o.boundary_data
                .get_or_insert([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]);
            o.s_grid.get_or_insert_with(default_s_grid);
        }
        _ => {}
    }
    out
}

fn prefix_key(prefix: &str, e: Error) -> Error {
    match e {
        Error::Parse { key, message } => Error::parse(format!("{prefix}.{key}"), message),
        other => other,
    }
}

fn sorted_grid(grid: &OmegaGrid, key: &str) -> Result<Vec<C64>> {
    let mut pts = grid.points().map_err(|e| Error::parse(key, e.to_string()))?;
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(pts)
}

fn complex(doc: ComplexDoc) -> C64 {
    c(doc[0], doc[1])
}

fn omega_label(w: C64) -> String {
    format!("omega=({:.16e},{:.16e})", w.re, w.im)
}

/// Report body; its serialization is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config_echo: RunConfig,
    pub command: Command,
    pub results: serde_json::Value,
    pub anomalies: Vec<String>,
    pub versions: Versions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Versions {
    pub layerdtn: &'static str,
    pub report_schema: &'static str,
}

impl Default for Versions {
    fn default() -> Self {
        Self {
            layerdtn: env!("CARGO_PKG_VERSION"),
            report_schema: REPORT_SCHEMA,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    /// Sweep table, for the `sweep` command.
    pub csv: Option<String>,
    pub status: ExitStatus,
}

struct Ctx<'a> {
    stack: &'a StackSpec,
    cfg: &'a RunConfig,
    kappa: [f64; 2],
    grid: Vec<C64>,
    z0: f64,
    z1: f64,
    tol: f64,
}

type Step = (serde_json::Value, Vec<String>, Option<String>);

fn json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// Runs one command on a configuration.
pub fn run(command: Command, cfg: &RunConfig, overrides: Overrides) -> Result<Outcome> {
    let stack = stack::stack_from_doc(&cfg.stack).map_err(|e| prefix_key("stack", e))?;
    let cfg = resolve(command, cfg, &stack, overrides);
    let grid = sorted_grid(&cfg.omega_grid, "omega_grid")?;
    if command.needs_upper_half_plane() && !(cfg.omega_grid.im_min > 0.0 && cfg.omega_grid.im_max > 0.0) {
        return Err(Error::parse("omega_grid.im_min", "must be > 0"));
    }
    if cfg.kappa.iter().any(|k| !k.is_finite()) {
        return Err(Error::parse("kappa", "must be finite"));
    }
    let (z0, z1) = (cfg.z0.expect("resolved"), cfg.z1.expect("resolved"));
    stack.clamp_into(z0).map_err(|e| Error::parse("z0", e.to_string()))?;
    stack.clamp_into(z1).map_err(|e| Error::parse("z1", e.to_string()))?;
    if !(z0 < z1) {
        return Err(Error::parse("z0", "must be < z1"));
    }
    if let Some(t) = cfg.options.tol {
        if !(t > 0.0) {
            return Err(Error::parse("options.tol", "must be > 0"));
        }
    }
    let ctx = Ctx {
        stack: &stack,
        cfg: &cfg,
        kappa: cfg.kappa,
        grid,
        z0,
        z1,
        tol: cfg.options.tol.unwrap_or(default_tol(command)),
    };
    let (results, anomalies, csv) = match command {
        Command::Transfer => run_transfer(&ctx)?,
        Command::Dtn => run_dtn(&ctx)?,
        Command::Certify => run_certify(&ctx)?,
        Command::Energy => run_energy(&ctx)?,
        Command::Sweep => run_sweep(&ctx)?,
        Command::Trajectory => run_trajectory(&ctx)?,
    };
    let status = if anomalies.is_empty() {
        ExitStatus::Pass
    } else {
        ExitStatus::CertificateFailure
    };
    Ok(Outcome {
        report: Report {
            config_echo: cfg.clone(),
            command,
            results,
            anomalies,
            versions: Versions::default(),
        },
        csv,
        status,
    })
}

fn run_transfer(ctx: &Ctx) -> Result<Step> {
    #[derive(Serialize)]
    struct Row {
        omega: C64,
        matrix: MatrixDoc,
        condition_t12: f64,
        flux_min_eig: f64,
    }
    let kappa = ctx.kappa.map(|k| c(k, 0.0));
    let rows = ctx
        .grid
        .par_iter()
        .map(|&w| {
            let t = transfer::transfer(ctx.stack, kappa, w, ctx.z0, ctx.z1)?;
            Ok(Row {
                omega: w,
                matrix: config::matrix_to_doc(&t.matrix),
                condition_t12: crate::linalg::condition_1norm(&t.blocks.m12),
                flux_min_eig: dtn::flux_form(&t).min_eig,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((json(&rows), Vec::new(), None))
}

fn run_dtn(ctx: &Ctx) -> Result<Step> {
    #[derive(Serialize)]
    struct Row {
        omega: C64,
        lambda: MatrixDoc,
        tangential: MatrixDoc,
        certificate: dtn::DtnCertificate,
    }
    let rows = ctx
        .grid
        .par_iter()
        .map(|&w| {
            let out = dtn::dtn(ctx.stack, ctx.kappa, w, ctx.z0, ctx.z1)?;
            Ok(Row {
                omega: w,
                lambda: config::matrix_to_doc(&out.map.matrix),
                tangential: config::matrix_to_doc(&out.map.tangential),
                certificate: out.certificate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let anomalies = rows
        .iter()
        .flat_map(|r| r.certificate.anomalies.iter().map(move |a| format!("{}: {a}", omega_label(r.omega))))
        .collect();
    Ok((json(&rows), anomalies, None))
}

fn certify(ctx: &Ctx) -> Result<analyticity::HerglotzCertificate> {
    let opts = CertifyOptions {
        cr_threshold: ctx.tol,
        ..CertifyOptions::default()
    };
    analyticity::herglotz_certify(ctx.stack, ctx.kappa, &ctx.grid, ctx.z0, ctx.z1, &opts)
}

fn certificate_anomalies(cert: &analyticity::HerglotzCertificate) -> Vec<String> {
    let mut out = Vec::new();
    for p in &cert.points {
        let label = omega_label(p.omega);
        out.extend(p.anomalies.iter().map(|a| format!("{label}: {a}")));
        if p.anomalies.is_empty() && !p.passed(cert.cr_threshold) {
            out.push(format!(
                "{label}: min Im eigenvalue {:e}, CR residual {:e} (threshold {:e})",
                p.min_im_eig, p.cr_residual, cert.cr_threshold
            ));
        }
    }
    out
}

fn run_certify(ctx: &Ctx) -> Result<Step> {
    let cert = certify(ctx)?;
    let anomalies = certificate_anomalies(&cert);
    Ok((json(&cert), anomalies, None))
}

fn run_energy(ctx: &Ctx) -> Result<Step> {
    #[derive(Serialize)]
    struct Row {
        omega: C64,
        report: dtn::EnergyReport,
        tol: f64,
        pass: bool,
    }
    let opts = &ctx.cfg.options;
    let psi0 = TangentialState(opts.psi0.expect("resolved").map(complex));
    let nonzero = psi0.0.iter().any(|z| z.norm() > 0.0);
    let quad = opts.quad_points.expect("resolved");
    if quad == 0 {
        return Err(Error::parse("options.quad_points", "must be > 0"));
    }
    let rows = ctx
        .grid
        .par_iter()
        .map(|&w| {
            let report = dtn::energy_balance(ctx.stack, &psi0, ctx.kappa, w, ctx.z0, ctx.z1, quad)?;
            let pass = if nonzero {
                report.boundary_flux > 0.0 && report.absorption_integral > 0.0 && report.relative_gap <= ctx.tol
            } else {
                report.boundary_flux == 0.0 && report.absorption_integral == 0.0
            };
            Ok(Row {
                omega: w,
                report,
                tol: ctx.tol,
                pass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let anomalies = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| {
            format!(
                "{}: boundary flux {:e}, absorption {:e}, relative gap {:e} (tol {:e})",
                omega_label(r.omega),
                r.report.boundary_flux,
                r.report.absorption_integral,
                r.report.relative_gap,
                ctx.tol
            )
        })
        .collect();
    Ok((json(&rows), anomalies, None))
}

/// CSV column names of the sweep table.
pub fn sweep_columns() -> Vec<String> {
    let mut cols: Vec<String> = ["omega_re", "omega_im", "min_im_eig", "worst_cr", "condition_T12"]
        .map(String::from)
        .to_vec();
    for i in 0..4 {
        for j in 0..4 {
            cols.push(format!("lambda_t_{i}{j}_re"));
            cols.push(format!("lambda_t_{i}{j}_im"));
        }
    }
    cols
}

fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}").to_lowercase()
    }
}

fn run_sweep(ctx: &Ctx) -> Result<Step> {
    let cert = certify(ctx)?;
    let tangential: Vec<Option<CMatrix>> = ctx
        .grid
        .par_iter()
        .map(|&w| match dtn::dtn(ctx.stack, ctx.kappa, w, ctx.z0, ctx.z1) {
            Ok(out) => Ok(Some(out.map.tangential)),
            Err(Error::Singular { .. } | Error::NumericRange(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let cols = sweep_columns();
    let mut csv = String::new();
    writeln!(
        csv,
        "# tangential DtN compression (rows/cols 1,2,4,5) over the frequency grid; \
         lambda_t_ij_re/_im are entries of the 4x4 matrix, row-major; kappa = ({}, {}), z0 = {}, z1 = {}",
        fmt_f64(ctx.kappa[0]),
        fmt_f64(ctx.kappa[1]),
        fmt_f64(ctx.z0),
        fmt_f64(ctx.z1)
    )
    .unwrap();
    writeln!(csv, "{}", cols.join(",")).unwrap();
    for (p, lt) in cert.points.iter().zip(&tangential) {
        let mut fields = vec![
            fmt_f64(p.omega.re),
            fmt_f64(p.omega.im),
            fmt_f64(p.min_im_eig),
            fmt_f64(p.cr_residual),
            fmt_f64(p.condition_t12),
        ];
        for k in 0..16 {
            let z = lt.as_ref().map_or(c(f64::NAN, f64::NAN), |m| m[(k / 4, k % 4)]);
            fields.push(fmt_f64(z.re));
            fields.push(fmt_f64(z.im));
        }
        writeln!(csv, "{}", fields.join(",")).unwrap();
    }
    let anomalies = certificate_anomalies(&cert);
    let results = serde_json::json!({
        "columns": cols,
        "rows": cert.points.len(),
        "certificate": json(&cert),
    });
    Ok((results, anomalies, Some(csv)))
}

fn run_trajectory(ctx: &Ctx) -> Result<Step> {
    #[derive(Serialize)]
    struct Row {
        omega: C64,
        roundtrip: tubular::RoundtripReport,
        roundtrip_tol: f64,
        certificate: tubular::TrajectoryCertificate,
        /// |h_f(i) − (Λ_Z f, f)| for the physical tensors Z.
        physical_point_gap: f64,
    }
    let opts = &ctx.cfg.options;
    let l0 = config::matrix_from_doc(opts.trajectory_l0.as_ref().expect("resolved"), "options.trajectory_l0")?;
    let f = opts.boundary_data.expect("resolved").map(complex);
    analyticity::check_tangential(&f).map_err(|e| Error::parse("options.boundary_data", e.to_string()))?;
    let s_grid = sorted_grid(opts.s_grid.as_ref().expect("resolved"), "options.s_grid")?;
    if s_grid.iter().any(|s| !(s.im > 0.0)) {
        return Err(Error::parse("options.s_grid.im_min", "must be > 0"));
    }
    let dtn_opts = DtnOptions::default();
    let mut rows = Vec::with_capacity(ctx.grid.len());
    let mut anomalies = Vec::new();
    for &w in &ctx.grid {
        let z = ctx.stack.tensors_at(w)?;
        let spec = TrajectorySpec::for_tensors(&l0, &z).map_err(|e| match e {
            Error::Contract(m) => Error::parse("options.trajectory_l0", m),
            other => other,
        })?;
        let roundtrip = tubular::trajectory_roundtrip(&z, &l0)?;
        let map = |t: &crate::stack::TensorTuple| {
            Ok(dtn::dtn_from_tensors(ctx.stack, t, ctx.kappa, ctx.z0, ctx.z1, &dtn_opts)?.map)
        };
        let certificate = tubular::herglotz_along_trajectory(map, &spec, &f, &s_grid, CR_THRESHOLD)?;
        let at_i = analyticity::scalar_sample(&map(&spec.tensors_at(crate::linalg::I)?)?, &f)?;
        let physical = analyticity::scalar_sample(&map(&z)?, &f)?;
        let physical_point_gap = (at_i - physical).norm() / physical.norm().max(1.0);
        let label = omega_label(w);
        if !(roundtrip.max_deviation <= ctx.tol) {
            anomalies.push(format!(
                "{label}: roundtrip deviation {:e} exceeds {:e}",
                roundtrip.max_deviation, ctx.tol
            ));
        }
        if !certificate.pass {
            anomalies.push(format!(
                "{label}: trajectory certificate failed: min Im h_f {:e}, worst CR {:e} (threshold {:e})",
                certificate.min_im, certificate.worst_cr, certificate.cr_threshold
            ));
        }
        rows.push(Row {
            omega: w,
            roundtrip,
            roundtrip_tol: ctx.tol,
            certificate,
            physical_point_gap,
        });
    }
    Ok((json(&rows), anomalies, None))
}

/// JSON formatter printing every float with 17 significant digits.
struct FixedFloat;

impl serde_json::ser::Formatter for FixedFloat {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Deterministic JSON text; non-finite floats become `null`.
pub fn to_report_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloat);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Io(io::Error::other(e)))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Writes `<command>.json`, `<command>.meta.json` and, for sweeps, `sweep.csv`.
pub fn emit_report(outcome: &Outcome, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let name = outcome.report.command.name();
    let report_path = out_dir.join(format!("{name}.json"));
    fs::write(&report_path, to_report_json(&outcome.report)?)?;
    let generated = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta_path = out_dir.join(format!("{name}.meta.json"));
    fs::write(
        &meta_path,
        format!("{{\"report\":\"{name}.json\",\"generated_unix_seconds\":{generated}}}\n"),
    )?;
    let mut paths = vec![report_path, meta_path];
    if let Some(csv) = &outcome.csv {
        let csv_path = out_dir.join("sweep.csv");
        fs::write(&csv_path, csv)?;
        paths.push(csv_path);
    }
    Ok(paths)
}

/// Diagnostic line for an input error, naming the offending field when known.
pub fn diagnostic(e: &Error) -> String {
    match e {
        Error::Parse { key, message } => format!("{key} {message}"),
        other => other.to_string(),
    }
}

#[derive(Debug, Parser)]
#[command(name = "layerdtn", version, about = "Transfer matrices, DtN maps and Herglotz certificates for layered media")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Run configuration (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; the report goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Pass threshold overriding `options.tol`.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Quadrature points overriding `options.quad_points`.
    #[arg(long = "quad-points")]
    pub quad_points: Option<usize>,
    /// Worker threads for grid evaluation.
    #[arg(long)]
    pub parallel: Option<usize>,
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = RunConfig::load(&cli.config)?;
    let overrides = Overrides {
        tol: cli.tol,
        quad_points: cli.quad_points,
    };
    match cli.parallel {
        Some(0) => Err(Error::parse("--parallel", "must be > 0")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Io(io::Error::other(e)))?
            .install(|| run(cli.command, &cfg, overrides)),
        None => run(cli.command, &cfg, overrides),
    }
}

/// Runs the command line and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitStatus::InputError.code() } else { 0 };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", diagnostic(&e));
            return ExitStatus::InputError.code();
        }
    };
    let written = match &cli.out {
        Some(dir) => emit_report(&outcome, dir).map(|_| ()),
        None => to_report_json(&outcome.report).map(|s| print!("{s}")),
    };
    if let Err(e) = written {
        eprintln!("error: {}", diagnostic(&e));
        return ExitStatus::InputError.code();
    }
    for a in &outcome.report.anomalies {
        eprintln!("anomaly: {a}");
    }
    outcome.status.code()
}
