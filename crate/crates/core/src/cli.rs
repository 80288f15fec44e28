//! Command-line front end.
//!
//! Exit codes: `0` success, `2` malformed or invalid input, `3` a Gram matrix
//! that is not positive semidefinite, `4` a scan worker panicked.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

use crate::capacity::{one_shot_capacity, MultistartOptions};
use crate::degrade::{classify, classify_isometry};
use crate::error::Error;
use crate::gallery::{
    damping_limit_family, erasure_family, naimark_hadamard, qubit_channel, ErasureParams, QubitParams, DEFAULT_REGULATOR,
};
use crate::isometry::{PcubedIsometry, Side};
use crate::matcore::{gram_to_kets, CMatrix, GramMatrix, DEFAULT_TOL};
use crate::qutritlab::{boundary_curve, phase_scan, CurveKind, PhaseGrid, PhasePoint, ScanOptions};
use crate::schema::{ChannelSpec, FamilyJson, ReportJson, VerdictJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_PSD: i32 = 3;
pub const EXIT_PANIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "pcubed", version, about = "Degradability and one-shot capacity of pcubed channel pairs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a Gram pair read from JSON.
    Classify(ClassifyArgs),
    /// One-shot capacities of a Gram pair read from JSON.
    Capacity(CapacityArgs),
    /// Phase-diagram scan of the symmetric qutrit family.
    Scan(ScanArgs),
    /// Tabulate boundary curves of the qutrit phase diagram.
    Curves(CurvesArgs),
    /// Emit the Gram pair and verdict of a named family.
    Family(FamilyArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// JSON file with "B" and "C"; `-` reads stdin.
    #[arg(long, alias = "b-c-file")]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Direct,
    Complementary,
    Both,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    #[arg(long, alias = "b-c-file")]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = 32)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SideArg::Both)]
    pub side: SideArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SquareArg {
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RectArg {
    Wedge,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Grid size `NxM`: N values of b, M values of c.
    #[arg(long, default_value = "101x101", value_parser = parse_grid)]
    pub grid: (usize, usize),
    /// The full `[-1/2, 1]²` square (default).
    #[arg(long, value_enum, conflicts_with = "rect")]
    pub square: Option<SquareArg>,
    /// The `b >= 0, c <= 0` rectangle.
    #[arg(long, value_enum)]
    pub rect: Option<RectArg>,
    /// Add one-shot capacities and optimizer classes.
    #[arg(long)]
    pub capacities: bool,
    /// Add the Hessian concavity probe.
    #[arg(long)]
    pub concavity: bool,
    #[arg(long, default_value_t = 200)]
    pub probe_samples: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = 32)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    /// Curve kinds; all when omitted.
    #[arg(long, value_parser = parse_curve, num_args = 1..)]
    pub kind: Vec<CurveKind>,
    /// Samples of b per curve.
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    /// A `.csv` file for a single kind, otherwise a directory of `<kind>.csv`.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Qubit,
    Damping,
    Erasure,
    Hadamard,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub kind: FamilyKind,
    /// `key=value` parameters, e.g. `--param p=0.3`.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (n, m) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected NxM, got {s}"))?;
    let n: usize = n.trim().parse().map_err(|e| format!("{e}"))?;
    let m: usize = m.trim().parse().map_err(|e| format!("{e}"))?;
    if n == 0 || m == 0 {
        return Err("grid dimensions must be positive".into());
    }
    Ok((n, m))
}

fn parse_curve(s: &str) -> Result<CurveKind, String> {
    s.parse()
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s}"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("{k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotPsd { .. } => EXIT_NOT_PSD,
            _ => EXIT_INPUT,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses arguments, runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match run(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Classify(a) => cmd_classify(&a),
        Command::Capacity(a) => cmd_capacity(&a),
        Command::Scan(a) => cmd_scan(&a),
        Command::Curves(a) => cmd_curves(&a),
        Command::Family(a) => cmd_family(&a),
    }
}

fn read_input(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Reads and validates a Gram pair; non-PSD members map to exit code 3.
pub fn load_pair(path: &Path, tol: f64) -> CliResult<(GramMatrix, GramMatrix)> {
    let text = read_input(path)?;
    let spec: ChannelSpec =
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("malformed channel JSON: {e}")))?;
    let (b, c) = spec.grams()?;
    for (name, g) in [("B", &b), ("C", &c)] {
        let min_eig = g.min_eigenvalue();
        if min_eig < -tol {
            return Err(CliError { code: EXIT_NOT_PSD, message: format!("{name} is not positive semidefinite (min eigenvalue {min_eig:e})") });
        }
    }
    Ok((b, c))
}

pub fn cmd_classify(a: &ClassifyArgs) -> CliResult<()> {
    let (b, c) = load_pair(&a.input, a.tol)?;
    let verdict = classify(&b, &c, a.tol);
    emit(a.output.as_deref(), &to_json(&VerdictJson::from(&verdict)))
}

pub fn cmd_capacity(a: &CapacityArgs) -> CliResult<()> {
    let (b, c) = load_pair(&a.input, a.tol)?;
    let iso = PcubedIsometry::from_gram_pair_tol(&b, &c, a.tol)?;
    let opts = MultistartOptions::default().with_starts(a.starts).with_seed(a.seed);
    let sides: &[Side] = match a.side {
        SideArg::Direct => &[Side::Direct],
        SideArg::Complementary => &[Side::Complementary],
        SideArg::Both => &[Side::Direct, Side::Complementary],
    };
    let mut out = BTreeMap::new();
    for &side in sides {
        let report = one_shot_capacity(&iso, side, &opts);
        let key = match side {
            Side::Direct => "direct",
            Side::Complementary => "complementary",
        };
        out.insert(key, ReportJson::from(&report));
    }
    emit(a.output.as_deref(), &to_json(&out))
}

pub const SCAN_HEADER: [&str; 7] = ["b", "c", "verdict", "q1B", "q1C", "optClass", "concavity"];

fn opt_num(x: Option<f64>) -> String {
    x.map(|v| format!("{v:?}")).unwrap_or_default()
}

/// Scan table as CSV text, header included.
pub fn scan_csv(points: &[PhasePoint]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::input(e.to_string());
    w.write_record(SCAN_HEADER).map_err(csv_err)?;
    for p in points {
        let opt_class = match (p.opt_class_direct, p.opt_class_complement) {
            (Some(x), Some(y)) => format!("{x}|{y}"),
            _ => String::new(),
        };
        let concavity = p.concavity.map(|c| c.as_str().to_string()).unwrap_or_default();
        w.write_record([
            format!("{:?}", p.b),
            format!("{:?}", p.c),
            p.verdict.to_string(),
            opt_num(p.q1_direct),
            opt_num(p.q1_complement),
            opt_class,
            concavity,
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii csv"))
}

pub fn cmd_scan(a: &ScanArgs) -> CliResult<()> {
    let (nb, nc) = a.grid;
    let grid = match a.rect {
        Some(RectArg::Wedge) => PhaseGrid::wedge(nb, nc),
        None => PhaseGrid::square(nb, nc),
    };
    let opts = ScanOptions {
        tol: a.tol,
        capacities: a.capacities,
        concavity: a.concavity,
        multistart: MultistartOptions::default().with_starts(a.starts).sequential(),
        probe_samples: a.probe_samples,
        seed: a.seed,
        ..ScanOptions::default()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.workers)
        .build()
        .map_err(|e| CliError::input(e.to_string()))?;
    info!("scanning {} points on {} workers", grid.len(), pool.current_num_threads());
    let points = catch_unwind(AssertUnwindSafe(|| pool.install(|| phase_scan(&grid, &opts))))
        .map_err(|_| CliError { code: EXIT_PANIC, message: "a scan worker panicked; no output written".into() })??;
    let unconverged = points.iter().filter(|p| !p.converged).count();
    if unconverged > 0 {
        warn!("{unconverged} points did not reach the gradient tolerance");
    }
    emit(a.output.as_deref(), &scan_csv(&points)?)
}

/// One curve table with columns `b,c,status`; failed rows keep an empty `c`.
pub fn curve_csv(kind: CurveKind, samples: usize) -> String {
    let (lo, hi) = kind.domain();
    let mut out = String::from("b,c,status\n");
    for i in 0..samples {
        let b = if samples == 1 { hi } else { lo + (hi - lo) * i as f64 / (samples - 1) as f64 };
        match boundary_curve(kind, b) {
            Ok(c) => writeln!(out, "{b:?},{c:?},ok").expect("string write"),
            Err(e) => {
                let status = match e {
                    Error::NoRoot { .. } => "no_root",
                    _ => "out_of_domain",
                };
                warn!("{kind} at b={b}: {e}");
                writeln!(out, "{b:?},,{status}").expect("string write");
            }
        }
    }
    out
}

pub fn cmd_curves(a: &CurvesArgs) -> CliResult<()> {
    let kinds: Vec<CurveKind> = if a.kind.is_empty() { CurveKind::ALL.to_vec() } else { a.kind.clone() };
    if a.samples == 0 {
        return Err(CliError::input("samples must be positive"));
    }
    let single_file = a.output.as_deref().is_some_and(|p| p.extension().is_some_and(|e| e == "csv"));
    match (&a.output, kinds.as_slice()) {
        (None, [kind]) => emit(None, &curve_csv(*kind, a.samples)),
        (Some(p), [kind]) if single_file => emit(Some(p), &curve_csv(*kind, a.samples)),
        (_, _) if single_file => Err(CliError::input("a .csv output takes exactly one curve kind")),
        (dir, _) => {
            let dir = dir.clone().unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&dir)?;
            for kind in kinds {
                std::fs::write(dir.join(format!("{kind}.csv")), curve_csv(kind, a.samples))?;
            }
            Ok(())
        }
    }
}

fn param(params: &[(String, f64)], key: &str, default: f64) -> f64 {
    params.iter().rev().find(|(k, _)| k == key).map_or(default, |(_, v)| *v)
}

fn reject_unknown(params: &[(String, f64)], known: &[&str]) -> CliResult<()> {
    match params.iter().find(|(k, _)| !known.contains(&k.as_str())) {
        Some((k, _)) => Err(CliError::input(format!("unknown parameter {k}; expected one of {}", known.join(", ")))),
        None => Ok(()),
    }
}

/// Builds a named family from `key=value` parameters.
pub fn build_family(kind: FamilyKind, params: &[(String, f64)]) -> CliResult<PcubedIsometry> {
    let iso = match kind {
        FamilyKind::Qubit => {
            reject_unknown(params, &["b1", "c1", "f0", "f1", "g0", "g1"])?;
            let has_coeff = params.iter().any(|(k, _)| k.starts_with('f') || k.starts_with('g'));
            let q = if has_coeff {
                QubitParams::Coefficients {
                    f0: param(params, "f0", f64::NAN),
                    f1: param(params, "f1", f64::NAN),
                    g0: param(params, "g0", f64::NAN),
                    g1: param(params, "g1", f64::NAN),
                }
            } else {
                QubitParams::from_output_amplitudes(param(params, "b1", 0.8), param(params, "c1", 0.3))?
            };
            qubit_channel(&q)?
        }
        FamilyKind::Damping => {
            reject_unknown(params, &["p", "a1"])?;
            damping_limit_family(param(params, "p", 0.3), param(params, "a1", 1e-3))?
        }
        FamilyKind::Erasure => {
            reject_unknown(params, &["p", "q", "zeta", "eta"])?;
            let p = param(params, "p", 0.3);
            erasure_family(&ErasureParams::qubit(
                p,
                param(params, "q", p),
                param(params, "zeta", DEFAULT_REGULATOR),
                param(params, "eta", DEFAULT_REGULATOR),
            ))?
        }
        FamilyKind::Hadamard => {
            reject_unknown(params, &["n", "g"])?;
            let n = param(params, "n", 3.0);
            if !(n >= 2.0 && n.fract() == 0.0) {
                return Err(CliError::input("n must be an integer >= 2"));
            }
            let n = n as usize;
            let gamma = gram_to_kets(&GramMatrix::uniform(n, crate::matcore::c64(param(params, "g", 0.5), 0.0))?, DEFAULT_TOL)?;
            // Equiangular real POVM in the plane.
            let scale = (2.0 / n as f64).sqrt();
            let alpha_hat = CMatrix::from_fn(2, n, |i, j| {
                let t = std::f64::consts::PI * j as f64 / n as f64;
                crate::matcore::c64(scale * if i == 0 { t.cos() } else { t.sin() }, 0.0)
            });
            naimark_hadamard(&gamma, &alpha_hat)?.iso().clone()
        }
    };
    Ok(iso)
}

pub fn cmd_family(a: &FamilyArgs) -> CliResult<()> {
    let iso = build_family(a.kind, &a.params)?;
    let verdict = classify_isometry(&iso, a.tol);
    let out = FamilyJson {
        family: format!("{:?}", a.kind).to_lowercase(),
        channel: ChannelSpec::from_grams(&iso.gram_b(), &iso.gram_c()),
        verdict: VerdictJson::from(&verdict),
    };
    emit(a.output.as_deref(), &to_json(&out))
}
