//! `gha`: algebra checks, uncertainty traces and figure data for
//! generalized Heisenberg algebra systems.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::Write as _;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gha_core::algebra::{build_rep, verify_algebra};
use gha_core::coherent::StateKind;
use gha_core::config::Config;
use gha_core::dynamics::{trace_with_dim, Path, SeriesOptions, TimeGrid};
use gha_core::figures::{render_figure, FIGURE_IDS};
use gha_core::spectrum::{MorsePhysicalParams, MorseReport};
use gha_core::{GhaError, Spectrum};

const AFTER_HELP: &str = "\
Values are taken from command-line flags first, then from the --config \
file, then from built-in defaults. Output lands in $GHA_OUT_DIR (or the \
current directory) unless --out names a path; existing files are kept \
unless --force is given.

Exit status: 0 success, 1 invalid input, 2 numerical failure, 3 I/O error.";

#[derive(Parser)]
#[command(name = "gha", version, about, after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the algebra identities on a truncated representation.
    #[command(after_help = AFTER_HELP)]
    Verify(VerifyArgs),
    /// Write the uncertainty trace of a coherent state as CSV.
    #[command(after_help = AFTER_HELP)]
    Trace(TraceArgs),
    /// Write the trace bundle and manifest behind figure 1-7.
    #[command(after_help = AFTER_HELP)]
    Figure(FigureArgs),
    /// Print the Morse parameters, level table and time scale.
    #[command(after_help = AFTER_HELP)]
    MorseInfo(MorseInfoArgs),
}

#[derive(Args)]
struct SystemArgs {
    /// Key = value file with defaults for any flag.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// harmonic, q-deformed, square-well, type1, type2, hydrogen, morse, tabulated.
    #[arg(long)]
    system: Option<String>,
    /// Energy scale of square-well, type1, type2 and hydrogen [default: 1].
    #[arg(long)]
    b: Option<f64>,
    /// Deformation parameter of the q-deformed oscillator.
    #[arg(long)]
    q: Option<f64>,
    /// Morse p (non-integer).
    #[arg(long)]
    p: Option<f64>,
    /// Morse nu; p = (nu - 1)/2.
    #[arg(long)]
    nu: Option<f64>,
    /// Morse inverse width, 1/m.
    #[arg(long)]
    beta: Option<f64>,
    /// Morse well depth, eV.
    #[arg(long)]
    v0: Option<f64>,
    /// Morse reduced mass, kg.
    #[arg(long)]
    mr: Option<f64>,
    /// Pin the Morse ladder to this many levels above the ground state.
    #[arg(long, value_name = "N")]
    override_nmax: Option<usize>,
    /// Comma-separated levels of a tabulated spectrum.
    #[arg(long, allow_hyphen_values = true)]
    energies: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output path (a directory for `figure`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory used when --out is absent.
    #[arg(long, env = "GHA_OUT_DIR", default_value = ".", hide_default_value = true)]
    out_dir: PathBuf,
    /// Replace existing output files.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Representation dimension [default: 30; n_max + 1 for Morse].
    #[arg(long)]
    dim: Option<usize>,
    /// Residual tolerance [default: 1e-12].
    #[arg(long)]
    tol: Option<f64>,
    /// Report layout.
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Records,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// gha or linear [default: gha].
    #[arg(long)]
    kind: Option<String>,
    /// Coherent state modulus.
    #[arg(long)]
    r: Option<f64>,
    /// Coherent state phase [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// Dimensionless start time [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    t_start: Option<f64>,
    /// Dimensionless end time [default: 100].
    #[arg(long, allow_hyphen_values = true)]
    t_end: Option<f64>,
    /// Grid points [default: 2001].
    #[arg(long)]
    points: Option<usize>,
    /// oracle, series or both [default: oracle].
    #[arg(long)]
    path: Option<String>,
    /// Fixed state dimension instead of adaptive truncation.
    #[arg(long)]
    dim: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure number, 1-7.
    id: u32,
    /// oracle, series or both.
    #[arg(long, default_value = "oracle")]
    path: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct MorseInfoArgs {
    #[command(flatten)]
    system: SystemArgs,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Gha(#[from] GhaError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0} exists; pass --force to overwrite")]
    Exists(PathBuf),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Gha(
                GhaError::TailBound { .. }
                | GhaError::Convergence { .. }
                | GhaError::ImaginaryResidual { .. }
                | GhaError::NegativeVariance(_),
            )
            | CliError::Failed(_) => 2,
            CliError::Io { .. } => 3,
            _ => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn io_err(path: &FsPath) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// File contents under flags: a flag always replaces the file's value.
fn layered(system: &SystemArgs, extra: &[(&str, Option<String>)]) -> CliResult<Config> {
    let mut cfg = match &system.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            Config::parse(&text)?
        }
        None => Config::new(),
    };
    let flags = [
        ("system", system.system.clone()),
        ("b", system.b.map(|x| x.to_string())),
        ("q", system.q.map(|x| x.to_string())),
        ("p", system.p.map(|x| x.to_string())),
        ("nu", system.nu.map(|x| x.to_string())),
        ("beta", system.beta.map(|x| x.to_string())),
        ("v0", system.v0.map(|x| x.to_string())),
        ("mr", system.mr.map(|x| x.to_string())),
        ("n_max", system.override_nmax.map(|x| x.to_string())),
        ("energies", system.energies.clone()),
    ];
    for (key, value) in flags.iter().chain(extra) {
        if let Some(v) = value {
            cfg.set(key, v.clone())?;
        }
    }
    Ok(cfg)
}

fn output_path(out: &OutputArgs, default_name: &str) -> PathBuf {
    out.out.clone().unwrap_or_else(|| out.out_dir.join(default_name))
}

fn check_writable(path: &FsPath, force: bool) -> CliResult<()> {
    if path.exists() && !force {
        return Err(CliError::Exists(path.to_path_buf()));
    }
    Ok(())
}

fn write_file(path: &FsPath, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(path, contents).map_err(io_err(path))
}

fn verify(args: VerifyArgs) -> CliResult<()> {
    let cfg = layered(
        &args.system,
        &[
            ("dim", args.dim.map(|d| d.to_string())),
            ("tol", args.tol.map(|t| t.to_string())),
        ],
    )?;
    let spec = Spectrum::from_config(&cfg)?;
    let dim = match (spec.max_level(), cfg.get::<usize>("dim")?) {
        (Some(n_max), None) => n_max + 1,
        (_, Some(d)) => d,
        (None, None) => 30,
    };
    let tol = cfg.get::<f64>("tol")?.unwrap_or(1e-12);
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
    }
    let ext = match args.format {
        ReportFormat::Text => "txt",
        ReportFormat::Records => "csv",
    };
    let path = output_path(&args.output, &format!("verify_{}.{ext}", spec.id()));
    check_writable(&path, args.output.force)?;

    let rep = build_rep(&spec, dim)?;
    let report = verify_algebra(&rep, &spec, tol)?;
    print!("{report}");
    let body = match args.format {
        ReportFormat::Text => report.to_string(),
        ReportFormat::Records => report.to_records(),
    };
    write_file(&path, &body)?;
    eprintln!("report written to {}", path.display());
    if report.passed() {
        Ok(())
    } else {
        let failed = report.checks.iter().filter(|c| !c.pass).count();
        Err(CliError::Failed(format!("{failed} identities exceed tolerance {tol:e}")))
    }
}

fn trace_cmd(args: TraceArgs) -> CliResult<()> {
    let cfg = layered(
        &args.system,
        &[
            ("kind", args.kind.clone()),
            ("r", args.r.map(|x| x.to_string())),
            ("phi", args.phi.map(|x| x.to_string())),
            ("t_start", args.t_start.map(|x| x.to_string())),
            ("t_end", args.t_end.map(|x| x.to_string())),
            ("points", args.points.map(|x| x.to_string())),
            ("path", args.path.clone()),
            ("dim", args.dim.map(|x| x.to_string())),
        ],
    )?;
    let spec = Spectrum::from_config(&cfg)?;
    let kind: StateKind = cfg.get_str("kind").unwrap_or("gha").parse()?;
    let r: f64 = cfg
        .get("r")?
        .ok_or_else(|| CliError::Usage("--r is required (or r = ... in the config)".into()))?;
    let phi = cfg.get("phi")?.unwrap_or(0.0);
    let defaults = TimeGrid::<f64>::default();
    let grid = TimeGrid::new(
        cfg.get("t_start")?.unwrap_or(defaults.start),
        cfg.get("t_end")?.unwrap_or(defaults.end),
        cfg.get("points")?.unwrap_or(defaults.points),
    )?;
    let path: Path = cfg.get_str("path").unwrap_or("oracle").parse()?;
    let dim = cfg.get::<usize>("dim")?;

    let out = output_path(&args.output, &format!("trace_{}_{kind}_r{r}.csv", spec.id()));
    check_writable(&out, args.output.force)?;

    let tr = trace_with_dim(&spec, kind, r, phi, grid, path, &SeriesOptions::default(), dim)?;
    write_file(&out, &tr.to_csv())?;

    let (t_min, v_min) = tr.peak_min();
    let (t_max, v_max) = tr.peak_max();
    eprintln!(
        "{} {kind} r={r} phi={phi} dim={} path={path}: min {v_min:.9} at t={t_min:.4}, max {v_max:.9} at t={t_max:.4}",
        spec.id(),
        tr.meta.dim
    );
    if let Some(w) = spec.time_scale() {
        eprintln!(
            "time is omega t with omega = {w:.6e} 1/s; window = [{:.6e}, {:.6e}] s",
            grid.start / w,
            grid.end / w
        );
    }
    if let Some(d) = tr.max_discrepancy() {
        eprintln!("max |series - oracle| = {d:.3e}");
    }
    eprintln!("trace written to {}", out.display());
    Ok(())
}

fn figure(args: FigureArgs) -> CliResult<()> {
    if !FIGURE_IDS.contains(&args.id) {
        return Err(CliError::Usage(format!("figure {} does not exist; choose 1-7", args.id)));
    }
    let path: Path = args.path.parse()?;
    let dir = output_path(&args.output, &format!("fig{}", args.id));
    let data = render_figure(args.id, path)?;
    let mut files: Vec<(PathBuf, String)> = data
        .curves
        .iter()
        .map(|c| (dir.join(&c.file_name), c.trace.to_csv()))
        .collect();
    files.push((dir.join(format!("fig{}_manifest.txt", args.id)), data.manifest()));
    for (p, _) in &files {
        check_writable(p, args.output.force)?;
    }
    for (p, body) in &files {
        write_file(p, body)?;
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn morse_info(args: MorseInfoArgs) -> CliResult<()> {
    let mut cfg = layered(&args.system, &[])?;
    if !cfg.contains("system") {
        cfg.set("system", "morse")?;
    }
    let spec = Spectrum::from_config(&cfg)?;
    let phys = match (cfg.get::<f64>("beta")?, cfg.get::<f64>("v0")?, cfg.get::<f64>("mr")?) {
        (Some(beta), Some(v0), Some(mr)) => Some(MorsePhysicalParams::from_ev(beta, v0, mr)?),
        _ => None,
    };
    let report = MorseReport::new(&spec, phys.as_ref())?;
    let mut stdout = std::io::stdout().lock();
    write!(stdout, "{report}").map_err(io_err(FsPath::new("<stdout>")))?;
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Verify(a) => verify(a),
        Command::Trace(a) => trace_cmd(a),
        Command::Figure(a) => figure(a),
        Command::MorseInfo(a) => morse_info(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
