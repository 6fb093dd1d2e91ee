//! Command-line front end.
//!
//! Exit codes: `0` success, `2` usage or configuration error, `3` data or
//! file format error, `4` numeric failure.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{read_cplx, read_mask, write_cplx, write_mask};
use crate::metrics::QualityMetrics;
use crate::operators::{encode, encode_adjoint};
use crate::sim::{make_phantom, PhantomKind, VdMaskOptions, DEFAULT_SIGMA_FRAC};
use crate::solvers::{parse_grid, tune_hyperparams, Solver, SolverConfig};
use crate::volume::KSpaceData;

/// Default iteration count for command-line reconstructions.
pub const CLI_ITERATIONS: usize = 50;

#[derive(Debug, Parser)]
#[command(name = "dynlr", version, about = "Sparse and low-rank dynamic MRI reconstruction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a Gaussian variable-density phase-encode mask.
    Mask(MaskArgs),
    /// Generate a synthetic dynamic phantom.
    Phantom(PhantomArgs),
    /// Simulate undersampled k-space from an image volume and a mask.
    Encode(EncodeArgs),
    /// Reconstruct an image volume from undersampled k-space.
    Recon(ReconArgs),
    /// Compare a reconstruction against a reference.
    Eval(EvalArgs),
    /// Grid-search solver hyper-parameters against a reference.
    Tune(TuneArgs),
}

#[derive(Debug, Args)]
struct MaskArgs {
    #[arg(long)]
    ny: usize,
    #[arg(long)]
    nt: usize,
    #[arg(long)]
    accel: f64,
    #[arg(long, default_value_t = DEFAULT_SIGMA_FRAC)]
    sigma_frac: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the same line pattern in every frame.
    #[arg(long)]
    frozen: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum KindArg {
    BeatingRings,
    RankRSparse,
}

#[derive(Debug, Args)]
struct PhantomArgs {
    #[arg(long)]
    nx: usize,
    #[arg(long)]
    ny: usize,
    #[arg(long)]
    nt: usize,
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, default_value_t = 1)]
    rank: usize,
    #[arg(long, default_value_t = 1)]
    sparsity: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    #[arg(long)]
    image: PathBuf,
    #[arg(long)]
    mask: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SolverFlags {
    /// key=value config file; explicit flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    placement: Option<String>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    lambda1: Option<f64>,
    #[arg(long)]
    lambda2: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    eta1: Option<f64>,
    #[arg(long)]
    eta2: Option<f64>,
    #[arg(long)]
    rank_k: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// hard | soft
    #[arg(long)]
    lr_mode: Option<String>,
    /// replace | weighted:<nu> | off
    #[arg(long)]
    dc: Option<String>,
    /// temporal_fourier | temporal_haar
    #[arg(long)]
    transform: Option<String>,
}

#[derive(Debug, Args)]
struct ReconArgs {
    #[arg(long)]
    ksp: PathBuf,
    #[arg(long)]
    mask: PathBuf,
    /// ista | slr | ista-lr
    #[arg(long, default_value = "slr")]
    solver: String,
    #[command(flatten)]
    flags: SolverFlags,
    #[arg(long = "ref")]
    reference: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Write per-iteration records as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long = "ref")]
    reference: PathBuf,
    #[arg(long)]
    rec: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct TuneArgs {
    #[arg(long)]
    ksp: PathBuf,
    #[arg(long)]
    mask: PathBuf,
    #[arg(long = "ref")]
    reference: PathBuf,
    #[arg(long, default_value = "slr")]
    solver: String,
    /// `key=v1,v2;key=v1,...`
    #[arg(long)]
    grid: String,
    #[command(flatten)]
    flags: SolverFlags,
    #[arg(long)]
    out: PathBuf,
}

/// Parses `std::env::args` and runs the command, returning the exit code.
pub fn main() -> i32 {
    run(std::env::args_os())
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Mask(a) => cmd_mask(a),
        Command::Phantom(a) => cmd_phantom(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Recon(a) => cmd_recon(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Tune(a) => cmd_tune(a),
    }
}

fn cmd_mask(a: MaskArgs) -> Result<()> {
    let mask = VdMaskOptions::new(a.ny, a.nt, a.accel)
        .sigma_frac(a.sigma_frac)
        .seed(a.seed)
        .frozen(a.frozen)
        .generate()?;
    write_mask(&a.out, &mask)?;
    println!("achieved acceleration {:.1}", mask.achieved_acceleration());
    Ok(())
}

fn cmd_phantom(a: PhantomArgs) -> Result<()> {
    let kind = match a.kind {
        KindArg::BeatingRings => PhantomKind::BeatingRings,
        KindArg::RankRSparse => PhantomKind::RankSparse { rank: a.rank, sparsity: a.sparsity },
    };
    let img = make_phantom(a.nx, a.ny, a.nt, kind, a.seed)?;
    write_cplx(&a.out, &img)
}

fn cmd_encode(a: EncodeArgs) -> Result<()> {
    let img = read_cplx(&a.image)?;
    let mask = read_mask(&a.mask)?;
    let y = encode(&img, &mask)?;
    write_cplx(&a.out, y.data())
}

fn load_kspace(ksp: &Path, mask: &Path) -> Result<KSpaceData> {
    let data = read_cplx(ksp)?;
    let mask = read_mask(mask)?;
    KSpaceData::new(data, mask)
}

fn build_config(y: &KSpaceData, flags: &SolverFlags) -> Result<SolverConfig> {
    let mut cfg = SolverConfig { iterations: CLI_ITERATIONS, ..SolverConfig::default_for(y) };
    if let Some(path) = &flags.config {
        let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.clone(), source })?;
        cfg.apply_kv(&text)?;
    }
    let numeric: [(&str, Option<String>); 8] = [
        ("iterations", flags.iters.map(|v| v.to_string())),
        ("lambda1", flags.lambda1.map(|v| v.to_string())),
        ("lambda2", flags.lambda2.map(|v| v.to_string())),
        ("rho", flags.rho.map(|v| v.to_string())),
        ("eta1", flags.eta1.map(|v| v.to_string())),
        ("eta2", flags.eta2.map(|v| v.to_string())),
        ("rank_k", flags.rank_k.map(|v| v.to_string())),
        ("p", flags.p.map(|v| v.to_string())),
    ];
    for (key, value) in numeric {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    let textual = [
        ("placement", &flags.placement),
        ("lr_mode", &flags.lr_mode),
        ("dc", &flags.dc),
        ("transform", &flags.transform),
    ];
    for (key, value) in textual {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    cfg.validate(y.shape())?;
    Ok(cfg)
}

#[derive(Serialize)]
struct ReconSummary {
    solver: String,
    iterations: usize,
    seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<QualityMetrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zero_filled: Option<QualityMetrics>,
}

fn cmd_recon(a: ReconArgs) -> Result<()> {
    let solver: Solver = a.solver.parse()?;
    let y = load_kspace(&a.ksp, &a.mask)?;
    let cfg = build_config(&y, &a.flags)?;
    let reference = a.reference.as_deref().map(read_cplx).transpose()?;

    let mut report = solver.run(&y, &cfg)?;
    let mut zero_filled = None;
    if let Some(reference) = &reference {
        report = report.with_reference(reference)?;
        zero_filled = Some(QualityMetrics::compute(reference, &encode_adjoint(&y))?);
    }
    write_cplx(&a.out, &report.image)?;
    if let Some(path) = &a.trace {
        let mut text = String::new();
        for rec in &report.trace {
            text.push_str(&serde_json::to_string(rec).expect("trace records serialize"));
            text.push('\n');
        }
        fs::write(path, text).map_err(|source| Error::Io { path: path.clone(), source })?;
    }

    let summary = ReconSummary {
        solver: solver.to_string(),
        iterations: cfg.iterations,
        seconds: report.seconds,
        metrics: report.metrics,
        zero_filled,
    };
    if a.json {
        println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
    } else {
        println!("{} finished {} iterations in {:.2} s", summary.solver, summary.iterations, summary.seconds);
        if let Some(zf) = &summary.zero_filled {
            println!("zero-filled    {zf}");
        }
        if let Some(m) = &summary.metrics {
            println!("reconstruction {m}");
        }
    }
    Ok(())
}

fn cmd_eval(a: EvalArgs) -> Result<()> {
    let reference = read_cplx(&a.reference)?;
    let rec = read_cplx(&a.rec)?;
    let m = QualityMetrics::compute(&reference, &rec)?;
    let mut out = std::io::stdout().lock();
    if a.json {
        let _ = writeln!(out, "{}", serde_json::to_string(&m).expect("metrics serialize"));
    } else {
        let _ = writeln!(out, "MSE        {:.4}", m.mse);
        let _ = writeln!(out, "MSE(*e-5)  {:.4}", m.mse_e5);
        let _ = writeln!(out, "PSNR       {:.4}", m.psnr);
        let _ = writeln!(out, "SSIM       {:.4}", m.ssim);
    }
    Ok(())
}

fn cmd_tune(a: TuneArgs) -> Result<()> {
    let solver: Solver = a.solver.parse()?;
    let y = load_kspace(&a.ksp, &a.mask)?;
    let reference = read_cplx(&a.reference)?;
    let base = build_config(&y, &a.flags)?;
    let space = parse_grid(&a.grid, base)?;
    let outcome = tune_hyperparams(&y, &reference, &space, solver)?;

    let text = format!(
        "# solver={solver}\n# psnr={:.4}\n# evaluated={}\n{}",
        outcome.best_psnr,
        outcome.evaluations.len(),
        outcome.best.to_kv()
    );
    fs::write(&a.out, text).map_err(|source| Error::Io { path: a.out.clone(), source })?;
    println!(
        "best PSNR {:.4} dB over {} configurations, written to {}",
        outcome.best_psnr,
        outcome.evaluations.len(),
        a.out.display()
    );
    Ok(())
}
