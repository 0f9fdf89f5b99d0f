//! Command-line front end. Exit codes: 0 success, 1 verification failure,
//! 2 input error, 3 numerical failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::body::BodyDescriptor;
use crate::error::Error;
use crate::gauge::Gauge;
use crate::json;
use crate::oracle::{oracle_uniform, OracleGrid};
use crate::report::{build_report, verify_theorem1, SolveReport, Theorem1Verdict};
use crate::solver::{solve_uniform, verify_certificate, CertificateVerdict, SolverOptions};
use crate::svg::{render_svg, View};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bm2d", version, about = "Banach-Mazur distance of a planar body to the Euclidean plane")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the optimal ellipse and write a report.
    Solve(SolveArgs),
    /// Brute-force grid search for the optimal ellipse.
    Oracle(OracleArgs),
    /// Check a report against a body.
    Verify(VerifyArgs),
    /// Draw a report as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ViewArg {
    Body,
    Image,
}

impl From<ViewArg> for View {
    fn from(v: ViewArg) -> View {
        match v {
            ViewArg::Body => View::Body,
            ViewArg::Image => View::Image,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Body descriptor (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Report path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "body")]
    pub view: ViewArg,
    /// Uniform angles per period.
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    /// Bisection tolerance on the defect.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 80)]
    pub max_bisect: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub cert_tol: f64,
    #[arg(long)]
    pub no_polish: bool,
    #[arg(long)]
    pub no_refine: bool,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    pub n_a: usize,
    #[arg(long, default_value_t = 64)]
    pub n_b: usize,
    #[arg(long, default_value_t = 64)]
    pub n_theta: usize,
    /// Angles per period for the final scores.
    #[arg(long, default_value_t = 8192)]
    pub n_phi: usize,
    /// Angles per period for the exhaustive coarse pass.
    #[arg(long, default_value_t = 1024)]
    pub n_phi_coarse: usize,
    #[arg(long)]
    pub a_min: Option<f64>,
    #[arg(long)]
    pub a_max: Option<f64>,
    /// Zoomed passes after the coarse grid.
    #[arg(long, default_value_t = 10)]
    pub stages: usize,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Body descriptor (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Report produced by `solve`.
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub report: PathBuf,
    /// Body descriptor; the body outline is omitted without it.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub svg: PathBuf,
    #[arg(long, value_enum, default_value = "body")]
    pub view: ViewArg,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_INPUT };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

fn load_gauge(path: &Path) -> Result<Gauge, Failure> {
    Ok(BodyDescriptor::read(path)?.to_gauge()?)
}

fn load_report(path: &Path) -> Result<SolveReport, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input_error(format!("invalid report {}: {e}", path.display())))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| input_error(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), Failure> {
    let text = json::to_string(value).map_err(|e| input_error(format!("cannot serialize output: {e}")))?;
    write_text(path, &text)
}

fn solve(args: &SolveArgs) -> Result<i32, Failure> {
    let gauge = load_gauge(&args.input)?;
    let opts = SolverOptions {
        grid_size: args.grid,
        bisect_tol: args.tol,
        max_bisect: args.max_bisect,
        refine: !args.no_refine,
        polish: !args.no_polish,
        cert_tol: args.cert_tol,
        seed: args.seed,
    };
    let sol = solve_uniform(&gauge, &opts)?;
    let report = build_report(&gauge, &sol)?;
    write_json(args.out.as_deref(), &report)?;
    if let Some(svg) = &args.svg {
        write_text(Some(svg), &render_svg(&report, args.view.into(), Some(&gauge)))?;
    }
    Ok(EXIT_OK)
}

fn oracle(args: &OracleArgs) -> Result<i32, Failure> {
    let gauge = load_gauge(&args.input)?;
    let a_range = match (args.a_min, args.a_max) {
        (Some(lo), Some(hi)) => Some((lo, hi)),
        (None, None) => None,
        _ => return Err(input_error("--a-min and --a-max must be given together".into())),
    };
    let grid = OracleGrid {
        n_a: args.n_a,
        n_b: args.n_b,
        n_theta: args.n_theta,
        n_phi: args.n_phi,
        n_phi_coarse: args.n_phi_coarse,
        a_range,
        refine_stages: args.stages,
        threads: args.threads,
        ..OracleGrid::default()
    };
    let result = oracle_uniform(&gauge, &grid)?;
    #[derive(Serialize)]
    struct Output {
        params: [f64; 3],
        a: f64,
        bprime: f64,
        theta: f64,
        value: f64,
        d2: f64,
        runner_up_distance: f64,
        evaluations: u64,
    }
    write_json(
        args.out.as_deref(),
        &Output {
            params: result.params.to_params().as_array(),
            a: result.params.a(),
            bprime: result.params.bprime(),
            theta: result.params.theta(),
            value: result.value,
            d2: (2.0 * result.value).exp(),
            runner_up_distance: result.runner_up_distance,
            evaluations: result.evaluations,
        },
    )?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
pub struct VerifyOutput {
    pub passed: bool,
    pub theorem1: Theorem1Verdict,
    pub certificate: CertificateVerdict,
    /// Certificate level agrees with the reported defect.
    pub defect_matches: bool,
    /// Reported points lie on the body boundary.
    pub points_on_boundary: bool,
}

/// Checks a report against the body it claims to describe.
pub fn verify_report(gauge: &Gauge, report: &SolveReport, tol: f64) -> VerifyOutput {
    let theorem1 = verify_theorem1(report, tol);
    let certificate = verify_certificate(gauge, &report.params_uniform, &report.certificate, tol);
    let defect_matches = (certificate.level - report.defect).abs() <= tol;
    let points_on_boundary = report.x_points.iter().chain(&report.y_points).all(|p| {
        let r = p[0].hypot(p[1]);
        (gauge.eval(p[1].atan2(p[0])) - r).abs() <= tol * r.max(1.0)
    });
    VerifyOutput {
        passed: theorem1.passed() && certificate.passed() && defect_matches && points_on_boundary,
        theorem1,
        certificate,
        defect_matches,
        points_on_boundary,
    }
}

fn verify(args: &VerifyArgs) -> Result<i32, Failure> {
    let gauge = load_gauge(&args.input)?;
    let report = load_report(&args.report)?;
    let output = verify_report(&gauge, &report, args.tol);
    write_json(args.out.as_deref(), &output)?;
    if output.passed {
        Ok(EXIT_OK)
    } else {
        eprintln!("verification failed");
        Ok(EXIT_FAIL)
    }
}

fn render(args: &RenderArgs) -> Result<i32, Failure> {
    let report = load_report(&args.report)?;
    let gauge = args.input.as_deref().map(load_gauge).transpose()?;
    write_text(Some(&args.svg), &render_svg(&report, args.view.into(), gauge.as_ref()))?;
    Ok(EXIT_OK)
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Oracle(a) => oracle(a),
        Command::Verify(a) => verify(a),
        Command::Render(a) => render(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
