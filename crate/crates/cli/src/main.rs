//! `salagean`: delta tables, dominant coefficients, inclusion and sharpness
//! runs, and plot data. Every command is a pure function of its flags.
//!
//! Exit codes: 0 all checks passed, 1 a numerical check failed, 2 bad usage.

mod output;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use salagean_core::dominant::{h_beta_coeffs, q_beta_coeffs, DEFAULT_QUADRATURE_TOL};
use salagean_core::harness::{
    self, boundary_curve, build_trial, compare_owa_obradovic, default_beta_grid, sharpness,
    verify_inclusion, InclusionConfig, DEFAULT_REPORT_TOL, DEFAULT_SEED, DEFAULT_SHARPNESS_RADII,
};
use salagean_core::subordination::{
    argmin_at_negative_axis, DEFAULT_BOUNDARY_RADIUS, DEFAULT_BOUNDARY_SAMPLES,
    DEFAULT_SCAN_SAMPLES,
};
use salagean_core::{
    delta, scan_circle, ClassParams, DeltaMethod, DeltaResult, Error, TruncatedSeries,
    DEFAULT_ORDER,
};

use output::{csv_header, emit, json_document, num, Format};

#[derive(Parser)]
#[command(
    name = "salagean",
    version,
    about = "Numerical companion for Salagean-type inclusion results"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the sharp constant delta(alpha, beta).
    Delta(DeltaArgs),
    /// Coefficients of the dominant q_beta (or the half-plane map h_beta).
    DominantCoeffs(CoeffArgs),
    /// Scan a series on |z| = r and report its minimum real part.
    ScanMin(ScanArgs),
    /// Check the level-n functional of random level-(n+1) members against delta.
    VerifyInclusion(InclusionArgs),
    /// Tabulate the extremal function's approach to delta as r -> 1.
    Sharpness(SharpnessArgs),
    /// Compare delta(1, beta) with the earlier bound (1 + 2 beta)/3.
    CompareOo(CompareArgs),
    /// Emit q_beta and h_beta on |z| = rho for plotting.
    BoundaryCurve(BoundaryArgs),
}

#[derive(Args, Serialize)]
struct Target {
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    format: Option<Format>,
}

impl Target {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum MethodArg {
    Series,
    Euler,
    Closed,
    Quad,
    All,
}

impl MethodArg {
    fn methods(self) -> Vec<DeltaMethod> {
        match self {
            MethodArg::Series => vec![DeltaMethod::RawSeries],
            MethodArg::Euler => vec![DeltaMethod::Euler],
            MethodArg::Closed => vec![DeltaMethod::ClosedForm],
            MethodArg::Quad => vec![DeltaMethod::Quadrature],
            MethodArg::All => DeltaMethod::ALL.to_vec(),
        }
    }
}

#[derive(Args, Serialize)]
struct DeltaArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, value_enum, default_value = "closed")]
    method: MethodArg,
    #[arg(long, default_value_t = DEFAULT_QUADRATURE_TOL)]
    tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    target: Target,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum WhichMap {
    Q,
    H,
}

#[derive(Args, Serialize)]
struct CoeffArgs {
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    #[arg(long, value_enum, default_value = "q")]
    map: WhichMap,
    #[command(flatten)]
    #[serde(flatten)]
    target: Target,
}

#[derive(Args, Serialize)]
struct ScanArgs {
    /// Series JSON (`{"order", "coeffs"}`) to scan; defaults to q_beta.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    #[arg(long, default_value_t = 0.99)]
    radius: f64,
    #[arg(long, default_value_t = DEFAULT_SCAN_SAMPLES)]
    samples: usize,
    #[command(flatten)]
    #[serde(flatten)]
    target: Target,
}

#[derive(Args, Serialize)]
struct InclusionArgs {
    #[arg(long, default_value_t = 0)]
    n: u32,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    #[arg(long, alias = "radius", value_delimiter = ',', default_value = "0.99")]
    radii: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_SCAN_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Reporting tolerance on the worst margin.
    #[arg(long, default_value_t = DEFAULT_REPORT_TOL)]
    tol: f64,
    /// Also write every generated member as JSON to this path.
    #[arg(long)]
    #[serde(skip)]
    dump_members: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    target: Target,
}

#[derive(Args, Serialize)]
struct SharpnessArgs {
    #[arg(long, default_value_t = 0)]
    n: u32,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    #[arg(long, alias = "radius", value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_SCAN_SAMPLES)]
    samples: usize,
    #[command(flatten)]
    #[serde(flatten)]
    target: Target,
}

#[derive(Args, Serialize)]
struct CompareArgs {
    /// Comma-separated beta values; defaults to 0, 0.01, ..., 0.99.
    #[arg(long, value_delimiter = ',')]
    betas: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(flatten)]
    target: Target,
}

#[derive(Args, Serialize)]
struct BoundaryArgs {
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, default_value_t = DEFAULT_BOUNDARY_RADIUS)]
    radius: f64,
    #[arg(long, default_value_t = DEFAULT_BOUNDARY_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 4096)]
    order: usize,
    #[command(flatten)]
    #[serde(flatten)]
    target: Target,
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotConverged { .. } | Error::RoundTrip { .. } => {
                Failure::Numerical(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numerical(format!("i/o error: {e}"))
    }
}

/// Whether every numerical assertion of a command held.
type Outcome = Result<bool, Failure>;

fn write_out(target: &Target, text: &str) -> Result<(), Failure> {
    emit(text, target.out.as_deref()).map_err(Failure::from)
}

fn run_delta(args: &DeltaArgs) -> Outcome {
    let results: Vec<DeltaResult> = args
        .method
        .methods()
        .into_iter()
        .map(|m| delta(args.alpha, args.beta, m, args.tol))
        .collect::<Result<_, _>>()?;

    // Pairwise discrepancies must be covered by the reported bounds.
    let mut consistent = true;
    let mut max_discrepancy: f64 = 0.0;
    for (i, a) in results.iter().enumerate() {
        for b in &results[i + 1..] {
            let d = (a.value - b.value).abs();
            max_discrepancy = max_discrepancy.max(d);
            consistent &= d <= a.error_bound + b.error_bound;
        }
    }

    let text = match args.target.format_or(Format::Json) {
        Format::Json => json_document(
            "delta",
            args,
            &json!({
                "results": results,
                "max_discrepancy": max_discrepancy,
                "consistent": consistent,
            }),
        ),
        Format::Csv => {
            let mut s = csv_header("delta", args);
            s.push_str("method,value,error_bound,terms_used\n");
            for r in &results {
                writeln!(
                    s,
                    "{},{},{},{}",
                    r.method,
                    num(r.value),
                    num(r.error_bound),
                    r.terms_used
                )
                .unwrap();
            }
            s
        }
    };
    write_out(&args.target, &text)?;
    Ok(consistent)
}

fn run_dominant_coeffs(args: &CoeffArgs) -> Outcome {
    let series = match args.map {
        WhichMap::Q => q_beta_coeffs(args.alpha, args.beta, args.order)?,
        WhichMap::H => h_beta_coeffs(args.beta, args.order)?,
    };
    let text = match args.target.format_or(Format::Json) {
        Format::Json => json_document("dominant-coeffs", args, &series),
        Format::Csv => {
            let mut s = csv_header("dominant-coeffs", args);
            s.push_str("k,re,im\n");
            for (k, c) in series.coeffs().iter().enumerate() {
                writeln!(s, "{k},{},{}", num(c.re), num(c.im)).unwrap();
            }
            s
        }
    };
    write_out(&args.target, &text)?;
    Ok(true)
}

fn read_series(path: &Path) -> Result<TruncatedSeries, Failure> {
    let raw = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&raw)
        .map_err(|e| Failure::Usage(format!("{} is not a series document: {e}", path.display())))
}

fn run_scan_min(args: &ScanArgs) -> Outcome {
    let series = match &args.input {
        Some(path) => read_series(path)?,
        None => q_beta_coeffs(args.alpha, args.beta, args.order)?,
    };
    let scan = scan_circle(&series, args.radius, args.samples)?;
    let text = match args.target.format_or(Format::Csv) {
        Format::Json => json_document(
            "scan-min",
            args,
            &json!({
                "radius": scan.radius,
                "samples": scan.samples,
                "order": scan.order,
                "tail_bound": scan.tail_bound,
                "min_re": scan.min_re,
                "argmin_angle": scan.argmin_angle,
                "argmin_on_negative_axis": argmin_at_negative_axis(&scan),
            }),
        ),
        Format::Csv => csv_header("scan-min", args) + &scan.to_csv(),
    };
    write_out(&args.target, &text)?;
    Ok(true)
}

fn run_verify_inclusion(args: &InclusionArgs) -> Outcome {
    let params = ClassParams::new(args.n, args.alpha, args.beta)?;
    let cfg = InclusionConfig {
        params,
        order: args.order,
        radii: args.radii.clone(),
        samples: args.samples,
        trials: args.trials,
        seed: args.seed,
        report_tol: args.tol,
    };
    let report = verify_inclusion(&cfg)?;

    if let Some(path) = &args.dump_members {
        let members = (0..args.trials as u64)
            .map(|i| {
                Ok(build_trial(&params, args.order, args.seed, i)?.to_record(&params, args.seed))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let mut text = serde_json::to_string_pretty(&members).expect("members serialize");
        text.push('\n');
        fs::write(path, text)?;
    }

    let text = match args.target.format_or(Format::Json) {
        Format::Json => json_document("verify-inclusion", args, &report),
        Format::Csv => {
            let mut s = csv_header("verify-inclusion", args);
            writeln!(s, "# delta={}", num(report.delta)).unwrap();
            writeln!(s, "# worst_margin={}", num(report.worst_margin)).unwrap();
            writeln!(s, "# worst_trial={}", report.worst_trial).unwrap();
            writeln!(s, "# passed={}", report.passed).unwrap();
            s.push_str("trial,atoms,radius,min_re,tail_bound,margin\n");
            for t in &report.trials {
                for m in &t.radii {
                    writeln!(
                        s,
                        "{},{},{},{},{},{}",
                        t.index,
                        t.atoms,
                        num(m.radius),
                        num(m.min_re),
                        num(m.tail_bound),
                        num(m.margin)
                    )
                    .unwrap();
                }
            }
            s
        }
    };
    write_out(&args.target, &text)?;
    if !report.passed {
        eprintln!(
            "inclusion failed: worst margin {:e} at trial {}",
            report.worst_margin, report.worst_trial
        );
    }
    Ok(report.passed)
}

fn run_sharpness(args: &SharpnessArgs) -> Outcome {
    let params = ClassParams::new(args.n, args.alpha, args.beta)?;
    let radii = args
        .radii
        .clone()
        .unwrap_or_else(|| DEFAULT_SHARPNESS_RADII.to_vec());
    let report = sharpness(&params, args.order, &radii, args.samples)?;
    let text = match args.target.format_or(Format::Json) {
        Format::Json => json_document("sharpness", args, &report),
        Format::Csv => {
            let mut s = csv_header("sharpness", args);
            writeln!(s, "# delta={}", num(report.delta)).unwrap();
            writeln!(
                s,
                "# coefficient_deviation={}",
                num(report.coefficient_deviation)
            )
            .unwrap();
            writeln!(
                s,
                "# final_gap_threshold={}",
                num(report.final_gap_threshold)
            )
            .unwrap();
            writeln!(s, "# passed={}", report.passed).unwrap();
            s.push_str(
                "radius,scan_min_re,scan_tail_bound,argmin_on_negative_axis,q_at_minus_r,gap\n",
            );
            for r in &report.rows {
                writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    num(r.radius),
                    num(r.scan_min_re),
                    num(r.scan_tail_bound),
                    r.argmin_on_negative_axis,
                    num(r.q_at_minus_r),
                    num(r.gap)
                )
                .unwrap();
            }
            s
        }
    };
    write_out(&args.target, &text)?;
    Ok(report.passed)
}

fn run_compare_oo(args: &CompareArgs) -> Outcome {
    let betas = args.betas.clone().unwrap_or_else(default_beta_grid);
    let rows = compare_owa_obradovic(&betas)?;
    let all_positive = rows.iter().all(|r| r.gap > 0.0);
    let text = match args.target.format_or(Format::Csv) {
        Format::Json => json_document(
            "compare-oo",
            args,
            &json!({ "rows": rows, "all_positive": all_positive }),
        ),
        Format::Csv => {
            let mut s = csv_header("compare-oo", args);
            s.push_str("beta,delta,owa_obradovic,gap\n");
            for r in &rows {
                writeln!(
                    s,
                    "{},{},{},{}",
                    num(r.beta),
                    num(r.delta),
                    num(r.owa_obradovic),
                    num(r.gap)
                )
                .unwrap();
            }
            s
        }
    };
    write_out(&args.target, &text)?;
    Ok(all_positive)
}

fn run_boundary_curve(args: &BoundaryArgs) -> Outcome {
    let points = boundary_curve(args.alpha, args.beta, args.radius, args.samples, args.order)?;
    let text = match args.target.format_or(Format::Csv) {
        Format::Json => json_document("boundary-curve", args, &points),
        Format::Csv => {
            let mut s = csv_header("boundary-curve", args);
            writeln!(
                s,
                "# h_tail_bound={}",
                num(harness::h_beta_tail_bound(
                    args.beta,
                    args.radius,
                    args.order
                ))
            )
            .unwrap();
            s.push_str("theta,re_q,im_q,re_h,im_h\n");
            for p in &points {
                writeln!(
                    s,
                    "{},{},{},{},{}",
                    num(p.theta),
                    num(p.q.re),
                    num(p.q.im),
                    num(p.h.re),
                    num(p.h.im)
                )
                .unwrap();
            }
            s
        }
    };
    write_out(&args.target, &text)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Delta(a) => run_delta(a),
        Command::DominantCoeffs(a) => run_dominant_coeffs(a),
        Command::ScanMin(a) => run_scan_min(a),
        Command::VerifyInclusion(a) => run_verify_inclusion(a),
        Command::Sharpness(a) => run_sharpness(a),
        Command::CompareOo(a) => run_compare_oo(a),
        Command::BoundaryCurve(a) => run_boundary_curve(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
