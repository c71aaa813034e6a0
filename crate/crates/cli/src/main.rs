//! Command-line front end: fitting descriptors, scoring, the evaluation
//! protocols, synthetic data generation, and geometry checks. Data goes to
//! files, logs go to stderr, and every run is deterministic given its
//! flags (timings excepted).
//!
//! Exit codes: 0 success, 1 user or data error, 2 internal numerical
//! failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rpd::descriptor::{classify, fit_model, score, Classification, FitConfig, RpdModel};
use rpd::geometry::CentralPointPolicy;
use rpd::harness::{
    default_ood_m, gen_gaussian_mixture, gen_gaussian_with_outliers, gen_sphere_uniform,
    run_anomaly_detection, run_barycenter_check, run_class_separation, run_ood_detection,
    run_sensitivity_grid, run_vertex_count_check, AnomalyConfig, BarycenterConfig, EvalReport,
    GridConfig, GridDatasets, MixtureComponent, OodConfig, SeparationConfig, VertexCountConfig,
    VertexCountShape,
};
use rpd::harness::CovarianceSpec;
use rpd::{load_csv, save_csv, LabeledDataset};

#[derive(Parser)]
#[command(
    name = "rpd",
    about = "Random polytope descriptors: fit, score, and evaluate convex outer approximations of labeled point clouds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a descriptor model from a labeled CSV
    Fit(FitArgs),
    /// Score a CSV against a fitted model
    Score(ScoreArgs),
    /// Run an evaluation protocol
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Generate synthetic datasets
    #[command(subcommand)]
    Synth(SynthCommand),
    /// Run geometry checks
    #[command(subcommand)]
    Theory(TheoryCommand),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    SampleMean,
    Chebyshev,
    VertexBarycenter,
}

impl PolicyArg {
    fn to_policy(self) -> CentralPointPolicy {
        match self {
            PolicyArg::SampleMean => CentralPointPolicy::SampleMean,
            PolicyArg::Chebyshev => CentralPointPolicy::Chebyshev,
            PolicyArg::VertexBarycenter => CentralPointPolicy::VertexBarycenter,
        }
    }
}

#[derive(Args)]
struct FitArgs {
    /// Training data CSV (header: label,f0,...)
    #[arg(long)]
    train: PathBuf,
    /// Output model file (JSON)
    #[arg(long)]
    out: PathBuf,
    /// Number of random directions per class
    #[arg(long)]
    m: usize,
    /// Order statistic for the offsets (1 = tightest outer bound)
    #[arg(long)]
    ell: usize,
    #[arg(long, value_enum, default_value = "sample-mean")]
    policy: PolicyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Share one direction set across classes
    #[arg(long)]
    shared_y: bool,
    /// Random vertices averaged for the vertex-barycenter policy
    #[arg(long, default_value_t = 100)]
    barycenter_samples: usize,
}

#[derive(Args)]
struct ScoreArgs {
    /// Fitted model file
    #[arg(long)]
    model: PathBuf,
    /// Data CSV to score
    #[arg(long)]
    data: PathBuf,
    /// Output scores CSV
    #[arg(long)]
    out: PathBuf,
    /// Rejection threshold on the minimum scaling distance ("inf" disables
    /// rejection)
    #[arg(long, default_value_t = 1.0)]
    reject_threshold: f64,
}

#[derive(Subcommand)]
enum EvalCommand {
    /// Per-class separation AUCs: descriptor vs nearest-centroid baseline
    Separation(SeparationArgs),
    /// Anomaly detection on contaminated training data
    Anomaly(AnomalyArgs),
    /// (m, d) sensitivity grid on synthetic mixtures
    Grid(GridArgs),
    /// Out-of-distribution scoring with delta histograms
    Ood(OodArgs),
}

#[derive(Args)]
struct SeparationArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    ell: usize,
    #[arg(long, value_enum, default_value = "sample-mean")]
    policy: PolicyArg,
    /// Seeds: comma list ("1,2,3") or range ("0..5")
    #[arg(long, default_value = "0..5")]
    seeds: String,
    #[arg(long, default_value_t = 100)]
    barycenter_samples: usize,
    /// Containment tolerance (default from RPD_TOL, else 1e-9)
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    /// Optional flat CSV export
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct AnomalyArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    /// Class treated as normal; its training points get contaminated
    #[arg(long)]
    target_class: usize,
    #[arg(long, default_value_t = 0.02)]
    p: f64,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    ell: usize,
    #[arg(long, value_enum, default_value = "sample-mean")]
    policy: PolicyArg,
    #[arg(long, default_value = "0..5")]
    seeds: String,
    #[arg(long, default_value_t = 100)]
    barycenter_samples: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    /// Latent dimensions of the synthetic mixtures
    #[arg(long, default_value = "5,10,15,20")]
    d_values: String,
    /// Direction counts
    #[arg(long, default_value = "160,320,640,1280")]
    m_values: String,
    #[arg(long, default_value_t = 10)]
    classes: usize,
    #[arg(long, default_value_t = 500)]
    n_per_class: usize,
    #[arg(long, default_value_t = 200)]
    n_test_per_class: usize,
    /// Distance scale between synthetic class means
    #[arg(long, default_value_t = 12.0)]
    separation: f64,
    /// Seed for the synthetic datasets
    #[arg(long, default_value_t = 7)]
    data_seed: u64,
    #[arg(long, default_value_t = 0.02)]
    p: f64,
    #[arg(long, default_value_t = 2)]
    ell: usize,
    #[arg(long, value_enum, default_value = "sample-mean")]
    policy: PolicyArg,
    #[arg(long, default_value = "0..3")]
    seeds: String,
    #[arg(long, default_value_t = 100)]
    barycenter_samples: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct OodArgs {
    /// In-distribution training CSV
    #[arg(long)]
    train: PathBuf,
    /// In-distribution test CSV
    #[arg(long)]
    test: PathBuf,
    /// Out-of-distribution CSV
    #[arg(long)]
    ood: PathBuf,
    #[arg(long, default_value_t = 1)]
    ell: usize,
    /// Direction count; defaults to max(640, 40 d)
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_enum, default_value = "sample-mean")]
    policy: PolicyArg,
    #[arg(long, default_value = "0..5")]
    seeds: String,
    #[arg(long, default_value_t = 50)]
    bins: usize,
    #[arg(long, default_value_t = 100)]
    barycenter_samples: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SynthCommand {
    /// Gaussian mixture with axis-placed means
    Gaussian(SynthGaussianArgs),
    /// Points uniform on a sphere (all label 0)
    Sphere(SynthSphereArgs),
    /// 3-D unit Gaussian cloud plus wide outliers, one label, inner points
    /// first
    Outliers(SynthOutliersArgs),
}

#[derive(Args)]
struct SynthGaussianArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n_per_class: usize,
    /// Distance scale between class means
    #[arg(long, default_value_t = 10.0)]
    separation: f64,
    /// Per-coordinate standard deviations shared by all classes
    /// (comma list of length d); default isotropic 1
    #[arg(long)]
    stds: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthSphereArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    /// Sphere center (comma list of length d); default origin
    #[arg(long)]
    center: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthOutliersArgs {
    #[arg(long, default_value_t = 145)]
    n_inner: usize,
    #[arg(long, default_value_t = 5)]
    n_outer: usize,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 3.0)]
    outlier_scale: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum TheoryCommand {
    /// Exact vertex counts of descriptors over growing direction counts
    VertexCount(VertexCountArgs),
    /// Vertex-barycenter concentration on the sphere model
    Barycenter(BarycenterArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShapeArg {
    GaussianRpd,
    Cube,
}

#[derive(Args)]
struct VertexCountArgs {
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    ell: usize,
    #[arg(long, default_value = "50,100,200,400")]
    m_values: String,
    #[arg(long, default_value = "0..10")]
    seeds: String,
    #[arg(long, value_enum, default_value = "gaussian-rpd")]
    shape: ShapeArg,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct BarycenterArgs {
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    m: usize,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Sphere center (comma list of length d); default origin
    #[arg(long)]
    center: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    csv: Option<PathBuf>,
}

// ---------------------------------------------------------------------------

struct CliError {
    message: String,
    kind: &'static str,
    code: i32,
}

impl CliError {
    fn user(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            kind: "user",
            code: 1,
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            kind: "numerical",
            code: 2,
        }
    }
}

impl From<rpd::DataError> for CliError {
    fn from(e: rpd::DataError) -> Self {
        CliError::user(e.to_string())
    }
}

impl From<rpd::DescriptorError> for CliError {
    fn from(e: rpd::DescriptorError) -> Self {
        if e.is_numerical() {
            CliError::internal(e.to_string())
        } else {
            CliError::user(e.to_string())
        }
    }
}

impl From<rpd::harness::HarnessError> for CliError {
    fn from(e: rpd::harness::HarnessError) -> Self {
        if e.is_numerical() {
            CliError::internal(e.to_string())
        } else {
            CliError::user(e.to_string())
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            let rendered = e.to_string();
            let first_line = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: kind=user msg={first_line:?}");
            std::process::exit(1);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: kind={} msg={:?}", e.kind, e.message);
        std::process::exit(e.code);
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::Score(args) => cmd_score(args),
        Command::Eval(EvalCommand::Separation(args)) => cmd_eval_separation(args),
        Command::Eval(EvalCommand::Anomaly(args)) => cmd_eval_anomaly(args),
        Command::Eval(EvalCommand::Grid(args)) => cmd_eval_grid(args),
        Command::Eval(EvalCommand::Ood(args)) => cmd_eval_ood(args),
        Command::Synth(SynthCommand::Gaussian(args)) => cmd_synth_gaussian(args),
        Command::Synth(SynthCommand::Sphere(args)) => cmd_synth_sphere(args),
        Command::Synth(SynthCommand::Outliers(args)) => cmd_synth_outliers(args),
        Command::Theory(TheoryCommand::VertexCount(args)) => cmd_theory_vertex_count(args),
        Command::Theory(TheoryCommand::Barycenter(args)) => cmd_theory_barycenter(args),
    }
}

// ---------------------------------------------------------------------------
// Flag parsing helpers
// ---------------------------------------------------------------------------

/// Seeds as either a comma list ("1,2,3") or a half-open range ("0..10").
fn parse_seeds(spec: &str) -> Result<Vec<u64>, CliError> {
    let spec = spec.trim();
    if let Some((start, end)) = spec.split_once("..") {
        let start: u64 = start
            .trim()
            .parse()
            .map_err(|_| CliError::user(format!("bad seed range start {start:?}")))?;
        let end: u64 = end
            .trim()
            .parse()
            .map_err(|_| CliError::user(format!("bad seed range end {end:?}")))?;
        if end <= start {
            return Err(CliError::user(format!("empty seed range {spec:?}")));
        }
        return Ok((start..end).collect());
    }
    spec.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| CliError::user(format!("bad seed {part:?}")))
        })
        .collect()
}

fn parse_usize_list(spec: &str, what: &str) -> Result<Vec<usize>, CliError> {
    let values: Result<Vec<usize>, _> = spec.split(',').map(|p| p.trim().parse()).collect();
    let values = values.map_err(|_| CliError::user(format!("bad {what} list {spec:?}")))?;
    if values.is_empty() {
        return Err(CliError::user(format!("empty {what} list")));
    }
    Ok(values)
}

fn parse_f64_list(spec: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let values: Result<Vec<f64>, _> = spec.split(',').map(|p| p.trim().parse()).collect();
    values.map_err(|_| CliError::user(format!("bad {what} list {spec:?}")))
}

/// Containment tolerance: flag, else the RPD_TOL environment variable,
/// else 1e-9.
fn resolve_tol(flag: Option<f64>) -> Result<f64, CliError> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var("RPD_TOL") {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| CliError::user(format!("RPD_TOL {raw:?} is not a number"))),
        Err(_) => Ok(rpd::DEFAULT_CONTAINMENT_TOL),
    }
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes)
        .map_err(|e| CliError::user(format!("{}: {e}", path.display())))
}

fn write_report(
    report: &EvalReport,
    out: &PathBuf,
    csv: Option<&PathBuf>,
) -> Result<(), CliError> {
    write_file(out, &report.to_json())?;
    if let Some(csv_path) = csv {
        write_file(csv_path, report.to_flat_csv().as_bytes())?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let train = load_csv(&args.train)?;
    let timer = Instant::now();
    let model = fit_model(
        &train,
        &FitConfig {
            m: args.m,
            ell: args.ell,
            policy: args.policy.to_policy(),
            seed: args.seed,
            shared_directions: args.shared_y,
            barycenter_samples: args.barycenter_samples,
        },
    )?;
    let elapsed = timer.elapsed().as_secs_f64();
    for class in model.classes() {
        let central = class.polytope().central_point().expect("fitted class");
        eprintln!(
            "class {}: n={} policy={} fallback={}",
            class.label(),
            class.train_size(),
            central.policy,
            class.fallback_applied()
        );
    }
    eprintln!("fit completed in {elapsed:.3}s");
    write_file(&args.out, &model.to_json())
}

fn cmd_score(args: ScoreArgs) -> Result<(), CliError> {
    let bytes = std::fs::read(&args.model)
        .map_err(|e| CliError::user(format!("{}: {e}", args.model.display())))?;
    let model = RpdModel::from_json(&bytes)?;
    let data = load_csv(&args.data)?;
    if data.dim() != model.dim() {
        return Err(CliError::user(format!(
            "data dimension {} does not match model dimension {}",
            data.dim(),
            model.dim()
        )));
    }
    let timer = Instant::now();
    let mut out = String::from("");
    for class in model.classes() {
        let _ = write!(out, "sd_{},", class.label());
    }
    out.push_str("delta,prediction\n");
    for i in 0..data.len() {
        let s = score(&model, data.point(i))?;
        for sd in &s.per_class {
            let _ = write!(out, "{sd},");
        }
        match classify(&model, data.point(i), args.reject_threshold)? {
            Classification::Assigned(label) => {
                let _ = writeln!(out, "{},{}", s.delta, label);
            }
            Classification::Reject => {
                let _ = writeln!(out, "{},REJECT", s.delta);
            }
        }
    }
    let elapsed = timer.elapsed().as_secs_f64();
    eprintln!(
        "scored {} samples in {elapsed:.3}s ({:.4} ms/sample)",
        data.len(),
        1e3 * elapsed / data.len() as f64
    );
    write_file(&args.out, out.as_bytes())
}

fn cmd_eval_separation(args: SeparationArgs) -> Result<(), CliError> {
    let train = load_csv(&args.train)?;
    let test = load_csv(&args.test)?;
    let cfg = SeparationConfig {
        m: args.m,
        ell: args.ell,
        policy: args.policy.to_policy(),
        seeds: parse_seeds(&args.seeds)?,
        barycenter_samples: args.barycenter_samples,
        tol: resolve_tol(args.tol)?,
    };
    let report = run_class_separation(&train, &test, &cfg)?;
    eprintln!(
        "separation: {} classes x {} seeds in {:.3}s",
        train.class_labels().len(),
        cfg.seeds.len(),
        report.timings.total_seconds
    );
    write_report(&report, &args.out, args.csv.as_ref())
}

fn cmd_eval_anomaly(args: AnomalyArgs) -> Result<(), CliError> {
    let train = load_csv(&args.train)?;
    let test = load_csv(&args.test)?;
    let cfg = AnomalyConfig {
        target_class: args.target_class,
        p: args.p,
        m: args.m,
        ell: args.ell,
        policy: args.policy.to_policy(),
        seeds: parse_seeds(&args.seeds)?,
        barycenter_samples: args.barycenter_samples,
    };
    let report = run_anomaly_detection(&train, &test, &cfg)?;
    eprintln!(
        "anomaly: class {} over {} seeds in {:.3}s",
        args.target_class,
        cfg.seeds.len(),
        report.timings.total_seconds
    );
    write_report(&report, &args.out, args.csv.as_ref())
}

fn cmd_eval_grid(args: GridArgs) -> Result<(), CliError> {
    let d_values = parse_usize_list(&args.d_values, "d")?;
    let m_values = parse_usize_list(&args.m_values, "m")?;
    let mut datasets = Vec::new();
    for (i, &d) in d_values.iter().enumerate() {
        let components = axis_means(args.classes, d, args.separation, None)?;
        let data_seed = rpd::rng::derive_seed(args.data_seed, i as u64);
        let train = gen_gaussian_mixture(&components, args.n_per_class, data_seed)?;
        let test = gen_gaussian_mixture(
            &components,
            args.n_test_per_class,
            rpd::rng::derive_seed(data_seed, 1),
        )?;
        datasets.push(GridDatasets { train, test });
    }
    let cfg = GridConfig {
        p: args.p,
        ell: args.ell,
        m_values,
        policy: args.policy.to_policy(),
        seeds: parse_seeds(&args.seeds)?,
        barycenter_samples: args.barycenter_samples,
    };
    let report = run_sensitivity_grid(&datasets, &cfg)?;
    eprintln!(
        "grid: {} cells, {} rows in {:.3}s",
        report.grid_summary.len(),
        report.grid_rows.len(),
        report.timings.total_seconds
    );
    write_report(&report, &args.out, args.csv.as_ref())
}

fn cmd_eval_ood(args: OodArgs) -> Result<(), CliError> {
    let train = load_csv(&args.train)?;
    let test = load_csv(&args.test)?;
    let ood = load_csv(&args.ood)?;
    let cfg = OodConfig {
        ell: args.ell,
        m_override: args.m,
        policy: args.policy.to_policy(),
        seeds: parse_seeds(&args.seeds)?,
        barycenter_samples: args.barycenter_samples,
        bins: args.bins,
    };
    let m = cfg.m_override.unwrap_or_else(|| default_ood_m(train.dim()));
    let report = run_ood_detection(&train, &test, &ood, &cfg)?;
    eprintln!(
        "ood: m={m}, {} seeds in {:.3}s",
        cfg.seeds.len(),
        report.timings.total_seconds
    );
    write_report(&report, &args.out, args.csv.as_ref())
}

/// Class means on scaled axis directions: class k sits at
/// `separation * (1 + k div d)` along axis `k mod d`.
fn axis_means(
    k: usize,
    d: usize,
    separation: f64,
    stds: Option<&[f64]>,
) -> Result<Vec<MixtureComponent>, CliError> {
    if k == 0 || d == 0 {
        return Err(CliError::user("need k >= 1 and d >= 1"));
    }
    let covariance = match stds {
        None => CovarianceSpec::Spherical(1.0),
        Some(stds) => {
            if stds.len() != d {
                return Err(CliError::user(format!(
                    "{} standard deviations for dimension {d}",
                    stds.len()
                )));
            }
            CovarianceSpec::Diagonal(stds.iter().map(|s| s * s).collect())
        }
    };
    Ok((0..k)
        .map(|i| {
            let mut mean = vec![0.0; d];
            mean[i % d] = separation * (1.0 + (i / d) as f64);
            MixtureComponent {
                mean,
                covariance: covariance.clone(),
            }
        })
        .collect())
}

fn cmd_synth_gaussian(args: SynthGaussianArgs) -> Result<(), CliError> {
    let stds = match &args.stds {
        Some(spec) => Some(parse_f64_list(spec, "stds")?),
        None => None,
    };
    let components = axis_means(args.k, args.d, args.separation, stds.as_deref())?;
    let data = gen_gaussian_mixture(&components, args.n_per_class, args.seed)?;
    save_csv(&data, &args.out)?;
    eprintln!(
        "wrote {} points ({} classes, d={}) to {}",
        data.len(),
        args.k,
        args.d,
        args.out.display()
    );
    Ok(())
}

fn cmd_synth_sphere(args: SynthSphereArgs) -> Result<(), CliError> {
    let center = match &args.center {
        Some(spec) => parse_f64_list(spec, "center")?,
        None => vec![0.0; args.d],
    };
    let cloud = gen_sphere_uniform(args.n, args.d, &center, args.radius, args.seed)?;
    let rows: Vec<(Vec<f64>, usize)> = cloud.iter().map(|p| (p.to_vec(), 0usize)).collect();
    let data = LabeledDataset::from_rows(rows).map_err(|e| CliError::user(e.to_string()))?;
    save_csv(&data, &args.out)?;
    eprintln!("wrote {} sphere points to {}", args.n, args.out.display());
    Ok(())
}

fn cmd_synth_outliers(args: SynthOutliersArgs) -> Result<(), CliError> {
    let data = gen_gaussian_with_outliers(
        args.n_inner,
        args.n_outer,
        args.d,
        args.outlier_scale,
        args.seed,
    )?;
    save_csv(&data, &args.out)?;
    eprintln!(
        "wrote {} inner + {} outlier points to {}",
        args.n_inner,
        args.n_outer,
        args.out.display()
    );
    Ok(())
}

fn cmd_theory_vertex_count(args: VertexCountArgs) -> Result<(), CliError> {
    let cfg = VertexCountConfig {
        d: args.d,
        n: args.n,
        ell: args.ell,
        m_values: parse_usize_list(&args.m_values, "m")?,
        seeds: parse_seeds(&args.seeds)?,
        shape: match args.shape {
            ShapeArg::GaussianRpd => VertexCountShape::GaussianRpd,
            ShapeArg::Cube => VertexCountShape::Cube,
        },
    };
    let report = run_vertex_count_check(&cfg)?;
    eprintln!(
        "vertex-count: {} rows in {:.3}s",
        report.vertex_counts.len(),
        report.timings.total_seconds
    );
    write_report(&report, &args.out, args.csv.as_ref())
}

fn cmd_theory_barycenter(args: BarycenterArgs) -> Result<(), CliError> {
    let center = match &args.center {
        Some(spec) => parse_f64_list(spec, "center")?,
        None => vec![0.0; args.d],
    };
    let cfg = BarycenterConfig {
        d: args.d,
        n: args.n,
        m: args.m,
        samples: args.samples,
        trials: args.trials,
        epsilon: args.epsilon,
        center,
        radius: args.radius,
        seed: args.seed,
    };
    let report = run_barycenter_check(&cfg)?;
    let successes = report
        .barycenter_trials
        .iter()
        .filter(|r| r.success)
        .count();
    eprintln!(
        "barycenter: {successes}/{} trials within epsilon={} in {:.3}s",
        cfg.trials, cfg.epsilon, report.timings.total_seconds
    );
    write_report(&report, &args.out, args.csv.as_ref())
}
