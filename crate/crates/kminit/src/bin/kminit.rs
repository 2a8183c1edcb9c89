//! Command-line front end: run a single clustering, run the full
//! benchmark, inspect a dataset, or dump hierarchical split traces.

use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kminit::bench::{
    cpu_time_ms, emit_report, relative_compare, run_benchmark, BenchReport, CompareMode,
    Criterion,
};
use kminit::dataset::{load_delimited, min_max_normalize, Dataset, DatasetSchema};
use kminit::error::Error;
use kminit::init::{hierarchical_init_trace, initialize, InitMethod, SplitAxis, DEFAULT_BINS};
use kminit::lloyd::{run_kmeans, KMeansConfig};
use kminit::manifest::load_manifest;
use kminit::rng::SeededRng;

/// Directory searched for `manifest.toml` when no manifest is given.
const DATA_DIR_ENV: &str = "KMINIT_DATA_DIR";

#[derive(Parser)]
#[command(name = "kminit", version, about = "k-means with pluggable initialization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one initializer plus k-means and print the four criteria.
    Cluster(ClusterArgs),
    /// Run the full benchmark protocol and write a report.
    Bench(BenchArgs),
    /// Print a dataset's shape, class count and attribute ranges.
    Inspect(DatasetArgs),
    /// Print the hierarchical split sequence of a divisive initializer.
    Trace(TraceArgs),
}

#[derive(Args)]
struct DatasetArgs {
    /// Dataset: a file path, or a name listed in the manifest.
    #[arg(long)]
    dataset: String,

    /// Manifest used to resolve dataset names
    /// (default: $KMINIT_DATA_DIR/manifest.toml, then data/manifest.toml).
    #[arg(long)]
    manifest: Option<PathBuf>,

    /// Field delimiter for file paths ("ws" for whitespace).
    #[arg(long, default_value = ",")]
    delimiter: String,

    /// Class-label column index for file paths.
    #[arg(long, conflicts_with = "k")]
    class_column: Option<usize>,

    /// Skip a header line when reading a file path.
    #[arg(long)]
    header: bool,

    /// Missing-value token; rows containing it are dropped.
    #[arg(long, default_value = "?")]
    missing: String,

    /// Number of clusters (default: number of classes).
    #[arg(long)]
    k: Option<usize>,

    /// Skip min-max normalization.
    #[arg(long)]
    no_normalize: bool,
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    data: DatasetArgs,

    /// Initialization method: F, M, X, K, V, P, OV or OP.
    #[arg(long)]
    method: String,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,

    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,

    #[arg(long, default_value_t = 100)]
    max_iters: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Manifest listing the benchmark datasets.
    #[arg(long)]
    manifest: Option<PathBuf>,

    /// Methods to run (default: all eight).
    #[arg(long, value_delimiter = ',')]
    methods: Vec<String>,

    /// Runs per random method.
    #[arg(long, default_value_t = 100)]
    runs: usize,

    /// Base seed; run i uses seed base+i.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,

    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,

    #[arg(long, default_value_t = 100)]
    max_iters: usize,

    /// Skip min-max normalization.
    #[arg(long)]
    no_normalize: bool,

    /// Directory for report files.
    #[arg(long)]
    output: PathBuf,

    /// Equality granularity for the relative comparisons.
    #[arg(long, value_enum, default_value_t = CompareFlag::Rounded)]
    compare: CompareFlag,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompareFlag {
    Rounded,
    Exact,
}

impl From<CompareFlag> for CompareMode {
    fn from(f: CompareFlag) -> Self {
        match f {
            CompareFlag::Rounded => CompareMode::Rounded,
            CompareFlag::Exact => CompareMode::Exact,
        }
    }
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    data: DatasetArgs,

    /// Hierarchical method: V, P, OV or OP.
    #[arg(long)]
    method: String,

    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
}

fn main() -> ExitCode {
    // Die quietly when the output pipe closes (e.g. piping into head).
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Cluster(args) => cmd_cluster(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Inspect(args) => cmd_inspect(args),
        Command::Trace(args) => cmd_trace(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn default_manifest() -> PathBuf {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) => Path::new(&dir).join("manifest.toml"),
        None => PathBuf::from("data/manifest.toml"),
    }
}

/// Load a dataset either directly from a file or via the manifest.
/// Returns the dataset (normalized unless disabled) and cluster count.
fn resolve_dataset(args: &DatasetArgs) -> Result<(Dataset, usize), Error> {
    let path = Path::new(&args.dataset);
    let (ds, class_k) = if path.is_file() {
        let delimiter = if args.delimiter == "ws" {
            None
        } else {
            let mut chars = args.delimiter.chars();
            let c = chars.next();
            if c.is_none() || chars.next().is_some() {
                return Err(Error::Manifest(
                    "--delimiter must be one character or 'ws'".to_string(),
                ));
            }
            c
        };
        let schema = DatasetSchema {
            delimiter,
            class_column: args.class_column,
            missing_token: args.missing.clone(),
            has_header: args.header,
        };
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| args.dataset.clone());
        let file = std::fs::File::open(path)?;
        let ds = load_delimited(&name, BufReader::new(file), &schema)?;
        let class_k = ds.class_count().ok();
        (ds, class_k)
    } else {
        let manifest_path = args.manifest.clone().unwrap_or_else(default_manifest);
        let entries = load_manifest(&manifest_path)?;
        let entry = entries
            .iter()
            .find(|e| e.name == args.dataset)
            .ok_or_else(|| {
                Error::Manifest(format!(
                    "dataset '{}' is neither a file nor listed in {}",
                    args.dataset,
                    manifest_path.display()
                ))
            })?;
        let (ds, k) = entry.load(manifest_path.parent().unwrap_or(Path::new(".")))?;
        (ds, Some(k))
    };
    let k = match (args.k, class_k) {
        (Some(k), _) => k,
        (None, Some(k)) => k,
        (None, None) => {
            return Err(Error::Manifest(
                "no --k given and the dataset has no class labels".to_string(),
            ))
        }
    };
    let ds = if args.no_normalize { ds } else { min_max_normalize(&ds) };
    Ok((ds, k))
}

fn cmd_cluster(args: ClusterArgs) -> Result<(), Error> {
    let method = InitMethod::from_str(&args.method)?;
    let (ds, k) = resolve_dataset(&args.data)?;
    let cfg = KMeansConfig {
        max_iters: args.max_iters,
        epsilon: args.epsilon,
    };
    let mut rng = SeededRng::new(args.seed);
    let started = cpu_time_ms();
    let centers = initialize(&ds, method, k, args.bins, &mut rng)?;
    let result = run_kmeans(&ds, centers, &cfg)?;
    let cpu_ms = cpu_time_ms() - started;
    println!("dataset: {} (n={} d={} k={})", ds.name, ds.n(), ds.d(), k);
    println!("method: {method}");
    println!("initial_sse: {:.6}", result.initial_sse);
    println!("final_sse: {:.6}", result.final_sse);
    println!("iterations: {}", result.iterations);
    println!("cpu_ms: {}", cpu_ms.round() as i64);
    Ok(())
}

fn cmd_inspect(args: DatasetArgs) -> Result<(), Error> {
    let no_normalize = args.no_normalize;
    // Inspect reports the raw ranges; normalization is reported separately.
    let raw_args = DatasetArgs {
        no_normalize: true,
        ..args
    };
    let (ds, k) = resolve_dataset(&raw_args)?;
    println!("N={} D={} K'={}", ds.n(), ds.d(), k);
    for j in 0..ds.d() {
        println!("attr {}: [{}, {}]", j, ds.attr_min()[j], ds.attr_max()[j]);
    }
    if !no_normalize {
        println!("normalization: min-max to [0,1] applied before clustering");
    }
    Ok(())
}

fn axis_name(axis: &SplitAxis, d: usize) -> String {
    match axis {
        SplitAxis::Coordinate(j) => match (d, j) {
            (1..=3, 0) => "X".to_string(),
            (1..=3, 1) => "Y".to_string(),
            (1..=3, 2) => "Z".to_string(),
            (_, j) => format!("a{j}"),
        },
        SplitAxis::Principal(_) => "PC".to_string(),
    }
}

fn cmd_trace(args: TraceArgs) -> Result<(), Error> {
    let method = InitMethod::from_str(&args.method)?;
    let Some((axis_rule, split_rule)) = method.hierarchy_rules() else {
        return Err(Error::UnknownMethod(format!(
            "{method} is not hierarchical; use V, P, OV or OP"
        )));
    };
    let (ds, k) = resolve_dataset(&args.data)?;
    let (_, trace) = hierarchical_init_trace(&ds, k, axis_rule, split_rule, args.bins)?;
    for r in &trace {
        println!(
            "{} @ {:.6}  (sse {:.3} -> {:.3} + {:.3})",
            axis_name(&r.axis, ds.d()),
            r.threshold,
            r.parent_sse,
            r.left_sse,
            r.right_sse
        );
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), Error> {
    let methods: Vec<InitMethod> = if args.methods.is_empty() {
        InitMethod::ALL.to_vec()
    } else {
        args.methods
            .iter()
            .map(|s| InitMethod::from_str(s))
            .collect::<Result<_, _>>()?
    };
    let manifest_path = args.manifest.clone().unwrap_or_else(default_manifest);
    let base = manifest_path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let entries = load_manifest(&manifest_path)?;
    let cfg = KMeansConfig {
        max_iters: args.max_iters,
        epsilon: args.epsilon,
    };

    let mut datasets = Vec::new();
    for entry in &entries {
        match if args.no_normalize {
            entry.load(&base)
        } else {
            entry.load_normalized(&base)
        } {
            Ok(pair) => datasets.push(pair),
            Err(e) => eprintln!("skipping dataset '{}': {e}", entry.name),
        }
    }
    if datasets.is_empty() {
        return Err(Error::Manifest("no loadable datasets".to_string()));
    }
    eprintln!(
        "benchmarking {} datasets x {} methods ({} runs per random method)",
        datasets.len(),
        methods.len(),
        args.runs
    );

    let tasks: Vec<(&Dataset, usize)> = datasets.iter().map(|(ds, k)| (ds, *k)).collect();
    let (records, failures) = run_benchmark(&tasks, &methods, args.runs, args.seed, &cfg, args.bins);
    for f in &failures {
        eprintln!("run failed: {} / {}: {}", f.dataset, f.method, f.message);
    }
    let report = BenchReport::from_records(records, failures);
    emit_report(&report, &args.output)?;

    // Relative worse/same/better tallies for the Otsu variants.
    let mode: CompareMode = args.compare.into();
    for (a, b) in [(InitMethod::OV, InitMethod::V), (InitMethod::OP, InitMethod::P)] {
        if report.methods.contains(&a) && report.methods.contains(&b) {
            let cmp = relative_compare(&report.stats, a, b, mode);
            for c in Criterion::ALL {
                let (w, s, btr) = cmp[match c {
                    Criterion::InitialSse => 0,
                    Criterion::FinalSse => 1,
                    Criterion::Iterations => 2,
                    Criterion::CpuMs => 3,
                }];
                println!("{a} vs {b} on {}: worse {w}, same {s}, better {btr}", c.label());
            }
        }
    }
    println!("report written to {}", args.output.display());
    Ok(())
}
