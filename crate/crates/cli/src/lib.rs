//! Command-line driver: load or generate a graph, run kernels under the
//! standard trial schedule, verify, and report timings.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use gapkit::harness::{
    self, BenchPlan, BenchReport, GraphSet, HarnessError, Kernel, KernelParams, TrialObserver,
};
use gapkit::io::{load_graph, write_serialized, GraphFileFormat, GraphIoError};
use gapkit::{assign_weights, build_csr, generate, CsrGraph, GenSpec, NodeId, DEFAULT_SEED};

/// Exit status when every requested verification passed.
pub const EXIT_OK: i32 = 0;
/// Exit status when a trial failed verification.
pub const EXIT_VERIFY_FAILED: i32 = 1;
/// Exit status for usage, configuration and I/O errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gapkit", version, about = "Graph kernel benchmark driver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Breadth-first search from 64 sources
    Bfs {
        #[command(flatten)]
        run: RunArgs,
        /// Use this source for every trial
        #[arg(short = 'r', long)]
        source: Option<NodeId>,
    },
    /// Delta-stepping shortest paths from 64 sources
    Sssp {
        #[command(flatten)]
        run: RunArgs,
        #[arg(short = 'r', long)]
        source: Option<NodeId>,
        /// Bucket width
        #[arg(short = 'd', long, default_value_t = gapkit::kernels::DEFAULT_DELTA)]
        delta: u32,
    },
    /// PageRank, 16 trials
    Pr {
        #[command(flatten)]
        run: RunArgs,
        /// Maximum iterations per trial
        #[arg(short = 'i', long = "max-iters", default_value_t = gapkit::kernels::DEFAULT_MAX_ITERS)]
        max_iters: usize,
        /// Stop once the L1 change of an iteration falls below this
        #[arg(short = 't', long, default_value_t = gapkit::kernels::DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Connected components, 16 trials
    Cc {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Betweenness centrality, 16 trials
    Bc {
        #[command(flatten)]
        run: RunArgs,
        #[arg(short = 'r', long)]
        source: Option<NodeId>,
        /// Sources per trial
        #[arg(short = 'i', long = "sources-per-trial", default_value_t = 4)]
        sources_per_trial: usize,
    },
    /// Triangle counting, 3 trials
    Tc {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write the graph in the serialized .sg/.wsg format
    Convert {
        #[command(flatten)]
        graph: GraphArgs,
        /// Output path; a .wsg extension adds weights to unweighted graphs
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Run every kernel with its standard trial count
    Suite {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// SSSP bucket width
        #[arg(short = 'd', long, default_value_t = gapkit::kernels::DEFAULT_DELTA)]
        delta: u32,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// Load a graph file (.el .wel .graph .mtx .sg .wsg)
    #[arg(short = 'f', long = "file")]
    file: Option<PathBuf>,
    /// Generate a Kronecker graph with 2^SCALE vertices
    #[arg(short = 'g', long = "kron", value_name = "SCALE")]
    kron: Option<u32>,
    /// Generate a uniform random graph with 2^SCALE vertices
    #[arg(short = 'u', long = "urand", value_name = "SCALE")]
    urand: Option<u32>,
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Average degree of generated graphs
    #[arg(short = 'k', long, default_value_t = gapkit::generate::DEFAULT_DEGREE)]
    degree: u32,
    /// Treat a loaded file as undirected
    #[arg(short = 's', long)]
    symmetrize: bool,
    /// Seed for generation, weights and source selection
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Check every trial against a serial oracle
    #[arg(short = 'v', long)]
    verify: bool,
    /// Write the per-trial CSV report here
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    /// Worker threads for the kernels
    #[arg(long, env = "GAPKIT_THREADS")]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    common: CommonArgs,
    /// Number of trials
    #[arg(short = 'n', long)]
    trials: Option<usize>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Graph(#[from] GraphIoError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error("{0}")]
    Config(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Harness(HarnessError::Verification { .. }) => EXIT_VERIFY_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

impl From<gapkit::GenError> for CliError {
    fn from(e: gapkit::GenError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<gapkit::BuildError> for CliError {
    fn from(e: gapkit::BuildError) -> Self {
        CliError::Config(e.to_string())
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit status.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn graph_name(args: &GraphArgs) -> String {
    match (&args.source.file, args.source.kron, args.source.urand) {
        (Some(path), _, _) => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string()),
        (_, Some(scale), _) => format!("kron{scale}"),
        (_, _, Some(scale)) => format!("urand{scale}"),
        _ => unreachable!("clap enforces one graph source"),
    }
}

fn load(args: &GraphArgs) -> Result<CsrGraph, CliError> {
    let spec = match (&args.source.file, args.source.kron, args.source.urand) {
        (Some(path), _, _) => {
            log::info!("loading {}", path.display());
            return Ok(load_graph(path, args.symmetrize)?);
        }
        (_, Some(scale), _) => GenSpec::kronecker(scale),
        (_, _, Some(scale)) => GenSpec::uniform(scale),
        _ => unreachable!("clap enforces one graph source"),
    };
    let spec = spec.with_degree(args.degree).with_seed(args.seed);
    log::info!(
        "generating {:?} scale {} degree {}",
        spec.kind,
        spec.scale,
        spec.avg_degree
    );
    let el = generate(&spec)?;
    Ok(build_csr(&el, false, true)?)
}

fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Config("--threads must be at least 1".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn write_report(path: Option<&Path>, reports: &[BenchReport]) -> Result<(), CliError> {
    if let Some(path) = path {
        let mut w = BufWriter::new(File::create(path)?);
        harness::write_csv(&mut w, reports)?;
        w.flush()?;
    }
    Ok(())
}

fn print_graph_info(name: &str, g: &CsrGraph) {
    println!(
        "graph {name}: {} vertices, {} {} edges{}",
        g.num_nodes(),
        if g.is_directed() {
            g.num_edges()
        } else {
            g.num_edges_undirected()
        },
        if g.is_directed() {
            "directed"
        } else {
            "undirected"
        },
        if g.is_weighted() { ", weighted" } else { "" }
    );
}

/// Runs every kernel on `set` with its standard plan. Verification
/// failures do not stop the remaining kernels; the returned flag is true
/// when all requested verifications passed.
pub fn run_suite(
    set: &GraphSet,
    params: KernelParams,
    seed: u64,
    verify: bool,
    observer: &mut dyn TrialObserver,
) -> Result<(Vec<BenchReport>, bool), HarnessError> {
    let mut reports = Vec::new();
    let mut all_ok = true;
    for kernel in Kernel::ALL {
        let plan = BenchPlan::new(kernel).with_params(params).with_seed(seed);
        match set.run_observed(&plan, verify, observer) {
            Ok(r) => reports.push(r),
            Err(HarnessError::Verification { detail, report, .. }) => {
                eprintln!("{kernel}: verification failed: {detail}");
                all_ok = false;
                reports.push(*report);
            }
            Err(e) => return Err(e),
        }
    }
    Ok((reports, all_ok))
}

struct NoObserver;

impl TrialObserver for NoObserver {}

fn execute(command: Command) -> Result<i32, CliError> {
    let (run, kernel, source, tweak): (
        RunArgs,
        Kernel,
        Option<NodeId>,
        Box<dyn Fn(&mut BenchPlan)>,
    ) = match command {
        Command::Convert { graph, output } => return convert(&graph, &output),
        Command::Suite {
            graph,
            common,
            delta,
        } => return suite(&graph, &common, delta),
        Command::Bfs { run, source } => (run, Kernel::Bfs, source, Box::new(|_| {})),
        Command::Sssp { run, source, delta } => (
            run,
            Kernel::Sssp,
            source,
            Box::new(move |p| p.params.delta = delta),
        ),
        Command::Pr {
            run,
            max_iters,
            tolerance,
        } => (
            run,
            Kernel::PageRank,
            None,
            Box::new(move |p| {
                p.params.max_iters = max_iters;
                p.params.tolerance = tolerance;
            }),
        ),
        Command::Cc { run } => (run, Kernel::Cc, None, Box::new(|_| {})),
        Command::Bc {
            run,
            source,
            sources_per_trial,
        } => {
            if sources_per_trial == 0 {
                return Err(CliError::Config("-i must be at least 1 for bc".into()));
            }
            (
                run,
                Kernel::Bc,
                source,
                Box::new(move |p| p.sources_per_trial = sources_per_trial),
            )
        }
        Command::Tc { run } => (run, Kernel::Tc, None, Box::new(|_| {})),
    };

    let name = graph_name(&run.graph);
    let g = load(&run.graph)?;
    print_graph_info(&name, &g);
    let set = GraphSet::new(name, g, run.graph.seed);

    let mut plan = BenchPlan::new(kernel)
        .with_seed(run.graph.seed)
        .with_fixed_source(source);
    if let Some(n) = run.trials {
        plan = plan.with_trials(n);
    }
    tweak(&mut plan);

    let common = &run.common;
    let result = with_threads(common.threads, || set.run(&plan, common.verify))?;
    let (report, status) = match result {
        Ok(r) => (r, EXIT_OK),
        Err(HarnessError::Verification {
            detail,
            report,
            trial,
            ..
        }) => {
            eprintln!("{kernel} trial {trial}: verification failed: {detail}");
            (*report, EXIT_VERIFY_FAILED)
        }
        Err(e) => return Err(e.into()),
    };
    for t in &report.trials {
        println!("trial {:>3}: {:.6} s", t.trial_index, t.elapsed_seconds);
    }
    print!("{}", harness::render_table(std::slice::from_ref(&report)));
    write_report(common.output.as_deref(), std::slice::from_ref(&report))?;
    Ok(status)
}

fn suite(graph: &GraphArgs, common: &CommonArgs, delta: u32) -> Result<i32, CliError> {
    let name = graph_name(graph);
    let g = load(graph)?;
    print_graph_info(&name, &g);
    let set = GraphSet::new(name, g, graph.seed);
    let params = KernelParams {
        delta,
        ..KernelParams::default()
    };
    let (reports, all_ok) = with_threads(common.threads, || {
        run_suite(&set, params, graph.seed, common.verify, &mut NoObserver)
    })??;
    print!("{}", harness::render_table(&reports));
    write_report(common.output.as_deref(), &reports)?;
    Ok(if all_ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn convert(graph: &GraphArgs, output: &Path) -> Result<i32, CliError> {
    let format = GraphFileFormat::from_path(output)?;
    if !format.is_serialized() {
        return Err(CliError::Config(format!(
            "convert writes .sg or .wsg, not {}",
            output.display()
        )));
    }
    let mut g = load(graph)?;
    let want_weights = format == GraphFileFormat::SerializedWeightedBinary;
    if want_weights && !g.is_weighted() {
        let el = assign_weights(g.to_edge_list(), graph.seed)?;
        g = build_csr(&el, g.is_directed(), false)?;
    }
    if !want_weights && g.is_weighted() {
        return Err(CliError::Config(
            "weighted graph must be written as .wsg".into(),
        ));
    }
    print_graph_info(&graph_name(graph), &g);
    write_serialized(&g, output)?;
    println!("wrote {}", output.display());
    Ok(EXIT_OK)
}
