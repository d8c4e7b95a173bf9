//! Timed benchmark trials.
//!
//! A trial times exactly one kernel call. Everything the kernel allocates,
//! including its solution array and any relabelled copy of the graph,
//! falls inside the timed region; source selection and verification fall
//! outside. Only the graph is shared between trials.

use std::fmt::{self, Write as _};
use std::io;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::Instant;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::generate::{assign_weights, GenError};
use crate::graph::{build_csr, BuildError, CsrGraph, NodeId};
use crate::kernels::{self, BfsConfig, KernelError, PageRankOutput};
use crate::sources::{SourceError, SourcePicker, DEFAULT_SEED};
use crate::verify::{self, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    Bfs,
    Sssp,
    PageRank,
    Cc,
    Bc,
    Tc,
}

impl Kernel {
    pub const ALL: [Kernel; 6] = [
        Kernel::Bfs,
        Kernel::Sssp,
        Kernel::PageRank,
        Kernel::Cc,
        Kernel::Bc,
        Kernel::Tc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Bfs => "bfs",
            Kernel::Sssp => "sssp",
            Kernel::PageRank => "pr",
            Kernel::Cc => "cc",
            Kernel::Bc => "bc",
            Kernel::Tc => "tc",
        }
    }

    /// Standard number of trials.
    pub fn default_trials(self) -> usize {
        match self {
            Kernel::Bfs | Kernel::Sssp => 64,
            Kernel::PageRank | Kernel::Cc | Kernel::Bc => 16,
            Kernel::Tc => 3,
        }
    }

    /// Sources consumed per trial; 0 for whole-graph kernels.
    pub fn default_sources_per_trial(self) -> usize {
        match self {
            Kernel::Bfs | Kernel::Sssp => 1,
            Kernel::Bc => 4,
            Kernel::PageRank | Kernel::Cc | Kernel::Tc => 0,
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kernel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kernel::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown kernel '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub delta: u32,
    pub damping: f32,
    pub tolerance: f64,
    pub max_iters: usize,
    pub bfs: BfsConfig,
}

impl Default for KernelParams {
    fn default() -> Self {
        Self {
            delta: kernels::DEFAULT_DELTA,
            damping: kernels::DEFAULT_DAMPING,
            tolerance: kernels::DEFAULT_TOLERANCE,
            max_iters: kernels::DEFAULT_MAX_ITERS,
            bfs: BfsConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    pub kernel: Kernel,
    pub trials: usize,
    pub sources_per_trial: usize,
    pub params: KernelParams,
    pub seed: u64,
    /// Use this source for every trial instead of drawing from the picker.
    pub fixed_source: Option<NodeId>,
}

impl BenchPlan {
    pub fn new(kernel: Kernel) -> Self {
        Self {
            kernel,
            trials: kernel.default_trials(),
            sources_per_trial: kernel.default_sources_per_trial(),
            params: KernelParams::default(),
            seed: DEFAULT_SEED,
            fixed_source: None,
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_params(mut self, params: KernelParams) -> Self {
        self.params = params;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_fixed_source(mut self, source: Option<NodeId>) -> Self {
        self.fixed_source = source;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub trial_index: usize,
    pub sources: Vec<NodeId>,
    pub elapsed_seconds: f64,
    /// `None` when verification was not requested.
    pub verified: Option<bool>,
    /// First 8 bytes of the SHA-256 of the solution, little-endian.
    pub digest: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub kernel: Kernel,
    pub graph: String,
    pub trials: Vec<TrialResult>,
}

impl BenchReport {
    pub fn mean_seconds(&self) -> f64 {
        if self.trials.is_empty() {
            return 0.0;
        }
        self.trials.iter().map(|t| t.elapsed_seconds).sum::<f64>() / self.trials.len() as f64
    }

    pub fn min_seconds(&self) -> f64 {
        self.trials
            .iter()
            .map(|t| t.elapsed_seconds)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_seconds(&self) -> f64 {
        self.trials
            .iter()
            .map(|t| t.elapsed_seconds)
            .fold(0.0, f64::max)
    }

    fn verified_summary(&self) -> &'static str {
        if self.trials.iter().any(|t| t.verified == Some(false)) {
            "no"
        } else if !self.trials.is_empty() && self.trials.iter().all(|t| t.verified == Some(true)) {
            "yes"
        } else {
            "skipped"
        }
    }

    /// One `kernel,graph,trial,source,elapsed_seconds,verified` line per
    /// trial followed by one summary line. Multi-source trials join their
    /// sources with `;`; whole-graph kernels print `-`.
    pub fn csv(&self) -> String {
        let mut out = String::new();
        for t in &self.trials {
            let sources = if t.sources.is_empty() {
                "-".to_string()
            } else {
                t.sources
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(";")
            };
            let verified = match t.verified {
                Some(true) => "yes",
                Some(false) => "no",
                None => "skipped",
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{:.9},{}",
                self.kernel, self.graph, t.trial_index, sources, t.elapsed_seconds, verified
            );
        }
        let _ = writeln!(
            out,
            "summary,{},{},trials={},mean={:.9},min={:.9},max={:.9},verified={}",
            self.kernel,
            self.graph,
            self.trials.len(),
            self.mean_seconds(),
            if self.trials.is_empty() {
                0.0
            } else {
                self.min_seconds()
            },
            self.max_seconds(),
            self.verified_summary()
        );
        out
    }
}

pub const CSV_HEADER: &str = "kernel,graph,trial,source,elapsed_seconds,verified";

/// Writes the CSV header and every report.
pub fn write_csv<W: io::Write>(mut w: W, reports: &[BenchReport]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in reports {
        w.write_all(r.csv().as_bytes())?;
    }
    Ok(())
}

/// Human-readable summary, one row per report.
pub fn render_table(reports: &[BenchReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6} {:<24} {:>6} {:>12} {:>12} {:>12} {:>9}",
        "kernel", "graph", "trials", "mean (s)", "min (s)", "max (s)", "verified"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<6} {:<24} {:>6} {:>12.6} {:>12.6} {:>12.6} {:>9}",
            r.kernel.name(),
            r.graph,
            r.trials.len(),
            r.mean_seconds(),
            if r.trials.is_empty() {
                0.0
            } else {
                r.min_seconds()
            },
            r.max_seconds(),
            r.verified_summary()
        );
    }
    out
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error("{kernel} failed: {error}")]
    Kernel { kernel: Kernel, error: KernelError },
    #[error("{kernel} trial {trial} failed verification: {detail}")]
    Verification {
        kernel: Kernel,
        trial: usize,
        detail: String,
        /// Trials completed up to and including the failing one.
        report: Box<BenchReport>,
    },
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Generate(#[from] GenError),
}

/// Hooks called immediately around each timed kernel call.
pub trait TrialObserver {
    fn timed_region_start(&mut self, _kernel: Kernel, _trial: usize) {}
    fn timed_region_end(&mut self, _kernel: Kernel, _trial: usize) {}
}

struct NoObserver;

impl TrialObserver for NoObserver {}

enum Output {
    Parents(Vec<i32>),
    Distances(Vec<u32>),
    PageRank(PageRankOutput),
    Labels(Vec<NodeId>),
    Centrality(Vec<f32>),
    Triangles(u64),
}

impl Output {
    fn digest(&self) -> u64 {
        let mut h = Sha256::new();
        match self {
            Output::Parents(v) => v.iter().for_each(|x| h.update(x.to_le_bytes())),
            Output::Distances(v) | Output::Labels(v) => {
                v.iter().for_each(|x| h.update(x.to_le_bytes()))
            }
            Output::PageRank(pr) => pr.scores.iter().for_each(|x| h.update(x.to_le_bytes())),
            Output::Centrality(v) => v.iter().for_each(|x| h.update(x.to_le_bytes())),
            Output::Triangles(c) => h.update(c.to_le_bytes()),
        }
        let bytes = h.finalize();
        u64::from_le_bytes(bytes[..8].try_into().expect("digest is 32 bytes"))
    }
}

fn check_plan(g: &CsrGraph, plan: &BenchPlan) -> Result<(), HarnessError> {
    match plan.kernel {
        Kernel::Sssp if !g.is_weighted() => {
            Err(HarnessError::Config("sssp needs a weighted graph".into()))
        }
        Kernel::Tc if g.is_directed() => {
            Err(HarnessError::Config("tc needs an undirected graph".into()))
        }
        Kernel::Bfs | Kernel::Sssp | Kernel::Bc if plan.sources_per_trial == 0 => {
            Err(HarnessError::Config(format!(
                "{} needs at least one source per trial",
                plan.kernel
            )))
        }
        Kernel::PageRank | Kernel::Cc | Kernel::Tc | Kernel::Bc if g.num_nodes() == 0 => {
            Err(HarnessError::Config("graph has no vertices".into()))
        }
        _ => Ok(()),
    }
}

fn run_kernel(g: &CsrGraph, plan: &BenchPlan, sources: &[NodeId]) -> Result<Output, KernelError> {
    let p = &plan.params;
    Ok(match plan.kernel {
        Kernel::Bfs => Output::Parents(kernels::bfs_with(g, sources[0], &p.bfs)?),
        Kernel::Sssp => Output::Distances(kernels::sssp(g, sources[0], p.delta)?),
        Kernel::PageRank => {
            Output::PageRank(kernels::pagerank(g, p.damping, p.tolerance, p.max_iters)?)
        }
        Kernel::Cc => Output::Labels(kernels::connected_components(g)),
        Kernel::Bc => Output::Centrality(kernels::betweenness(g, sources)?),
        Kernel::Tc => Output::Triangles(kernels::triangle_count(g)?),
    })
}

fn check_output(g: &CsrGraph, plan: &BenchPlan, sources: &[NodeId], out: &Output) -> VerifyReport {
    let p = &plan.params;
    match out {
        Output::Parents(parent) => verify::verify_bfs(g, sources[0], parent),
        Output::Distances(dist) => verify::verify_sssp(g, sources[0], dist),
        Output::PageRank(pr) => verify::verify_pr(g, &pr.scores, p.damping, p.tolerance),
        Output::Labels(labels) => verify::verify_cc(g, labels),
        Output::Centrality(scores) => verify::verify_bc(g, sources, scores),
        Output::Triangles(count) => verify::verify_tc(g, *count),
    }
}

pub fn run_benchmark(
    g: &CsrGraph,
    plan: &BenchPlan,
    verify: bool,
) -> Result<BenchReport, HarnessError> {
    run_benchmark_observed(g, plan, verify, &mut NoObserver)
}

/// Like [`run_benchmark`], calling `observer` right before and after every
/// timed kernel call.
pub fn run_benchmark_observed(
    g: &CsrGraph,
    plan: &BenchPlan,
    verify: bool,
    observer: &mut dyn TrialObserver,
) -> Result<BenchReport, HarnessError> {
    check_plan(g, plan)?;
    let mut picker = match (plan.sources_per_trial, plan.fixed_source) {
        (0, _) => None,
        (_, Some(s)) => Some(SourcePicker::fixed(g, s)?),
        (_, None) => Some(SourcePicker::new(g, plan.seed)?),
    };
    let mut report = BenchReport {
        kernel: plan.kernel,
        graph: String::from("-"),
        trials: Vec::with_capacity(plan.trials),
    };
    for trial in 0..plan.trials {
        let sources: Vec<NodeId> = match &mut picker {
            Some(p) => (0..plan.sources_per_trial).map(|_| p.pick_next()).collect(),
            None => Vec::new(),
        };

        observer.timed_region_start(plan.kernel, trial);
        let start = Instant::now();
        let result = run_kernel(g, plan, &sources);
        let elapsed_seconds = start.elapsed().as_secs_f64();
        observer.timed_region_end(plan.kernel, trial);

        let output = result.map_err(|error| HarnessError::Kernel {
            kernel: plan.kernel,
            error,
        })?;
        if let Output::PageRank(pr) = &output {
            if !pr.converged {
                log::warn!(
                    "pr trial {trial}: no convergence after {} iterations (change {:e})",
                    pr.iterations,
                    pr.last_change
                );
            }
        }
        let check = verify.then(|| check_output(g, plan, &sources, &output));
        report.trials.push(TrialResult {
            trial_index: trial,
            sources,
            elapsed_seconds,
            verified: check.as_ref().map(VerifyReport::ok),
            digest: output.digest(),
        });
        if let Some(detail) = check.and_then(|c| c.failure_detail()) {
            return Err(HarnessError::Verification {
                kernel: plan.kernel,
                trial,
                detail,
                report: Box::new(report),
            });
        }
    }
    Ok(report)
}

/// A loaded graph together with the variants some kernels need, built
/// lazily and outside any timed region: an undirected copy for TC (and CC
/// on directed inputs) and a weighted copy for SSSP.
pub struct GraphSet {
    name: String,
    seed: u64,
    base: CsrGraph,
    undirected: OnceLock<CsrGraph>,
    weighted: OnceLock<CsrGraph>,
}

impl GraphSet {
    /// `seed` drives weight assignment when SSSP needs weights the base
    /// graph lacks.
    pub fn new(name: impl Into<String>, base: CsrGraph, seed: u64) -> Self {
        Self {
            name: name.into(),
            seed,
            base,
            undirected: OnceLock::new(),
            weighted: OnceLock::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &CsrGraph {
        &self.base
    }

    /// The graph `kernel` runs on.
    pub fn graph_for(&self, kernel: Kernel) -> Result<&CsrGraph, HarnessError> {
        match kernel {
            Kernel::Tc | Kernel::Cc if self.base.is_directed() => {
                Ok(self.undirected.get_or_init(|| self.base.symmetrized()))
            }
            Kernel::Sssp if !self.base.is_weighted() => {
                if let Some(g) = self.weighted.get() {
                    return Ok(g);
                }
                let el = assign_weights(self.base.to_edge_list(), self.seed)?;
                let g = build_csr(&el, self.base.is_directed(), false)?;
                Ok(self.weighted.get_or_init(|| g))
            }
            _ => Ok(&self.base),
        }
    }

    pub fn run(&self, plan: &BenchPlan, verify: bool) -> Result<BenchReport, HarnessError> {
        self.run_observed(plan, verify, &mut NoObserver)
    }

    pub fn run_observed(
        &self,
        plan: &BenchPlan,
        verify: bool,
        observer: &mut dyn TrialObserver,
    ) -> Result<BenchReport, HarnessError> {
        let g = self.graph_for(plan.kernel)?;
        match run_benchmark_observed(g, plan, verify, observer) {
            Ok(mut r) => {
                r.graph = self.name.clone();
                Ok(r)
            }
            Err(HarnessError::Verification {
                kernel,
                trial,
                detail,
                mut report,
            }) => {
                report.graph = self.name.clone();
                Err(HarnessError::Verification {
                    kernel,
                    trial,
                    detail,
                    report,
                })
            }
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeList;

    fn path3() -> CsrGraph {
        build_csr(&EdgeList::from_pairs(vec![(0, 1), (1, 2)]), false, true).unwrap()
    }

    #[test]
    fn default_trial_counts() {
        let counts: Vec<_> = Kernel::ALL
            .iter()
            .map(|k| (k.default_trials(), k.default_sources_per_trial()))
            .collect();
        assert_eq!(
            counts,
            vec![(64, 1), (64, 1), (16, 0), (16, 0), (16, 4), (3, 0)]
        );
    }

    #[test]
    fn kernel_names_round_trip() {
        for k in Kernel::ALL {
            assert_eq!(k.name().parse::<Kernel>().unwrap(), k);
        }
        assert!("xyz".parse::<Kernel>().is_err());
    }

    #[test]
    fn config_errors() {
        let g = path3();
        assert!(matches!(
            run_benchmark(&g, &BenchPlan::new(Kernel::Sssp), false),
            Err(HarnessError::Config(_))
        ));
        let d = build_csr(&EdgeList::from_pairs(vec![(0, 1)]), true, false).unwrap();
        assert!(matches!(
            run_benchmark(&d, &BenchPlan::new(Kernel::Tc), false),
            Err(HarnessError::Config(_))
        ));
    }

    #[test]
    fn bc_consumes_four_sources_per_trial() {
        let g = path3();
        let r = run_benchmark(&g, &BenchPlan::new(Kernel::Bc), true).unwrap();
        assert_eq!(r.trials.len(), 16);
        assert!(r
            .trials
            .iter()
            .all(|t| t.sources.len() == 4 && t.verified == Some(true)));
        let drawn: Vec<_> = r.trials.iter().flat_map(|t| t.sources.clone()).collect();
        assert_eq!(
            drawn,
            crate::sources::pick_sources(&g, 64, DEFAULT_SEED).unwrap()
        );
    }

    #[test]
    fn csv_lines() {
        let set = GraphSet::new("path", path3(), DEFAULT_SEED);
        let r = set.run(&BenchPlan::new(Kernel::Tc), false).unwrap();
        let csv = r.csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("tc,path,0,-,"));
        assert!(lines[0].ends_with(",skipped"));
        assert!(lines[3].starts_with("summary,tc,path,trials=3,mean="));
    }

    #[test]
    fn graph_set_variants() {
        let d = build_csr(
            &EdgeList::from_pairs(vec![(0, 1), (1, 2), (2, 0)]),
            true,
            false,
        )
        .unwrap();
        let set = GraphSet::new("tri", d, 1);
        assert!(!set.graph_for(Kernel::Tc).unwrap().is_directed());
        let w = set.graph_for(Kernel::Sssp).unwrap();
        assert!(w.is_weighted() && w.is_directed());
        assert_eq!(w.num_edges(), 3);
        let r = set.run(&BenchPlan::new(Kernel::Tc), true).unwrap();
        assert!(r.trials.iter().all(|t| t.verified == Some(true)));
    }

    #[test]
    fn observer_brackets_each_trial() {
        #[derive(Default)]
        struct Count(Vec<(usize, bool)>);
        impl TrialObserver for Count {
            fn timed_region_start(&mut self, _: Kernel, t: usize) {
                self.0.push((t, true));
            }
            fn timed_region_end(&mut self, _: Kernel, t: usize) {
                self.0.push((t, false));
            }
        }
        let mut c = Count::default();
        run_benchmark_observed(
            &path3(),
            &BenchPlan::new(Kernel::Cc).with_trials(2),
            false,
            &mut c,
        )
        .unwrap();
        assert_eq!(c.0, vec![(0, true), (0, false), (1, true), (1, false)]);
    }
}
