use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

use nodeclass::config::run_engine;
use nodeclass::engine::write_round_trace;
use nodeclass::eval::{generate_planted, holdout_evaluate};
use nodeclass::induce::{
    epsilon_graph, exp_weighted_graph, knn_graph, KnnMode, Metric, PointSet, Sigma2,
};
use nodeclass::io::{load_graph, load_labels, load_points, write_graph, write_labels, LabelVocab};
use nodeclass::walk::Kernel;
use nodeclass::{
    run_method, Error, Graph, LabelMatrix, Method, MethodConfig, Result, Solver, WalkResult,
};

#[derive(Parser, Debug)]
#[command(
    name = "nodeclass",
    version,
    about = "Label the unlabeled nodes of a partially labeled graph"
)]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a planted-partition graph with partially revealed block labels.
    Generate(GenerateArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value = "lp", value_parser = parse_method)]
    method: Method,
    /// Defaults to direct up to 2000 nodes and iterative above.
    #[arg(long, value_parser = parse_solver)]
    solver: Option<Solver>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Walk length for tstep.
    #[arg(long)]
    t: Option<usize>,
    /// Keep only the k largest entries of each ICA row.
    #[arg(long)]
    k: Option<usize>,
    /// τ for the ICA methods, the iteration cap otherwise.
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Injection probability of labeled nodes for adsorption.
    #[arg(long)]
    injection: Option<f64>,
    #[arg(long, value_enum)]
    kernel: Option<KernelArg>,
    /// Monte Carlo walks per node.
    #[arg(long)]
    walks: Option<usize>,
    /// Withhold this fraction of the seed labels and report accuracy on them.
    #[arg(long)]
    holdout: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run ica-vote on the map/reduce engine with this many workers.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, required_unless_present = "points", conflicts_with = "points")]
    graph: Option<PathBuf>,
    #[arg(long, required = true)]
    labels: Option<PathBuf>,
    /// Build the graph from a point file instead of reading one.
    #[arg(long)]
    points: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "exp")]
    induce: InduceArg,
    #[arg(long, value_enum, default_value = "euclidean")]
    metric: MetricArg,
    /// Exp bandwidth; defaults to the point variance.
    #[arg(long)]
    sigma2: Option<f64>,
    #[arg(long, default_value_t = 10)]
    knn_k: usize,
    #[arg(long)]
    knn_mutual: bool,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Result file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-iteration residuals, or per-round statistics for the engine.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    blocks: usize,
    #[arg(long)]
    p_in: f64,
    #[arg(long)]
    p_out: f64,
    /// Fraction of each block whose label is revealed.
    #[arg(long, default_value_t = 0.1)]
    labeled: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    graph_out: PathBuf,
    #[arg(long)]
    labels_out: PathBuf,
    /// Every node's block, in the labels format.
    #[arg(long)]
    truth_out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum InduceArg {
    Exp,
    Knn,
    Eps,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MetricArg {
    Euclidean,
    Cosine,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KernelArg {
    Transition,
    Symmetric,
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_solver(s: &str) -> std::result::Result<Solver, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn config(a: &RunArgs) -> MethodConfig {
    let mut c = MethodConfig::new(a.method);
    c.solver = a.solver;
    c.seed = a.seed;
    c.workers = a.workers;
    c.top_k = a.k;
    if let Some(v) = a.alpha {
        c.alpha = v;
    }
    if let Some(v) = a.beta {
        c.beta = v;
    }
    if let Some(v) = a.t {
        c.t = v;
    }
    if let Some(v) = a.iters {
        if a.method.is_ica() {
            c.tau = v;
        } else {
            c.max_iter = v;
        }
    }
    if let Some(v) = a.tol {
        c.tol = v;
    }
    if let Some(v) = a.injection {
        c.injection = v;
    }
    if let Some(v) = a.walks {
        c.walks = v;
    }
    if let Some(k) = a.kernel {
        c.kernel = match k {
            KernelArg::Transition => Kernel::Transition,
            KernelArg::Symmetric => Kernel::SymmetricNormalized,
        };
    }
    c
}

fn induced_graph(a: &RunArgs, path: &Path) -> Result<Graph> {
    let mut p = load_points(path)?;
    if let MetricArg::Cosine = a.metric {
        p = PointSet::from_matrix(p.coords().clone(), Metric::Cosine)?;
    }
    let sigma2 = a.sigma2.map_or(Sigma2::Auto, Sigma2::Value);
    match a.induce {
        InduceArg::Exp => exp_weighted_graph(&p, sigma2),
        InduceArg::Eps => epsilon_graph(&p, sigma2, a.eps),
        InduceArg::Knn => {
            let mode = if a.knn_mutual {
                KnnMode::Mutual
            } else {
                KnnMode::Directed
            };
            knn_graph(&p, a.knn_k, mode, a.sigma2.map(Sigma2::Value))
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_residuals(path: &Path, r: &WalkResult) -> Result<()> {
    let mut text = String::new();
    match &r.trace {
        Some(t) => {
            for (k, res) in t.residuals.iter().enumerate() {
                let _ = writeln!(text, "{}\t{res:e}", k + 1);
            }
        }
        None => warn!("the chosen route records no iteration trace"),
    }
    write_out(Some(path), &text)
}

fn run(a: &RunArgs) -> Result<()> {
    let g = match (&a.graph, &a.points) {
        (Some(path), _) => load_graph(path)?,
        (None, Some(points)) => induced_graph(a, points)?,
        (None, None) => unreachable!("clap requires --graph or --points"),
    };
    let labels_path = a.labels.as_deref().expect("clap requires --labels");
    let (y, vocab) = load_labels(labels_path, g.node_count())?;
    info!(
        "{} nodes, {} edges, {} seeds, {} labels",
        g.node_count(),
        g.edges().len(),
        y.seeds().len(),
        vocab.len()
    );
    let cfg = config(a);

    if let Some(fraction) = a.holdout {
        let r = holdout_evaluate(&g, &y, &cfg, fraction, a.seed)?;
        let mut text = String::new();
        let _ = writeln!(text, "method\t{}", cfg.method);
        let _ = writeln!(text, "withheld\t{}", r.withheld);
        let _ = writeln!(text, "correct\t{}", r.correct);
        let _ = writeln!(text, "uncovered\t{}", r.uncovered);
        let _ = writeln!(text, "accuracy\t{:.6}", r.accuracy);
        let _ = writeln!(text, "coverage\t{:.6}", r.coverage);
        let _ = writeln!(text, "iterations\t{}", r.iterations);
        let _ = writeln!(text, "wall_ms\t{:.3}", r.wall_time.as_secs_f64() * 1e3);
        return write_out(a.out.as_deref(), &text);
    }

    let result = if cfg.method == Method::IcaVote && cfg.workers.is_some() {
        let (result, rounds) = run_engine(&g, &y, &cfg)?;
        if let Some(path) = &a.trace {
            write_round_trace(path, &rounds)?;
        }
        result
    } else {
        let result = run_method(&g, &y, &cfg)?;
        if let Some(path) = &a.trace {
            write_residuals(path, &result)?;
        }
        result
    };
    if !result.converged {
        warn!(
            "{} stopped after {} iterations without converging (residual {:e})",
            cfg.method, result.iterations_used, result.residual
        );
    }
    info!(
        "{} finished after {} iterations",
        cfg.method, result.iterations_used
    );
    write_out(
        a.out.as_deref(),
        &nodeclass::io::format_result(&result.labels, &vocab),
    )
}

fn generate(a: &GenerateArgs) -> Result<()> {
    let p = generate_planted(a.n, a.blocks, a.p_in, a.p_out, a.labeled, a.seed)?;
    let names: Vec<String> = (0..a.blocks).map(|b| format!("block{b}")).collect();
    let vocab = LabelVocab::from_names(&names);
    write_graph(&a.graph_out, &p.graph)?;
    write_labels(&a.labels_out, &p.labels, &vocab)?;
    if let Some(path) = &a.truth_out {
        let pairs: Vec<(usize, usize)> = p.truth.iter().copied().enumerate().collect();
        let truth = LabelMatrix::from_hard(a.n, a.blocks, &pairs)?;
        write_labels(path, &truth, &vocab)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Some(Command::Generate(a)) => generate(a),
        None => run(&cli.run),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
