mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use qolab_core::auxgraph::{aux_graph, witness_set};
use qolab_core::corpus::{random_graph, RandomCorpus, EXHAUSTIVE_LIMIT};
use qolab_core::dilworth::{dichotomy, min_chain_cover, width_and_antichain, DichotomyResult};
use qolab_core::g0::{dense_sequences, g0_level_from, hom_search, DenseSequences, MAX_LEVEL};
use qolab_core::harness::{prove, replay, Bundle, Check, ProveConfig};
use qolab_core::procedures::paper_chain_cover;
use qolab_core::relation::{is_quasi_order, random_quasi_order, FiniteRelation, Graph, QuasiOrder};
use qolab_core::tree::{
    eval_borel_code, eval_borel_code_with, format_sequence, pruning_rank, BorelCode, CodeFile, Connective, FiniteTree,
};
use qolab_core::{Budget, Error, Exec};
use serde_json::{json, Value};

use report::{write_json, Inputs, RunReport};

#[derive(Parser, Debug)]
#[command(
    name = "qolab",
    version,
    about = "Finite quasi-orders, chain covers and forced-apart graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Write a JSON run report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Search-node cap for exponential searches.
    #[arg(long, global = true, default_value_t = Budget::DEFAULT_LIMIT)]
    budget: u64,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a `.qo` quasi-order or `.gr` graph file.
    Check { file: PathBuf },
    /// Width and the least maximum antichain.
    Width { file: PathBuf },
    /// Minimum chain cover from bipartite matching.
    Chains { file: PathBuf },
    /// Chain cover built by peeling independent layers of the reduced relation.
    Paperchains { file: PathBuf },
    /// Forced-apart graph of a graph, or of a quasi-order's incomparability graph.
    Auxgraph { file: PathBuf },
    /// Witness set for one or more forced-apart pairs.
    Witness {
        file: PathBuf,
        /// Pair `x,y`; repeatable.
        #[arg(long = "pair", required = true, value_parser = parse_pair)]
        pairs: Vec<(usize, usize)>,
    },
    /// Cover by `k` chains or the least antichain of size `k+1`.
    Dichotomy {
        file: PathBuf,
        #[arg(short = 'k')]
        k: usize,
    },
    /// Statistics of one finite level of the dense-sequence graph.
    G0 {
        /// Word length of the level.
        level: usize,
        /// Dense sequence file, one word per line (`-` for the empty word).
        #[arg(long)]
        dense: Option<PathBuf>,
        /// Homomorphism target graph; defaults to a single edge.
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Pruning rank of a tree file.
    Tree {
        file: PathBuf,
        #[arg(long)]
        index_size: Option<usize>,
    },
    /// Evaluate a JSON code file.
    BorelEval {
        file: PathBuf,
        /// Evaluate the complemented code with the dual connective.
        #[arg(long)]
        dual: bool,
    },
    /// Generate a random quasi-order (or graph with `--graph`).
    Gen {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        #[arg(long)]
        graph: bool,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Run property suites over exhaustive and random corpora.
    Prove(ProveArgs),
    /// Re-run the check recorded in a counterexample bundle or a report.
    Replay { file: PathBuf },
}

#[derive(Args, Debug)]
struct ProveArgs {
    /// Run every check.
    #[arg(long)]
    all: bool,
    /// Run only the named check; repeatable.
    #[arg(long = "check", value_parser = parse_check)]
    checks: Vec<Check>,
    /// Largest random instance, and the exhaustive cut-off with `--exhaustive`.
    #[arg(long, default_value_t = 16)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    /// Add every labeled quasi-order with at most `min(n-max, 5)` points.
    #[arg(long)]
    exhaustive: bool,
    /// Number of random instances of each kind.
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.4, 0.6])]
    densities: Vec<f64>,
    /// Sample count for quantifiers too large to enumerate.
    #[arg(long, default_value_t = 32)]
    samples: usize,
    /// Evaluate instances on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn parse_check(s: &str) -> std::result::Result<Check, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What a command produced, before it is printed and recorded.
struct Outcome {
    text: String,
    results: Value,
    violations: Vec<Bundle>,
    failed: bool,
}

impl Outcome {
    fn ok(text: String, results: Value) -> Self {
        Outcome {
            text,
            results,
            violations: Vec::new(),
            failed: false,
        }
    }
}

enum Instance {
    Order(QuasiOrder),
    Graph(Graph),
}

fn is_graph_path(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "gr")
}

fn load_instance(inputs: &mut Inputs, path: &Path) -> Result<Instance> {
    let text = inputs.read(path)?;
    Ok(if is_graph_path(path) {
        Instance::Graph(Graph::parse(&text)?)
    } else {
        Instance::Order(QuasiOrder::parse(&text)?)
    })
}

fn load_order(inputs: &mut Inputs, path: &Path) -> Result<QuasiOrder> {
    match load_instance(inputs, path)? {
        Instance::Order(q) => Ok(q),
        Instance::Graph(_) => {
            Err(Error::InvalidArgument(format!("{} is a graph, expected a quasi-order", path.display())).into())
        }
    }
}

fn load_graph(inputs: &mut Inputs, path: &Path) -> Result<Graph> {
    Ok(match load_instance(inputs, path)? {
        Instance::Order(q) => q.incomparability_graph(),
        Instance::Graph(g) => g,
    })
}

fn list(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("[{}]", items.join(","))
}

fn chains_text(chains: &[Vec<usize>]) -> String {
    chains.iter().map(|c| list(c)).collect::<Vec<_>>().join(" ")
}

fn edges_text(edges: &[(usize, usize)]) -> String {
    edges
        .iter()
        .map(|(u, v)| format!("{u}-{v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(command: &Command, common: &Common, inputs: &mut Inputs) -> Result<Outcome> {
    let budget = Budget::new(common.budget);
    match command {
        Command::Check { file } => {
            let text = inputs.read(file)?;
            let rel = FiniteRelation::parse(&text)?;
            let verdict = if is_graph_path(file) {
                Graph::new(rel).err().map(|e| e.to_string())
            } else {
                is_quasi_order(&rel).err().map(|v| v.to_string())
            };
            let kind = if is_graph_path(file) { "graph" } else { "quasi-order" };
            Ok(match verdict {
                None => Outcome::ok(format!("{kind}: ok"), json!({ "kind": kind, "valid": true })),
                Some(why) => Outcome {
                    text: format!("{kind}: invalid: {why}"),
                    results: json!({ "kind": kind, "valid": false, "reason": why }),
                    violations: Vec::new(),
                    failed: true,
                },
            })
        }
        Command::Width { file } => {
            let q = load_order(inputs, file)?;
            let (w, a) = width_and_antichain(&q);
            Ok(Outcome::ok(
                format!("width={w} antichain={}", list(&a)),
                json!({ "width": w, "antichain": a }),
            ))
        }
        Command::Chains { file } => {
            let q = load_order(inputs, file)?;
            let cover = min_chain_cover(&q);
            Ok(Outcome::ok(
                format!("chains={} {}", cover.chains.len(), chains_text(&cover.chains)),
                serde_json::to_value(&cover)?,
            ))
        }
        Command::Paperchains { file } => {
            let q = load_order(inputs, file)?;
            let pc = paper_chain_cover(&q, budget)?;
            let mut text = format!("chains={} {}", pc.cover.chains.len(), chains_text(&pc.cover.chains));
            for (i, layer) in pc.layers.iter().enumerate() {
                write!(text, "\nlayer {i}: {}", list(layer))?;
            }
            Ok(Outcome::ok(text, serde_json::to_value(&pc)?))
        }
        Command::Auxgraph { file } => {
            let g = load_graph(inputs, file)?;
            let aux = aux_graph(&g, budget)?;
            let s = aux.summary();
            let added: Vec<(usize, usize)> = s
                .edges_aux
                .iter()
                .filter(|e| !s.edges_base.contains(e))
                .copied()
                .collect();
            let text = format!(
                "chi={} base=[{}] aux=[{}] added=[{}]",
                s.chi,
                edges_text(&s.edges_base),
                edges_text(&s.edges_aux),
                edges_text(&added)
            );
            Ok(Outcome::ok(text, serde_json::to_value(&s)?))
        }
        Command::Witness { file, pairs } => {
            let g = load_graph(inputs, file)?;
            let w = witness_set(&g, pairs, budget)?;
            Ok(Outcome::ok(
                format!("witness={}", list(&w)),
                json!({ "pairs": pairs, "witness": w }),
            ))
        }
        Command::Dichotomy { file, k } => {
            let q = load_order(inputs, file)?;
            let result = dichotomy(&q, *k, budget)?;
            let text = match &result {
                DichotomyResult::Cover(c) => {
                    format!("cover with {} chains: {}", c.chains.len(), chains_text(&c.chains))
                }
                DichotomyResult::Antichain(a) => format!("antichain of size {}: {}", a.len(), list(a)),
            };
            Ok(Outcome::ok(text, serde_json::to_value(&result)?))
        }
        Command::G0 { level, dense, target } => {
            if *level > MAX_LEVEL {
                return Err(Error::InvalidArgument(format!("level {level} exceeds the maximum {MAX_LEVEL}")).into());
            }
            let seqs = match dense {
                Some(path) => DenseSequences::parse(&inputs.read(path)?)?,
                None => dense_sequences(*level),
            };
            let g = g0_level_from(&seqs, *level)?;
            let h = match target {
                Some(path) => load_graph(inputs, path)?,
                None => Graph::complete(2),
            };
            let hom = hom_search(&g, &h, budget)?;
            let text = format!(
                "level={level} vertices={} edges={} connected={} bipartite={} dense={} homomorphism={}",
                g.vertex_count(),
                g.edges.len(),
                g.is_connected(),
                g.is_bipartite(),
                seqs.is_dense_to_horizon(),
                if hom.is_some() { "found" } else { "none" }
            );
            Ok(Outcome::ok(
                text,
                json!({
                    "level": level,
                    "vertices": g.vertex_count(),
                    "edges": g.edges.len(),
                    "connected": g.is_connected(),
                    "bipartite": g.is_bipartite(),
                    "dense": seqs.is_dense_to_horizon(),
                    "homomorphism": hom,
                }),
            ))
        }
        Command::Tree { file, index_size } => {
            let t = FiniteTree::parse(&inputs.read(file)?, *index_size)?;
            let r = pruning_rank(&t);
            let mut text = format!("rho={} well_founded={} nodes={}", r.rho, r.well_founded, t.len());
            for (s, rank) in &r.node_ranks {
                write!(text, "\n{} {rank}", format_sequence(s))?;
            }
            let ranks: serde_json::Map<String, Value> = r
                .node_ranks
                .iter()
                .map(|(s, k)| (format_sequence(s), json!(k)))
                .collect();
            Ok(Outcome::ok(
                text,
                json!({ "rho": r.rho, "well_founded": r.well_founded, "node_ranks": ranks }),
            ))
        }
        Command::BorelEval { file, dual } => {
            let code_file: CodeFile = serde_json::from_str(&inputs.read(file)?).map_err(|e| Error::MalformedInput {
                line: e.line(),
                message: e.to_string(),
            })?;
            let code = BorelCode::from_file(&code_file)?;
            let value = if *dual {
                eval_borel_code_with(&code.complemented(), Connective::IntersectionOfUnions)?
            } else {
                eval_borel_code(&code)?
            };
            Ok(Outcome::ok(list(&value), json!({ "value": value, "dual": dual })))
        }
        Command::Gen {
            n,
            density,
            graph,
            output,
        } => {
            let text = if *graph {
                random_graph(*n, *density, common.seed).to_text()
            } else {
                random_quasi_order(*n, *density, common.seed).relation().to_text()
            };
            match output {
                Some(path) => {
                    std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
                    Ok(Outcome::ok(
                        format!("wrote {}", path.display()),
                        json!({ "output": path, "n": n }),
                    ))
                }
                None => Ok(Outcome::ok(
                    text.trim_end().to_string(),
                    json!({ "n": n, "text": text }),
                )),
            }
        }
        Command::Prove(args) => run_prove(args, common),
        Command::Replay { file } => {
            let text = inputs.read(file)?;
            let value: Value = serde_json::from_str(&text).map_err(|e| Error::MalformedInput {
                line: e.line(),
                message: e.to_string(),
            })?;
            let bundles: Vec<Bundle> = if value.get("violations").is_some() {
                serde_json::from_value(value["violations"].clone())?
            } else {
                vec![serde_json::from_value(value)?]
            };
            let mut lines = Vec::new();
            let mut reproduced = Vec::new();
            let mut results = Vec::new();
            for b in &bundles {
                let outcome = replay(b, budget)?;
                match &outcome {
                    Some(detail) => {
                        lines.push(format!("{} #{} ({}): reproduced: {detail}", b.check, b.index, b.corpus));
                        reproduced.push(b.clone());
                    }
                    None => lines.push(format!("{} #{} ({}): passes", b.check, b.index, b.corpus)),
                }
                results.push(json!({ "check": b.check, "index": b.index, "violation": outcome }));
            }
            if bundles.is_empty() {
                lines.push("no bundles to replay".into());
            }
            let failed = !reproduced.is_empty();
            Ok(Outcome {
                text: lines.join("\n"),
                results: json!(results),
                violations: reproduced,
                failed,
            })
        }
    }
}

fn run_prove(args: &ProveArgs, common: &Common) -> Result<Outcome> {
    let checks = if args.all || args.checks.is_empty() {
        Check::all()
    } else {
        args.checks.clone()
    };
    let config = ProveConfig {
        checks,
        exhaustive_n_max: args.exhaustive.then(|| args.n_max.min(EXHAUSTIVE_LIMIT)),
        random: RandomCorpus {
            count: args.count,
            n_min: args.n_min.min(args.n_max),
            n_max: args.n_max,
            densities: args.densities.clone(),
            seed: common.seed,
        },
        budget: Budget::new(common.budget),
        samples: args.samples,
        exec: if args.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        },
    };
    let report = prove(&config)?;
    let mut text = format!(
        "corpus: {} exhaustive, {} random orders, {} random graphs",
        report.exhaustive_instances, report.random_orders, report.random_graphs
    );
    for (name, t) in &report.tallies {
        let status = if t.passed == t.instances { "pass" } else { "FAIL" };
        write!(
            text,
            "\n{name:<12} {status} {}/{} instances, {} checks",
            t.passed, t.instances, t.checks
        )?;
        if t.skipped > 0 {
            write!(text, ", {} skipped", t.skipped)?;
        }
    }
    for b in &report.violations {
        write!(
            text,
            "\nviolation: {} on {} #{}: {}",
            b.check, b.corpus, b.index, b.detail
        )?;
    }
    let failed = !report.passed();
    Ok(Outcome {
        text,
        results: json!({
            "exhaustive_instances": report.exhaustive_instances,
            "random_orders": report.random_orders,
            "random_graphs": report.random_graphs,
            "tallies": report.tallies,
        }),
        violations: report.violations,
        failed,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Width { .. } => "width",
        Command::Chains { .. } => "chains",
        Command::Paperchains { .. } => "paperchains",
        Command::Auxgraph { .. } => "auxgraph",
        Command::Witness { .. } => "witness",
        Command::Dichotomy { .. } => "dichotomy",
        Command::G0 { .. } => "g0",
        Command::Tree { .. } => "tree",
        Command::BorelEval { .. } => "borel-eval",
        Command::Gen { .. } => "gen",
        Command::Prove(_) => "prove",
        Command::Replay { .. } => "replay",
    }
}

/// Violations found by the library are exit 1; anything else is bad input.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::PropositionViolated { .. } | Error::HypothesisViolated { .. }) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let outcome = run(&cli.command, &cli.common, &mut inputs);
    let outcome = match outcome {
        Ok(o) => o,
        Err(err) => {
            eprintln!("qolab: {err:#}");
            return ExitCode::from(exit_code_for(&err));
        }
    };
    println!("{}", outcome.text);
    if let Some(path) = &cli.common.json {
        let report = RunReport {
            command: command_name(&cli.command).to_string(),
            inputs: inputs.into_map(),
            results: outcome.results,
            violations: outcome.violations,
            seed: cli.common.seed,
            elapsed_ms: start.elapsed().as_millis() as u64,
        };
        if let Err(err) = write_json(path, &report) {
            eprintln!("qolab: {err:#}");
            return ExitCode::from(2);
        }
    }
    if outcome.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
