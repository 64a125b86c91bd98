use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use matchforge::budget::{Budget, DEFAULT_NODE_BUDGET};
use matchforge::classify::classify;
use matchforge::eta::{
    berge_witness, eta_exact_with, is_eta_one, is_eta_zero, lemma3_best_bound, verify, BoundCertificate, EtaOptions,
};
use matchforge::generators::from_spec;
use matchforge::graph::{as_cubic, Graph};
use matchforge::matching::{engines, EnumerationLimits, WeightFn};
use matchforge::mesh::{quadrangulate, to_obj, weight_models, Mode, TriangleMesh};
use matchforge::rational::{RationalJson, Show};
use matchforge::reproduce::{self, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "matchforge", version, about = "Exact perfect-matching ratios on cubic graphs")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Random seed; MATCHFORGE_SEED overrides the default.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Node budget for exhaustive searches.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a generated graph as an edge list.
    Gen {
        /// A label (k4, k33, cube, petersen, nauru, blanusa1, blanusa2,
        /// oddcut26), gp:n,k, prism:n or family:depth.
        spec: String,
        /// Write the edge list here and metadata to <out>.meta.json.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Structural predicates of a graph.
    Classify(GraphInput),
    /// Maximum-weight (perfect) matching.
    Match {
        #[command(flatten)]
        input: GraphInput,
        /// CSV of `edge_id,weight`; missing edges weigh 0. Default: all 1.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        perfect: bool,
        #[arg(long, default_value = "auto")]
        engine: String,
    },
    /// The perfect-matching ratio and its certificates.
    Eta {
        #[command(subcommand)]
        what: EtaCommand,
    },
    /// Certificate tools.
    Cert {
        #[command(subcommand)]
        what: CertCommand,
    },
    /// Triangle-to-quad mesh conversion.
    Mesh {
        #[command(subcommand)]
        what: MeshCommand,
    },
    /// Run the certificate suite and print a pass/fail table.
    Reproduce {
        /// Only these criteria (comma separated ids).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Subcommand)]
enum EtaCommand {
    /// Exact value with witness weights.
    Exact {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value = "reduced")]
        method: String,
        /// Raise the enumeration size limits to the graph's order.
        #[arg(long)]
        no_size_limit: bool,
    },
    /// Lemma-3 upper bound, Berge lower bound and the 0/1 tests.
    Bounds(GraphInput),
    /// Perfect-matching cover certificate for η ≥ 1/3.
    Witness(GraphInput),
}

#[derive(Subcommand)]
enum CertCommand {
    /// Check a certificate (or a report containing certificates).
    Verify { cert: PathBuf, graph: PathBuf },
}

#[derive(Subcommand)]
enum MeshCommand {
    Quadrangulate {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "perfect")]
        mode: ModeArg,
        /// CSV of `dual_edge_id,weight` overriding the weight model.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, default_value = "quality")]
        model: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Perfect,
    Maximum,
}

#[derive(Args)]
struct GraphInput {
    /// Edge-list file (`n m` then `u v` per line) or graph6 (`.g6`).
    graph: PathBuf,
}

#[derive(Serialize)]
struct Budgets {
    nodes: u64,
    perfect_max_n: usize,
    maximal_max_n: usize,
}

#[derive(Serialize)]
struct RunManifest {
    command_line: Vec<String>,
    input_hashes: BTreeMap<String, String>,
    seed: u64,
    budgets: Budgets,
    threads: usize,
    version: &'static str,
    wall_time_ms: u128,
}

/// A domain failure: exit 1 with a JSON error object.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

struct Run {
    hashes: BTreeMap<String, String>,
    limits: EnumerationLimits,
    seed: u64,
    budget: u64,
}

impl Run {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        self.hashes.insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        Ok(bytes)
    }

    fn text(&mut self, path: &Path) -> Result<String, Failure> {
        String::from_utf8(self.read(path)?).map_err(|_| Failure(format!("{}: not UTF-8", path.display())))
    }

    fn graph(&mut self, path: &Path) -> Result<Graph, Failure> {
        let text = self.text(path)?;
        if path.extension().is_some_and(|e| e == "g6") {
            Ok(Graph::from_graph6(text.trim())?)
        } else {
            Ok(Graph::parse_edge_list(&text)?)
        }
    }

    fn eta_options(&self) -> EtaOptions {
        EtaOptions { limits: self.limits, ..EtaOptions::default() }
    }
}

fn rational(r: &matchforge::rational::Rational) -> Value {
    serde_json::to_value(RationalJson::from(r)).expect("rationals serialise")
}

fn execute(cmd: &Command, run: &mut Run) -> Result<Value, Failure> {
    match cmd {
        Command::Gen { spec, out } => {
            let (g, m) = from_spec(spec)?;
            let mut meta = g.meta();
            meta.matching = m.map(|m| m.ids().to_vec());
            let edges = g.graph.to_edge_list_string();
            let meta = serde_json::to_value(meta)?;
            match out {
                Some(path) => {
                    std::fs::write(path, &edges)?;
                    let mut side = path.as_os_str().to_owned();
                    side.push(".meta.json");
                    std::fs::write(&side, serde_json::to_string_pretty(&meta)? + "\n")?;
                }
                None => print!("{edges}"),
            }
            Ok(meta)
        }
        Command::Classify(input) => {
            let g = run.graph(&input.graph)?;
            let c = classify(&g, &Budget::new(run.budget))?;
            eprintln!("{c:?}");
            Ok(serde_json::to_value(c)?)
        }
        Command::Match { input, weights, perfect, engine } => {
            let g = run.graph(&input.graph)?;
            let w = match weights {
                Some(p) => {
                    let text = run.text(p)?;
                    WeightFn::from_csv(&g, &text)?
                }
                None => WeightFn::uniform(&g)?,
            };
            let e = engines().get(engine)?;
            let m = if *perfect { e.max_weight_perfect(&g, w.values())? } else { e.max_weight(&g, w.values())? };
            let weight = m.weight(&w);
            eprintln!("{} edges, weight {}", m.len(), Show(&weight));
            Ok(json!({ "matching": m, "weight": rational(&weight), "engine": e.name() }))
        }
        Command::Eta { what } => eta(what, run),
        Command::Cert { what: CertCommand::Verify { cert, graph } } => {
            let g = run.graph(graph)?;
            let v: Value = serde_json::from_str(&run.text(cert)?)?;
            let certs = collect_certificates(&v)?;
            let mut results = Vec::new();
            let mut all = true;
            for c in &certs {
                let r = verify(c, &g);
                all &= r.is_ok();
                eprintln!("{} {}: {}", c.kind(), Show(&c.bound), r.as_ref().map_or_else(|e| e.to_string(), |_| "accepted".into()));
                results.push(json!({
                    "kind": c.kind(),
                    "bound": rational(&c.bound),
                    "accepted": r.is_ok(),
                    "reason": r.err().map(|e| e.0),
                }));
            }
            let report = json!({ "accepted": all, "results": results });
            if all {
                Ok(report)
            } else {
                Err(Failure(report.to_string()))
            }
        }
        Command::Mesh { what: MeshCommand::Quadrangulate { input, mode, weights, model, out } } => {
            let mesh = TriangleMesh::parse_off(&run.text(input)?)?;
            let dual = matchforge::mesh::dual_graph(&mesh)?;
            let w = match weights {
                Some(p) => {
                    let text = run.text(p)?;
                    WeightFn::from_csv(&dual.graph, &text)?.values().to_vec()
                }
                None => weight_models().get(model)?.weights(&mesh, &dual),
            };
            let mode = match mode {
                ModeArg::Perfect => Mode::Perfect,
                ModeArg::Maximum => Mode::Maximum,
            };
            let (quads, report) = quadrangulate(&mesh, mode, Some(&w))?;
            if let Some(p) = out {
                std::fs::write(p, to_obj(&mesh, &quads))?;
            }
            eprintln!(
                "{} faces -> {} quads + {} triangles; ratio {}",
                report.n_faces,
                report.n_quads,
                report.n_leftover,
                Show(&report.ratio)
            );
            Ok(serde_json::to_value(report)?)
        }
        Command::Reproduce { only } => {
            let outcomes = reproduce::run(only, run.seed);
            for o in &outcomes {
                eprintln!(
                    "{:>2}  {}  {:>8} ms  {}: {}",
                    o.id,
                    if o.passed { "PASS" } else { "FAIL" },
                    o.elapsed_ms,
                    o.title,
                    o.detail
                );
            }
            let all = outcomes.iter().all(|o| o.passed);
            let report = json!({ "passed": all, "criteria": outcomes });
            if all {
                Ok(report)
            } else {
                Err(Failure(report.to_string()))
            }
        }
    }
}

fn collect_certificates(v: &Value) -> Result<Vec<BoundCertificate>, Failure> {
    if let Some(arr) = v.get("certificates").and_then(Value::as_array) {
        return arr.iter().map(|c| Ok(serde_json::from_value(c.clone())?)).collect();
    }
    if let Some(c) = v.get("certificate") {
        return Ok(vec![serde_json::from_value(c.clone())?]);
    }
    Ok(vec![serde_json::from_value(v.clone())?])
}

fn eta(what: &EtaCommand, run: &mut Run) -> Result<Value, Failure> {
    match what {
        EtaCommand::Exact { input, method, no_size_limit } => {
            let g = run.graph(&input.graph)?;
            let mut opts = run.eta_options();
            opts.method = method.clone();
            if *no_size_limit {
                opts.limits.perfect_max_n = opts.limits.perfect_max_n.max(g.n());
                opts.limits.maximal_max_n = opts.limits.maximal_max_n.max(g.n());
            }
            let r = eta_exact_with(&g, &opts)?;
            eprintln!("eta = {} ({} perfect, {} maximal matchings)", Show(&r.value), r.perfect_count, r.maximal_count);
            Ok(serde_json::to_value(r)?)
        }
        EtaCommand::Bounds(input) => {
            let g = run.graph(&input.graph)?;
            let zero = is_eta_zero(&g)?;
            let one = is_eta_one(&g);
            let mut certs = Vec::new();
            let mut notes = Vec::new();
            match lemma3_best_bound(&g, &run.limits) {
                Ok(c) => certs.push(c),
                Err(e) => notes.push(format!("lemma-3 bound skipped: {e}")),
            }
            match as_cubic(g.clone()) {
                Ok(c) => match berge_witness(&c, &run.eta_options()) {
                    Ok(c) => certs.push(c),
                    Err(e) => notes.push(format!("Berge witness skipped: {e}")),
                },
                Err(e) => notes.push(format!("Berge witness skipped: {e}")),
            }
            for c in &certs {
                eprintln!("{} {}", c.kind(), Show(&c.bound));
            }
            for n in &notes {
                eprintln!("{n}");
            }
            Ok(json!({
                "eta_zero_edge": zero,
                "eta_one": one.is_none(),
                "non_perfect_maximal_matching": one,
                "certificates": certs,
                "notes": notes,
            }))
        }
        EtaCommand::Witness(input) => {
            let g = run.graph(&input.graph)?;
            let c = berge_witness(&as_cubic(g)?, &run.eta_options())?;
            eprintln!("{} {}", c.kind(), Show(&c.bound));
            Ok(json!({ "certificate": c }))
        }
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = Cli::parse();
    let threads = cli.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
        eprintln!("thread pool: {e}");
    }
    let seed = match std::env::var("MATCHFORGE_SEED") {
        Ok(s) => match s.parse() {
            Ok(v) => v,
            Err(_) => {
                eprintln!("MATCHFORGE_SEED must be an unsigned integer");
                return ExitCode::from(2);
            }
        },
        Err(_) => cli.seed.unwrap_or(DEFAULT_SEED),
    };
    let limits = EnumerationLimits { nodes: cli.budget, ..EnumerationLimits::default() };
    let mut run = Run { hashes: BTreeMap::new(), limits, seed, budget: cli.budget };
    let result = execute(&cli.command, &mut run);
    let manifest = RunManifest {
        command_line: std::env::args().collect(),
        input_hashes: run.hashes,
        seed,
        budgets: Budgets { nodes: limits.nodes, perfect_max_n: limits.perfect_max_n, maximal_max_n: limits.maximal_max_n },
        threads,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_ms: start.elapsed().as_millis(),
    };
    let manifest = serde_json::to_value(manifest).expect("manifest serialises");
    let (mut out, code) = match result {
        Ok(v) => (v, ExitCode::SUCCESS),
        Err(Failure(msg)) => {
            let detail = serde_json::from_str::<Value>(&msg).ok().filter(Value::is_object);
            let v = match detail {
                Some(mut d) => {
                    d["error"] = json!("check failed");
                    d
                }
                None => json!({ "error": msg }),
            };
            eprintln!("error: {}", v["error"].as_str().unwrap_or_default());
            (v, ExitCode::from(1))
        }
    };
    let report = if let Value::Object(map) = &mut out {
        map.insert("manifest".into(), manifest);
        out
    } else {
        json!({ "result": out, "manifest": manifest })
    };
    if let Command::Gen { out: None, .. } = cli.command {
        eprintln!("{}", serde_json::to_string(&report).expect("json"));
    } else {
        println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    }
    code
}
