use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lensnet_core::centrality::{self, CentralityOptions, CentralityRow, Measure};
use lensnet_core::ingest::{self, BuildOptions};
use lensnet_core::json::to_pretty;
use lensnet_core::partition::{DEFAULT_RESTARTS, DEFAULT_SPECTRAL_DIM, MAX_BRUTE_FORCE_NODES};
use lensnet_core::report::{self, guarded_subgraph, Limits, PartitionQuery, ReportQuery};
use lensnet_core::snapshot::{read_snapshot, write_snapshot, Snapshot};
use lensnet_core::stats::{self, NetworkStats};
use lensnet_core::subgraph::DEFAULT_DEPTH_CAP;
use lensnet_core::{parse_id_list, Error, NodeId, SeedQuery, SignedGraph, Strategy};
use serde::Serialize;

/// Signed social network analysis over biographical relationship records.
#[derive(Debug, Parser)]
#[command(name = "lensnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a signed graph snapshot from persons/relations/sign-rule TSV files.
    Ingest(IngestArgs),
    /// Clustering, path length and degree distribution of one or more snapshots.
    Stats(StatsArgs),
    /// Rank people by degree, betweenness, closeness or eigenvector centrality.
    Central(CentralArgs),
    /// Cut out the neighborhood of a seed set as a new snapshot.
    Extract(ExtractArgs),
    /// All recorded evidence between two people.
    Pair(PairArgs),
    /// Split people into groups.
    Partition(PartitionArgs),
    /// Central people, seed relationships and a partition in one answer.
    Report(ReportArgs),
    /// Serve the HTTP API over a snapshot.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct IngestArgs {
    #[arg(long)]
    persons: PathBuf,
    #[arg(long)]
    relations: PathBuf,
    #[arg(long)]
    rules: PathBuf,
    /// Keep only people assigned to this dynasty.
    #[arg(long)]
    dynasty: Option<String>,
    /// Dynasty span table (name, start_year, end_year). Defaults to the built-in table.
    #[arg(long)]
    dynasties: Option<PathBuf>,
    /// Comma-separated person ids to drop, e.g. placeholder records.
    #[arg(long, default_value = "")]
    exclude: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// Snapshot file; repeat for a multi-row table.
    #[arg(long, required = true)]
    snapshot: Vec<PathBuf>,
    /// Write the degree histogram of the first snapshot as CSV.
    #[arg(long)]
    hist: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct Scope {
    /// Comma-separated seed ids; omit to use the whole graph.
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long, default_value_t = 0)]
    depth: usize,
    #[arg(long, default_value_t = DEFAULT_DEPTH_CAP)]
    depth_cap: usize,
    /// Largest subgraph a query may analyze.
    #[arg(long, default_value_t = Limits::default().node_cap)]
    node_cap: usize,
}

impl Scope {
    fn limits(&self) -> Limits {
        Limits {
            depth_cap: self.depth_cap,
            node_cap: self.node_cap,
        }
    }

    fn seeds(&self) -> lensnet_core::Result<Vec<NodeId>> {
        self.seeds.as_deref().map_or(Ok(Vec::new()), parse_id_list)
    }
}

#[derive(Debug, Args)]
struct CentralArgs {
    #[arg(long)]
    snapshot: PathBuf,
    #[arg(long, default_value_t = 15)]
    top: usize,
    #[arg(long, default_value = "degree")]
    order_by: Measure,
    #[command(flatten)]
    scope: Scope,
    #[arg(long)]
    normalized: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    #[arg(long)]
    snapshot: PathBuf,
    #[arg(long)]
    seeds: String,
    #[arg(long, default_value_t = 1)]
    depth: usize,
    #[arg(long, default_value_t = DEFAULT_DEPTH_CAP)]
    depth_cap: usize,
    #[arg(long, default_value_t = Limits::default().node_cap)]
    node_cap: usize,
    /// Output snapshot; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PairArgs {
    #[arg(long)]
    snapshot: PathBuf,
    #[arg(long)]
    u: NodeId,
    #[arg(long)]
    v: NodeId,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Greedy,
    Community,
    Spectral,
    Brute,
}

#[derive(Debug, Args)]
struct StrategyArgs {
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Community)]
    algorithm: AlgorithmArg,
    /// Group count; required for greedy and spectral, an upper bound for brute.
    #[arg(long)]
    groups: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = 1.0)]
    gamma_pos: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma_neg: f64,
    /// Embedding dimension for spectral.
    #[arg(long, default_value_t = DEFAULT_SPECTRAL_DIM)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl StrategyArgs {
    fn strategy(&self) -> lensnet_core::Result<Strategy> {
        let groups = || {
            self.groups
                .ok_or_else(|| Error::InvalidArgument("--groups is required for greedy and spectral".into()))
        };
        Ok(match self.algorithm {
            AlgorithmArg::Greedy => Strategy::Greedy {
                groups: groups()?,
                restarts: self.restarts,
            },
            AlgorithmArg::Community => Strategy::Community {
                gamma_pos: self.gamma_pos,
                gamma_neg: self.gamma_neg,
            },
            AlgorithmArg::Spectral => Strategy::Spectral {
                k: groups()?,
                dim: self.dim,
            },
            AlgorithmArg::Brute => Strategy::BruteForce {
                max_groups: self.groups.unwrap_or(MAX_BRUTE_FORCE_NODES),
            },
        })
    }
}

#[derive(Debug, Args)]
struct PartitionArgs {
    #[arg(long)]
    snapshot: PathBuf,
    #[command(flatten)]
    strategy: StrategyArgs,
    #[command(flatten)]
    scope: Scope,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long)]
    snapshot: PathBuf,
    #[arg(long)]
    seeds: String,
    #[arg(long, default_value_t = 1)]
    depth: usize,
    #[arg(long, default_value_t = DEFAULT_DEPTH_CAP)]
    depth_cap: usize,
    #[arg(long, default_value_t = Limits::default().node_cap)]
    node_cap: usize,
    #[arg(long, default_value_t = 15)]
    top: usize,
    #[arg(long, default_value = "degree")]
    order_by: Measure,
    #[command(flatten)]
    strategy: StrategyArgs,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long)]
    snapshot: PathBuf,
    #[arg(long, default_value = "127.0.0.1")]
    host: std::net::IpAddr,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value_t = DEFAULT_DEPTH_CAP)]
    depth_cap: usize,
    #[arg(long, default_value_t = Limits::default().node_cap)]
    node_cap: usize,
    /// Queries computed at once; later ones wait.
    #[arg(long, default_value_t = lensnet_service::DEFAULT_WORKERS)]
    workers: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{line}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 1 runtime failure, 2 bad input, 3 refused by a guard.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Guard(_) => 3,
        Error::InvalidArgument(_) | Error::NotFound(_) => 2,
        _ => 1,
    }
}

fn run(cmd: Command) -> lensnet_core::Result<()> {
    match cmd {
        Command::Ingest(a) => ingest(a),
        Command::Stats(a) => stats(a),
        Command::Central(a) => central(a),
        Command::Extract(a) => extract(a),
        Command::Pair(a) => {
            let (g, _) = read_snapshot(&a.snapshot)?;
            print!("{}", to_pretty(&report::pair_relationship(&g, a.u, a.v)?));
            Ok(())
        }
        Command::Partition(a) => partition(a),
        Command::Report(a) => report_cmd(a),
        Command::Serve(a) => serve(a),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> lensnet_core::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct IngestSummary {
    files: Vec<ingest::ParseSummary>,
    build: ingest::BuildSummary,
}

fn ingest(a: IngestArgs) -> lensnet_core::Result<()> {
    let corpus = ingest::parse_corpus(&a.persons, &a.relations, &a.rules)?;
    let spans = match &a.dynasties {
        Some(p) => ingest::read_dynasties(p)?,
        None => ingest::default_dynasties(),
    };
    let opts = BuildOptions {
        dynasty: a.dynasty.clone(),
        spans,
        exclude: parse_id_list(&a.exclude)?.into_iter().collect(),
    };
    let (g, build) = ingest::build_graph(&corpus.persons, &corpus.relations, &corpus.rules, &opts)?;
    write_snapshot(&a.out, &g, a.dynasty.as_deref())?;
    print!(
        "{}",
        to_pretty(&IngestSummary {
            files: corpus.summaries,
            build,
        })
    );
    Ok(())
}

fn stats(a: StatsArgs) -> lensnet_core::Result<()> {
    let mut rows: Vec<NetworkStats> = Vec::new();
    for (i, path) in a.snapshot.iter().enumerate() {
        let (g, dynasty) = read_snapshot(path)?;
        if i == 0 {
            if let Some(h) = &a.hist {
                write_out(Some(h), &stats::degree_histogram_csv(&stats::degree_histogram(&g)))?;
            }
        }
        rows.push(stats::network_stats(&g, dynasty.as_deref()));
    }
    if a.json {
        print!("{}", to_pretty(&rows));
    } else {
        print!("{}", NetworkStats::table(&rows));
        println!("average path length: {}", stats::PATH_LENGTH_DEFINITION);
    }
    Ok(())
}

/// The whole graph, or the guarded seed subgraph when seeds are given.
fn scoped(g: SignedGraph, scope: &Scope) -> lensnet_core::Result<SignedGraph> {
    let seeds = scope.seeds()?;
    if seeds.is_empty() {
        return Ok(g);
    }
    let sq = SeedQuery::new(seeds, scope.depth)?;
    Ok(guarded_subgraph(&g, &sq, &scope.limits())?.0)
}

fn central_table(rows: &[CentralityRow]) -> String {
    let mut out = format!(
        "{:>4} {:>8}  {:<22} {:>9} {:>12} {:>9} {:>11}\n",
        "rank", "id", "name", "degree", "betweenness", "closeness", "eigenvector"
    );
    for (i, r) in rows.iter().enumerate() {
        out.push_str(&format!(
            "{:>4} {:>8}  {:<22} {:>9.4} {:>12.4} {:>9.4} {:>11.4}\n",
            i + 1,
            r.id.0,
            r.name_en,
            r.degree,
            r.betweenness,
            r.closeness,
            r.eigenvector
        ));
    }
    out
}

fn central(a: CentralArgs) -> lensnet_core::Result<()> {
    let (g, _) = read_snapshot(&a.snapshot)?;
    let g = scoped(g, &a.scope)?;
    let opts = CentralityOptions {
        normalized_betweenness: a.normalized,
        ..CentralityOptions::default()
    };
    let report = centrality::centrality_report(&g, &opts);
    let rows = centrality::top_central(&report, a.top, a.order_by)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if a.json {
        print!("{}", to_pretty(&rows));
    } else {
        print!("{}", central_table(&rows));
    }
    Ok(())
}

fn extract(a: ExtractArgs) -> lensnet_core::Result<()> {
    let (g, dynasty) = read_snapshot(&a.snapshot)?;
    let sq = SeedQuery::new(parse_id_list(&a.seeds)?, a.depth)?;
    let limits = Limits {
        depth_cap: a.depth_cap,
        node_cap: a.node_cap,
    };
    let (sub, sizes) = guarded_subgraph(&g, &sq, &limits)?;
    eprintln!("ball sizes by depth: {sizes:?}");
    write_out(a.out.as_deref(), &Snapshot::from_graph(&sub, dynasty.as_deref()).to_json())
}

fn partition(a: PartitionArgs) -> lensnet_core::Result<()> {
    let (g, _) = read_snapshot(&a.snapshot)?;
    let q = PartitionQuery {
        seeds: a.scope.seeds()?,
        depth: a.scope.depth,
        seed: a.strategy.seed,
        strategy: a.strategy.strategy()?,
    };
    let p = report::partition_query(&g, &q, &a.scope.limits())?;
    for w in &p.warnings {
        eprintln!("warning: {w}");
    }
    print!("{}", to_pretty(&p));
    Ok(())
}

fn report_cmd(a: ReportArgs) -> lensnet_core::Result<()> {
    let (g, _) = read_snapshot(&a.snapshot)?;
    let mut q = ReportQuery::new(parse_id_list(&a.seeds)?, a.depth, a.strategy.strategy()?, a.strategy.seed);
    q.top = a.top;
    q.order_by = a.order_by;
    let limits = Limits {
        depth_cap: a.depth_cap,
        node_cap: a.node_cap,
    };
    let r = report::three_part_report(&g, &q, &limits)?;
    write_out(a.out.as_deref(), &to_pretty(&r))
}

fn serve(a: ServeArgs) -> lensnet_core::Result<()> {
    let (g, dynasty) = read_snapshot(&a.snapshot)?;
    let config = lensnet_service::Config {
        limits: Limits {
            depth_cap: a.depth_cap,
            node_cap: a.node_cap,
        },
        workers: a.workers,
    };
    let state = lensnet_service::AppState::new(g, dynasty, config);
    let addr = SocketAddr::new(a.host, a.port);
    let rt = tokio::runtime::Runtime::new().map_err(|source| Error::Io {
        path: PathBuf::from("<runtime>"),
        source,
    })?;
    rt.block_on(lensnet_service::serve(addr, state)).map_err(|source| Error::Io {
        path: PathBuf::from(addr.to_string()),
        source,
    })
}
