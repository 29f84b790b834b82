//! `transit-hl`: build inputs, compute hub labels and run queries, benchmarks
//! and gain reports from the command line.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use transit_hl::hublabel::{build_labeling, load_labeling, save_labeling, VertexOrder};
use transit_hl::timetable::{load_gtfs, load_native, save_native};
use transit_hl::walkgraph::{embed_stops, load_graph, load_graph_binary, save_graph_binary};
use transit_hl::workload::{
    compare_with_oracle, gain_report, gen_rank, gen_uniform, read_queries, run_bench, write_queries, Algo, Network,
    QuerySpec, SourceWeighting,
};
use transit_hl::{StopId, Time, Timetable, WalkGraph};

const WALK_FILE: &str = "walk.bin";
const LABEL_FILE: &str = "labels.bin";

#[derive(Parser)]
#[command(name = "transit-hl", version, about = "Transit routing with unrestricted walking via hub labels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest a GTFS or native feed plus an optional walking graph into a data directory.
    Build {
        /// Source directory: `stops.txt` (GTFS) or `stops.tsv` (native), with
        /// optional `walk.gr`/`walk.co` or `walk.bin`.
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute hub labels for the walking graph of a data directory.
    Label {
        #[arg(long)]
        data: PathBuf,
        /// Defaults to `labels.bin` inside the data directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Earliest-arrival or Pareto query.
    Query {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long, default_value = "hlraptor")]
        algo: Algo,
        #[command(flatten)]
        od: OdArgs,
        #[arg(long = "from-time", value_parser = parse_time)]
        from_time: Time,
    },
    /// Profile query over a departure interval.
    Profile {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long, default_value = "hlprraptor")]
        algo: Algo,
        #[command(flatten)]
        od: OdArgs,
        #[arg(long = "from-time", value_parser = parse_time)]
        from_time: Time,
        #[arg(long = "to-time", value_parser = parse_time)]
        to_time: Time,
    },
    /// Generate a query workload.
    Gen {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, default_value = "uniform")]
        kind: Workload,
        /// Queries for `uniform`, sources for `rank`.
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw sources proportionally to the trips serving them.
        #[arg(long)]
        trip_weighted: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time an algorithm on a query file.
    Bench {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long)]
        algo: Algo,
        #[arg(long)]
        queries: PathBuf,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
        /// Also compare every answer with the brute-force oracle.
        #[arg(long)]
        verify: bool,
        /// Per-query TSV output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Travel-time gain of unrestricted over restricted walking.
    Gain {
        #[command(flatten)]
        net: NetArgs,
        /// Unrestricted algorithm.
        #[arg(long, default_value = "hlraptor")]
        algo: Algo,
        #[arg(long, default_value = "raptor")]
        restricted: Algo,
        #[arg(long)]
        queries: PathBuf,
        /// Keep only departures between 06:00 and 20:00.
        #[arg(long)]
        daytime: bool,
        /// Restricted transfer radius in meters.
        #[arg(long)]
        radius: Option<f64>,
        /// Per-query TSV output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct NetArgs {
    /// Data directory written by `build`.
    #[arg(long)]
    data: PathBuf,
    /// Hub labels; defaults to `labels.bin` in the data directory when present.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Args)]
struct OdArgs {
    /// Source stop, by external id.
    #[arg(long)]
    source: String,
    /// Target stop, by external id.
    #[arg(long)]
    target: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Workload {
    Uniform,
    Rank,
}

/// Seconds, or `H:MM[:SS]`.
fn parse_time(s: &str) -> Result<Time, String> {
    if let Ok(v) = s.parse() {
        return Ok(v);
    }
    let parts: Vec<&str> = s.split(':').collect();
    let nums: Option<Vec<Time>> = parts.iter().map(|p| p.parse().ok()).collect();
    match nums.as_deref() {
        Some([h, m]) if *m < 60 => Ok(h * 3600 + m * 60),
        Some([h, m, sec]) if *m < 60 && *sec < 60 => Ok(h * 3600 + m * 60 + sec),
        _ => Err(format!("`{s}` is neither seconds nor H:MM[:SS]")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Build { data, out } => build(&data, &out),
        Command::Label { data, out } => {
            let g = load_graph_binary(&data.join(WALK_FILE)).with_context(|| format!("reading {}", data.display()))?;
            let hl = build_labeling(&g, VertexOrder::Degree);
            let out = out.unwrap_or_else(|| data.join(LABEL_FILE));
            save_labeling(&hl, &out)?;
            print_json(&json!({
                "labels": out,
                "stops": hl.stats(g.num_stops()),
                "all_vertices": hl.stats_all(),
            }))
        }
        Command::Query { net, algo, od, from_time } => {
            if algo.is_profile() {
                bail!("{algo} is a profile algorithm; use the `profile` subcommand");
            }
            let net = load_network(&net)?;
            let q = QuerySpec::new(stop(&net.timetable, &od.source)?, stop(&net.timetable, &od.target)?, from_time);
            let outcome = net.engine(algo)?.run(&q);
            print_json(&json!({ "algo": algo.name(), "query": q, "outcome": outcome }))
        }
        Command::Profile { net, algo, od, from_time, to_time } => {
            if !algo.is_profile() && algo != Algo::Oracle {
                bail!("{algo} does not compute profiles");
            }
            if to_time < from_time {
                bail!("--to-time must not precede --from-time");
            }
            let net = load_network(&net)?;
            let q = QuerySpec {
                until: Some(to_time),
                ..QuerySpec::new(stop(&net.timetable, &od.source)?, stop(&net.timetable, &od.target)?, from_time)
            };
            let outcome = net.engine(algo)?.run(&q);
            print_json(&json!({ "algo": algo.name(), "query": q, "outcome": outcome }))
        }
        Command::Gen { data, kind, count, seed, trip_weighted, out } => {
            let tt = load_native(&data)?;
            let qs = match kind {
                Workload::Uniform => {
                    let w = if trip_weighted { SourceWeighting::Trips } else { SourceWeighting::Uniform };
                    gen_uniform(&tt, count, seed, w)?
                }
                Workload::Rank => gen_rank(&tt, &load_walk(&data, &tt)?, count, seed)?,
            };
            write_queries(BufWriter::new(File::create(&out)?), &qs)?;
            print_json(&json!({ "queries": qs.len(), "out": out }))
        }
        Command::Bench { net, algo, queries, repetitions, verify, out } => {
            let net = load_network(&net)?;
            let qs = read_queries(&queries, net.timetable.num_stops())?;
            let report = run_bench(&net, &qs, algo, repetitions.max(1))?;
            if let Some(out) = out {
                let mut w = BufWriter::new(File::create(&out)?);
                report.write_tsv(&mut w)?;
                w.flush()?;
            }
            let mut summary = serde_json::to_value(&report.summary)?;
            if verify {
                let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
                let diffs = compare_with_oracle(&net, &qs, algo, threads)?;
                summary["oracle_mismatches"] = json!(diffs.len());
            }
            print_json(&summary)
        }
        Command::Gain { net, algo, restricted, queries, daytime, radius, out } => {
            let mut net = load_network(&net)?;
            if let Some(r) = radius {
                net.transfer_radius_m = r;
            }
            let qs = read_queries(&queries, net.timetable.num_stops())?;
            let g = gain_report(&net, &qs, restricted, algo, daytime)?;
            if let Some(out) = out {
                let mut w = BufWriter::new(File::create(&out)?);
                g.write_tsv(&mut w)?;
                w.flush()?;
            }
            print_json(&json!({
                "restricted": restricted.name(),
                "unrestricted": algo.name(),
                "average_gain": g.average,
                "median_gain": g.median,
                "compared": g.compared,
                "restricted_unreachable": g.restricted_unreachable,
                "both_unreachable": g.both_unreachable,
                "filtered_out": g.filtered_out,
            }))
        }
    }
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{}", serde_json::to_string_pretty(v)?) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn stop(tt: &Timetable, ext: &str) -> Result<StopId> {
    tt.stops
        .iter()
        .position(|s| s.external_id == ext)
        .with_context(|| format!("unknown stop `{ext}`"))
}

fn build(src: &Path, out: &Path) -> Result<()> {
    let (tt, footpaths) = if src.join("stops.txt").exists() {
        let feed = load_gtfs(src).with_context(|| format!("reading GTFS feed {}", src.display()))?;
        (feed.timetable, feed.footpaths)
    } else if src.join("stops.tsv").exists() {
        (load_native(src)?, Vec::new())
    } else {
        bail!("{} holds neither stops.txt nor stops.tsv", src.display());
    };
    let n = tt.num_stops();
    let graph = if src.join(WALK_FILE).exists() {
        Some(load_graph_binary(&src.join(WALK_FILE))?)
    } else if src.join("walk.gr").exists() {
        let coords = src.join("walk.co");
        Some(load_graph(&src.join("walk.gr"), coords.exists().then_some(coords.as_path()))?)
    } else {
        None
    };
    let graph = match graph {
        Some(g) if g.num_stops() == n => g,
        Some(g) if g.num_stops() == 0 => embed_stops(&g, &tt.stops)?,
        Some(g) => bail!("walking graph has {} stops but the timetable has {n}", g.num_stops()),
        None => WalkGraph::from_edges(n, n, &[]),
    };
    let graph = graph.with_extra_edges(&footpaths);
    std::fs::create_dir_all(out)?;
    save_native(&tt, out)?;
    save_graph_binary(&graph, &out.join(WALK_FILE))?;
    print_json(&json!({
        "out": out,
        "stops": n,
        "trips": tt.trips.len(),
        "routes": tt.routes.len(),
        "connections": tt.connections.len(),
        "walk_vertices": graph.num_vertices(),
        "walk_edges": graph.num_edges(),
    }))
}

fn load_walk(data: &Path, tt: &Timetable) -> Result<WalkGraph> {
    let g = load_graph_binary(&data.join(WALK_FILE)).with_context(|| format!("reading {}/{WALK_FILE}", data.display()))?;
    if g.num_stops() != tt.num_stops() {
        bail!("walking graph has {} stops but the timetable has {}", g.num_stops(), tt.num_stops());
    }
    Ok(g)
}

fn load_network(args: &NetArgs) -> Result<Network> {
    let tt = load_native(&args.data).with_context(|| format!("reading timetable in {}", args.data.display()))?;
    let graph = if args.data.join(WALK_FILE).exists() { Some(load_walk(&args.data, &tt)?) } else { None };
    let default_labels = args.data.join(LABEL_FILE);
    let labels = match &args.labels {
        Some(p) => Some(load_labeling(p).with_context(|| format!("reading {}", p.display()))?),
        None if default_labels.exists() => Some(load_labeling(&default_labels)?),
        None => None,
    };
    Ok(Network::new(tt, graph, labels))
}
