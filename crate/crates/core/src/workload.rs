//! Query workloads, the timing harness and the restricted-versus-unrestricted
//! gain report.

use std::sync::OnceLock;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::csa::{CsaOptions, CsaSearch, HlCsaSearch, HlProfileCsa};
use crate::error::{Error, Result};
use crate::hlraptor::HlProfileSearch;
use crate::hublabel::HubLabeling;
use crate::journey::{Profile, ProfileEntry};
use crate::oracle::{oracle_eat, oracle_profile_critical, OracleOptions, WalkTable};
use crate::raptor::{Label, McSearch, RaptorOptions, RoundSearch};
use crate::timetable::Timetable;
use crate::walkgraph::{build_transfer_graph, dijkstra, radius_to_seconds, Direction, TransferGraph, WalkGraph};
use crate::{StopId, Time, INFINITY};

/// Length of the service day sampled for departures.
pub const DAY: Time = 24 * 3600;
/// Profile interval used when a query names none.
pub const DEFAULT_PROFILE_WINDOW: Time = 2 * 3600;
/// Restricted transfers link stops within this walking radius.
pub const DEFAULT_TRANSFER_RADIUS_M: f64 = 75.0;
/// Daytime filter of the gain report, `[06:00, 20:00]`.
pub const DAYTIME: (Time, Time) = (6 * 3600, 20 * 3600);
/// Rank bands `[2^i, 2^(i+1))` used by [`gen_rank`].
pub const RANK_BANDS: std::ops::RangeInclusive<u32> = 2..=14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuerySpec {
    pub source: StopId,
    pub target: StopId,
    pub departure: Time,
    /// End of the departure interval for profile queries.
    pub until: Option<Time>,
    /// Dijkstra-rank band `i` for rank queries.
    pub band: Option<u32>,
}

impl QuerySpec {
    pub fn new(source: StopId, target: StopId, departure: Time) -> Self {
        QuerySpec {
            source,
            target,
            departure,
            until: None,
            band: None,
        }
    }

    pub fn interval(&self) -> (Time, Time) {
        (self.departure, self.until.unwrap_or(self.departure + DEFAULT_PROFILE_WINDOW))
    }
}

/// How [`gen_uniform`] draws sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SourceWeighting {
    #[default]
    Uniform,
    /// Proportional to the number of trips serving the stop.
    Trips,
}

/// `n` queries with uniform targets and departures in `[0, DAY)`.
pub fn gen_uniform(tt: &Timetable, n: usize, seed: u64, weighting: SourceWeighting) -> Result<Vec<QuerySpec>> {
    let stops = tt.num_stops();
    if n == 0 || stops == 0 {
        return Err(Error::InvalidArgument("need at least one query and one stop".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = match weighting {
        SourceWeighting::Uniform => None,
        SourceWeighting::Trips => {
            let w: Vec<usize> = (0..stops).map(|s| tt.trips_serving(s)).collect();
            Some(WeightedIndex::new(&w).map_err(|_| Error::InvalidArgument("no stop is served by a trip".into()))?)
        }
    };
    Ok((0..n)
        .map(|_| {
            let source = match &weights {
                None => rng.gen_range(0..stops),
                Some(w) => w.sample(&mut rng),
            };
            QuerySpec::new(source, rng.gen_range(0..stops), rng.gen_range(0..DAY))
        })
        .collect())
}

/// Stops reachable on foot from `source`, by increasing walking distance
/// with ties broken by id; the source comes first with rank 0.
pub fn dijkstra_ranks(g: &WalkGraph, source: StopId) -> Vec<StopId> {
    let dist = dijkstra(g, &[(source, 0)], Direction::Forward, None);
    let mut order: Vec<StopId> = (0..g.num_stops()).filter(|&v| dist[v] != INFINITY && v != source).collect();
    order.sort_by_key(|&v| (dist[v], v));
    order.insert(0, source);
    order
}

/// For each of `n_sources` random sources, one target drawn uniformly from
/// each Dijkstra-rank band `[2^i, 2^(i+1))`, `i = 2..=14`, that the network
/// populates. Bands are truncated at the number of reachable stops.
pub fn gen_rank(tt: &Timetable, g: &WalkGraph, n_sources: usize, seed: u64) -> Result<Vec<QuerySpec>> {
    if g.num_stops() != tt.num_stops() {
        return Err(Error::InvalidArgument("walking graph and timetable disagree on stops".into()));
    }
    if n_sources == 0 || tt.num_stops() == 0 {
        return Err(Error::InvalidArgument("need at least one source and one stop".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..n_sources {
        let source = rng.gen_range(0..tt.num_stops());
        let ranks = dijkstra_ranks(g, source);
        for i in RANK_BANDS {
            let (lo, hi) = (1usize << i, (1usize << (i + 1)).min(ranks.len()));
            if lo >= hi {
                break;
            }
            let target = ranks[rng.gen_range(lo..hi)];
            out.push(QuerySpec {
                band: Some(i),
                ..QuerySpec::new(source, target, rng.gen_range(0..DAY))
            });
        }
    }
    Ok(out)
}

const QUERIES_HEADER: &str = "source\ttarget\tdeparture\tuntil\tband";

/// Writes queries as TSV with internal stop ids; `-` marks absent fields.
pub fn write_queries(mut w: impl Write, queries: &[QuerySpec]) -> std::io::Result<()> {
    writeln!(w, "{QUERIES_HEADER}")?;
    let opt = |x: Option<u32>| x.map_or("-".to_string(), |v| v.to_string());
    for q in queries {
        writeln!(w, "{}\t{}\t{}\t{}\t{}", q.source, q.target, q.departure, opt(q.until), opt(q.band))?;
    }
    Ok(())
}

/// Reads the format of [`write_queries`]. Stops must be below `num_stops`.
pub fn read_queries(path: &Path, num_stops: usize) -> Result<Vec<QuerySpec>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: String| Error::parse(path, i + 1, msg);
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() < 3 {
            return Err(bad(format!("expected at least 3 fields, found {}", f.len())));
        }
        let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad(format!("bad number `{s}`")));
        let opt = |k: usize| match f.get(k).map(|s| s.trim()) {
            None | Some("-") | Some("") => Ok(None),
            Some(s) => num(s).map(Some),
        };
        let q = QuerySpec {
            source: num(f[0])? as StopId,
            target: num(f[1])? as StopId,
            departure: num(f[2])?,
            until: opt(3)?,
            band: opt(4)?,
        };
        if q.source >= num_stops || q.target >= num_stops {
            return Err(bad(format!("stop out of range (network has {num_stops} stops)")));
        }
        out.push(q);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algo {
    Raptor,
    Csa,
    HlRaptor,
    HlCsa,
    McRaptor,
    HlMcRaptor,
    HlprRaptor,
    HlprCsa,
    Oracle,
}

impl Algo {
    pub const ALL: [Algo; 9] = [
        Algo::Raptor,
        Algo::Csa,
        Algo::HlRaptor,
        Algo::HlCsa,
        Algo::McRaptor,
        Algo::HlMcRaptor,
        Algo::HlprRaptor,
        Algo::HlprCsa,
        Algo::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Raptor => "raptor",
            Algo::Csa => "csa",
            Algo::HlRaptor => "hlraptor",
            Algo::HlCsa => "hlcsa",
            Algo::McRaptor => "mcraptor",
            Algo::HlMcRaptor => "hlmcraptor",
            Algo::HlprRaptor => "hlprraptor",
            Algo::HlprCsa => "hlprcsa",
            Algo::Oracle => "oracle",
        }
    }

    pub fn is_profile(self) -> bool {
        matches!(self, Algo::HlprRaptor | Algo::HlprCsa)
    }

    pub fn is_multi_criteria(self) -> bool {
        matches!(self, Algo::McRaptor | Algo::HlMcRaptor)
    }

    pub fn uses_labels(self) -> bool {
        matches!(
            self,
            Algo::HlRaptor | Algo::HlCsa | Algo::HlMcRaptor | Algo::HlprRaptor | Algo::HlprCsa
        )
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == key)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm `{s}`")))
    }
}

/// Inputs shared by the algorithms. Derived structures are built on first use.
pub struct Network {
    pub timetable: Timetable,
    pub graph: Option<WalkGraph>,
    labels: Option<HubLabeling>,
    pub transfer_radius_m: f64,
    transfers: OnceLock<TransferGraph>,
    reversed: OnceLock<Timetable>,
    reversed_labels: OnceLock<HubLabeling>,
    walk_table: OnceLock<WalkTable>,
}

impl Network {
    /// Labels may cover the whole walking graph; only the stop labels are kept.
    pub fn new(timetable: Timetable, graph: Option<WalkGraph>, labels: Option<HubLabeling>) -> Self {
        let n = timetable.num_stops();
        Network {
            labels: labels.map(|l| l.restricted(n)),
            timetable,
            graph,
            transfer_radius_m: DEFAULT_TRANSFER_RADIUS_M,
            transfers: OnceLock::new(),
            reversed: OnceLock::new(),
            reversed_labels: OnceLock::new(),
            walk_table: OnceLock::new(),
        }
    }

    fn graph_for(&self, algo: Algo) -> Result<&WalkGraph> {
        self.graph.as_ref().ok_or(Error::MissingInput {
            algo: algo.name(),
            what: "a walking graph",
        })
    }

    pub fn labels_for(&self, algo: Algo) -> Result<&HubLabeling> {
        self.labels.as_ref().ok_or(Error::MissingInput {
            algo: algo.name(),
            what: "a hub labeling",
        })
    }

    pub fn transfers_for(&self, algo: Algo) -> Result<&TransferGraph> {
        if let Some(t) = self.transfers.get() {
            return Ok(t);
        }
        let g = self.graph_for(algo)?;
        Ok(self
            .transfers
            .get_or_init(|| build_transfer_graph(g, Some(radius_to_seconds(self.transfer_radius_m)))))
    }

    pub fn reversed(&self) -> &Timetable {
        self.reversed.get_or_init(|| self.timetable.reversed())
    }

    fn reversed_labels_for(&self, algo: Algo) -> Result<&HubLabeling> {
        let hl = self.labels_for(algo)?;
        Ok(self.reversed_labels.get_or_init(|| hl.reversed()))
    }

    pub fn walk_table_for(&self, algo: Algo) -> Result<&WalkTable> {
        if let Some(w) = self.walk_table.get() {
            return Ok(w);
        }
        let g = self.graph_for(algo)?;
        Ok(self.walk_table.get_or_init(|| WalkTable::from_graph(g)))
    }

    /// Builds the reusable search state of `algo`, failing if an input it
    /// needs is absent.
    pub fn engine(&self, algo: Algo) -> Result<Engine<'_>> {
        let tt = &self.timetable;
        let ro = RaptorOptions::default();
        let co = CsaOptions::default();
        Ok(match algo {
            Algo::Raptor => Engine::Rounds(RoundSearch::with_transfers(tt, self.transfers_for(algo)?, ro)),
            Algo::HlRaptor => Engine::Rounds(RoundSearch::with_hubs(tt, self.labels_for(algo)?, ro)),
            Algo::Csa => Engine::Csa(CsaSearch::new(tt, self.transfers_for(algo)?, co)),
            Algo::HlCsa => Engine::HlCsa(HlCsaSearch::new(tt, self.labels_for(algo)?, co)),
            Algo::McRaptor => Engine::Mc(McSearch::with_transfers(tt, self.transfers_for(algo)?, ro)),
            Algo::HlMcRaptor => Engine::Mc(McSearch::with_hubs(tt, self.labels_for(algo)?, ro)),
            Algo::HlprRaptor => {
                let hl = self.labels_for(algo)?;
                Engine::ProfileRounds(HlProfileSearch::new(tt, self.reversed(), hl, self.reversed_labels_for(algo)?, ro))
            }
            Algo::HlprCsa => Engine::ProfileCsa(HlProfileCsa::new(tt, self.labels_for(algo)?, co)),
            Algo::Oracle => Engine::Oracle(tt, self.walk_table_for(algo)?),
        })
    }
}

/// Result of one query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Arrival(Option<Time>),
    Profile(Profile),
    Pareto(Vec<Label>),
}

impl Outcome {
    pub fn arrival(&self) -> Option<Time> {
        match self {
            Outcome::Arrival(a) => *a,
            Outcome::Profile(p) => p.entries.first().map(|e| e.arr),
            Outcome::Pareto(l) => l.iter().map(|l| l.arrival).min(),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Arrival(Some(a)) => write!(f, "{a}"),
            Outcome::Arrival(None) => f.write_str("-"),
            Outcome::Profile(p) => {
                let parts: Vec<String> = p.entries.iter().map(|ProfileEntry { dep, arr }| format!("{dep}:{arr}")).collect();
                if parts.is_empty() {
                    f.write_str("-")
                } else {
                    f.write_str(&parts.join(","))
                }
            }
            Outcome::Pareto(ls) => {
                let parts: Vec<String> = ls.iter().map(|l| format!("{}/{}/{}", l.arrival, l.trips, l.walk)).collect();
                if parts.is_empty() {
                    f.write_str("-")
                } else {
                    f.write_str(&parts.join(","))
                }
            }
        }
    }
}

pub enum Engine<'a> {
    Rounds(RoundSearch<'a>),
    Csa(CsaSearch<'a>),
    HlCsa(HlCsaSearch<'a>),
    Mc(McSearch<'a>),
    ProfileRounds(HlProfileSearch<'a>),
    ProfileCsa(HlProfileCsa<'a>),
    Oracle(&'a Timetable, &'a WalkTable),
}

impl Engine<'_> {
    pub fn run(&mut self, q: &QuerySpec) -> Outcome {
        let (s, t, dep) = (q.source, q.target, q.departure);
        match self {
            Engine::Rounds(e) => Outcome::Arrival(e.query(s, t, dep).arrival),
            Engine::Csa(e) => Outcome::Arrival(e.query(s, t, dep).arrival),
            Engine::HlCsa(e) => Outcome::Arrival(e.query(s, t, dep).arrival),
            Engine::Mc(e) => Outcome::Pareto(e.query(s, t, dep).labels),
            Engine::ProfileRounds(e) => {
                let (from, to) = q.interval();
                Outcome::Profile(e.profile(s, t, from, to).profile)
            }
            Engine::ProfileCsa(e) => {
                let (from, to) = q.interval();
                Outcome::Profile(e.profile(s, t, from, to).profile)
            }
            Engine::Oracle(tt, walk) => {
                if q.until.is_some() {
                    let (from, to) = q.interval();
                    Outcome::Profile(oracle_profile_critical(tt, walk, s, t, from, to, OracleOptions::default()))
                } else {
                    Outcome::Arrival(oracle_eat(tt, walk, s, t, dep, OracleOptions::default()).arrival)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub query: QuerySpec,
    pub outcome: Outcome,
    /// Mean over the timed repetitions, in microseconds.
    pub micros: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingStats {
    pub count: usize,
    pub mean_us: f64,
    pub median_us: f64,
    pub p95_us: f64,
}

impl TimingStats {
    pub fn from_samples(samples: &[f64]) -> Self {
        let mut v = samples.to_vec();
        v.sort_by(f64::total_cmp);
        let pick = |q: f64| {
            if v.is_empty() {
                0.0
            } else {
                v[((q * (v.len() - 1) as f64).round() as usize).min(v.len() - 1)]
            }
        };
        TimingStats {
            count: v.len(),
            mean_us: if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 },
            median_us: pick(0.5),
            p95_us: pick(0.95),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSummary {
    pub algo: String,
    pub queries: usize,
    pub repetitions: usize,
    pub unreachable: usize,
    /// Whether every repetition returned the same outcome.
    pub deterministic: bool,
    pub timing: TimingStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub summary: BenchSummary,
}

impl BenchReport {
    /// One row per query: source, target, departure, interval end, band,
    /// outcome and time in microseconds.
    pub fn write_tsv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "source\ttarget\tdeparture\tuntil\tband\tresult\tmicros")?;
        let opt = |x: Option<u32>| x.map_or("-".to_string(), |v| v.to_string());
        for r in &self.rows {
            let q = &r.query;
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{}\t{:.1}",
                q.source,
                q.target,
                q.departure,
                opt(q.until),
                opt(q.band),
                r.outcome,
                r.micros
            )?;
        }
        Ok(())
    }
}

/// Runs every query `repetitions` times after one untimed warm-up run,
/// sequentially on the calling thread.
pub fn run_bench(net: &Network, queries: &[QuerySpec], algo: Algo, repetitions: usize) -> Result<BenchReport> {
    let mut engine = net.engine(algo)?;
    let repetitions = repetitions.max(1);
    let mut rows = Vec::with_capacity(queries.len());
    let mut deterministic = true;
    for q in queries {
        let outcome = engine.run(q);
        let mut total = 0.0;
        for _ in 0..repetitions {
            let start = Instant::now();
            let again = engine.run(q);
            total += start.elapsed().as_secs_f64() * 1e6;
            deterministic &= again == outcome;
        }
        rows.push(BenchRow {
            query: *q,
            outcome,
            micros: total / repetitions as f64,
        });
    }
    let times: Vec<f64> = rows.iter().map(|r| r.micros).collect();
    let unreachable = rows.iter().filter(|r| r.outcome.arrival().is_none()).count();
    Ok(BenchReport {
        summary: BenchSummary {
            algo: algo.name().to_string(),
            queries: queries.len(),
            repetitions,
            unreachable,
            deterministic,
            timing: TimingStats::from_samples(&times),
        },
        rows,
    })
}

/// Queries on which `algo` and the oracle disagree, checked on `threads`
/// worker threads. Meant for correctness sweeps, not timing.
pub fn compare_with_oracle(net: &Network, queries: &[QuerySpec], algo: Algo, threads: usize) -> Result<Vec<(QuerySpec, Outcome, Outcome)>> {
    if algo.is_multi_criteria() {
        return Err(Error::InvalidArgument(format!("{algo} has no single-answer oracle")));
    }
    net.engine(algo)?;
    let walk = net.walk_table_for(Algo::Oracle)?;
    let profile = algo.is_profile();
    let threads = threads.max(1);
    let chunk = queries.len().div_ceil(threads).max(1);
    let mut mismatches = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = queries
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    let mut engine = net.engine(algo).expect("inputs checked");
                    let mut oracle = Engine::Oracle(&net.timetable, walk);
                    let mut bad = Vec::new();
                    for q in part {
                        let q = if profile {
                            QuerySpec { until: Some(q.interval().1), ..*q }
                        } else {
                            QuerySpec { until: None, ..*q }
                        };
                        let (a, b) = (engine.run(&q), oracle.run(&q));
                        if a != b {
                            bad.push((q, a, b));
                        }
                    }
                    bad
                })
            })
            .collect();
        for h in handles {
            mismatches.extend(h.join().expect("worker panicked"));
        }
    });
    Ok(mismatches)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainRow {
    pub query: QuerySpec,
    /// Travel times, arrival minus departure.
    pub restricted: Option<Time>,
    pub unrestricted: Option<Time>,
    /// `(restricted - unrestricted) / restricted` when both are reachable.
    pub gain: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainReport {
    pub rows: Vec<GainRow>,
    /// Over rows where both settings reach the target.
    pub average: f64,
    pub median: f64,
    pub compared: usize,
    /// Reachable only with unrestricted walking.
    pub restricted_unreachable: usize,
    pub both_unreachable: usize,
    /// Queries dropped by the daytime filter.
    pub filtered_out: usize,
}

impl GainReport {
    pub fn write_tsv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "source\ttarget\tdeparture\trestricted\tunrestricted\tgain")?;
        let opt = |x: Option<Time>| x.map_or("-".to_string(), |v| v.to_string());
        for r in &self.rows {
            let g = r.gain.map_or("-".to_string(), |g| format!("{g:.4}"));
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{}",
                r.query.source,
                r.query.target,
                r.query.departure,
                opt(r.restricted),
                opt(r.unrestricted),
                g
            )?;
        }
        Ok(())
    }
}

/// Relative travel-time gain of `unrestricted` over `restricted`, both
/// earliest-arrival algorithms. With `daytime_only`, queries departing
/// outside [`DAYTIME`] are skipped.
pub fn gain_report(net: &Network, queries: &[QuerySpec], restricted: Algo, unrestricted: Algo, daytime_only: bool) -> Result<GainReport> {
    for a in [restricted, unrestricted] {
        if a.is_profile() || a.is_multi_criteria() {
            return Err(Error::InvalidArgument(format!("{a} is not an earliest-arrival algorithm")));
        }
    }
    let mut slow = net.engine(restricted)?;
    let mut fast = net.engine(unrestricted)?;
    let mut rows = Vec::new();
    let mut filtered_out = 0;
    for q in queries {
        if daytime_only && !(DAYTIME.0..=DAYTIME.1).contains(&q.departure) {
            filtered_out += 1;
            continue;
        }
        let q = QuerySpec { until: None, ..*q };
        let travel = |o: Outcome| o.arrival().map(|a| a - q.departure);
        let r = travel(slow.run(&q));
        let u = travel(fast.run(&q));
        let gain = match (r, u) {
            (Some(0), Some(_)) => Some(0.0),
            (Some(r), Some(u)) => Some((r as f64 - u as f64) / r as f64),
            _ => None,
        };
        rows.push(GainRow {
            query: q,
            restricted: r,
            unrestricted: u,
            gain,
        });
    }
    let mut gains: Vec<f64> = rows.iter().filter_map(|r| r.gain).collect();
    gains.sort_by(f64::total_cmp);
    let compared = gains.len();
    let average = if compared == 0 { 0.0 } else { gains.iter().sum::<f64>() / compared as f64 };
    let median = match compared {
        0 => 0.0,
        n if n % 2 == 1 => gains[n / 2],
        n => (gains[n / 2 - 1] + gains[n / 2]) / 2.0,
    };
    Ok(GainReport {
        average,
        median,
        compared,
        restricted_unreachable: rows.iter().filter(|r| r.restricted.is_none() && r.unrestricted.is_some()).count(),
        both_unreachable: rows.iter().filter(|r| r.restricted.is_none() && r.unrestricted.is_none()).count(),
        filtered_out,
        rows,
    })
}
