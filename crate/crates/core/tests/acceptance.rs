//! Acceptance suite. Every criterion writes a single `PASS` or `FAIL` line
//! to stderr, bypassing the test harness capture, and then asserts.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use transit_hl::csa::{hlcsa_eat, hlpr_csa, CsaOptions};
use transit_hl::fixtures::{self, RandomConfig, A, D, T2_DEPARTURE};
use transit_hl::hlraptor::{hlmc_raptor, hlpr_raptor, hlraptor_eat, HlProfileSearch};
use transit_hl::hublabel::{build_labeling, VertexOrder};
use transit_hl::oracle::{oracle_eat, oracle_pareto, oracle_profile, OracleOptions, WalkTable};
use transit_hl::raptor::{raptor_eat, RaptorOptions, RoundSearch};
use transit_hl::timetable::load_gtfs;
use transit_hl::walkgraph::{build_transfer_graph, dijkstra, embed_stops, load_graph, Direction};
use transit_hl::workload::{gain_report, gen_uniform, Algo, Network, QuerySpec, SourceWeighting};
use transit_hl::{StopId, Time, INFINITY};

fn verdict(id: u32, name: &str, failures: &[String], detail: String) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut line = format!("{status} criterion {id} ({name}): {detail}\n");
    for f in failures.iter().take(5) {
        line += &format!("    {f}\n");
    }
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(failures.is_empty(), "criterion {id} failed with {} mismatches", failures.len());
}

/// Up to 50 stops and 200 trips.
fn suite_config(i: u64) -> RandomConfig {
    match i % 4 {
        0 => RandomConfig::default(),
        1 => RandomConfig { transfer_times: true, ..RandomConfig::default() },
        2 => RandomConfig { transfer_times: true, ..RandomConfig::tiny() },
        _ => RandomConfig {
            min_stops: 20,
            max_stops: 50,
            max_lines: 20,
            max_trips_per_line: 10,
            max_line_len: 8,
            transfer_times: true,
            ..RandomConfig::default()
        },
    }
}

const SUITE: u64 = 200;

fn queries(n: usize, seed: u64, start: Time, count: usize) -> Vec<(StopId, StopId, Time)> {
    (0..count)
        .map(|q| {
            let s = (seed as usize * 7 + q * 3) % n;
            let t = (seed as usize * 13 + q * 5 + 1) % n;
            (s, t, start + q as Time * 1700)
        })
        .collect()
}

#[test]
fn c1_hub_cover_exactness() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut pairs = 0usize;
    let graphs = 24u64;
    for seed in 0..graphs {
        let n = 50 + (seed as usize * 197) % 451;
        let g = fixtures::random_graph(seed, n, n / 4, 2 * n);
        let hl = build_labeling(&g, VertexOrder::Degree);
        for u in 0..n {
            let dist = dijkstra(&g, &[(u, 0)], Direction::Forward, None);
            for (v, &d) in dist.iter().enumerate() {
                pairs += 1;
                let want = (d != INFINITY).then_some(d);
                if hl.query(u, v) != want {
                    failures.push(format!("graph {seed}: {u}->{v} got {:?} want {want:?}", hl.query(u, v)));
                }
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    if secs >= 60.0 {
        failures.push(format!("took {secs:.1} s"));
    }
    verdict(1, "hub-cover exactness", &failures, format!("{graphs} graphs, {pairs} ordered pairs in {secs:.1} s"));
}

#[test]
fn c2_closure_equivalence() {
    let mut failures = Vec::new();
    let mut compared = 0usize;
    for seed in 0..SUITE {
        let cfg = suite_config(seed);
        let inst = fixtures::random_instance(seed + 10_000, &cfg);
        let tt = &inst.timetable;
        let n = tt.num_stops();
        let hl = build_labeling(&inst.graph, VertexOrder::Degree).restricted(n);
        let closure = build_transfer_graph(&inst.graph, None);
        for (s, t, dep) in queries(n, seed, cfg.start, 6) {
            let opts = RaptorOptions { max_rounds: 8, ..RaptorOptions::default() };
            let h = hlraptor_eat(tt, &hl, s, t, dep, opts);
            let r = raptor_eat(tt, &closure, s, t, dep, opts);
            compared += 1;
            if h.round_arrivals != r.round_arrivals {
                failures.push(format!("seed {seed} {s}->{t}@{dep}: {:?} vs {:?}", h.round_arrivals, r.round_arrivals));
            }
        }
    }
    verdict(2, "closure equivalence", &failures, format!("{SUITE} instances, {compared} queries, all rounds"));
}

#[test]
fn c3_cross_algorithm_agreement() {
    let mut failures = Vec::new();
    let mut compared = 0usize;
    for seed in 0..SUITE {
        let cfg = suite_config(seed);
        let inst = fixtures::random_instance(seed + 10_000, &cfg);
        let tt = &inst.timetable;
        let n = tt.num_stops();
        let hl = build_labeling(&inst.graph, VertexOrder::Degree).restricted(n);
        let walk = WalkTable::from_graph(&inst.graph);
        for (s, t, dep) in queries(n, seed, cfg.start, 6) {
            let o = oracle_eat(tt, &walk, s, t, dep, OracleOptions { max_trips: 64, transfer_times: true }).arrival;
            let r = hlraptor_eat(tt, &hl, s, t, dep, RaptorOptions { max_rounds: 64, ..RaptorOptions::default() }).arrival;
            let c = hlcsa_eat(tt, &hl, s, t, dep, CsaOptions::default()).arrival;
            compared += 1;
            if r != o || c != o {
                failures.push(format!("seed {seed} {s}->{t}@{dep}: raptor {r:?} csa {c:?} oracle {o:?}"));
            }
        }
    }
    verdict(3, "cross-algorithm agreement", &failures, format!("{SUITE} instances, {compared} queries"));
}

#[test]
fn c4_profile_correctness() {
    let mut failures = Vec::new();
    let instances = 50u64;
    let mut entries = 0usize;
    for seed in 0..instances {
        let cfg = RandomConfig {
            max_stops: 12,
            max_lines: 6,
            max_trips_per_line: 10,
            span: 7200,
            transfer_times: seed % 2 == 0,
            ..RandomConfig::default()
        };
        let inst = fixtures::random_instance(seed + 20_000, &cfg);
        let tt = &inst.timetable;
        let rev = tt.reversed();
        let n = tt.num_stops();
        let hl = build_labeling(&inst.graph, VertexOrder::Degree).restricted(n);
        let rhl = hl.reversed();
        let walk = WalkTable::from_graph(&inst.graph);
        let (from, to) = (cfg.start + 1800, cfg.start + 1800 + 7200);
        let ropts = RaptorOptions { transfer_times: cfg.transfer_times, ..RaptorOptions::default() };
        let copts = CsaOptions { transfer_times: cfg.transfer_times, ..CsaOptions::default() };
        let oopts = OracleOptions { transfer_times: cfg.transfer_times, ..OracleOptions::default() };
        for q in 0..2 {
            let s = (seed as usize + q) % n;
            let t = (seed as usize * 3 + 2 * q + 1) % n;
            let o = oracle_profile(tt, &walk, s, t, from, to, oopts);
            let r = hlpr_raptor(tt, &rev, &hl, &rhl, s, t, from, to, ropts).profile;
            let c = hlpr_csa(tt, &hl, s, t, from, to, copts).profile;
            entries += o.entries.len();
            if r != o || c != o {
                failures.push(format!("seed {seed} {s}->{t}: raptor {:?} csa {:?} oracle {:?}", r.entries, c.entries, o.entries));
            }
        }
    }
    verdict(4, "profile correctness", &failures, format!("{instances} instances, 2 h windows, {entries} profile entries"));
}

#[test]
fn c5_multi_criteria_correctness() {
    let mut failures = Vec::new();
    let instances = 100u64;
    let mut labels = 0usize;
    for seed in 0..instances {
        let cfg = RandomConfig { transfer_times: seed % 3 != 0, ..RandomConfig::tiny() };
        let inst = fixtures::random_instance(seed + 30_000, &cfg);
        let tt = &inst.timetable;
        let n = tt.num_stops();
        let hl = build_labeling(&inst.graph, VertexOrder::Degree).restricted(n);
        let walk = WalkTable::from_graph(&inst.graph);
        let opts = RaptorOptions { max_rounds: 3, transfer_times: cfg.transfer_times, ..RaptorOptions::default() };
        let oo = OracleOptions { max_trips: 3, transfer_times: cfg.transfer_times };
        for (s, t, dep) in queries(n, seed, cfg.start, 3) {
            let o = match oracle_pareto(tt, &walk, s, t, dep, oo, 5_000_000) {
                Ok(o) => o,
                Err(e) => {
                    failures.push(format!("seed {seed}: oracle {e}"));
                    continue;
                }
            };
            let m = hlmc_raptor(tt, &hl, s, t, dep, opts).labels;
            labels += o.len();
            if m != o {
                failures.push(format!("seed {seed} {s}->{t}@{dep}: {m:?} vs {o:?}"));
            }
        }
    }
    verdict(5, "multi-criteria correctness", &failures, format!("{instances} instances, {labels} Pareto labels"));
}

#[test]
fn c6_optimization_neutrality() {
    let mut failures = Vec::new();
    let mut runs = 0usize;
    for seed in 0..SUITE {
        let cfg = suite_config(seed);
        let inst = fixtures::random_instance(seed + 10_000, &cfg);
        let tt = &inst.timetable;
        let rev = tt.reversed();
        let n = tt.num_stops();
        let hl = build_labeling(&inst.graph, VertexOrder::Degree).restricted(n);
        let rhl = hl.reversed();
        let raptor = |p: bool| RaptorOptions { target_pruning: p, ..RaptorOptions::default() };
        let csa_variants: Vec<CsaOptions> = (0..8)
            .map(|b| CsaOptions {
                target_pruning: b & 1 != 0,
                local_pruning: b & 2 != 0,
                skip_boarded: b & 4 != 0,
                ..CsaOptions::default()
            })
            .collect();
        for (s, t, dep) in queries(n, seed, cfg.start, 4) {
            let base = hlraptor_eat(tt, &hl, s, t, dep, raptor(true)).arrival;
            let mut got = vec![hlraptor_eat(tt, &hl, s, t, dep, raptor(false)).arrival];
            got.extend(csa_variants.iter().map(|&o| hlcsa_eat(tt, &hl, s, t, dep, o).arrival));
            runs += got.len();
            if got.iter().any(|&a| a != base) {
                failures.push(format!("seed {seed} {s}->{t}@{dep}: eat {base:?} vs {got:?}"));
            }
            if seed % 4 == 2 {
                let mc = hlmc_raptor(tt, &hl, s, t, dep, RaptorOptions { max_rounds: 4, ..raptor(true) }).labels;
                let mc_off = hlmc_raptor(tt, &hl, s, t, dep, RaptorOptions { max_rounds: 4, ..raptor(false) }).labels;
                runs += 1;
                if mc != mc_off {
                    failures.push(format!("seed {seed} {s}->{t}@{dep}: bags {mc:?} vs {mc_off:?}"));
                }
            }
        }
        if seed % 4 != 3 {
            let (s, t) = (seed as usize % n, (seed as usize + 1) % n);
            let (from, to) = (cfg.start, cfg.start + 7200);
            let base = hlpr_raptor(tt, &rev, &hl, &rhl, s, t, from, to, raptor(true)).profile;
            let off = HlProfileSearch::new(tt, &rev, &hl, &rhl, raptor(false)).profile(s, t, from, to).profile;
            runs += 1;
            if off != base {
                failures.push(format!("seed {seed} profile {s}->{t} differs with pruning off"));
            }
            for &o in &csa_variants {
                runs += 1;
                if hlpr_csa(tt, &hl, s, t, from, to, o).profile != base {
                    failures.push(format!("seed {seed} csa profile {s}->{t} differs under {o:?}"));
                }
            }
        }
    }
    verdict(6, "optimization neutrality", &failures, format!("{SUITE} instances, {runs} toggled runs"));
}

fn feed_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/riverside")
}

fn riverside() -> Network {
    let dir = feed_dir();
    let feed = load_gtfs(&dir).unwrap();
    let streets = load_graph(&dir.join("walk.gr"), Some(&dir.join("walk.co"))).unwrap();
    let graph = embed_stops(&streets, &feed.timetable.stops).unwrap();
    let hl = build_labeling(&graph, VertexOrder::Degree);
    Network::new(feed.timetable, Some(graph), Some(hl))
}

#[test]
fn c7_gain_in_kind() {
    let mut failures = Vec::new();

    let t2 = fixtures::t2();
    let hl = build_labeling(&t2.graph, VertexOrder::Degree);
    let net = Network::new(t2.timetable, Some(t2.graph), Some(hl));
    let q = QuerySpec::new(A, D, T2_DEPARTURE);
    let g = gain_report(&net, &[q], Algo::Raptor, Algo::HlRaptor, false).unwrap();
    if g.average.is_nan() || g.average <= 0.0 {
        failures.push(format!("T2 average gain {}", g.average));
    }
    let t2_gain = g.average;

    let net = riverside();
    let qs = gen_uniform(&net.timetable, 2000, 17, SourceWeighting::Uniform).unwrap();
    let g = gain_report(&net, &qs, Algo::Raptor, Algo::HlRaptor, true).unwrap();
    if g.average.is_nan() || g.average <= 0.0 || g.compared == 0 {
        failures.push(format!("feed average gain {} over {} queries", g.average, g.compared));
    }
    verdict(
        7,
        "gain in kind",
        &failures,
        format!(
            "T2 gain {:.1}%, synthetic feed gain {:.2}% avg, {:.2}% median over {} daytime queries ({} reachable only unrestricted)",
            100.0 * t2_gain,
            100.0 * g.average,
            100.0 * g.median,
            g.compared,
            g.restricted_unreachable
        ),
    );
}

#[test]
fn c8_hub_work_is_bounded_by_label_sizes() {
    let mut failures = Vec::new();
    let mut rounds = 0usize;
    let (mut scanned, mut bound) = (0usize, 0usize);
    let mut check = |tag: String, r: &transit_hl::raptor::EatResult, exact: bool| {
        for (k, w) in r.work.iter().enumerate() {
            rounds += 1;
            scanned += w.hub_entries_scanned;
            bound += w.hub_entries_bound;
            let ok = if exact {
                w.hub_entries_scanned == w.hub_entries_bound
            } else {
                w.hub_entries_scanned <= w.hub_entries_bound
            };
            if !ok {
                failures.push(format!("{tag} round {k}: scanned {} bound {}", w.hub_entries_scanned, w.hub_entries_bound));
            }
        }
    };
    for seed in 0..SUITE {
        let cfg = suite_config(seed);
        let inst = fixtures::random_instance(seed + 10_000, &cfg);
        let tt = &inst.timetable;
        let n = tt.num_stops();
        let hl = build_labeling(&inst.graph, VertexOrder::Degree).restricted(n);
        for (s, t, dep) in queries(n, seed, cfg.start, 4) {
            for pruning in [true, false] {
                let opts = RaptorOptions { target_pruning: pruning, ..RaptorOptions::default() };
                let r = RoundSearch::with_hubs(tt, &hl, opts).query(s, t, dep);
                check(format!("seed {seed} {s}->{t}@{dep} pruning {pruning}"), &r, !pruning);
            }
        }
    }
    let net = riverside();
    let qs = gen_uniform(&net.timetable, 200, 5, SourceWeighting::Uniform).unwrap();
    let hl = net.labels_for(Algo::HlRaptor).unwrap();
    for q in &qs {
        let r = hlraptor_eat(&net.timetable, hl, q.source, q.target, q.departure, RaptorOptions::default());
        check(format!("feed {}->{}@{}", q.source, q.target, q.departure), &r, false);
    }
    verdict(
        8,
        "hub work bounded by label sizes",
        &failures,
        format!("{rounds} rounds, {scanned} hub entries scanned of {bound} bound"),
    );
}
