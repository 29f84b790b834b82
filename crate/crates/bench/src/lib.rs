//! Benchmark helpers: a seeded desk-scale city and its query workload.

use transit_hl::fixtures::{random_instance, RandomConfig};
use transit_hl::hublabel::{build_labeling, VertexOrder};
use transit_hl::workload::{gen_uniform, Algo, Network, QuerySpec, SourceWeighting, DAYTIME};

/// Random city with `stops` stops, hub labels built, and `queries` uniform
/// queries departing in daytime.
pub fn city(stops: usize, queries: usize, seed: u64) -> (Network, Vec<QuerySpec>) {
    let inst = random_instance(seed, &RandomConfig::city(stops));
    let hl = build_labeling(&inst.graph, VertexOrder::Degree);
    let net = Network::new(inst.timetable, Some(inst.graph), Some(hl));
    let day = DAYTIME.1 - DAYTIME.0;
    let qs = gen_uniform(&net.timetable, queries, seed, SourceWeighting::Uniform)
        .expect("city has stops")
        .into_iter()
        .map(|mut q| {
            q.departure = DAYTIME.0 + q.departure % day;
            q
        })
        .collect();
    (net, qs)
}

/// Algorithms timed by the `queries` bench.
pub const TIMED: [Algo; 8] = [
    Algo::Raptor,
    Algo::Csa,
    Algo::HlRaptor,
    Algo::HlCsa,
    Algo::McRaptor,
    Algo::HlMcRaptor,
    Algo::HlprRaptor,
    Algo::HlprCsa,
];
