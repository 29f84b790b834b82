use transit_hl::fixtures::{self, RandomConfig, T2_DEPARTURE};
use transit_hl::hublabel::{build_labeling, VertexOrder};
use transit_hl::walkgraph::{dijkstra, Direction};
use transit_hl::workload::*;
use transit_hl::{Error, INFINITY};

fn network(inst: fixtures::Instance, labels: bool) -> Network {
    let hl = labels.then(|| build_labeling(&inst.graph, VertexOrder::Degree));
    Network::new(inst.timetable, Some(inst.graph), hl)
}

#[test]
fn uniform_is_reproducible_and_within_support() {
    let tt = fixtures::t1().timetable;
    let a = gen_uniform(&tt, 1000, 7, SourceWeighting::Uniform).unwrap();
    assert_eq!(a, gen_uniform(&tt, 1000, 7, SourceWeighting::Uniform).unwrap());
    assert_ne!(a, gen_uniform(&tt, 1000, 8, SourceWeighting::Uniform).unwrap());
    assert!(a.iter().all(|q| q.source < 4 && q.target < 4 && q.departure < DAY));
    assert!(gen_uniform(&tt, 0, 7, SourceWeighting::Uniform).is_err());
}

#[test]
fn uniform_frequencies_pass_chi_square() {
    let inst = fixtures::random_instance(3, &RandomConfig::default());
    let tt = inst.timetable;
    let n = 100_000;
    let qs = gen_uniform(&tt, n, 11, SourceWeighting::Uniform).unwrap();
    let k = tt.num_stops();
    let expected = n as f64 / k as f64;
    for pick in [|q: &QuerySpec| q.source, |q: &QuerySpec| q.target] {
        let mut count = vec![0usize; k];
        for q in &qs {
            count[pick(q)] += 1;
        }
        let chi2: f64 = count.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        let df = (k - 1) as f64;
        assert!(chi2 < df + 3.0 * (2.0 * df).sqrt(), "chi2 {chi2} with {df} degrees of freedom");
        let sigma = (expected * (1.0 - 1.0 / k as f64)).sqrt();
        assert!(count.iter().all(|&c| (c as f64 - expected).abs() <= 3.0 * sigma + 1.0));
    }
}

#[test]
fn trip_weighted_sources_skip_unserved_stops() {
    let inst = fixtures::t1();
    let qs = gen_uniform(&inst.timetable, 500, 1, SourceWeighting::Trips).unwrap();
    // B and D are only ever the last stop of a trip
    assert!(qs.iter().all(|q| q.source == fixtures::A || q.source == fixtures::C));
}

#[test]
fn rank_bands_truncate_on_small_networks() {
    let cfg = RandomConfig {
        min_stops: 8,
        max_stops: 8,
        ..RandomConfig::default()
    };
    let inst = fixtures::random_instance(1, &cfg);
    let qs = gen_rank(&inst.timetable, &inst.graph, 20, 5).unwrap();
    assert!(!qs.is_empty());
    assert!(qs.iter().all(|q| q.band == Some(2)));
    assert_eq!(qs, gen_rank(&inst.timetable, &inst.graph, 20, 5).unwrap());
}

#[test]
fn rank_targets_lie_in_their_band() {
    let inst = fixtures::random_instance(9, &RandomConfig::city(120));
    let g = &inst.graph;
    let qs = gen_rank(&inst.timetable, g, 15, 2).unwrap();
    assert!(qs.iter().any(|q| q.band == Some(5)));
    for q in &qs {
        let d = dijkstra(g, &[(q.source, 0)], Direction::Forward, None);
        let dt = d[q.target];
        assert_ne!(dt, INFINITY);
        // rank = number of other reachable stops ordered before the target
        let rank = 1 + (0..g.num_stops())
            .filter(|&v| v != q.source && v != q.target && d[v] != INFINITY && (d[v], v) < (dt, q.target))
            .count();
        let i = q.band.unwrap();
        assert!((1 << i) <= rank && rank < (1 << (i + 1)), "rank {rank} outside band {i}");
    }
}

#[test]
fn bench_is_deterministic_and_reports_percentiles() {
    let net = network(fixtures::random_instance(4, &RandomConfig::city(60)), true);
    let qs = gen_uniform(&net.timetable, 30, 3, SourceWeighting::Uniform).unwrap();
    for algo in [Algo::HlRaptor, Algo::HlCsa, Algo::Raptor, Algo::Csa] {
        let r = run_bench(&net, &qs, algo, 3).unwrap();
        assert!(r.summary.deterministic);
        assert_eq!(r.rows.len(), 30);
        let t = &r.summary.timing;
        assert!(t.median_us <= t.p95_us && t.count == 30);
        let mut out = Vec::new();
        r.write_tsv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap().lines().count(), 31);
    }
}

#[test]
fn suites_agree_with_the_oracle() {
    let net = network(fixtures::random_instance(12, &RandomConfig { transfer_times: true, ..RandomConfig::default() }), true);
    let mut qs = gen_uniform(&net.timetable, 150, 8, SourceWeighting::Uniform).unwrap();
    for q in &mut qs {
        q.departure = 6 * 3600 + q.departure % (4 * 3600);
    }
    for algo in [Algo::HlRaptor, Algo::HlCsa, Algo::HlprRaptor, Algo::HlprCsa] {
        let bad = compare_with_oracle(&net, &qs[..if algo.is_profile() { 40 } else { 150 }], algo, 4).unwrap();
        assert!(bad.is_empty(), "{algo}: {:?}", bad.first());
    }
}

#[test]
fn missing_inputs_are_reported() {
    let inst = fixtures::t1();
    let net = Network::new(inst.timetable, None, None);
    let qs = vec![QuerySpec::new(0, 3, 0)];
    assert!(matches!(run_bench(&net, &qs, Algo::HlCsa, 1), Err(Error::MissingInput { .. })));
    assert!(matches!(run_bench(&net, &qs, Algo::Raptor, 1), Err(Error::MissingInput { .. })));
    assert!("HL-CSA".parse::<Algo>().unwrap() == Algo::HlCsa);
    assert!("dijkstra".parse::<Algo>().is_err());
}

#[test]
fn gain_is_zero_for_identical_algorithms() {
    let net = network(fixtures::random_instance(2, &RandomConfig::default()), true);
    let qs = gen_uniform(&net.timetable, 200, 1, SourceWeighting::Uniform).unwrap();
    for algo in [Algo::Raptor, Algo::HlRaptor, Algo::HlCsa] {
        let g = gain_report(&net, &qs, algo, algo, false).unwrap();
        assert!(g.rows.iter().all(|r| r.gain.is_none_or(|x| x == 0.0)));
        assert_eq!(g.average, 0.0);
    }
}

#[test]
fn t2_gains_from_unrestricted_walking() {
    let net = network(fixtures::t2(), true);
    let q = QuerySpec::new(fixtures::A, fixtures::D, T2_DEPARTURE);
    let g = gain_report(&net, &[q], Algo::Raptor, Algo::HlRaptor, false).unwrap();
    assert_eq!(g.rows[0].restricted, Some(310));
    assert_eq!(g.rows[0].unrestricted, Some(230));
    assert!(g.average > 0.0);
    let g = gain_report(&net, &[q], Algo::Csa, Algo::HlCsa, true).unwrap();
    assert_eq!(g.filtered_out, 1);
}

#[test]
fn restricted_unreachable_queries_are_counted_apart() {
    let net = network(fixtures::t2(), true);
    // B to D: on foot only through Y, which restricted transfers cannot use
    let q = QuerySpec::new(fixtures::B, fixtures::D, 500);
    let g = gain_report(&net, &[q], Algo::Raptor, Algo::HlRaptor, false).unwrap();
    assert_eq!((g.compared, g.restricted_unreachable), (0, 1));
    assert_eq!(g.average, 0.0);
}

#[test]
fn query_files_round_trip() {
    let inst = fixtures::random_instance(4, &RandomConfig::default());
    let mut qs = gen_rank(&inst.timetable, &inst.graph, 3, 2).unwrap();
    qs[0].until = Some(qs[0].departure + 600);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.tsv");
    write_queries(std::fs::File::create(&path).unwrap(), &qs).unwrap();
    assert_eq!(read_queries(&path, inst.timetable.num_stops()).unwrap(), qs);
    assert!(matches!(read_queries(&path, 1), Err(Error::Parse { .. })));
}
