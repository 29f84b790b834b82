use transit_hl::fixtures::{self, RandomConfig, A, B, C, D, T2_DEPARTURE};
use transit_hl::hlraptor::{hlmc_raptor, hlpr_raptor, hlraptor_eat};
use transit_hl::hublabel::{build_labeling, VertexOrder};
use transit_hl::oracle::{oracle_eat, oracle_pareto, oracle_profile, oracle_profile_critical, oracle_rounds, OracleOptions, WalkTable};
use transit_hl::raptor::{mc_raptor, raptor_eat, Label, RaptorOptions, RoundSearch};
use transit_hl::walkgraph::{build_transfer_graph, radius_to_seconds};
use transit_hl::{Profile, ProfileEntry, INFINITY};

fn label(arrival: u32, trips: usize, walk: u32) -> Label {
    Label { arrival, trips, walk }
}

#[test]
fn t1_restricted_needs_two_rounds() {
    let inst = fixtures::t1();
    let tg = build_transfer_graph(&inst.graph, Some(radius_to_seconds(75.0)));
    let r = raptor_eat(&inst.timetable, &tg, A, D, 0, RaptorOptions::default());
    assert_eq!(r.arrival, Some(400));
    assert_eq!(&r.round_arrivals[..3], &[INFINITY, INFINITY, 400]);
    let j = r.journey.unwrap();
    assert_eq!(j.num_trips(), 2);
    assert_eq!(j.walk_time(), 30);
}

#[test]
fn t1_hub_labeled_needs_one_round() {
    let inst = fixtures::t1();
    let hl = build_labeling(&inst.graph, VertexOrder::Degree);
    let r = hlraptor_eat(&inst.timetable, &hl, A, D, 0, RaptorOptions::default());
    assert_eq!(r.arrival, Some(400));
    assert_eq!(&r.round_arrivals[..2], &[INFINITY, 400]);
    let walk = WalkTable::from_graph(&inst.graph);
    r.journey.unwrap().check(&inst.timetable, A, D, 0, |u, v| walk.walk(u, v)).unwrap();
}

#[test]
fn t1_pareto_sets() {
    let inst = fixtures::t1();
    let hl = build_labeling(&inst.graph, VertexOrder::Degree);
    let r = hlmc_raptor(&inst.timetable, &hl, A, D, 0, RaptorOptions::default());
    assert_eq!(r.labels, vec![label(400, 1, 120), label(400, 2, 30)]);
    assert_eq!(r.bag_at_round(1), vec![label(400, 1, 120)]);
    let tg = build_transfer_graph(&inst.graph, Some(radius_to_seconds(75.0)));
    let r = mc_raptor(&inst.timetable, &tg, A, D, 0, RaptorOptions::default());
    assert_eq!(r.labels, vec![label(400, 2, 30)]);
}

#[test]
fn t2_unrestricted_walk_arrives_earlier() {
    let inst = fixtures::t2();
    let hl = build_labeling(&inst.graph, VertexOrder::Degree);
    let tg = build_transfer_graph(&inst.graph, Some(radius_to_seconds(75.0)));
    let fast = hlraptor_eat(&inst.timetable, &hl, A, D, T2_DEPARTURE, RaptorOptions::default());
    let slow = raptor_eat(&inst.timetable, &tg, A, D, T2_DEPARTURE, RaptorOptions::default());
    assert_eq!(fast.arrival, Some(320));
    assert_eq!(slow.arrival, Some(400));
}

#[test]
fn t1_profile() {
    let inst = fixtures::t1_with_repeat();
    let hl = build_labeling(&inst.graph, VertexOrder::Degree);
    let rev = inst.timetable.reversed();
    let r = hlpr_raptor(&inst.timetable, &rev, &hl, &hl.reversed(), A, D, 0, 7200, RaptorOptions::default());
    let e = |dep, arr| ProfileEntry { dep, arr };
    assert_eq!(r.profile.entries, vec![e(180, 400), e(3780, 4000)]);
    assert_eq!(r.journeys.len(), 2);
}

#[test]
fn source_equals_target_and_unreachable() {
    let inst = fixtures::t1();
    let hl = build_labeling(&inst.graph, VertexOrder::Degree);
    let r = hlraptor_eat(&inst.timetable, &hl, B, B, 50, RaptorOptions::default());
    assert_eq!(r.arrival, Some(50));
    assert!(r.journey.unwrap().legs.is_empty());
    let r = hlraptor_eat(&inst.timetable, &hl, D, A, 0, RaptorOptions::default());
    assert_eq!(r.arrival, None);
    let r = hlraptor_eat(&inst.timetable, &hl, A, D, 401, RaptorOptions::default());
    assert_eq!(r.arrival, None);
    let _ = C;
}

fn configs() -> Vec<RandomConfig> {
    vec![
        RandomConfig::default(),
        RandomConfig { transfer_times: true, ..RandomConfig::default() },
        RandomConfig { transfer_times: true, ..RandomConfig::tiny() },
    ]
}

#[test]
fn random_earliest_arrival_matches_oracle() {
    for (ci, cfg) in configs().iter().enumerate() {
        for seed in 0..40u64 {
            let inst = fixtures::random_instance(seed * 7 + ci as u64, cfg);
            let tt = &inst.timetable;
            let n = tt.num_stops();
            let hl = build_labeling(&inst.graph, VertexOrder::Degree).restricted(n);
            let tg = build_transfer_graph(&inst.graph, Some(radius_to_seconds(150.0)));
            let full = WalkTable::from_graph(&inst.graph);
            let restricted = WalkTable::from_transfers(&tg);
            for q in 0..6 {
                let s = (seed as usize * 3 + q) % n;
                let t = (seed as usize * 5 + q * 7 + 1) % n;
                let dep = cfg.start + (q as u32) * 1500;
                for transfer_times in [true, false] {
                    for target_pruning in [true, false] {
                        let opts = RaptorOptions { max_rounds: 8, target_pruning, transfer_times };
                        let oo = OracleOptions { max_trips: 8, transfer_times };
                        let o = oracle_eat(tt, &full, s, t, dep, oo);
                        let rounds = oracle_rounds(tt, &full, s, t, dep, oo);
                        let h = hlraptor_eat(tt, &hl, s, t, dep, opts);
                        assert_eq!(h.round_arrivals, rounds, "hl seed {seed} cfg {ci} {s}->{t}");
                        assert_eq!(h.arrival, o.arrival);
                        if let Some(j) = h.journey.filter(|_| transfer_times) {
                            j.check(tt, s, t, dep, |u, v| full.walk(u, v)).unwrap();
                            assert_eq!(j.arrival, h.arrival.unwrap());
                        }
                        let ht = RoundSearch::with_hubs(tt, &hl, opts).query_transit(s, t, dep);
                        assert_eq!(ht.arrival, o.transit_arrival, "transit seed {seed} cfg {ci}");
                        let rounds = oracle_rounds(tt, &restricted, s, t, dep, oo);
                        let r = raptor_eat(tt, &tg, s, t, dep, opts);
                        assert_eq!(r.round_arrivals, rounds, "restricted seed {seed} cfg {ci}");
                        if let Some(j) = r.journey.filter(|_| transfer_times) {
                            j.check(tt, s, t, dep, |u, v| restricted.walk(u, v)).unwrap();
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn random_pareto_sets_match_oracle() {
    let cfg = RandomConfig { transfer_times: true, ..RandomConfig::tiny() };
    for seed in 0..60u64 {
        let inst = fixtures::random_instance(seed + 1000, &cfg);
        let tt = &inst.timetable;
        let n = tt.num_stops();
        let hl = build_labeling(&inst.graph, VertexOrder::Degree).restricted(n);
        let full = WalkTable::from_graph(&inst.graph);
        let opts = RaptorOptions { max_rounds: 3, ..RaptorOptions::default() };
        for q in 0..4 {
            let s = (seed as usize + q) % n;
            let t = (seed as usize * 3 + q + 1) % n;
            let dep = cfg.start + q as u32 * 600;
            let o = oracle_pareto(tt, &full, s, t, dep, OracleOptions { max_trips: 3, transfer_times: true }, 1_000_000).unwrap();
            let m = hlmc_raptor(tt, &hl, s, t, dep, opts);
            assert_eq!(m.labels, o, "seed {seed} {s}->{t}");
            for (l, j) in m.labels.iter().zip(&m.journeys) {
                j.check(tt, s, t, dep, |u, v| full.walk(u, v)).unwrap();
                assert_eq!((j.arrival, j.num_trips(), j.walk_time()), (l.arrival, l.trips, l.walk));
            }
        }
    }
}

#[test]
fn random_profiles_match_oracle() {
    let cfg = RandomConfig { transfer_times: true, ..RandomConfig::tiny() };
    for seed in 0..30u64 {
        let inst = fixtures::random_instance(seed + 2000, &cfg);
        let tt = &inst.timetable;
        let rev = tt.reversed();
        let n = tt.num_stops();
        let hl = build_labeling(&inst.graph, VertexOrder::Degree).restricted(n);
        let rhl = hl.reversed();
        let full = WalkTable::from_graph(&inst.graph);
        for q in 0..3 {
            let s = (seed as usize + q) % n;
            let t = (seed as usize * 3 + q + 1) % n;
            let (from, to) = (cfg.start, cfg.start + 7200);
            let oo = OracleOptions::default();
            let o = oracle_profile_critical(tt, &full, s, t, from, to, oo);
            let r = hlpr_raptor(tt, &rev, &hl, &rhl, s, t, from, to, RaptorOptions::default());
            assert_eq!(r.profile, o, "seed {seed} {s}->{t}");
            assert!(r.profile.is_pareto());
            if seed < 4 {
                assert_eq!(oracle_profile(tt, &full, s, t, from, to, oo), o);
            }
        }
    }
    let _ = Profile::default();
}
