//! Hand-checked fixtures and seeded random instances shared by tests,
//! benchmarks and the CLI.
//!
//! T1 has four stops A, B, C, D and one footpath node X. Walking: A–X and
//! X–C take 60 s each, B–C takes 30 s. Trip `t1` runs A→B departing 100 and
//! arriving 200, trip `t2` runs C→D departing 300 and arriving 400.
//!
//! T2 adds footpath node Y with B–Y and Y–D of 60 s each, a 120 s walk that
//! exceeds the 75 m transfer radius. Leaving A at [`T2_DEPARTURE`], riding
//! `t1` and walking on reaches D at 320, against 360 on foot only and 400
//! with the restricted transfers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::timetable::{Stop, Timetable, TimetableBuilder};
use crate::walkgraph::WalkGraph;
use crate::{StopId, Time, VertexId};

pub const A: StopId = 0;
pub const B: StopId = 1;
pub const C: StopId = 2;
pub const D: StopId = 3;
pub const X: VertexId = 4;
pub const Y: VertexId = 5;

/// Departure from A for the T2 query.
pub const T2_DEPARTURE: Time = 90;

#[derive(Debug, Clone)]
pub struct Instance {
    pub timetable: Timetable,
    pub graph: WalkGraph,
}

fn bidir(edges: &[(VertexId, VertexId, Time)]) -> Vec<(VertexId, VertexId, Time)> {
    edges.iter().flat_map(|&(u, v, w)| [(u, v, w), (v, u, w)]).collect()
}

fn t1_builder(repeat: bool) -> TimetableBuilder {
    let mut b = TimetableBuilder::new();
    for name in ["A", "B", "C", "D"] {
        b.add_stop(Stop::new(name));
    }
    b.add_trip("t1", &[(A, 100, 100), (B, 200, 200)]).unwrap();
    b.add_trip("t2", &[(C, 300, 300), (D, 400, 400)]).unwrap();
    if repeat {
        b.add_trip("t1+1h", &[(A, 3700, 3700), (B, 3800, 3800)]).unwrap();
        b.add_trip("t2+1h", &[(C, 3900, 3900), (D, 4000, 4000)]).unwrap();
    }
    b
}

fn t1_graph() -> WalkGraph {
    WalkGraph::from_edges(5, 4, &bidir(&[(A, X, 60), (X, C, 60), (B, C, 30)]))
}

pub fn t1() -> Instance {
    Instance {
        timetable: t1_builder(false).build(),
        graph: t1_graph(),
    }
}

/// T1 with both trips repeated one hour later.
pub fn t1_with_repeat() -> Instance {
    Instance {
        timetable: t1_builder(true).build(),
        graph: t1_graph(),
    }
}

pub fn t2() -> Instance {
    Instance {
        timetable: t1_builder(false).build(),
        graph: WalkGraph::from_edges(
            6,
            4,
            &bidir(&[(A, X, 60), (X, C, 60), (B, C, 30), (B, Y, 60), (Y, D, 60)]),
        ),
    }
}

/// Random directed graph: `m` random edges (mostly paired with their
/// reverse) with weights in 1..=300.
pub fn random_graph(seed: u64, n: usize, num_stops: usize, m: usize) -> WalkGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(2 * m);
    for _ in 0..m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        let w = rng.gen_range(1..=300);
        edges.push((u, v, w));
        if rng.gen_bool(0.7) {
            edges.push((v, u, w));
        }
    }
    WalkGraph::from_edges(n, num_stops.min(n), &edges)
}

#[derive(Debug, Clone)]
pub struct RandomConfig {
    pub min_stops: usize,
    pub max_stops: usize,
    /// Footpath nodes per stop.
    pub extra_vertices_per_stop: usize,
    pub max_lines: usize,
    pub max_trips_per_line: usize,
    pub max_line_len: usize,
    /// First departures are drawn from `start..start + span`.
    pub start: Time,
    pub span: Time,
    pub transfer_times: bool,
    /// Side of the square area in meters.
    pub area_m: f64,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            min_stops: 4,
            max_stops: 20,
            extra_vertices_per_stop: 2,
            max_lines: 8,
            max_trips_per_line: 6,
            max_line_len: 6,
            start: 6 * 3600,
            span: 3 * 3600,
            transfer_times: false,
            area_m: 2500.0,
        }
    }
}

impl RandomConfig {
    pub fn tiny() -> Self {
        RandomConfig {
            min_stops: 3,
            max_stops: 8,
            extra_vertices_per_stop: 1,
            max_lines: 4,
            max_trips_per_line: 3,
            max_line_len: 4,
            span: 3600,
            ..Default::default()
        }
    }

    /// Desk-scale city for benchmarks.
    pub fn city(stops: usize) -> Self {
        RandomConfig {
            min_stops: stops,
            max_stops: stops,
            extra_vertices_per_stop: 6,
            max_lines: stops / 4,
            max_trips_per_line: 40,
            max_line_len: 15,
            start: 5 * 3600,
            span: 16 * 3600,
            transfer_times: true,
            area_m: 400.0 * (stops as f64).sqrt(),
        }
    }
}

/// Seeded random instance: vertices scattered over a square, each linked to
/// a few nearest neighbours at walking speed with some one-way and missing
/// links, plus random lines whose trips may overtake each other.
pub fn random_instance(seed: u64, cfg: &RandomConfig) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let num_stops = rng.gen_range(cfg.min_stops..=cfg.max_stops);
    let n = num_stops * (1 + cfg.extra_vertices_per_stop);
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen_range(0.0..cfg.area_m), rng.gen_range(0.0..cfg.area_m)))
        .collect();

    let mut edges = Vec::new();
    for u in 0..n {
        let mut near: Vec<(f64, usize)> = (0..n)
            .filter(|&v| v != u)
            .map(|v| ((pts[u].0 - pts[v].0).hypot(pts[u].1 - pts[v].1), v))
            .collect();
        near.sort_by(|a, b| a.0.total_cmp(&b.0));
        let k = rng.gen_range(1..=3);
        for &(d, v) in near.iter().take(k) {
            if rng.gen_bool(0.05) {
                continue;
            }
            let w = crate::walkgraph::walk_seconds(d);
            edges.push((u, v, w));
            if rng.gen_bool(0.85) {
                edges.push((v, u, w));
            }
        }
    }
    let graph = WalkGraph::from_edges(n, num_stops, &edges);

    let mut b = TimetableBuilder::new();
    for i in 0..num_stops {
        let mut stop = Stop::new(format!("S{i}"));
        if cfg.transfer_times {
            stop.min_transfer_time = rng.gen_range(0..=3) * 30;
        }
        b.add_stop(stop);
    }
    let stops: Vec<StopId> = (0..num_stops).collect();
    let lines = rng.gen_range(1..=cfg.max_lines.max(1));
    let mut trip_no = 0;
    for _ in 0..lines {
        let len = rng.gen_range(2..=cfg.max_line_len.clamp(2, num_stops));
        let seq: Vec<StopId> = stops.choose_multiple(&mut rng, len).copied().collect();
        let base_hops: Vec<Time> = (1..len).map(|_| rng.gen_range(60..=900)).collect();
        for _ in 0..rng.gen_range(1..=cfg.max_trips_per_line.max(1)) {
            let mut t = cfg.start + rng.gen_range(0..cfg.span.max(1));
            let mut calls = Vec::with_capacity(len);
            for (i, &s) in seq.iter().enumerate() {
                let dwell = if i == 0 || i + 1 == len { 0 } else { rng.gen_range(0..=60) };
                calls.push((s, t, t + dwell));
                t += dwell;
                if i + 1 < len {
                    // occasional slow or express runs create overtaking
                    let hop = base_hops[i];
                    t += match rng.gen_range(0..10) {
                        0 => hop * 2,
                        1 => (hop / 3).max(1),
                        _ => hop,
                    };
                }
            }
            b.add_trip(format!("T{trip_no}"), &calls).expect("generated trip is valid");
            trip_no += 1;
        }
    }
    Instance {
        timetable: b.build(),
        graph,
    }
}
