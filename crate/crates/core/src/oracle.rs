//! Brute-force references. They share no search code with the algorithms
//! and are only meant for small instances.

use crate::error::{Error, Result};
use crate::journey::{Profile, ProfileEntry};
use crate::raptor::{Bag, Label};
use crate::timetable::{Direction, Timetable};
use crate::walkgraph::{dijkstra, TransferGraph, WalkGraph};
use crate::{add, StopId, Time, INFINITY};

/// Walking times between every pair of stops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkTable {
    n: usize,
    dist: Vec<Time>,
}

impl WalkTable {
    /// Shortest paths through the whole walking graph.
    pub fn from_graph(g: &WalkGraph) -> Self {
        let n = g.num_stops();
        let mut dist = Vec::with_capacity(n * n);
        for s in 0..n {
            let d = dijkstra(g, &[(s, 0)], crate::walkgraph::Direction::Forward, None);
            dist.extend_from_slice(&d[..n]);
        }
        WalkTable { n, dist }
    }

    /// Only the footpaths listed in a closed transfer graph.
    pub fn from_transfers(tg: &TransferGraph) -> Self {
        let n = tg.num_stops();
        let mut dist = vec![INFINITY; n * n];
        for u in 0..n {
            dist[u * n + u] = 0;
            for &(v, w) in tg.transfers(u) {
                dist[u * n + v] = dist[u * n + v].min(w);
            }
        }
        WalkTable { n, dist }
    }

    pub fn num_stops(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: StopId, v: StopId) -> Time {
        self.dist[u * self.n + v]
    }

    pub fn walk(&self, u: StopId, v: StopId) -> Option<Time> {
        let d = self.get(u, v);
        (d != INFINITY).then_some(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub max_trips: usize,
    pub transfer_times: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_trips: crate::DEFAULT_MAX_ROUNDS,
            transfer_times: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleEat {
    /// Best arrival over all journeys, walking alone included.
    pub arrival: Option<Time>,
    /// Best arrival over journeys riding at least one trip.
    pub transit_arrival: Option<Time>,
}

fn some(t: Time) -> Option<Time> {
    (t != INFINITY).then_some(t)
}

/// Stops above which the all-pairs walking table gets expensive.
pub const LARGE_INSTANCE: usize = 2000;

/// Earliest arrival by reachability in the time-expanded graph. Its nodes
/// are the departure and arrival events of every trip plus one platform
/// node per departure event; platform nodes of a stop are chained by time.
/// Riding, staying seated, waiting, and walking from an arrival event to
/// the first catchable departure at every stop are its edges.
pub fn oracle_eat(tt: &Timetable, walk: &WalkTable, source: StopId, target: StopId, depart: Time, opts: OracleOptions) -> OracleEat {
    assert_eq!(tt.direction, Direction::Forward);
    if tt.num_stops() > LARGE_INSTANCE {
        eprintln!("warning: oracle on {} stops may be slow", tt.num_stops());
    }
    let n = tt.num_stops();
    // event (trip, pos) has id offset[trip] + pos
    let mut offset = Vec::with_capacity(tt.trips.len() + 1);
    offset.push(0);
    for trip in &tt.trips {
        offset.push(offset.last().unwrap() + trip.events.len());
    }
    let events = *offset.last().unwrap();
    let mut platform: Vec<Vec<(Time, usize)>> = vec![Vec::new(); n];
    for (id, trip) in tt.trips.iter().enumerate() {
        let stops = tt.trip_stops(id);
        for (i, ev) in trip.events.iter().enumerate().take(trip.events.len() - 1) {
            platform[stops[i]].push((ev.dep, offset[id] + i));
        }
    }
    for p in &mut platform {
        p.sort_unstable();
    }
    let trip_of = |e: usize| offset.partition_point(|&o| o <= e) - 1;

    // Platform nodes are (stop, index); reaching one also reaches every
    // later one at the stop, so only the earliest reached index matters.
    let mut first_platform = vec![usize::MAX; n];
    let mut aboard = vec![false; events];
    let mut stack: Vec<usize> = Vec::new();
    let reach = |v: StopId, ready: Time, first: &mut Vec<usize>, stack: &mut Vec<usize>| {
        let k = platform[v].partition_point(|e| e.0 < ready);
        if k < first[v] {
            for &(_, ev) in &platform[v][k..first[v].min(platform[v].len())] {
                stack.push(ev);
            }
            first[v] = k;
        }
    };
    let slack = |v: StopId| if opts.transfer_times { tt.min_transfer(v) } else { 0 };
    for v in 0..n {
        let d = walk.get(source, v);
        if d == INFINITY {
            continue;
        }
        let ready = if v == source { depart } else { add(add(depart, d), slack(v)) };
        reach(v, ready, &mut first_platform, &mut stack);
    }
    let mut best_transit = INFINITY;
    while let Some(e) = stack.pop() {
        if aboard[e] {
            continue;
        }
        let id = trip_of(e);
        let stops = tt.trip_stops(id);
        let trip = &tt.trips[id];
        // ride on from the boarding event; each later arrival event is reached
        for j in e - offset[id] + 1..trip.events.len() {
            let arr = trip.events[j].arr;
            let u = stops[j];
            for v in 0..n {
                let d = walk.get(u, v);
                if d == INFINITY {
                    continue;
                }
                if v == target {
                    best_transit = best_transit.min(add(arr, d));
                }
                reach(v, add(add(arr, d), slack(v)), &mut first_platform, &mut stack);
            }
            if aboard[offset[id] + j] {
                break;
            }
            aboard[offset[id] + j] = true;
        }
        aboard[e] = true;
    }
    let walk_only = if source == target { depart } else { add(depart, walk.get(source, target)) };
    OracleEat {
        arrival: some(walk_only.min(best_transit)),
        transit_arrival: some(best_transit),
    }
}

/// Best arrival using at most `k` trips, for `k = 0..=opts.max_trips`, by
/// stages: stage `k` rides every trip that can be caught from the stage
/// `k - 1` positions, then walks from wherever a trip was left.
pub fn oracle_rounds(tt: &Timetable, walk: &WalkTable, source: StopId, target: StopId, depart: Time, opts: OracleOptions) -> Vec<Time> {
    assert_eq!(tt.direction, Direction::Forward);
    let n = tt.num_stops();
    let mut ready: Vec<Time> = (0..n).map(|v| add(depart, walk.get(source, v))).collect();
    ready[source] = depart;
    let mut by_trips = vec![ready[target]];
    for _ in 1..=opts.max_trips {
        let mut alight = vec![INFINITY; n];
        for (id, trip) in tt.trips.iter().enumerate() {
            let stops = tt.trip_stops(id);
            let mut aboard = false;
            for (i, ev) in trip.events.iter().enumerate() {
                let p = stops[i];
                if aboard {
                    alight[p] = alight[p].min(ev.arr);
                }
                let slack = if p == source || !opts.transfer_times { 0 } else { tt.min_transfer(p) };
                if ready[p] != INFINITY && add(ready[p], slack) <= ev.dep {
                    aboard = true;
                }
            }
        }
        let mut next = ready.clone();
        for u in 0..n {
            if alight[u] == INFINITY {
                continue;
            }
            for (v, slot) in next.iter_mut().enumerate() {
                let d = walk.get(u, v);
                if d != INFINITY {
                    *slot = (*slot).min(add(alight[u], d));
                }
            }
        }
        let stable = next == ready;
        ready = next;
        by_trips.push(ready[target]);
        if stable {
            break;
        }
    }
    while by_trips.len() <= opts.max_trips {
        by_trips.push(*by_trips.last().expect("stage zero"));
    }
    by_trips
}

/// Full Pareto set over (arrival, trips, walking time) by exhaustive label
/// correction: from every label, walk to every stop or ride every catchable
/// trip to every later stop. Fails once more than `budget` labels are
/// expanded.
pub fn oracle_pareto(
    tt: &Timetable,
    walk: &WalkTable,
    source: StopId,
    target: StopId,
    depart: Time,
    opts: OracleOptions,
    budget: usize,
) -> Result<Vec<Label>> {
    assert_eq!(tt.direction, Direction::Forward);
    let n = tt.num_stops();
    let mut bags: Vec<Bag> = vec![Bag::new(); n];
    let start = Label {
        arrival: depart,
        trips: 0,
        walk: 0,
    };
    bags[source].insert(start);
    let mut queue = vec![(source, start)];
    let mut expanded = 0;
    while let Some((p, l)) = queue.pop() {
        if !bags[p].labels().any(|b| b == l) {
            continue;
        }
        expanded += 1;
        if expanded > budget {
            return Err(Error::SearchBudget(budget));
        }
        let mut push = |v: StopId, c: Label, queue: &mut Vec<(StopId, Label)>| {
            if bags[v].insert(c) {
                queue.push((v, c));
            }
        };
        for v in 0..n {
            let d = walk.get(p, v);
            if v != p && d != INFINITY {
                let c = Label {
                    arrival: add(l.arrival, d),
                    trips: l.trips,
                    walk: l.walk + d,
                };
                push(v, c, &mut queue);
            }
        }
        if l.trips == opts.max_trips {
            continue;
        }
        let is_start = p == source && l == start;
        let slack = if is_start || !opts.transfer_times { 0 } else { tt.min_transfer(p) };
        let ready = add(l.arrival, slack);
        for (id, trip) in tt.trips.iter().enumerate() {
            let stops = tt.trip_stops(id);
            for i in 0..stops.len() {
                if stops[i] != p || trip.events[i].dep < ready {
                    continue;
                }
                for j in i + 1..stops.len() {
                    let c = Label {
                        arrival: trip.events[j].arr,
                        trips: l.trips + 1,
                        walk: l.walk,
                    };
                    push(stops[j], c, &mut queue);
                }
            }
        }
    }
    let mut out: Vec<Label> = bags[target].labels().collect();
    out.sort();
    Ok(out)
}

/// [`oracle_profile`] evaluated only where the answer can change: the
/// transit-only arrival is constant between the latest departures from the
/// source that still catch some departure event, so evaluating `from`, `to`
/// and those times gives the same profile far faster.
pub fn oracle_profile_critical(
    tt: &Timetable,
    walk: &WalkTable,
    source: StopId,
    target: StopId,
    from: Time,
    to: Time,
    opts: OracleOptions,
) -> Profile {
    let mut times = vec![from, to];
    for (id, trip) in tt.trips.iter().enumerate() {
        for (i, ev) in trip.events.iter().enumerate() {
            let p = tt.trip_stops(id)[i];
            let d = walk.get(source, p);
            if d == INFINITY {
                continue;
            }
            let mtt = if opts.transfer_times { tt.min_transfer(p) } else { 0 };
            for lead in [d, add(d, mtt)] {
                if let Some(x) = ev.dep.checked_sub(lead) {
                    if from <= x && x <= to {
                        times.push(x);
                    }
                }
            }
        }
    }
    times.sort_unstable();
    times.dedup();
    profile_at(tt, walk, source, target, from, to, opts, times)
}

/// Profile over `[from, to]` as the Pareto filter of transit-only earliest
/// arrivals for every integer second of the interval.
pub fn oracle_profile(
    tt: &Timetable,
    walk: &WalkTable,
    source: StopId,
    target: StopId,
    from: Time,
    to: Time,
    opts: OracleOptions,
) -> Profile {
    profile_at(tt, walk, source, target, from, to, opts, (from..=to).collect())
}

#[allow(clippy::too_many_arguments)]
fn profile_at(
    tt: &Timetable,
    walk: &WalkTable,
    source: StopId,
    target: StopId,
    from: Time,
    to: Time,
    opts: OracleOptions,
    times: Vec<Time>,
) -> Profile {
    let candidates = times.into_iter().filter_map(|x| {
        oracle_eat(tt, walk, source, target, x, opts)
            .transit_arrival
            .map(|arr| ProfileEntry { dep: x, arr })
    });
    Profile::from_candidates(candidates, from, to, walk.walk(source, target))
}
