//! Round-based search. Each round first scans the routes serving stops
//! improved in the previous round, then relaxes foot transfers from the
//! stops a trip just improved.
//!
//! The same engine serves the restricted baseline, where transfers come
//! from an explicit [`TransferGraph`], and the hub-labeled variant in
//! [`crate::hlraptor`], where they take two hops through hubs.

mod mc;

use crate::hublabel::HubLabeling;
use crate::journey::{Journey, Leg};
use crate::timetable::{Direction, Timetable};
use crate::walkgraph::TransferGraph;
use crate::{add, StopId, Time, TripId, VertexId, DEFAULT_MAX_ROUNDS, INFINITY};

pub use mc::{mc_raptor, Bag, Label, McOptions, McResult, McSearch};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RaptorOptions {
    pub max_rounds: usize,
    /// Drop arrivals that cannot beat the best known arrival at the target.
    pub target_pruning: bool,
    /// Honour per-stop minimum transfer times.
    pub transfer_times: bool,
}

impl Default for RaptorOptions {
    fn default() -> Self {
        RaptorOptions {
            max_rounds: DEFAULT_MAX_ROUNDS,
            target_pruning: true,
            transfer_times: true,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Footpaths<'a> {
    Closed(&'a TransferGraph),
    Hubs(&'a HubLabeling),
}

/// Work done by one round.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoundWork {
    pub routes_scanned: usize,
    /// Stops improved by a trip in this round, the sources of its walks.
    pub improved_stops: usize,
    pub improved_hubs: usize,
    /// Hub-list entries actually read.
    pub hub_entries_scanned: usize,
    /// Sum of `|H+(u)|` over improved stops and `|H-⁻¹(h)|` over improved hubs.
    pub hub_entries_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EatResult {
    /// Best arrival at the target, `None` when unreachable.
    pub arrival: Option<Time>,
    /// Best target arrival using at most `k` trips, for `k = 0..=max_rounds`;
    /// [`INFINITY`] where none exists.
    pub round_arrivals: Vec<Time>,
    pub journey: Option<Journey>,
    pub work: Vec<RoundWork>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Ride {
    trip: TripId,
    board: usize,
    alight: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Parent {
    Source,
    Ride(Ride),
    Walk {
        from: StopId,
        via: Option<VertexId>,
        dist: Time,
    },
}

/// Arrival times at hubs, reset lazily between queries.
#[derive(Debug, Clone, Default)]
pub(crate) struct HubState {
    arr: Vec<Time>,
    from: Vec<StopId>,
    stamp: Vec<u32>,
    epoch: u32,
    marked: Vec<bool>,
    improved: Vec<VertexId>,
}

impl HubState {
    pub(crate) fn new(n: usize) -> Self {
        HubState {
            arr: vec![INFINITY; n],
            from: vec![0; n],
            stamp: vec![0; n],
            epoch: 1,
            marked: vec![false; n],
            improved: Vec::new(),
        }
    }

    pub(crate) fn reset(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        for h in self.improved.drain(..) {
            self.marked[h] = false;
        }
    }

    #[inline]
    pub(crate) fn get(&self, h: VertexId) -> Time {
        if self.stamp[h] == self.epoch {
            self.arr[h]
        } else {
            INFINITY
        }
    }

    #[inline]
    pub(crate) fn from(&self, h: VertexId) -> StopId {
        self.from[h]
    }

    /// Lowers the arrival at `h`; true on strict improvement.
    #[inline]
    pub(crate) fn improve(&mut self, h: VertexId, t: Time, from: StopId) -> bool {
        if t < self.get(h) {
            self.stamp[h] = self.epoch;
            self.arr[h] = t;
            self.from[h] = from;
            if !self.marked[h] {
                self.marked[h] = true;
                self.improved.push(h);
            }
            true
        } else {
            false
        }
    }

    pub(crate) fn take_improved(&mut self) -> Vec<VertexId> {
        let list = std::mem::take(&mut self.improved);
        for &h in &list {
            self.marked[h] = false;
        }
        list
    }
}

/// Reusable state of earliest-arrival round searches over one timetable.
pub struct RoundSearch<'a> {
    tt: &'a Timetable,
    footpaths: Footpaths<'a>,
    opts: RaptorOptions,
    prev: Vec<Time>,
    cur: Vec<Time>,
    /// Round-zero values in transit-only searches. They allow boarding but
    /// must not block trip arrivals, which alone may end at the target.
    base: Vec<Time>,
    by_trip: Vec<Time>,
    marked: Vec<bool>,
    marked_list: Vec<StopId>,
    walk_sources: Vec<StopId>,
    route_start: Vec<usize>,
    route_queue: Vec<usize>,
    /// Per stop, `(round, value, parent)` for each round in which it improved.
    history: Vec<Vec<(usize, Time, Parent)>>,
    /// Per stop, `(round, ride)` for each round in which a trip improved it.
    ride_history: Vec<Vec<(usize, Ride)>>,
    hubs: HubState,
    source: StopId,
    target: StopId,
    depart: Time,
    transit_only: bool,
    target_best: Time,
    target_parent: Option<(usize, Parent)>,
}

impl<'a> RoundSearch<'a> {
    pub(crate) fn new(tt: &'a Timetable, footpaths: Footpaths<'a>, opts: RaptorOptions) -> Self {
        let n = tt.num_stops();
        let hub_vertices = match footpaths {
            Footpaths::Hubs(hl) => {
                assert!(hl.num_labeled() >= n, "hub labeling must cover every stop");
                hl.num_vertices()
            }
            Footpaths::Closed(tg) => {
                assert_eq!(tg.num_stops(), n, "transfer graph must cover every stop");
                0
            }
        };
        RoundSearch {
            tt,
            footpaths,
            opts,
            prev: vec![INFINITY; n],
            cur: vec![INFINITY; n],
            base: vec![INFINITY; n],
            by_trip: vec![INFINITY; n],
            marked: vec![false; n],
            marked_list: Vec::new(),
            walk_sources: Vec::new(),
            route_start: vec![usize::MAX; tt.routes.len()],
            route_queue: Vec::new(),
            history: vec![Vec::new(); n],
            ride_history: vec![Vec::new(); n],
            hubs: HubState::new(hub_vertices),
            source: 0,
            target: 0,
            depart: 0,
            transit_only: false,
            target_best: INFINITY,
            target_parent: None,
        }
    }

    /// Restricted-transfer search.
    pub fn with_transfers(tt: &'a Timetable, transfers: &'a TransferGraph, opts: RaptorOptions) -> Self {
        Self::new(tt, Footpaths::Closed(transfers), opts)
    }

    /// Hub-labeled search. `hl` must label the walking graph of `tt`, and be
    /// reversed as well when `tt` is a backward timetable.
    pub fn with_hubs(tt: &'a Timetable, hl: &'a HubLabeling, opts: RaptorOptions) -> Self {
        Self::new(tt, Footpaths::Hubs(hl), opts)
    }

    pub fn timetable(&self) -> &Timetable {
        self.tt
    }

    pub fn options(&self) -> RaptorOptions {
        self.opts
    }

    /// Earliest arrival at `target` leaving `source` at `depart`.
    pub fn query(&mut self, source: StopId, target: StopId, depart: Time) -> EatResult {
        self.run(source, target, depart, false)
    }

    /// Like [`RoundSearch::query`], but only journeys riding at least one
    /// trip count as arrivals at the target.
    pub fn query_transit(&mut self, source: StopId, target: StopId, depart: Time) -> EatResult {
        self.run(source, target, depart, true)
    }

    fn reset(&mut self) {
        self.prev.fill(INFINITY);
        self.cur.fill(INFINITY);
        self.base.fill(INFINITY);
        self.by_trip.fill(INFINITY);
        self.history.iter_mut().for_each(Vec::clear);
        self.ride_history.iter_mut().for_each(Vec::clear);
        for &s in &self.marked_list {
            self.marked[s] = false;
        }
        self.marked_list.clear();
        self.walk_sources.clear();
        self.hubs.reset();
        self.target_best = INFINITY;
        self.target_parent = None;
    }

    fn run(&mut self, source: StopId, target: StopId, depart: Time, transit_only: bool) -> EatResult {
        self.reset();
        self.source = source;
        self.target = target;
        self.depart = depart;
        self.transit_only = transit_only;

        self.cur[source] = depart;
        self.by_trip[source] = depart;
        self.set_parent(source, 0, depart, Parent::Source);
        self.mark(source);
        if source == target && !transit_only {
            self.target_best = depart;
            self.target_parent = Some((0, Parent::Source));
        }
        self.walk_sources.push(source);

        let mut work = vec![RoundWork::default()];
        self.relax_footpaths(0, &mut work[0]);
        let mut round_arrivals = vec![self.target_best];
        if transit_only {
            for &s in &self.marked_list {
                self.base[s] = std::mem::replace(&mut self.cur[s], INFINITY);
            }
            self.hubs.reset();
        }
        self.end_round();

        for k in 1..=self.opts.max_rounds {
            if self.marked_list.is_empty() {
                break;
            }
            let mut w = RoundWork::default();
            self.scan_routes(k, &mut w);
            self.relax_footpaths(k, &mut w);
            round_arrivals.push(self.target_best);
            work.push(w);
            self.end_round();
        }
        while round_arrivals.len() <= self.opts.max_rounds {
            round_arrivals.push(self.target_best);
        }

        let arrival = (self.target_best != INFINITY).then_some(self.target_best);
        EatResult {
            arrival,
            round_arrivals,
            journey: arrival.map(|_| self.journey()),
            work,
        }
    }

    fn end_round(&mut self) {
        for &s in &self.marked_list {
            self.prev[s] = self.cur[s];
        }
        for &s in &self.walk_sources {
            self.by_trip[s] = INFINITY;
        }
        self.walk_sources.clear();
    }

    #[inline]
    fn mark(&mut self, s: StopId) {
        if !self.marked[s] {
            self.marked[s] = true;
            self.marked_list.push(s);
        }
    }

    fn set_parent(&mut self, s: StopId, round: usize, value: Time, p: Parent) {
        let h = &mut self.history[s];
        match h.last_mut() {
            Some(last) if last.0 == round => *last = (round, value, p),
            _ => h.push((round, value, p)),
        }
    }

    #[inline]
    fn min_transfer(&self, s: StopId) -> Time {
        if self.opts.transfer_times {
            self.tt.min_transfer(s)
        } else {
            0
        }
    }

    /// Earliest departure a traveller holding `value` at `s` can catch.
    #[inline]
    fn ready(&self, s: StopId, value: Time) -> Time {
        match self.tt.direction {
            Direction::Forward if s != self.source => add(value, self.min_transfer(s)),
            _ => value,
        }
    }

    /// Value stored at `s` after alighting there at `arr`. Backward searches
    /// charge the transfer time here, since the boarding they undo happens
    /// at `s` in the forward journey.
    #[inline]
    fn alight_value(&self, s: StopId, arr: Time) -> Time {
        match self.tt.direction {
            Direction::Forward => arr,
            Direction::Backward => add(arr, self.min_transfer(s)),
        }
    }

    #[inline]
    fn pruned(&self, value: Time) -> bool {
        self.opts.target_pruning && value >= self.target_best
    }

    fn offer_target(&mut self, round: usize, arrival: Time, parent: Parent) {
        if (round > 0 || !self.transit_only) && arrival < self.target_best {
            self.target_best = arrival;
            self.target_parent = Some((round, parent));
        }
    }

    fn scan_routes(&mut self, k: usize, work: &mut RoundWork) {
        let tt = self.tt;
        for i in 0..self.marked_list.len() {
            let s = self.marked_list[i];
            for &(r, pos) in &tt.stop_routes[s] {
                if self.route_start[r] == usize::MAX {
                    self.route_queue.push(r);
                }
                self.route_start[r] = self.route_start[r].min(pos);
            }
            self.marked[s] = false;
        }
        self.marked_list.clear();

        let queue = std::mem::take(&mut self.route_queue);
        for &r in &queue {
            let start = std::mem::replace(&mut self.route_start[r], usize::MAX);
            work.routes_scanned += 1;
            let route = &tt.routes[r];
            let mut trip: Option<usize> = None;
            let mut board = start;
            for pos in start..route.stops.len() {
                let p = route.stops[pos];
                if let Some(ti) = trip {
                    let t = route.trips[ti];
                    let arr = tt.trips[t].events[pos].arr;
                    let value = self.alight_value(p, arr);
                    let ride = Ride { trip: t, board, alight: pos };
                    let accept = value < self.cur[p] && !self.pruned(value);
                    if p == self.target {
                        self.offer_target(k, arr, Parent::Ride(ride));
                    }
                    if accept {
                        self.cur[p] = value;
                        if self.by_trip[p] == INFINITY {
                            self.walk_sources.push(p);
                        }
                        self.by_trip[p] = value;
                        self.set_parent(p, k, value, Parent::Ride(ride));
                        let rh = &mut self.ride_history[p];
                        match rh.last_mut() {
                            Some(last) if last.0 == k => last.1 = ride,
                            _ => rh.push((k, ride)),
                        }
                        self.mark(p);
                    }
                }
                let held = self.prev[p].min(self.base[p]);
                if held == INFINITY || pos + 1 == route.stops.len() {
                    continue;
                }
                let ready = self.ready(p, held);
                let limit = trip.unwrap_or(route.trips.len());
                let first = route.trips[..limit].partition_point(|&t| tt.trips[t].events[pos].dep < ready);
                if first < limit {
                    trip = Some(first);
                    board = pos;
                }
            }
        }
        self.route_queue = queue;
        self.route_queue.clear();
    }

    fn relax_footpaths(&mut self, k: usize, work: &mut RoundWork) {
        let sources = std::mem::take(&mut self.walk_sources);
        work.improved_stops = sources.len();
        match self.footpaths {
            Footpaths::Closed(tg) => {
                for &u in &sources {
                    let base = self.by_trip[u];
                    for &(v, w) in tg.transfers(u) {
                        let value = add(base, w);
                        if self.pruned(value) {
                            break;
                        }
                        let parent = Parent::Walk { from: u, via: None, dist: w };
                        self.improve_by_walk(k, v, value, parent);
                    }
                }
            }
            Footpaths::Hubs(hl) => {
                let n = self.tt.num_stops();
                for &u in &sources {
                    let base = self.by_trip[u];
                    let hubs = hl.out_hubs(u);
                    work.hub_entries_bound += hubs.len();
                    for e in hubs {
                        work.hub_entries_scanned += 1;
                        let value = add(base, e.dist);
                        if self.pruned(value) {
                            break;
                        }
                        self.hubs.improve(e.vertex(), value, u);
                    }
                }
                let improved = self.hubs.take_improved();
                work.improved_hubs = improved.len();
                for &h in &improved {
                    let at_hub = self.hubs.get(h);
                    let from = self.hubs.from(h);
                    let lead = at_hub - self.by_trip[from];
                    let list = hl.in_inverse(h);
                    work.hub_entries_bound += list.len();
                    for e in list {
                        work.hub_entries_scanned += 1;
                        let value = add(at_hub, e.dist);
                        if self.pruned(value) {
                            break;
                        }
                        let v = e.vertex();
                        if v >= n {
                            continue;
                        }
                        let parent = Parent::Walk {
                            from,
                            via: Some(h),
                            dist: lead + e.dist,
                        };
                        self.improve_by_walk(k, v, value, parent);
                    }
                }
            }
        }
        self.walk_sources = sources;
    }

    #[inline]
    fn improve_by_walk(&mut self, k: usize, v: StopId, value: Time, parent: Parent) {
        if v == self.target {
            self.offer_target(k, value, parent);
        }
        if value < self.cur[v] {
            self.cur[v] = value;
            self.set_parent(v, k, value, parent);
            self.mark(v);
        }
    }

    fn ride_leg(&self, ride: Ride) -> Leg {
        let stops = self.tt.trip_stops(ride.trip);
        let ev = &self.tt.trips[ride.trip].events;
        Leg::Ride {
            trip: ride.trip,
            from: stops[ride.board],
            to: stops[ride.alight],
            board: ride.board,
            alight: ride.alight,
            dep: ev[ride.board].dep,
            arr: ev[ride.alight].arr,
        }
    }

    fn ride_at(&self, s: StopId, round: usize) -> Ride {
        self.ride_history[s]
            .iter()
            .rev()
            .find(|e| e.0 == round)
            .map(|e| e.1)
            .expect("walks start from trip arrivals of their round")
    }

    /// Latest label at `s` from rounds up to `round` that catches `dep`.
    fn label_at(&self, s: StopId, round: usize, dep: Time) -> (usize, Parent) {
        self.history[s]
            .iter()
            .rev()
            .find(|e| e.0 <= round && self.ready(s, e.1) <= dep)
            .map(|e| (e.0, e.2))
            .expect("boarding stop was reached earlier")
    }

    /// Legs of the best journey to the target in travel order. In backward
    /// searches the legs are expressed in the reversed timetable.
    fn journey(&self) -> Journey {
        let (mut round, mut parent) = self.target_parent.expect("target reached");
        let mut at = self.target;
        let mut legs = Vec::new();
        loop {
            match parent {
                Parent::Source => break,
                Parent::Ride(ride) => {
                    let leg = self.ride_leg(ride);
                    at = leg.from();
                    let Leg::Ride { dep, .. } = leg else { unreachable!() };
                    legs.push(leg);
                    (round, parent) = self.label_at(at, round - 1, dep);
                }
                Parent::Walk { from, via, dist } => {
                    let dep = if round == 0 {
                        self.depart
                    } else {
                        let ride = self.ride_at(from, round);
                        let arr = self.tt.trips[ride.trip].events[ride.alight].arr;
                        self.alight_value(from, arr)
                    };
                    legs.push(Leg::Walk {
                        from,
                        to: at,
                        via,
                        dep,
                        arr: dep + dist,
                    });
                    if round == 0 {
                        break;
                    }
                    at = from;
                    parent = Parent::Ride(self.ride_at(from, round));
                }
            }
        }
        legs.reverse();
        Journey {
            legs,
            arrival: self.target_best,
        }
    }
}

/// RAPTOR over a restricted, transitively closed transfer graph.
pub fn raptor_eat(
    tt: &Timetable,
    transfers: &TransferGraph,
    source: StopId,
    target: StopId,
    depart: Time,
    opts: RaptorOptions,
) -> EatResult {
    RoundSearch::with_transfers(tt, transfers, opts).query(source, target, depart)
}
