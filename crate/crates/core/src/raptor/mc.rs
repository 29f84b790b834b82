//! Multi-criteria rounds over arrival time, number of trips and walking
//! time. Labels keep their round, and a label is discarded when an
//! equal-or-better one from the same or an earlier round exists.

use serde::{Deserialize, Serialize};

use super::{Footpaths, Ride, RaptorOptions};
use crate::hublabel::HubLabeling;
use crate::journey::{Journey, Leg};
use crate::timetable::{Direction, Timetable};
use crate::walkgraph::TransferGraph;
use crate::{add, StopId, Time, VertexId};

pub type McOptions = RaptorOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label {
    pub arrival: Time,
    pub trips: usize,
    pub walk: Time,
}

impl Label {
    /// Weak dominance in all three criteria.
    #[inline]
    pub fn dominates(&self, o: &Label) -> bool {
        self.arrival <= o.arrival && self.trips <= o.trips && self.walk <= o.walk
    }
}

/// Set of mutually non-dominated labels, each carrying a payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bag<P = ()> {
    entries: Vec<(Label, P)>,
}

impl<P> Default for Bag<P> {
    fn default() -> Self {
        Bag { entries: Vec::new() }
    }
}

impl<P: Copy> Bag<P> {
    pub fn new() -> Self {
        Self::default()
    }

    /// True when some label in the bag is at least as good as `l`.
    #[inline]
    pub fn dominates(&self, l: &Label) -> bool {
        self.entries.iter().any(|(e, _)| e.dominates(l))
    }

    /// Adds `l` unless dominated. Payloads of labels it displaces are
    /// passed to `removed`.
    pub fn insert_with(&mut self, l: Label, payload: P, mut removed: impl FnMut(P)) -> bool {
        if self.dominates(&l) {
            return false;
        }
        self.entries.retain(|(e, p)| {
            let keep = !l.dominates(e);
            if !keep {
                removed(*p);
            }
            keep
        });
        self.entries.push((l, payload));
        true
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Label, P)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }
}

impl Bag<()> {
    pub fn insert(&mut self, l: Label) -> bool {
        self.insert_with(l, (), |_| {})
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McResult {
    /// Pareto set at the target, sorted by arrival, then trips.
    pub labels: Vec<Label>,
    /// One journey per label, in the same order.
    pub journeys: Vec<Journey>,
}

impl McResult {
    /// Pareto set over (arrival, walking time) among journeys with at most
    /// `k` trips.
    pub fn bag_at_round(&self, k: usize) -> Vec<Label> {
        let within: Vec<Label> = self.labels.iter().copied().filter(|l| l.trips <= k).collect();
        let mut out: Vec<Label> = within
            .iter()
            .copied()
            .filter(|l| {
                !within
                    .iter()
                    .any(|o| o.arrival <= l.arrival && o.walk <= l.walk && (o.arrival, o.walk) != (l.arrival, l.walk))
            })
            .collect();
        out.sort();
        out.dedup_by_key(|l| (l.arrival, l.walk));
        out
    }
}

#[derive(Debug, Clone, Copy)]
enum Origin {
    Source,
    Ride { prev: usize, ride: Ride },
    Walk { prev: usize, via: Option<VertexId>, dist: Time },
}

#[derive(Debug, Clone, Copy)]
struct Node {
    stop: StopId,
    label: Label,
    origin: Origin,
}

#[derive(Debug, Clone, Copy)]
struct HubPayload {
    node: usize,
    dist: Time,
}

#[derive(Debug, Clone, Copy)]
struct Boarded {
    trip_index: usize,
    walk: Time,
    prev: usize,
    board: usize,
}

/// Reusable multi-criteria search over one forward timetable.
pub struct McSearch<'a> {
    tt: &'a Timetable,
    footpaths: Footpaths<'a>,
    opts: RaptorOptions,
    nodes: Vec<Node>,
    alive: Vec<bool>,
    bags: Vec<Bag<usize>>,
    hub_bags: Vec<Bag<HubPayload>>,
    hub_touched: Vec<VertexId>,
    /// Labels created in the previous round, per stop.
    fresh: Vec<Vec<usize>>,
    fresh_stops: Vec<StopId>,
    created: Vec<usize>,
    route_start: Vec<usize>,
    route_queue: Vec<usize>,
    source: StopId,
    target: StopId,
}

impl<'a> McSearch<'a> {
    fn new(tt: &'a Timetable, footpaths: Footpaths<'a>, opts: RaptorOptions) -> Self {
        assert_eq!(tt.direction, Direction::Forward, "multi-criteria search runs forward");
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
        McSearch {
            tt,
            footpaths,
            opts,
            nodes: Vec::new(),
            alive: Vec::new(),
            bags: vec![Bag::new(); n],
            hub_bags: vec![Bag::new(); hub_vertices],
            hub_touched: Vec::new(),
            fresh: vec![Vec::new(); n],
            fresh_stops: Vec::new(),
            created: Vec::new(),
            route_start: vec![usize::MAX; tt.routes.len()],
            route_queue: Vec::new(),
            source: 0,
            target: 0,
        }
    }

    pub fn with_transfers(tt: &'a Timetable, transfers: &'a TransferGraph, opts: RaptorOptions) -> Self {
        Self::new(tt, Footpaths::Closed(transfers), opts)
    }

    pub fn with_hubs(tt: &'a Timetable, hl: &'a HubLabeling, opts: RaptorOptions) -> Self {
        Self::new(tt, Footpaths::Hubs(hl), opts)
    }

    fn reset(&mut self) {
        self.nodes.clear();
        self.alive.clear();
        self.bags.iter_mut().for_each(Bag::clear);
        for h in self.hub_touched.drain(..) {
            self.hub_bags[h].clear();
        }
        for &s in &self.fresh_stops {
            self.fresh[s].clear();
        }
        self.fresh_stops.clear();
        self.created.clear();
    }

    pub fn query(&mut self, source: StopId, target: StopId, depart: Time) -> McResult {
        self.reset();
        self.source = source;
        self.target = target;

        let root = self
            .insert(source, Label { arrival: depart, trips: 0, walk: 0 }, Origin::Source)
            .expect("empty bag accepts the source");
        self.relax_footpaths(0, vec![root]);
        self.promote_created();

        for k in 1..=self.opts.max_rounds {
            if self.fresh_stops.is_empty() {
                break;
            }
            let ridden = self.scan_routes(k);
            self.relax_footpaths(k, ridden);
            self.promote_created();
        }
        self.result()
    }

    fn promote_created(&mut self) {
        for &s in &self.fresh_stops {
            self.fresh[s].clear();
        }
        self.fresh_stops.clear();
        for &id in &self.created {
            if !self.alive[id] {
                continue;
            }
            let s = self.nodes[id].stop;
            if self.fresh[s].is_empty() {
                self.fresh_stops.push(s);
            }
            self.fresh[s].push(id);
        }
        self.created.clear();
    }

    #[inline]
    fn target_dominates(&self, l: &Label) -> bool {
        self.opts.target_pruning && self.bags[self.target].dominates(l)
    }

    fn insert(&mut self, p: StopId, label: Label, origin: Origin) -> Option<usize> {
        if self.target_dominates(&label) || self.bags[p].dominates(&label) {
            return None;
        }
        let id = self.nodes.len();
        self.nodes.push(Node { stop: p, label, origin });
        self.alive.push(true);
        let alive = &mut self.alive;
        self.bags[p].insert_with(label, id, |old| alive[old] = false);
        self.created.push(id);
        Some(id)
    }

    #[inline]
    fn ready(&self, node: &Node) -> Time {
        if matches!(node.origin, Origin::Source) || !self.opts.transfer_times {
            node.label.arrival
        } else {
            add(node.label.arrival, self.tt.min_transfer(node.stop))
        }
    }

    fn scan_routes(&mut self, k: usize) -> Vec<usize> {
        let tt = self.tt;
        for &s in &self.fresh_stops {
            for &(r, pos) in &tt.stop_routes[s] {
                if self.route_start[r] == usize::MAX {
                    self.route_queue.push(r);
                }
                self.route_start[r] = self.route_start[r].min(pos);
            }
        }
        let queue = std::mem::take(&mut self.route_queue);
        let mut bag: Vec<Boarded> = Vec::new();
        for &r in &queue {
            let start = std::mem::replace(&mut self.route_start[r], usize::MAX);
            let route = &tt.routes[r];
            bag.clear();
            for pos in start..route.stops.len() {
                let p = route.stops[pos];
                for i in 0..bag.len() {
                    let b = bag[i];
                    let trip = route.trips[b.trip_index];
                    let arr = tt.trips[trip].events[pos].arr;
                    let label = Label { arrival: arr, trips: k, walk: b.walk };
                    let ride = Ride { trip, board: b.board, alight: pos };
                    self.insert(p, label, Origin::Ride { prev: b.prev, ride });
                }
                if pos + 1 == route.stops.len() {
                    continue;
                }
                for i in 0..self.fresh[p].len() {
                    let id = self.fresh[p][i];
                    let node = self.nodes[id];
                    let ready = self.ready(&node);
                    let first = route.trips.partition_point(|&t| tt.trips[t].events[pos].dep < ready);
                    if first == route.trips.len() {
                        continue;
                    }
                    let cand = Boarded {
                        trip_index: first,
                        walk: node.label.walk,
                        prev: id,
                        board: pos,
                    };
                    if bag.iter().any(|b| b.trip_index <= cand.trip_index && b.walk <= cand.walk) {
                        continue;
                    }
                    bag.retain(|b| !(cand.trip_index <= b.trip_index && cand.walk <= b.walk));
                    bag.push(cand);
                }
            }
        }
        self.route_queue = queue;
        self.route_queue.clear();
        self.created.clone()
    }

    fn relax_footpaths(&mut self, k: usize, sources: Vec<usize>) {
        match self.footpaths {
            Footpaths::Closed(tg) => {
                for id in sources {
                    if !self.alive[id] {
                        continue;
                    }
                    let node = self.nodes[id];
                    for &(v, w) in tg.transfers(node.stop) {
                        let label = Label {
                            arrival: add(node.label.arrival, w),
                            trips: k,
                            walk: node.label.walk + w,
                        };
                        if self.target_dominates(&label) {
                            break;
                        }
                        self.insert(v, label, Origin::Walk { prev: id, via: None, dist: w });
                    }
                }
            }
            Footpaths::Hubs(hl) => {
                let mut at_hubs: Vec<(VertexId, Label, HubPayload)> = Vec::new();
                for id in sources {
                    if !self.alive[id] {
                        continue;
                    }
                    let node = self.nodes[id];
                    for e in hl.out_hubs(node.stop) {
                        let label = Label {
                            arrival: add(node.label.arrival, e.dist),
                            trips: k,
                            walk: node.label.walk + e.dist,
                        };
                        if self.target_dominates(&label) {
                            break;
                        }
                        let h = e.vertex();
                        let payload = HubPayload { node: id, dist: e.dist };
                        let was_empty = self.hub_bags[h].is_empty();
                        if self.hub_bags[h].insert_with(label, payload, |_| {}) {
                            if was_empty {
                                self.hub_touched.push(h);
                            }
                            at_hubs.push((h, label, payload));
                        }
                    }
                }
                let n = self.tt.num_stops();
                for (h, label, payload) in at_hubs {
                    for e in hl.in_inverse(h) {
                        let to_stop = Label {
                            arrival: add(label.arrival, e.dist),
                            trips: k,
                            walk: label.walk + e.dist,
                        };
                        if self.target_dominates(&to_stop) {
                            break;
                        }
                        let v = e.vertex();
                        if v >= n {
                            continue;
                        }
                        let origin = Origin::Walk {
                            prev: payload.node,
                            via: Some(h),
                            dist: payload.dist + e.dist,
                        };
                        self.insert(v, to_stop, origin);
                    }
                }
            }
        }
    }

    fn result(&self) -> McResult {
        let mut found: Vec<(Label, usize)> = self.bags[self.target].iter().copied().collect();
        found.sort();
        McResult {
            labels: found.iter().map(|f| f.0).collect(),
            journeys: found.iter().map(|f| self.journey(f.1)).collect(),
        }
    }

    fn journey(&self, mut id: usize) -> Journey {
        let arrival = self.nodes[id].label.arrival;
        let mut legs = Vec::new();
        loop {
            let node = self.nodes[id];
            match node.origin {
                Origin::Source => break,
                Origin::Ride { prev, ride } => {
                    let stops = self.tt.trip_stops(ride.trip);
                    let ev = &self.tt.trips[ride.trip].events;
                    legs.push(Leg::Ride {
                        trip: ride.trip,
                        from: stops[ride.board],
                        to: stops[ride.alight],
                        board: ride.board,
                        alight: ride.alight,
                        dep: ev[ride.board].dep,
                        arr: ev[ride.alight].arr,
                    });
                    id = prev;
                }
                Origin::Walk { prev, via, dist } => {
                    let from = self.nodes[prev];
                    legs.push(Leg::Walk {
                        from: from.stop,
                        to: node.stop,
                        via,
                        dep: from.label.arrival,
                        arr: from.label.arrival + dist,
                    });
                    id = prev;
                }
            }
        }
        legs.reverse();
        Journey { legs, arrival }
    }
}

/// McRAPTOR over a restricted, transitively closed transfer graph.
pub fn mc_raptor(
    tt: &Timetable,
    transfers: &TransferGraph,
    source: StopId,
    target: StopId,
    depart: Time,
    opts: McOptions,
) -> McResult {
    McSearch::with_transfers(tt, transfers, opts).query(source, target, depart)
}
