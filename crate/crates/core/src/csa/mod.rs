//! Connection scan. Connections are visited once in departure order; a
//! trip becomes usable once one of its connections can be caught, and stays
//! usable for the rest of the scan.
//!
//! [`csa_eat`] relaxes the footpaths of a closed [`TransferGraph`] after
//! every improving arrival. [`hlcsa_eat`] instead pushes arrivals to the
//! out-hubs of the arrival stop, and pulls the arrival at a departure stop
//! from its in-hubs just before the first possible boarding there.

mod profile;

use crate::hublabel::HubLabeling;
use crate::journey::{Journey, Leg};
use crate::raptor::HubState;
use crate::timetable::{Direction, Timetable};
use crate::walkgraph::TransferGraph;
use crate::{add, StopId, Time, TripId, VertexId, INFINITY};

pub use profile::{hlpr_csa, CsaProfile, HlProfileCsa};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsaOptions {
    /// Skip hub pushes that cannot beat the best known target arrival.
    pub target_pruning: bool,
    /// Stop pulling from in-hubs once their distance alone exceeds the
    /// current arrival at the stop.
    pub local_pruning: bool,
    /// Do not pull from in-hubs for connections of trips already boarded.
    pub skip_boarded: bool,
    pub transfer_times: bool,
}

impl Default for CsaOptions {
    fn default() -> Self {
        CsaOptions {
            target_pruning: true,
            local_pruning: true,
            skip_boarded: true,
            transfer_times: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CsaWork {
    pub connections: usize,
    pub in_hub_entries: usize,
    pub out_hub_entries: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsaResult {
    pub arrival: Option<Time>,
    pub journey: Option<Journey>,
    pub work: CsaWork,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct RideRef {
    trip: TripId,
    board: usize,
    alight: usize,
}

/// How the current arrival at a stop was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StopLabel {
    Unset,
    Source,
    Ride(RideRef),
    /// Walk from `from`, which was reached by `ride` or is the source.
    Walk {
        from: StopId,
        via: Option<VertexId>,
        dist: Time,
        ride: Option<RideRef>,
    },
}

const NOT_BOARDED: usize = usize::MAX;

fn ride_leg(tt: &Timetable, r: RideRef) -> Leg {
    let stops = tt.trip_stops(r.trip);
    let ev = &tt.trips[r.trip].events;
    Leg::Ride {
        trip: r.trip,
        from: stops[r.board],
        to: stops[r.alight],
        board: r.board,
        alight: r.alight,
        dep: ev[r.board].dep,
        arr: ev[r.alight].arr,
    }
}

/// Follows labels back from `last`, which ends at `at`. A stop's label
/// cannot change once a trip has been boarded there, so the chain is
/// stable.
fn unwind(tt: &Timetable, labels: &[StopLabel], mut last: StopLabel, mut at: StopId, depart: Time, arrival: Time) -> Journey {
    let mut legs = Vec::new();
    let guard = labels.len() * 2 + 4;
    while legs.len() <= guard {
        match last {
            StopLabel::Unset => unreachable!("labelled stops lead back to the source"),
            StopLabel::Source => break,
            StopLabel::Ride(r) => {
                let leg = ride_leg(tt, r);
                at = leg.from();
                legs.push(leg);
                last = labels[at];
            }
            StopLabel::Walk { from, via, dist, ride } => {
                let dep = ride.map_or(depart, |r| tt.trips[r.trip].events[r.alight].arr);
                legs.push(Leg::Walk {
                    from,
                    to: at,
                    via,
                    dep,
                    arr: dep + dist,
                });
                match ride {
                    None => break,
                    Some(r) => {
                        at = from;
                        last = StopLabel::Ride(r);
                    }
                }
            }
        }
    }
    assert!(legs.len() <= guard, "journey labels form a cycle");
    legs.reverse();
    Journey { legs, arrival }
}

/// Per-trip boarding position, reset through a touched list.
#[derive(Debug, Clone, Default)]
struct Boarding {
    pos: Vec<usize>,
    touched: Vec<TripId>,
}

impl Boarding {
    fn new(n: usize) -> Self {
        Boarding {
            pos: vec![NOT_BOARDED; n],
            touched: Vec::new(),
        }
    }

    fn reset(&mut self) {
        for t in self.touched.drain(..) {
            self.pos[t] = NOT_BOARDED;
        }
    }

    #[inline]
    fn get(&self, t: TripId) -> Option<usize> {
        let p = self.pos[t];
        (p != NOT_BOARDED).then_some(p)
    }

    #[inline]
    fn set(&mut self, t: TripId, pos: usize) {
        self.pos[t] = pos;
        self.touched.push(t);
    }
}

#[inline]
fn can_board(tt: &Timetable, opts: &CsaOptions, source: StopId, depart: Time, u: StopId, held: Time, dep: Time) -> bool {
    let mtt = if opts.transfer_times { tt.min_transfer(u) } else { 0 };
    (u == source && depart <= dep) || (held != INFINITY && add(held, mtt) <= dep)
}

/// CSA over a restricted, transitively closed transfer graph.
pub struct CsaSearch<'a> {
    tt: &'a Timetable,
    transfers: &'a TransferGraph,
    opts: CsaOptions,
    arr: Vec<Time>,
    labels: Vec<StopLabel>,
    boarding: Boarding,
}

impl<'a> CsaSearch<'a> {
    pub fn new(tt: &'a Timetable, transfers: &'a TransferGraph, opts: CsaOptions) -> Self {
        assert_eq!(tt.direction, Direction::Forward);
        assert_eq!(transfers.num_stops(), tt.num_stops());
        CsaSearch {
            tt,
            transfers,
            opts,
            arr: vec![INFINITY; tt.num_stops()],
            labels: vec![StopLabel::Unset; tt.num_stops()],
            boarding: Boarding::new(tt.trips.len()),
        }
    }

    pub fn query(&mut self, source: StopId, target: StopId, depart: Time) -> CsaResult {
        let tt = self.tt;
        self.arr.fill(INFINITY);
        self.labels.fill(StopLabel::Unset);
        self.boarding.reset();
        self.arr[source] = depart;
        self.labels[source] = StopLabel::Source;
        for &(v, w) in self.transfers.transfers(source) {
            if add(depart, w) < self.arr[v] {
                self.arr[v] = add(depart, w);
                self.labels[v] = StopLabel::Walk {
                    from: source,
                    via: None,
                    dist: w,
                    ride: None,
                };
            }
        }
        let mut work = CsaWork::default();
        for c in &tt.connections[tt.first_connection_after(depart)..] {
            if c.dep_time >= self.arr[target] {
                break;
            }
            work.connections += 1;
            let u = c.dep_stop;
            if self.boarding.get(c.trip).is_none() {
                if !can_board(tt, &self.opts, source, depart, u, self.arr[u], c.dep_time) {
                    continue;
                }
                self.boarding.set(c.trip, c.index);
            }
            let v = c.arr_stop;
            if c.arr_time >= self.arr[v] {
                continue;
            }
            let ride = RideRef {
                trip: c.trip,
                board: self.boarding.get(c.trip).expect("boarded"),
                alight: c.index + 1,
            };
            self.arr[v] = c.arr_time;
            self.labels[v] = StopLabel::Ride(ride);
            for &(x, w) in self.transfers.transfers(v) {
                let a = add(c.arr_time, w);
                if a < self.arr[x] {
                    self.arr[x] = a;
                    self.labels[x] = StopLabel::Walk {
                        from: v,
                        via: None,
                        dist: w,
                        ride: Some(ride),
                    };
                }
            }
        }
        let best = self.arr[target];
        let arrival = (best != INFINITY).then_some(best);
        CsaResult {
            arrival,
            journey: arrival.map(|a| unwind(tt, &self.labels, self.labels[target], target, depart, a)),
            work,
        }
    }
}

pub fn csa_eat(tt: &Timetable, transfers: &TransferGraph, source: StopId, target: StopId, depart: Time, opts: CsaOptions) -> CsaResult {
    CsaSearch::new(tt, transfers, opts).query(source, target, depart)
}

#[derive(Debug, Clone, Copy)]
struct HubFrom {
    stop: StopId,
    dist: Time,
    ride: Option<RideRef>,
}

/// CSA with unrestricted walking through a hub labeling.
pub struct HlCsaSearch<'a> {
    tt: &'a Timetable,
    hl: &'a HubLabeling,
    opts: CsaOptions,
    arr: Vec<Time>,
    labels: Vec<StopLabel>,
    boarding: Boarding,
    hubs: HubState,
    hub_from: Vec<HubFrom>,
    /// `d(h, target)` for the in-hubs of the target, else [`INFINITY`].
    to_target: Vec<Time>,
}

impl<'a> HlCsaSearch<'a> {
    pub fn new(tt: &'a Timetable, hl: &'a HubLabeling, opts: CsaOptions) -> Self {
        assert_eq!(tt.direction, Direction::Forward);
        assert!(hl.num_labeled() >= tt.num_stops(), "hub labeling must cover every stop");
        let nv = hl.num_vertices();
        HlCsaSearch {
            tt,
            hl,
            opts,
            arr: vec![INFINITY; tt.num_stops()],
            labels: vec![StopLabel::Unset; tt.num_stops()],
            boarding: Boarding::new(tt.trips.len()),
            hubs: HubState::new(nv),
            hub_from: vec![
                HubFrom {
                    stop: 0,
                    dist: 0,
                    ride: None
                };
                nv
            ],
            to_target: vec![INFINITY; nv],
        }
    }

    pub fn query(&mut self, source: StopId, target: StopId, depart: Time) -> CsaResult {
        let (tt, hl) = (self.tt, self.hl);
        self.arr.fill(INFINITY);
        self.labels.fill(StopLabel::Unset);
        self.boarding.reset();
        self.hubs.reset();
        for e in hl.in_hubs(target) {
            self.to_target[e.vertex()] = e.dist;
        }

        self.arr[source] = depart;
        self.labels[source] = StopLabel::Source;
        let mut best = if source == target { depart } else { INFINITY };
        let mut best_hub: Option<VertexId> = None;
        for e in hl.out_hubs(source) {
            let h = e.vertex();
            let a = add(depart, e.dist);
            self.hubs.improve(h, a, source);
            self.hub_from[h] = HubFrom {
                stop: source,
                dist: e.dist,
                ride: None,
            };
            if add(a, self.to_target[h]) < best {
                best = add(a, self.to_target[h]);
                best_hub = Some(h);
            }
        }

        let mut work = CsaWork::default();
        for c in &tt.connections[tt.first_connection_after(depart)..] {
            if c.dep_time >= best {
                break;
            }
            work.connections += 1;
            let u = c.dep_stop;
            let boarded = self.boarding.get(c.trip).is_some();
            if !boarded || !self.opts.skip_boarded {
                for e in hl.in_hubs(u) {
                    if self.opts.local_pruning && add(depart, e.dist) >= self.arr[u] {
                        break;
                    }
                    work.in_hub_entries += 1;
                    let h = e.vertex();
                    let a = add(self.hubs.get(h), e.dist);
                    if a < self.arr[u] {
                        self.arr[u] = a;
                        let from = self.hub_from[h];
                        self.labels[u] = StopLabel::Walk {
                            from: from.stop,
                            via: Some(h),
                            dist: from.dist + e.dist,
                            ride: from.ride,
                        };
                    }
                }
            }
            if !boarded {
                if !can_board(tt, &self.opts, source, depart, u, self.arr[u], c.dep_time) {
                    continue;
                }
                self.boarding.set(c.trip, c.index);
            }
            let v = c.arr_stop;
            if c.arr_time >= self.arr[v] || (self.opts.target_pruning && c.arr_time >= best) {
                continue;
            }
            let ride = RideRef {
                trip: c.trip,
                board: self.boarding.get(c.trip).expect("boarded"),
                alight: c.index + 1,
            };
            self.arr[v] = c.arr_time;
            self.labels[v] = StopLabel::Ride(ride);
            for e in hl.out_hubs(v) {
                let a = add(c.arr_time, e.dist);
                if self.opts.target_pruning && a >= best {
                    break;
                }
                work.out_hub_entries += 1;
                let h = e.vertex();
                if self.hubs.improve(h, a, v) {
                    self.hub_from[h] = HubFrom {
                        stop: v,
                        dist: e.dist,
                        ride: Some(ride),
                    };
                    if add(a, self.to_target[h]) < best {
                        best = add(a, self.to_target[h]);
                        best_hub = Some(h);
                    }
                }
            }
        }
        for e in hl.in_hubs(target) {
            self.to_target[e.vertex()] = INFINITY;
        }

        let arrival = (best != INFINITY).then_some(best);
        let journey = arrival.map(|a| {
            let last = match best_hub {
                None => StopLabel::Source,
                Some(h) => {
                    let from = self.hub_from[h];
                    let dist = from.dist + (a - self.hubs.get(h));
                    if from.stop == target && dist == 0 {
                        from.ride.map_or(StopLabel::Source, StopLabel::Ride)
                    } else {
                        StopLabel::Walk {
                            from: from.stop,
                            via: Some(h),
                            dist,
                            ride: from.ride,
                        }
                    }
                }
            };
            unwind(tt, &self.labels, last, target, depart, a)
        });
        CsaResult { arrival, journey, work }
    }
}

pub fn hlcsa_eat(tt: &Timetable, hl: &HubLabeling, source: StopId, target: StopId, depart: Time, opts: CsaOptions) -> CsaResult {
    HlCsaSearch::new(tt, hl, opts).query(source, target, depart)
}
