//! Query results: journeys made of rides and walks, and profiles of
//! Pareto-optimal (departure, arrival) pairs.

use serde::{Deserialize, Serialize};

use crate::timetable::{Direction, Timetable};
use crate::{StopId, Time, TripId, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Leg {
    Ride {
        trip: TripId,
        from: StopId,
        to: StopId,
        /// Positions of boarding and alighting in the trip's stop sequence.
        board: usize,
        alight: usize,
        dep: Time,
        arr: Time,
    },
    /// A footpath between two stops. `via` names the hub joining the two
    /// hops when the walk came from a hub labeling.
    Walk {
        from: StopId,
        to: StopId,
        via: Option<VertexId>,
        dep: Time,
        arr: Time,
    },
}

impl Leg {
    pub fn from(&self) -> StopId {
        match *self {
            Leg::Ride { from, .. } | Leg::Walk { from, .. } => from,
        }
    }

    pub fn to(&self) -> StopId {
        match *self {
            Leg::Ride { to, .. } | Leg::Walk { to, .. } => to,
        }
    }

    pub fn arr(&self) -> Time {
        match *self {
            Leg::Ride { arr, .. } | Leg::Walk { arr, .. } => arr,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Journey {
    pub legs: Vec<Leg>,
    pub arrival: Time,
}

impl Journey {
    pub fn num_trips(&self) -> usize {
        self.legs.iter().filter(|l| matches!(l, Leg::Ride { .. })).count()
    }

    pub fn walk_time(&self) -> Time {
        self.legs
            .iter()
            .map(|l| match *l {
                Leg::Walk { dep, arr, .. } => arr - dep,
                Leg::Ride { .. } => 0,
            })
            .sum()
    }

    /// Checks that the legs form a feasible forward journey from `source`
    /// at `departure` to `target`: legs chain, rides match the timetable,
    /// walks take `walk(from, to)` and boarding respects minimum transfer
    /// times everywhere but at the origin.
    pub fn check(
        &self,
        tt: &Timetable,
        source: StopId,
        target: StopId,
        departure: Time,
        walk: impl Fn(StopId, StopId) -> Option<Time>,
    ) -> Result<(), String> {
        assert_eq!(tt.direction, Direction::Forward);
        let mut at = source;
        let mut time = departure;
        let mut at_origin = true;
        for (i, leg) in self.legs.iter().enumerate() {
            if leg.from() != at {
                return Err(format!("leg {i} starts at {} instead of {at}", leg.from()));
            }
            match *leg {
                Leg::Ride {
                    trip,
                    to,
                    board,
                    alight,
                    dep,
                    arr,
                    ..
                } => {
                    let ev = &tt.trips[trip].events;
                    let stops = tt.trip_stops(trip);
                    if board >= alight || alight >= ev.len() || stops[board] != at || stops[alight] != to {
                        return Err(format!("leg {i} does not match trip {trip}"));
                    }
                    if ev[board].dep != dep || ev[alight].arr != arr {
                        return Err(format!("leg {i} times differ from trip {trip}"));
                    }
                    let ready = if at_origin { time } else { time + tt.min_transfer(at) };
                    if ready > dep {
                        return Err(format!("leg {i} boards at {dep} but is ready at {ready}"));
                    }
                    time = arr;
                }
                Leg::Walk { to, dep, arr, .. } => {
                    let d = walk(at, to).ok_or_else(|| format!("leg {i} walks an unknown path"))?;
                    if dep < time || arr != dep + d {
                        return Err(format!("leg {i} walk times are inconsistent"));
                    }
                    time = arr;
                }
            }
            at = leg.to();
            at_origin = false;
        }
        if at != target {
            return Err(format!("journey ends at {at} instead of {target}"));
        }
        if time != self.arrival {
            return Err(format!("journey arrives at {time}, reported {}", self.arrival));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub dep: Time,
    pub arr: Time,
}

/// Pareto-optimal (departure, arrival) pairs over a departure interval,
/// restricted to journeys that ride at least one trip. The walk-only option
/// is not a timed entry; it is reported once as `walk`, and entries that
/// walking alone matches or beats are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Profile {
    /// Sorted by departure; both departures and arrivals strictly increase.
    pub entries: Vec<ProfileEntry>,
    /// Walking time from source to target when they are connected on foot.
    pub walk: Option<Time>,
}

impl Profile {
    /// Builds the profile over `[from, to]` from candidate pairs, where each
    /// candidate is a journey leaving the source at `dep` and arriving at
    /// `arr`. Candidates departing after `to` still count for a departure at
    /// `to`, as a traveller may wait.
    pub fn from_candidates(candidates: impl IntoIterator<Item = ProfileEntry>, from: Time, to: Time, walk: Option<Time>) -> Profile {
        if from > to {
            return Profile { entries: Vec::new(), walk };
        }
        let mut all: Vec<ProfileEntry> = candidates.into_iter().filter(|e| e.dep >= from).collect();
        all.sort_by(|a, b| b.dep.cmp(&a.dep).then(a.arr.cmp(&b.arr)));
        let mut frontier = Vec::new();
        let mut best = crate::INFINITY;
        for e in all {
            if e.arr < best {
                best = e.arr;
                frontier.push(e);
            }
        }
        frontier.reverse();

        let mut entries: Vec<ProfileEntry> = frontier.iter().copied().take_while(|e| e.dep < to).collect();
        if let Some(e) = frontier.iter().find(|e| e.dep >= to) {
            entries.push(ProfileEntry { dep: to, arr: e.arr });
        }
        if let Some(w) = walk {
            entries.retain(|e| e.arr < e.dep.saturating_add(w));
        }
        Profile { entries, walk }
    }

    pub fn is_pareto(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].dep < w[1].dep && w[0].arr < w[1].arr)
    }
}
