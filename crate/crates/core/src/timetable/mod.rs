//! Timetable model: stops, trips, non-overtaking routes and the connection
//! array sorted by departure.

mod gtfs;
mod native;

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, RouteId, StopId, Time, TripId};

pub use gtfs::{load_gtfs, GtfsFeed};
pub use native::{load_native, save_native};

/// Reflected timetables map `t` to `REVERSE_HORIZON - t`.
pub const REVERSE_HORIZON: Time = 1 << 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stop {
    pub external_id: String,
    pub lat: Option<f64>,
    pub lon: Option<f64>,
    pub min_transfer_time: Time,
}

impl Stop {
    pub fn new(external_id: impl Into<String>) -> Self {
        Stop {
            external_id: external_id.into(),
            lat: None,
            lon: None,
            min_transfer_time: 0,
        }
    }

    pub fn with_coords(mut self, lat: f64, lon: f64) -> Self {
        self.lat = Some(lat);
        self.lon = Some(lon);
        self
    }

    pub fn with_min_transfer(mut self, secs: Time) -> Self {
        self.min_transfer_time = secs;
        self
    }
}

/// Arrival and departure of a trip at one stop of its sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub arr: Time,
    pub dep: Time,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trip {
    pub external_id: String,
    pub route: RouteId,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub stops: Vec<StopId>,
    /// Ordered so that every timetable column is non-decreasing.
    pub trips: Vec<TripId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connection {
    pub dep_stop: StopId,
    pub arr_stop: StopId,
    pub dep_time: Time,
    pub arr_time: Time,
    pub trip: TripId,
    pub index: usize,
}

/// Orientation of a timetable. Backward timetables are reflected copies used
/// for latest-departure searches; the minimum transfer time then applies on
/// alighting rather than on boarding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    GtfsSubset,
    Native,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Timetable {
    pub stops: Vec<Stop>,
    pub routes: Vec<Route>,
    pub trips: Vec<Trip>,
    /// Sorted by departure time, then trip, then index in trip.
    pub connections: Vec<Connection>,
    /// For every stop, the routes serving it with the position of the stop.
    pub stop_routes: Vec<Vec<(RouteId, usize)>>,
    pub direction: Direction,
}

pub fn load_timetable(path: &Path, format: Format) -> Result<Timetable> {
    match format {
        Format::GtfsSubset => Ok(load_gtfs(path)?.timetable),
        Format::Native => load_native(path),
    }
}

impl Timetable {
    pub fn num_stops(&self) -> usize {
        self.stops.len()
    }

    pub fn trip_stops(&self, trip: TripId) -> &[StopId] {
        &self.routes[self.trips[trip].route].stops
    }

    #[inline]
    pub fn min_transfer(&self, stop: StopId) -> Time {
        self.stops[stop].min_transfer_time
    }

    pub fn num_events(&self) -> usize {
        self.trips.iter().map(|t| t.events.len()).sum()
    }

    /// Latest event time in the timetable, 0 when empty.
    pub fn horizon(&self) -> Time {
        self.trips
            .iter()
            .flat_map(|t| t.events.iter().map(|e| e.dep.max(e.arr)))
            .max()
            .unwrap_or(0)
    }

    /// Index of the first connection departing at or after `time`.
    pub fn first_connection_after(&self, time: Time) -> usize {
        self.connections.partition_point(|c| c.dep_time < time)
    }

    /// Number of trips departing from `stop`.
    pub fn trips_serving(&self, stop: StopId) -> usize {
        self.stop_routes[stop]
            .iter()
            .map(|&(r, pos)| {
                if pos + 1 < self.routes[r].stops.len() {
                    self.routes[r].trips.len()
                } else {
                    0
                }
            })
            .sum()
    }

    /// Reflected copy: stop sequences reversed, time `t` mapped to
    /// `REVERSE_HORIZON - t`, arrivals and departures swapped. Trip and route
    /// ids are preserved.
    pub fn reversed(&self) -> Timetable {
        let trips: Vec<Trip> = self
            .trips
            .iter()
            .map(|t| Trip {
                external_id: t.external_id.clone(),
                route: t.route,
                events: t
                    .events
                    .iter()
                    .rev()
                    .map(|e| Event {
                        arr: reflect(e.dep),
                        dep: reflect(e.arr),
                    })
                    .collect(),
            })
            .collect();
        let routes: Vec<Route> = self
            .routes
            .iter()
            .map(|r| Route {
                stops: r.stops.iter().rev().copied().collect(),
                trips: r.trips.iter().rev().copied().collect(),
            })
            .collect();
        let direction = match self.direction {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        };
        assemble(self.stops.clone(), routes, trips, direction)
    }
}

/// Maps a time into the reflected timeline; infinity stays infinity.
#[inline]
pub fn reflect(t: Time) -> Time {
    if t == crate::INFINITY {
        t
    } else {
        debug_assert!(t <= REVERSE_HORIZON);
        REVERSE_HORIZON - t
    }
}

/// Accumulates stops and trips, then normalizes them into a [`Timetable`].
#[derive(Debug, Default)]
pub struct TimetableBuilder {
    stops: Vec<Stop>,
    stop_index: HashMap<String, StopId>,
    trips: Vec<RawTrip>,
}

#[derive(Debug)]
struct RawTrip {
    external_id: String,
    stops: Vec<StopId>,
    events: Vec<Event>,
}

impl TimetableBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a stop, or returns the id of an existing stop with the same
    /// external id.
    pub fn add_stop(&mut self, stop: Stop) -> StopId {
        if let Some(&id) = self.stop_index.get(&stop.external_id) {
            return id;
        }
        let id = self.stops.len();
        self.stop_index.insert(stop.external_id.clone(), id);
        self.stops.push(stop);
        id
    }

    pub fn stop_id(&self, external_id: &str) -> Option<StopId> {
        self.stop_index.get(external_id).copied()
    }

    pub fn stop_mut(&mut self, id: StopId) -> &mut Stop {
        &mut self.stops[id]
    }

    pub fn num_stops(&self) -> usize {
        self.stops.len()
    }

    /// Adds a trip given as `(stop, arrival, departure)` triples.
    pub fn add_trip(
        &mut self,
        external_id: impl Into<String>,
        calls: &[(StopId, Time, Time)],
    ) -> Result<TripId> {
        let external_id = external_id.into();
        if calls.is_empty() {
            return Err(Error::InvalidTimes {
                trip: external_id,
                msg: "trip has no stops".into(),
            });
        }
        for (i, &(stop, arr, dep)) in calls.iter().enumerate() {
            if stop >= self.stops.len() {
                return Err(Error::DanglingReference {
                    what: "stop",
                    id: stop.to_string(),
                });
            }
            if arr > dep {
                return Err(Error::InvalidTimes {
                    trip: external_id,
                    msg: format!("arrival {arr} after departure {dep} at position {i}"),
                });
            }
            if i > 0 && calls[i - 1].2 > arr {
                return Err(Error::InvalidTimes {
                    trip: external_id,
                    msg: format!("decreasing time at position {i}"),
                });
            }
            if arr >= REVERSE_HORIZON || dep >= REVERSE_HORIZON {
                return Err(Error::InvalidTimes {
                    trip: external_id,
                    msg: format!("time at position {i} is out of range"),
                });
            }
        }
        let id = self.trips.len();
        self.trips.push(RawTrip {
            external_id,
            stops: calls.iter().map(|c| c.0).collect(),
            events: calls.iter().map(|&(_, arr, dep)| Event { arr, dep }).collect(),
        });
        Ok(id)
    }

    pub fn build(self) -> Timetable {
        let mut group_of: HashMap<&[StopId], usize> = HashMap::new();
        let mut groups: Vec<(Vec<StopId>, Vec<TripId>)> = Vec::new();
        for (id, trip) in self.trips.iter().enumerate() {
            let g = *group_of.entry(&trip.stops).or_insert_with(|| {
                groups.push((trip.stops.clone(), Vec::new()));
                groups.len() - 1
            });
            groups[g].1.push(id);
        }

        let mut routes = Vec::new();
        let mut route_of = vec![0; self.trips.len()];
        for (stops, members) in groups {
            let group: Vec<(TripId, &[Event])> = members
                .iter()
                .map(|&t| (t, self.trips[t].events.as_slice()))
                .collect();
            for part in split_routes(&group) {
                for &t in &part {
                    route_of[t] = routes.len();
                }
                routes.push(Route {
                    stops: stops.clone(),
                    trips: part,
                });
            }
        }

        let trips = self
            .trips
            .into_iter()
            .enumerate()
            .map(|(id, raw)| Trip {
                external_id: raw.external_id,
                route: route_of[id],
                events: raw.events,
            })
            .collect();
        assemble(self.stops, routes, trips, Direction::Forward)
    }
}

fn assemble(stops: Vec<Stop>, routes: Vec<Route>, trips: Vec<Trip>, direction: Direction) -> Timetable {
    let mut stop_routes = vec![Vec::new(); stops.len()];
    for (r, route) in routes.iter().enumerate() {
        for (pos, &s) in route.stops.iter().enumerate() {
            stop_routes[s].push((r, pos));
        }
    }
    let mut tt = Timetable {
        stops,
        routes,
        trips,
        connections: Vec::new(),
        stop_routes,
        direction,
    };
    tt.connections = build_connections(&tt);
    tt
}

/// True when `later` never runs ahead of `earlier` at any stop index.
fn follows(earlier: &[Event], later: &[Event]) -> bool {
    earlier
        .iter()
        .zip(later)
        .all(|(a, b)| a.arr <= b.arr && a.dep <= b.dep)
}

/// Partitions trips sharing one stop sequence into non-overtaking routes.
///
/// Trips are sorted by departure at the first stop (then id) and each is
/// appended to the first subset whose last trip it does not overtake.
pub fn split_routes(group: &[(TripId, &[Event])]) -> Vec<Vec<TripId>> {
    let mut order: Vec<usize> = (0..group.len()).collect();
    order.sort_by_key(|&i| (group[i].1.first().map(|e| e.dep), group[i].0));

    let mut parts: Vec<Vec<usize>> = Vec::new();
    for i in order {
        let slot = parts
            .iter()
            .position(|p| follows(group[*p.last().unwrap()].1, group[i].1));
        match slot {
            Some(p) => parts[p].push(i),
            None => parts.push(vec![i]),
        }
    }
    parts
        .into_iter()
        .map(|p| p.into_iter().map(|i| group[i].0).collect())
        .collect()
}

/// One connection per consecutive stop pair of every trip, sorted by
/// departure time with ties broken by trip id and position.
pub fn build_connections(tt: &Timetable) -> Vec<Connection> {
    let mut out = Vec::with_capacity(tt.num_events());
    for (id, trip) in tt.trips.iter().enumerate() {
        let stops = &tt.routes[trip.route].stops;
        for i in 1..trip.events.len() {
            out.push(Connection {
                dep_stop: stops[i - 1],
                arr_stop: stops[i],
                dep_time: trip.events[i - 1].dep,
                arr_time: trip.events[i].arr,
                trip: id,
                index: i - 1,
            });
        }
    }
    out.sort_by_key(|c| (c.dep_time, c.trip, c.index));
    out
}
