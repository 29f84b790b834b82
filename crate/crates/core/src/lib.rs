//! Journey planning over public transit timetables with unrestricted walking.
//!
//! Foot transfers are represented as two hops through a hub labeling of the
//! walking graph: a stop reaches its out-hubs, and each hub reaches the stops
//! that list it as an in-hub. The round-based ([`hlraptor`]) and
//! connection-scan ([`csa`]) families use this to behave as if the full
//! transitive closure of the walking graph were available, while only
//! touching hub lists. Baselines over a restricted, explicitly closed
//! transfer graph live in [`raptor`] and [`csa`], and [`oracle`] holds
//! brute-force references used by the test suites.

pub mod csa;
pub mod error;
pub mod fixtures;
pub mod hublabel;
pub mod hlraptor;
pub mod journey;
pub mod oracle;
pub mod raptor;
pub mod timetable;
pub mod walkgraph;
pub mod workload;

pub use error::{Error, Result};
pub use hublabel::{HubLabeling, LabelStats};
pub use journey::{Journey, Leg, Profile, ProfileEntry};
pub use timetable::{Connection, Route, Stop, Timetable, TimetableBuilder, Trip};
pub use walkgraph::{TransferGraph, WalkGraph};

/// Seconds since midnight of the service day. Values past 86400 denote
/// service running after midnight.
pub type Time = u32;
pub type StopId = usize;
pub type TripId = usize;
pub type RouteId = usize;
pub type VertexId = usize;

/// Unreachable marker for arrival times and distances.
pub const INFINITY: Time = Time::MAX;

/// Walking speed in meters per second (4 km/h).
pub const WALKING_SPEED: f64 = 4000.0 / 3600.0;

/// Round cap used when callers do not ask for one.
pub const DEFAULT_MAX_ROUNDS: usize = 16;

#[inline]
pub(crate) fn add(t: Time, d: Time) -> Time {
    t.saturating_add(d)
}
