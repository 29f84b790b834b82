//! RAPTOR with unrestricted walking through a hub labeling.
//!
//! After the route phase of a round, every stop a trip improved pushes its
//! arrival to its out-hubs, and every improved hub then pushes its arrival
//! to the stops listing it as an in-hub. Hub lists are sorted by distance,
//! so both scans stop once the target cannot be improved.

use crate::hublabel::HubLabeling;
use crate::journey::{Journey, Profile, ProfileEntry};
use crate::raptor::{EatResult, McResult, McSearch, RaptorOptions, RoundSearch};
use crate::timetable::{reflect, Direction, Timetable};
use crate::{StopId, Time};

/// Earliest arrival with unrestricted walking.
pub fn hlraptor_eat(
    tt: &Timetable,
    hl: &HubLabeling,
    source: StopId,
    target: StopId,
    depart: Time,
    opts: RaptorOptions,
) -> EatResult {
    RoundSearch::with_hubs(tt, hl, opts).query(source, target, depart)
}

/// Pareto set over arrival, trips and walking time with unrestricted walking.
pub fn hlmc_raptor(
    tt: &Timetable,
    hl: &HubLabeling,
    source: StopId,
    target: StopId,
    depart: Time,
    opts: RaptorOptions,
) -> McResult {
    McSearch::with_hubs(tt, hl, opts).query(source, target, depart)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileResult {
    pub profile: Profile,
    /// For each profile entry, a journey reaching the target by its arrival.
    pub journeys: Vec<Journey>,
    /// Forward and backward query pairs run.
    pub iterations: usize,
}

/// Profile search alternating forward and backward hub-labeled queries.
///
/// A forward query from departure `τ` yields the earliest arrival `τa`; a
/// backward query from the target at `τa` yields the latest departure `τd`
/// still reaching it by then. The pair is Pareto-optimal, and the loop
/// resumes from `τd + 1`.
pub struct HlProfileSearch<'a> {
    hl: &'a HubLabeling,
    forward: RoundSearch<'a>,
    backward: RoundSearch<'a>,
}

impl<'a> HlProfileSearch<'a> {
    /// `reverse` must be `tt.reversed()` and `reverse_hl` be `hl.reversed()`.
    pub fn new(
        tt: &'a Timetable,
        reverse: &'a Timetable,
        hl: &'a HubLabeling,
        reverse_hl: &'a HubLabeling,
        opts: RaptorOptions,
    ) -> Self {
        assert_eq!(tt.direction, Direction::Forward);
        assert_eq!(reverse.direction, Direction::Backward);
        HlProfileSearch {
            hl,
            forward: RoundSearch::with_hubs(tt, hl, opts),
            backward: RoundSearch::with_hubs(reverse, reverse_hl, opts),
        }
    }

    pub fn profile(&mut self, source: StopId, target: StopId, from: Time, to: Time) -> ProfileResult {
        let mut found: Vec<(ProfileEntry, Journey)> = Vec::new();
        let mut iterations = 0;
        let mut tau = from;
        while tau <= to {
            let fwd = self.forward.query_transit(source, target, tau);
            let Some(arr) = fwd.arrival else { break };
            let bwd = self.backward.query_transit(target, source, reflect(arr));
            iterations += 1;
            let dep = reflect(bwd.arrival.expect("a forward journey bounds the backward search"));
            debug_assert!(dep >= tau);
            found.push((ProfileEntry { dep, arr }, fwd.journey.expect("arrival has a journey")));
            tau = dep + 1;
        }
        let walk = if source == target { Some(0) } else { self.hl.query(source, target) };
        let profile = Profile::from_candidates(found.iter().map(|f| f.0), from, to, walk);
        let journeys = profile
            .entries
            .iter()
            .map(|e| {
                found
                    .iter()
                    .find(|f| f.0.arr == e.arr)
                    .map(|f| f.1.clone())
                    .expect("entries come from candidates")
            })
            .collect();
        ProfileResult {
            profile,
            journeys,
            iterations,
        }
    }
}

/// One-shot profile query over `[from, to]`.
#[allow(clippy::too_many_arguments)]
pub fn hlpr_raptor(
    tt: &Timetable,
    reverse: &Timetable,
    hl: &HubLabeling,
    reverse_hl: &HubLabeling,
    source: StopId,
    target: StopId,
    from: Time,
    to: Time,
    opts: RaptorOptions,
) -> ProfileResult {
    HlProfileSearch::new(tt, reverse, hl, reverse_hl, opts).profile(source, target, from, to)
}
