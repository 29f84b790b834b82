//! Profile connection scan with unrestricted walking. Connections are
//! visited by decreasing departure. Each trip keeps the earliest target
//! arrival reachable by boarding it at the current connection, and each
//! hub keeps a Pareto set of (latest time to be at the hub, arrival).

use super::{CsaOptions, CsaWork};
use crate::hublabel::HubLabeling;
use crate::journey::{Profile, ProfileEntry};
use crate::timetable::{Direction, Timetable};
use crate::{add, StopId, Time, VertexId, INFINITY};

/// Pairs `(dep, arr)` with both strictly increasing.
#[derive(Debug, Clone, Default)]
struct HubBag(Vec<(Time, Time)>);

impl HubBag {
    /// Earliest arrival when at the hub at `t`.
    #[inline]
    fn query(&self, t: Time) -> Time {
        let i = self.0.partition_point(|e| e.0 < t);
        self.0.get(i).map_or(INFINITY, |e| e.1)
    }

    fn insert(&mut self, dep: Time, arr: Time) -> bool {
        if self.query(dep) <= arr {
            return false;
        }
        // entries leaving no later and arriving no earlier are dominated
        let hi = self.0.partition_point(|e| e.0 <= dep);
        let lo = self.0[..hi].partition_point(|e| e.1 < arr);
        self.0.splice(lo..hi, [(dep, arr)]);
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsaProfile {
    pub profile: Profile,
    pub work: CsaWork,
}

pub struct HlProfileCsa<'a> {
    tt: &'a Timetable,
    hl: &'a HubLabeling,
    opts: CsaOptions,
    trip_best: Vec<Time>,
    bags: Vec<HubBag>,
    touched: Vec<VertexId>,
    to_target: Vec<Time>,
}

impl<'a> HlProfileCsa<'a> {
    pub fn new(tt: &'a Timetable, hl: &'a HubLabeling, opts: CsaOptions) -> Self {
        assert_eq!(tt.direction, Direction::Forward);
        assert!(hl.num_labeled() >= tt.num_stops(), "hub labeling must cover every stop");
        HlProfileCsa {
            tt,
            hl,
            opts,
            trip_best: vec![INFINITY; tt.trips.len()],
            bags: vec![HubBag::default(); hl.num_vertices()],
            touched: Vec::new(),
            to_target: vec![INFINITY; hl.num_vertices()],
        }
    }

    pub fn profile(&mut self, source: StopId, target: StopId, from: Time, to: Time) -> CsaProfile {
        let (tt, hl) = (self.tt, self.hl);
        self.trip_best.fill(INFINITY);
        for h in self.touched.drain(..) {
            self.bags[h].0.clear();
        }
        for e in hl.in_hubs(target) {
            self.to_target[e.vertex()] = e.dist;
        }

        let mut work = CsaWork::default();
        let mut direct = Vec::new();
        let first = tt.first_connection_after(from);
        for c in tt.connections[first..].iter().rev() {
            work.connections += 1;
            let mut best = self.trip_best[c.trip];
            for e in hl.out_hubs(c.arr_stop) {
                work.out_hub_entries += 1;
                let h = e.vertex();
                let at_hub = add(c.arr_time, e.dist);
                best = best.min(add(at_hub, self.to_target[h]));
                best = best.min(self.bags[h].query(at_hub));
            }
            if best == INFINITY {
                continue;
            }
            self.trip_best[c.trip] = self.trip_best[c.trip].min(best);
            let best = self.trip_best[c.trip];
            let u = c.dep_stop;
            if u == source {
                direct.push(ProfileEntry { dep: c.dep_time, arr: best });
            }
            let mtt = if self.opts.transfer_times { tt.min_transfer(u) } else { 0 };
            let Some(ready) = c.dep_time.checked_sub(mtt) else { continue };
            for e in hl.in_hubs(u) {
                work.in_hub_entries += 1;
                let Some(leave) = ready.checked_sub(e.dist) else { continue };
                let h = e.vertex();
                if self.bags[h].0.is_empty() {
                    self.touched.push(h);
                }
                self.bags[h].insert(leave, best);
            }
        }
        for e in hl.in_hubs(target) {
            self.to_target[e.vertex()] = INFINITY;
        }

        let mut candidates = direct;
        for e in hl.out_hubs(source) {
            for &(dep, arr) in &self.bags[e.vertex()].0 {
                if let Some(dep) = dep.checked_sub(e.dist) {
                    candidates.push(ProfileEntry { dep, arr });
                }
            }
        }
        let walk = if source == target { Some(0) } else { hl.query(source, target) };
        CsaProfile {
            profile: Profile::from_candidates(candidates, from, to, walk),
            work,
        }
    }
}

pub fn hlpr_csa(tt: &Timetable, hl: &HubLabeling, source: StopId, target: StopId, from: Time, to: Time, opts: CsaOptions) -> CsaProfile {
    HlProfileCsa::new(tt, hl, opts).profile(source, target, from, to)
}
