//! Restricted stop-to-stop transfer graph, transitively closed.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{dijkstra, Direction, WalkGraph};
use crate::{add, StopId, Time, INFINITY, WALKING_SPEED};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransferGraph {
    /// Per stop, `(target, walk seconds)` sorted by walk time then target.
    lists: Vec<Vec<(StopId, Time)>>,
}

/// Walking-time budget for a distance radius, rounded up.
pub fn radius_to_seconds(radius_m: f64) -> Time {
    (radius_m / WALKING_SPEED).ceil() as Time
}

/// Links stop pairs whose walking time in `g` is at most `max_walk` and
/// closes the result transitively. `None` links every connected pair, which
/// gives the full closure of the walking graph over stops.
pub fn build_transfer_graph(g: &WalkGraph, max_walk: Option<Time>) -> TransferGraph {
    let n = g.num_stops();
    let mut links = Vec::new();
    for s in 0..n {
        let d = dijkstra(g, &[(s, 0)], Direction::Forward, max_walk);
        links.extend((0..n).filter(|&v| v != s && d[v] != INFINITY).map(|v| (s, v, d[v])));
    }
    TransferGraph::from_links(n, &links).closed()
}

impl TransferGraph {
    /// Direct links only; call [`TransferGraph::closed`] to close them.
    pub fn from_links(num_stops: usize, links: &[(StopId, StopId, Time)]) -> Self {
        let mut lists = vec![Vec::new(); num_stops];
        for &(u, v, w) in links {
            if u != v {
                lists[u].push((v, w));
            }
        }
        let mut tg = TransferGraph { lists };
        tg.normalize();
        tg
    }

    fn normalize(&mut self) {
        for l in &mut self.lists {
            l.sort_unstable_by_key(|&(v, w)| (v, w));
            l.dedup_by_key(|e| e.0);
            l.sort_unstable_by_key(|&(v, w)| (w, v));
        }
    }

    pub fn num_stops(&self) -> usize {
        self.lists.len()
    }

    pub fn num_edges(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }

    pub fn transfers(&self, stop: StopId) -> &[(StopId, Time)] {
        &self.lists[stop]
    }

    pub fn walk_time(&self, from: StopId, to: StopId) -> Option<Time> {
        self.lists[from].iter().find(|e| e.0 == to).map(|e| e.1)
    }

    /// Transitive closure with shortest chained walking times, by one
    /// Dijkstra per stop over the link graph.
    pub fn closed(&self) -> TransferGraph {
        let n = self.num_stops();
        let mut dist = vec![INFINITY; n];
        let mut touched = Vec::new();
        let mut lists = Vec::with_capacity(n);
        for s in 0..n {
            let mut heap = BinaryHeap::new();
            dist[s] = 0;
            touched.push(s);
            heap.push(Reverse((0, s)));
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for &(v, w) in &self.lists[u] {
                    let nd = add(d, w);
                    if nd < dist[v] {
                        if dist[v] == INFINITY {
                            touched.push(v);
                        }
                        dist[v] = nd;
                        heap.push(Reverse((nd, v)));
                    }
                }
            }
            let mut l: Vec<(StopId, Time)> = touched.iter().filter(|&&v| v != s).map(|&v| (v, dist[v])).collect();
            l.sort_unstable_by_key(|&(v, w)| (w, v));
            lists.push(l);
            for v in touched.drain(..) {
                dist[v] = INFINITY;
            }
        }
        TransferGraph { lists }
    }

    pub fn is_closed(&self) -> bool {
        (0..self.num_stops()).all(|a| {
            self.lists[a].iter().all(|&(b, wab)| {
                self.lists[b]
                    .iter()
                    .filter(|&&(c, _)| c != a)
                    .all(|&(c, wbc)| self.walk_time(a, c).is_some_and(|wac| wac <= wab + wbc))
            })
        })
    }

    /// Average and maximum out-degree.
    pub fn degree_stats(&self) -> (f64, usize) {
        let n = self.num_stops().max(1);
        (
            self.num_edges() as f64 / n as f64,
            self.lists.iter().map(Vec::len).max().unwrap_or(0),
        )
    }

    pub fn as_links(&self) -> Vec<(StopId, StopId, Time)> {
        self.lists
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().map(move |&(v, w)| (u, v, w)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    /// Stops P, Q, R on a line, 50 m apart (45 s each way).
    fn line() -> WalkGraph {
        WalkGraph::from_edges(3, 3, &[(0, 1, 45), (1, 0, 45), (1, 2, 45), (2, 1, 45)])
    }

    #[test]
    fn tiny_radius_gives_empty_graph() {
        let tg = build_transfer_graph(&line(), Some(radius_to_seconds(10.0)));
        assert_eq!(tg.num_edges(), 0);
    }

    #[test]
    fn closure_adds_chained_walk() {
        let g = line();
        let tg = build_transfer_graph(&g, Some(radius_to_seconds(75.0)));
        assert_eq!(radius_to_seconds(75.0), 68);
        assert_eq!(tg.walk_time(0, 2), Some(90));
        // oracle: all-pairs Dijkstra on the direct-link graph
        let links = WalkGraph::from_edges(3, 3, &[(0, 1, 45), (1, 0, 45), (1, 2, 45), (2, 1, 45)]);
        for s in 0..3 {
            let d = dijkstra(&links, &[(s, 0)], Direction::Forward, None);
            for v in (0..3).filter(|&v| v != s) {
                assert_eq!(tg.walk_time(s, v), Some(d[v]));
            }
        }
        assert!(tg.is_closed());
    }

    #[test]
    fn closure_is_idempotent() {
        let inst = fixtures::random_instance(11, &Default::default());
        let tg = build_transfer_graph(&inst.graph, Some(150));
        assert!(tg.is_closed());
        assert_eq!(tg.closed(), tg);
    }

    #[test]
    fn t1_restricted_graph_keeps_only_b_c() {
        let f = fixtures::t1();
        let tg = build_transfer_graph(&f.graph, Some(radius_to_seconds(75.0)));
        assert_eq!(tg.as_links(), vec![(fixtures::B, fixtures::C, 30), (fixtures::C, fixtures::B, 30)]);
    }

    #[test]
    fn lists_sorted_by_walk_time() {
        let inst = fixtures::random_instance(5, &Default::default());
        let tg = build_transfer_graph(&inst.graph, None);
        for s in 0..tg.num_stops() {
            assert!(tg.transfers(s).windows(2).all(|w| w[0].1 <= w[1].1));
        }
    }
}
