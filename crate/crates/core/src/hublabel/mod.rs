//! Two-hop labeling of the walking graph.
//!
//! Every vertex `u` has out-hubs `H+(u)` with `d(u, h)` and in-hubs `H-(u)`
//! with `d(h, u)`, such that for every pair some common hub lies on a
//! shortest path. The routing algorithms scan `H+(u)` forward and the
//! inverted lists `H-⁻¹(h) = { v | h ∈ H-(v) }`, both sorted by distance so
//! scans can stop early.

mod io;

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::walkgraph::WalkGraph;
use crate::{add, Time, VertexId, INFINITY};

pub use io::{load_labeling, load_labeling_text, save_labeling, FORMAT_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HubEntry {
    /// Hub, or labeled vertex in an inverted list.
    pub node: u32,
    pub dist: Time,
}

impl HubEntry {
    #[inline]
    pub fn vertex(self) -> VertexId {
        self.node as VertexId
    }
}

/// Flat per-vertex lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Lists {
    offsets: Vec<usize>,
    items: Vec<HubEntry>,
}

impl Lists {
    fn from_nested(nested: Vec<Vec<HubEntry>>) -> Self {
        let mut offsets = Vec::with_capacity(nested.len() + 1);
        let mut items = Vec::with_capacity(nested.iter().map(Vec::len).sum());
        offsets.push(0);
        for l in nested {
            items.extend(l);
            offsets.push(items.len());
        }
        Lists { offsets, items }
    }

    #[inline]
    fn get(&self, v: VertexId) -> &[HubEntry] {
        &self.items[self.offsets[v]..self.offsets[v + 1]]
    }

    fn len(&self) -> usize {
        self.offsets.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexOrder {
    /// Descending total degree, ties by vertex id.
    Degree,
    /// Explicit order, most important vertex first.
    Given(Vec<VertexId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HubLabeling {
    /// Vertices `0..labeled` carry labels; the rest have empty lists.
    labeled: usize,
    out: Lists,
    inn: Lists,
    out_inv: Lists,
    in_inv: Lists,
    out_by_hub: Lists,
    in_by_hub: Lists,
}

fn sort_by_dist(l: &mut [HubEntry]) {
    l.sort_unstable_by_key(|e| (e.dist, e.node));
}

fn invert(lists: &Lists, n: usize) -> Lists {
    let mut inv = vec![Vec::new(); n];
    for v in 0..lists.len() {
        for e in lists.get(v) {
            inv[e.vertex()].push(HubEntry {
                node: v as u32,
                dist: e.dist,
            });
        }
    }
    for l in &mut inv {
        sort_by_dist(l);
    }
    Lists::from_nested(inv)
}

fn by_hub(lists: &Lists) -> Lists {
    let mut items = lists.items.clone();
    for v in 0..lists.len() {
        items[lists.offsets[v]..lists.offsets[v + 1]].sort_unstable_by_key(|e| e.node);
    }
    Lists {
        offsets: lists.offsets.clone(),
        items,
    }
}

impl HubLabeling {
    /// Assembles a labeling from per-vertex lists given as
    /// `(hub, distance)`; lists are re-sorted by distance.
    pub fn from_lists(num_vertices: usize, out: Vec<Vec<HubEntry>>, inn: Vec<Vec<HubEntry>>) -> Self {
        assert_eq!(out.len(), inn.len());
        let labeled = out.len();
        let pad = |mut l: Vec<Vec<HubEntry>>| {
            for x in &mut l {
                sort_by_dist(x);
            }
            l.resize(num_vertices, Vec::new());
            Lists::from_nested(l)
        };
        let (out, inn) = (pad(out), pad(inn));
        HubLabeling {
            labeled,
            out_inv: invert(&out, num_vertices),
            in_inv: invert(&inn, num_vertices),
            out_by_hub: by_hub(&out),
            in_by_hub: by_hub(&inn),
            out,
            inn,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.out.len()
    }

    pub fn num_labeled(&self) -> usize {
        self.labeled
    }

    /// `H+(u)`: `(h, d(u, h))` by non-decreasing distance.
    #[inline]
    pub fn out_hubs(&self, u: VertexId) -> &[HubEntry] {
        self.out.get(u)
    }

    /// `H-(v)`: `(h, d(h, v))` by non-decreasing distance.
    #[inline]
    pub fn in_hubs(&self, v: VertexId) -> &[HubEntry] {
        self.inn.get(v)
    }

    /// `H-⁻¹(h)`: `(v, d(h, v))` for every `v` with `h ∈ H-(v)`.
    #[inline]
    pub fn in_inverse(&self, h: VertexId) -> &[HubEntry] {
        self.in_inv.get(h)
    }

    /// `H+⁻¹(h)`: `(u, d(u, h))` for every `u` with `h ∈ H+(u)`.
    #[inline]
    pub fn out_inverse(&self, h: VertexId) -> &[HubEntry] {
        self.out_inv.get(h)
    }

    /// Exact walking distance by merging the hub-sorted label copies.
    pub fn query(&self, u: VertexId, v: VertexId) -> Option<Time> {
        let (a, b) = (self.out_by_hub.get(u), self.in_by_hub.get(v));
        let (mut i, mut j) = (0, 0);
        let mut best = INFINITY;
        while i < a.len() && j < b.len() {
            match a[i].node.cmp(&b[j].node) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    best = best.min(add(a[i].dist, b[j].dist));
                    i += 1;
                    j += 1;
                }
            }
        }
        (best != INFINITY).then_some(best)
    }

    /// Labeling of the reversed graph: out- and in-hubs swap roles.
    pub fn reversed(&self) -> HubLabeling {
        HubLabeling {
            labeled: self.labeled,
            out: self.inn.clone(),
            inn: self.out.clone(),
            out_inv: self.in_inv.clone(),
            in_inv: self.out_inv.clone(),
            out_by_hub: self.in_by_hub.clone(),
            in_by_hub: self.out_by_hub.clone(),
        }
    }

    /// Keeps labels of vertices `0..keep` only (the stops), which is all
    /// routing needs; inverted lists then mention stops only.
    pub fn restricted(&self, keep: usize) -> HubLabeling {
        let keep = keep.min(self.labeled);
        let take = |l: &Lists| (0..keep).map(|v| l.get(v).to_vec()).collect::<Vec<_>>();
        HubLabeling::from_lists(self.num_vertices(), take(&self.out), take(&self.inn))
    }

    pub(crate) fn out_lists(&self) -> impl Iterator<Item = &[HubEntry]> {
        (0..self.labeled).map(|v| self.out.get(v))
    }

    pub(crate) fn in_lists(&self) -> impl Iterator<Item = &[HubEntry]> {
        (0..self.labeled).map(|v| self.inn.get(v))
    }

    pub fn total_out(&self) -> usize {
        self.out.items.len()
    }

    pub fn total_in(&self) -> usize {
        self.inn.items.len()
    }

    /// Degree statistics over vertices `0..num_stops` (the stops).
    pub fn stats(&self, num_stops: usize) -> LabelStats {
        self.stats_over(0..num_stops.min(self.labeled))
    }

    /// Same statistics averaged over every labeled vertex.
    pub fn stats_all(&self) -> LabelStats {
        self.stats_over(0..self.labeled)
    }

    fn stats_over(&self, range: std::ops::Range<usize>) -> LabelStats {
        let n = range.len().max(1) as f64;
        let mut hubs = vec![false; self.num_vertices()];
        let mut s = LabelStats::default();
        for v in range {
            let (o, i) = (self.out.get(v), self.inn.get(v));
            s.total_out += o.len();
            s.total_in += i.len();
            s.max_out = s.max_out.max(o.len());
            s.max_in = s.max_in.max(i.len());
            for e in o.iter().chain(i) {
                hubs[e.vertex()] = true;
            }
        }
        s.avg_out = s.total_out as f64 / n;
        s.avg_in = s.total_in as f64 / n;
        s.num_hubs = hubs.iter().filter(|&&h| h).count();
        s
    }
}

/// Out/in label degrees and sizes, matching the usual table columns:
/// average and maximum out-degree of `H+`, average and maximum in-degree of
/// `H-`, number of hubs `|V(H)|`, and edge counts `|H+|`, `|H-|`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LabelStats {
    pub avg_out: f64,
    pub max_out: usize,
    pub avg_in: f64,
    pub max_in: usize,
    pub num_hubs: usize,
    pub total_out: usize,
    pub total_in: usize,
}

pub fn label_stats(hl: &HubLabeling, num_stops: usize) -> LabelStats {
    hl.stats(num_stops)
}

/// Pruned landmark labeling.
///
/// Vertices are processed in order; each runs a forward and a backward
/// Dijkstra that adds it as a hub wherever the labels built so far do not
/// already certify the distance, and stops expanding there.
pub fn build_labeling(g: &WalkGraph, order: VertexOrder) -> HubLabeling {
    let n = g.num_vertices();
    let order = match order {
        VertexOrder::Degree => {
            let mut o: Vec<VertexId> = (0..n).collect();
            o.sort_by_key(|&v| (Reverse(g.degree(v)), v));
            o
        }
        VertexOrder::Given(o) => {
            assert_eq!(o.len(), n, "vertex order must be a permutation");
            o
        }
    };

    // labels hold (rank, dist), appended in increasing rank
    let mut out_lab: Vec<Vec<(u32, Time)>> = vec![Vec::new(); n];
    let mut in_lab: Vec<Vec<(u32, Time)>> = vec![Vec::new(); n];
    let mut root_dist = vec![INFINITY; n];
    let mut dist = vec![INFINITY; n];
    let mut visited: Vec<VertexId> = Vec::new();
    let mut heap = BinaryHeap::new();

    for (rank, &root) in order.iter().enumerate() {
        let rank = rank as u32;
        for forward in [true, false] {
            // forward: add `root` to in-labels, pruning with out(root) · in(v)
            let root_label = if forward { &out_lab[root] } else { &in_lab[root] };
            for &(h, d) in root_label {
                root_dist[h as usize] = d;
            }
            dist[root] = 0;
            visited.push(root);
            heap.push(Reverse((0, root)));
            while let Some(Reverse((d, v))) = heap.pop() {
                if d > dist[v] {
                    continue;
                }
                let target = if forward { &mut in_lab[v] } else { &mut out_lab[v] };
                let covered = target
                    .iter()
                    .any(|&(h, dh)| root_dist[h as usize] != INFINITY && root_dist[h as usize] + dh <= d);
                if covered {
                    continue;
                }
                target.push((rank, d));
                let edges = if forward { g.out_edges(v) } else { g.in_edges(v) };
                for &(w, len) in edges {
                    let nd = add(d, len);
                    if nd < dist[w] {
                        if dist[w] == INFINITY {
                            visited.push(w);
                        }
                        dist[w] = nd;
                        heap.push(Reverse((nd, w)));
                    }
                }
            }
            let root_label = if forward { &out_lab[root] } else { &in_lab[root] };
            for &(h, _) in root_label {
                root_dist[h as usize] = INFINITY;
            }
            for v in visited.drain(..) {
                dist[v] = INFINITY;
            }
        }
    }

    let to_entries = |lab: Vec<Vec<(u32, Time)>>| -> Vec<Vec<HubEntry>> {
        lab.into_iter()
            .map(|l| {
                l.into_iter()
                    .map(|(r, d)| HubEntry {
                        node: order[r as usize] as u32,
                        dist: d,
                    })
                    .collect()
            })
            .collect()
    };
    HubLabeling::from_lists(n, to_entries(out_lab), to_entries(in_lab))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::walkgraph::{dijkstra, Direction};

    fn assert_exact(g: &WalkGraph, hl: &HubLabeling) {
        for u in 0..g.num_vertices() {
            let d = dijkstra(g, &[(u, 0)], Direction::Forward, None);
            for v in 0..g.num_vertices() {
                let want = (d[v] != INFINITY).then_some(d[v]);
                assert_eq!(hl.query(u, v), want, "pair ({u},{v})");
            }
        }
    }

    #[test]
    fn single_vertex() {
        let g = WalkGraph::from_edges(1, 1, &[]);
        let hl = build_labeling(&g, VertexOrder::Degree);
        assert_eq!(hl.out_hubs(0), &[HubEntry { node: 0, dist: 0 }]);
        assert_eq!(hl.in_hubs(0), &[HubEntry { node: 0, dist: 0 }]);
        assert_eq!(hl.query(0, 0), Some(0));
        let s = hl.stats(1);
        assert_eq!((s.avg_out, s.max_out, s.avg_in, s.max_in), (1.0, 1, 1.0, 1));
        assert_eq!((s.num_hubs, s.total_out, s.total_in), (1, 1, 1));
    }

    #[test]
    fn t1_distances() {
        let g = fixtures::t1().graph;
        let hl = build_labeling(&g, VertexOrder::Degree);
        assert_eq!(hl.query(fixtures::A, fixtures::C), Some(120));
        assert_eq!(hl.query(fixtures::B, fixtures::C), Some(30));
        assert_eq!(hl.query(fixtures::A, fixtures::D), None);
        assert_eq!(hl.query(fixtures::D, fixtures::D), Some(0));
        assert_eq!(hl.stats(4).total_out, (0..4).map(|v| hl.out_hubs(v).len()).sum::<usize>());
    }

    #[test]
    fn path_graph_all_pairs() {
        let edges: Vec<_> = (0..9).flat_map(|i| [(i, i + 1, 7 + i as Time), (i + 1, i, 7 + i as Time)]).collect();
        let g = WalkGraph::from_edges(10, 10, &edges);
        let hl = build_labeling(&g, VertexOrder::Degree);
        assert_exact(&g, &hl);
    }

    #[test]
    fn star_center_out_degree() {
        let edges: Vec<_> = (1..5).flat_map(|i| [(0, i, 10), (i, 0, 10)]).collect();
        let g = WalkGraph::from_edges(5, 5, &edges);
        let hl = build_labeling(&g, VertexOrder::Degree);
        let s = hl.stats(5);
        let longest = (0..5).map(|v| hl.out_hubs(v).len()).max().unwrap();
        assert_eq!(s.max_out, longest);
        // the center is processed first and covers every pair through itself
        assert_eq!(hl.out_hubs(0).len(), 1);
        assert_exact(&g, &hl);
    }

    #[test]
    fn lists_sorted_and_self_hubs_present() {
        let g = fixtures::random_graph(4, 120, 30, 300);
        let hl = build_labeling(&g, VertexOrder::Degree);
        for v in 0..g.num_vertices() {
            for l in [hl.out_hubs(v), hl.in_hubs(v), hl.in_inverse(v), hl.out_inverse(v)] {
                assert!(l.windows(2).all(|w| w[0].dist <= w[1].dist));
            }
            assert!(hl.out_hubs(v).contains(&HubEntry { node: v as u32, dist: 0 }));
            assert!(hl.in_inverse(v).contains(&HubEntry { node: v as u32, dist: 0 }));
        }
        assert_exact(&g, &hl);
    }

    #[test]
    fn deterministic_for_fixed_order() {
        let g = fixtures::random_graph(8, 80, 20, 200);
        assert_eq!(build_labeling(&g, VertexOrder::Degree), build_labeling(&g, VertexOrder::Degree));
        let given: Vec<_> = (0..80).rev().collect();
        let hl = build_labeling(&g, VertexOrder::Given(given));
        assert_exact(&g, &hl);
    }

    #[test]
    fn reversed_labeling_answers_reversed_graph() {
        let g = fixtures::random_graph(12, 60, 20, 150);
        let hl = build_labeling(&g, VertexOrder::Degree).reversed();
        assert_exact(&g.reversed(), &hl);
    }

    #[test]
    fn restriction_keeps_stop_distances() {
        let g = fixtures::random_graph(13, 70, 15, 180);
        let hl = build_labeling(&g, VertexOrder::Degree);
        let r = hl.restricted(15);
        for u in 0..15 {
            for v in 0..15 {
                assert_eq!(r.query(u, v), hl.query(u, v));
            }
            assert!(r.in_inverse(u).iter().all(|e| e.vertex() < 15));
        }
        assert_eq!(r.stats(15), hl.stats(15));
    }
}
