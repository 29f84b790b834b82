//! Weighted directed footpath graph, shortest-path utilities, stop
//! embedding and the restricted transfer graph.

mod embed;
mod io;
mod transfer;

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::{add, Time, VertexId, INFINITY};

pub use embed::{embed_stops, haversine_m, walk_seconds, IDENTIFY_RADIUS_M, LINK_NEIGHBORS, LINK_RADIUS_M};
pub use io::{load_graph, load_graph_binary, load_graph_text, save_graph_binary, save_graph_text};
pub use transfer::{build_transfer_graph, radius_to_seconds, TransferGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Compressed adjacency of a directed graph with positive integer weights.
///
/// Stops occupy vertex ids `0..num_stops`; the remaining vertices are plain
/// footpath nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkGraph {
    num_stops: usize,
    fwd_offsets: Vec<usize>,
    fwd: Vec<(VertexId, Time)>,
    rev_offsets: Vec<usize>,
    rev: Vec<(VertexId, Time)>,
    coords: Option<Vec<(f64, f64)>>,
}

fn csr(n: usize, edges: impl Iterator<Item = (VertexId, VertexId, Time)>) -> (Vec<usize>, Vec<(VertexId, Time)>) {
    let mut lists: Vec<Vec<(VertexId, Time)>> = vec![Vec::new(); n];
    for (u, v, w) in edges {
        lists[u].push((v, w));
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut flat = Vec::new();
    offsets.push(0);
    for mut l in lists {
        l.sort_unstable();
        flat.extend(l);
        offsets.push(flat.len());
    }
    (offsets, flat)
}

impl WalkGraph {
    /// Builds a graph over `num_vertices` vertices. Self-loops are dropped,
    /// parallel edges keep their minimum weight and zero weights are raised
    /// to one second.
    pub fn from_edges(num_vertices: usize, num_stops: usize, edges: &[(VertexId, VertexId, Time)]) -> Self {
        assert!(num_stops <= num_vertices);
        let mut es: Vec<(VertexId, VertexId, Time)> = edges
            .iter()
            .filter(|e| e.0 != e.1)
            .map(|&(u, v, w)| {
                assert!(u < num_vertices && v < num_vertices, "edge ({u},{v}) out of range");
                (u, v, w.max(1))
            })
            .collect();
        es.sort_unstable();
        es.dedup_by(|b, a| a.0 == b.0 && a.1 == b.1);
        let (fwd_offsets, fwd) = csr(num_vertices, es.iter().copied());
        let (rev_offsets, rev) = csr(num_vertices, es.iter().map(|&(u, v, w)| (v, u, w)));
        WalkGraph {
            num_stops,
            fwd_offsets,
            fwd,
            rev_offsets,
            rev,
            coords: None,
        }
    }

    pub fn with_coords(mut self, coords: Vec<(f64, f64)>) -> Self {
        assert_eq!(coords.len(), self.num_vertices());
        self.coords = Some(coords);
        self
    }

    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        self.coords.as_deref()
    }

    pub fn num_vertices(&self) -> usize {
        self.fwd_offsets.len() - 1
    }

    pub fn num_stops(&self) -> usize {
        self.num_stops
    }

    pub fn num_edges(&self) -> usize {
        self.fwd.len()
    }

    pub fn out_edges(&self, u: VertexId) -> &[(VertexId, Time)] {
        &self.fwd[self.fwd_offsets[u]..self.fwd_offsets[u + 1]]
    }

    pub fn in_edges(&self, v: VertexId) -> &[(VertexId, Time)] {
        &self.rev[self.rev_offsets[v]..self.rev_offsets[v + 1]]
    }

    pub fn edges(&self, u: VertexId, dir: Direction) -> &[(VertexId, Time)] {
        match dir {
            Direction::Forward => self.out_edges(u),
            Direction::Backward => self.in_edges(u),
        }
    }

    pub fn edge_list(&self) -> Vec<(VertexId, VertexId, Time)> {
        (0..self.num_vertices())
            .flat_map(|u| self.out_edges(u).iter().map(move |&(v, w)| (u, v, w)))
            .collect()
    }

    pub fn degree(&self, u: VertexId) -> usize {
        self.out_edges(u).len() + self.in_edges(u).len()
    }

    /// Graph with the same vertices and extra edges, e.g. footpaths from a
    /// feed's transfer table.
    pub fn with_extra_edges(&self, extra: &[(VertexId, VertexId, Time)]) -> WalkGraph {
        let mut all = self.edge_list();
        all.extend_from_slice(extra);
        let g = WalkGraph::from_edges(self.num_vertices(), self.num_stops, &all);
        match &self.coords {
            Some(c) => g.with_coords(c.clone()),
            None => g,
        }
    }

    /// Graph with every edge reversed.
    pub fn reversed(&self) -> WalkGraph {
        WalkGraph {
            num_stops: self.num_stops,
            fwd_offsets: self.rev_offsets.clone(),
            fwd: self.rev.clone(),
            rev_offsets: self.fwd_offsets.clone(),
            rev: self.fwd.clone(),
            coords: self.coords.clone(),
        }
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> Option<Time> {
        self.shortest_path(u, v).map(|(d, _)| d)
    }

    /// Shortest path from `u` to `v` as a vertex sequence, with its length.
    pub fn shortest_path(&self, u: VertexId, v: VertexId) -> Option<(Time, Vec<VertexId>)> {
        let n = self.num_vertices();
        let mut dist = vec![INFINITY; n];
        let mut pred = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[u] = 0;
        heap.push(Reverse((0, u)));
        while let Some(Reverse((d, x))) = heap.pop() {
            if d > dist[x] {
                continue;
            }
            if x == v {
                break;
            }
            for &(y, w) in self.out_edges(x) {
                let nd = add(d, w);
                if nd < dist[y] {
                    dist[y] = nd;
                    pred[y] = x;
                    heap.push(Reverse((nd, y)));
                }
            }
        }
        if dist[v] == INFINITY {
            return None;
        }
        let mut path = vec![v];
        let mut x = v;
        while x != u {
            x = pred[x];
            path.push(x);
        }
        path.reverse();
        Some((dist[v], path))
    }
}

/// Multi-source Dijkstra. `sources` carry initial offsets; vertices farther
/// than `cutoff` are left at [`INFINITY`].
pub fn dijkstra(g: &WalkGraph, sources: &[(VertexId, Time)], dir: Direction, cutoff: Option<Time>) -> Vec<Time> {
    let cutoff = cutoff.unwrap_or(INFINITY - 1);
    let mut dist = vec![INFINITY; g.num_vertices()];
    let mut heap = BinaryHeap::new();
    for &(s, off) in sources {
        if off <= cutoff && off < dist[s] {
            dist[s] = off;
            heap.push(Reverse((off, s)));
        }
    }
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in g.edges(u, dir) {
            let nd = add(d, w);
            if nd <= cutoff && nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

#[cfg(test)]
pub(crate) fn bellman_ford(g: &WalkGraph, source: VertexId) -> Vec<Time> {
    let mut dist = vec![INFINITY; g.num_vertices()];
    dist[source] = 0;
    for _ in 0..g.num_vertices() {
        let mut changed = false;
        for (u, v, w) in g.edge_list() {
            if dist[u] != INFINITY && dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    dist
}
