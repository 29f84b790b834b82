//! Merging transit stops into a footpath graph by proximity.

use std::collections::HashMap;

use super::WalkGraph;
use crate::timetable::Stop;
use crate::{Error, Result, Time, VertexId, WALKING_SPEED};

/// A stop closer than this to its nearest vertex takes over that vertex's edges.
pub const IDENTIFY_RADIUS_M: f64 = 5.0;
/// Otherwise it is linked to nearby vertices up to this distance.
pub const LINK_RADIUS_M: f64 = 100.0;
pub const LINK_NEIGHBORS: usize = 5;

const EARTH_RADIUS_M: f64 = 6_371_008.8;

pub fn haversine_m(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (lat1, lat2) = (a.0.to_radians(), b.0.to_radians());
    let dlat = lat2 - lat1;
    let dlon = (b.1 - a.1).to_radians();
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin()
}

/// Walking time for a distance, rounded up and never below one second.
pub fn walk_seconds(meters: f64) -> Time {
    ((meters / WALKING_SPEED).ceil() as Time).max(1)
}

/// Uniform grid over an equirectangular projection with cells of
/// `LINK_RADIUS_M`, so a 3x3 block covers every candidate within the radius.
struct Grid {
    lat0: f64,
    cells: HashMap<(i64, i64), Vec<VertexId>>,
}

impl Grid {
    fn new(points: &[(f64, f64)]) -> Self {
        let lat0 = if points.is_empty() {
            0.0
        } else {
            points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64
        };
        let mut grid = Grid {
            lat0,
            cells: HashMap::new(),
        };
        for (i, &p) in points.iter().enumerate() {
            let key = grid.cell(p);
            grid.cells.entry(key).or_default().push(i);
        }
        grid
    }

    fn cell(&self, (lat, lon): (f64, f64)) -> (i64, i64) {
        let y = lat * 111_320.0;
        let x = lon * 111_320.0 * self.lat0.to_radians().cos();
        ((x / LINK_RADIUS_M).floor() as i64, (y / LINK_RADIUS_M).floor() as i64)
    }

    /// Candidates within `LINK_RADIUS_M` sorted by (distance, id).
    fn near(&self, p: (f64, f64), points: &[(f64, f64)]) -> Vec<(f64, VertexId)> {
        let (cx, cy) = self.cell(p);
        let mut out = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.cells.get(&(cx + dx, cy + dy)) {
                    for &v in ids {
                        let d = haversine_m(p, points[v]);
                        if d <= LINK_RADIUS_M {
                            out.push((d, v));
                        }
                    }
                }
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        out
    }
}

/// Embeds `stops` into a coordinate-carrying footpath graph without stops.
///
/// The result places stops at ids `0..stops.len()` and shifts the original
/// vertices after them. A stop within [`IDENTIFY_RADIUS_M`] of its nearest
/// vertex copies that vertex's in- and out-edges; otherwise it is linked
/// both ways to up to [`LINK_NEIGHBORS`] nearest vertices within
/// [`LINK_RADIUS_M`], and stays isolated if there are none.
pub fn embed_stops(g: &WalkGraph, stops: &[Stop]) -> Result<WalkGraph> {
    let coords = g
        .coords()
        .ok_or_else(|| Error::InvalidArgument("footpath graph has no coordinates".into()))?;
    let shift = stops.len();
    let mut stop_coords = Vec::with_capacity(stops.len());
    for s in stops {
        match (s.lat, s.lon) {
            (Some(lat), Some(lon)) => stop_coords.push((lat, lon)),
            _ => return Err(Error::MissingCoordinates(s.external_id.clone())),
        }
    }

    let mut edges: Vec<(VertexId, VertexId, Time)> = g
        .edge_list()
        .into_iter()
        .map(|(u, v, w)| (u + shift, v + shift, w))
        .collect();
    let grid = Grid::new(coords);
    for (p, &pc) in stop_coords.iter().enumerate() {
        let near = grid.near(pc, coords);
        match near.first() {
            Some(&(d, v)) if d < IDENTIFY_RADIUS_M => {
                edges.extend(g.out_edges(v).iter().map(|&(x, w)| (p, x + shift, w)));
                edges.extend(g.in_edges(v).iter().map(|&(x, w)| (x + shift, p, w)));
            }
            _ => {
                for &(d, v) in near.iter().take(LINK_NEIGHBORS) {
                    let w = walk_seconds(d);
                    edges.push((p, v + shift, w));
                    edges.push((v + shift, p, w));
                }
            }
        }
    }

    let mut all_coords = stop_coords;
    all_coords.extend_from_slice(coords);
    Ok(WalkGraph::from_edges(g.num_vertices() + shift, shift, &edges).with_coords(all_coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walkgraph::{dijkstra, Direction};

    /// Point `meters` north of `origin`.
    fn north(origin: (f64, f64), meters: f64) -> (f64, f64) {
        (origin.0 + meters / (EARTH_RADIUS_M.to_radians()), origin.1)
    }

    fn east(origin: (f64, f64), meters: f64) -> (f64, f64) {
        let per_deg = EARTH_RADIUS_M.to_radians() * origin.0.to_radians().cos();
        (origin.0, origin.1 + meters / per_deg)
    }

    const O: (f64, f64) = (48.85, 2.35);

    fn base() -> WalkGraph {
        let pts = vec![O, north(O, 200.0), east(O, 200.0)];
        WalkGraph::from_edges(3, 0, &[(0, 1, 180), (1, 0, 180), (0, 2, 180), (2, 0, 180)]).with_coords(pts)
    }

    fn stop_at(p: (f64, f64)) -> Stop {
        Stop::new("p").with_coords(p.0, p.1)
    }

    #[test]
    fn four_kmh_rounding() {
        assert_eq!(walk_seconds(40.0), 36);
        assert_eq!(walk_seconds(0.1), 1);
        assert!((haversine_m(O, north(O, 40.0)) - 40.0).abs() < 1e-6);
    }

    #[test]
    fn stop_close_to_vertex_is_identified() {
        let g = base();
        let e = embed_stops(&g, &[stop_at(north(O, 3.0))]).unwrap();
        let mut copied: Vec<_> = e.out_edges(0).to_vec();
        copied.sort();
        assert_eq!(copied, vec![(2, 180), (3, 180)]);
        assert_eq!(e.in_edges(0).len(), 2);
        // nothing else added besides the copied adjacency
        assert_eq!(e.num_edges(), g.num_edges() + 4);
    }

    #[test]
    fn far_stop_is_isolated() {
        let e = embed_stops(&base(), &[stop_at(north(O, -150.0))]).unwrap();
        assert_eq!(e.degree(0), 0);
    }

    #[test]
    fn stop_links_to_vertices_within_radius() {
        // about 40 m from two vertices, far from the third
        let a = north(O, 1000.5);
        let b = north(O, 1079.5);
        let g = WalkGraph::from_edges(3, 0, &[(0, 1, 72), (1, 0, 72)]).with_coords(vec![a, b, east(O, 5000.0)]);
        let e = embed_stops(&g, &[stop_at(north(O, 1040.0))]).unwrap();
        let mut out = e.out_edges(0).to_vec();
        out.sort();
        assert_eq!(out, vec![(1, 36), (2, 36)]);
        assert_eq!(e.in_edges(0).len(), 2);
    }

    #[test]
    fn missing_coordinates() {
        let err = embed_stops(&base(), &[Stop::new("nowhere")]).unwrap_err();
        assert!(matches!(err, Error::MissingCoordinates(_)));
    }

    #[test]
    fn embedding_never_lengthens_existing_paths() {
        let g = base();
        let stops = [stop_at(north(O, 100.0)), stop_at(east(O, 60.0)), stop_at(north(O, 2.0))];
        let e = embed_stops(&g, &stops).unwrap();
        for s in 0..g.num_vertices() {
            let before = dijkstra(&g, &[(s, 0)], Direction::Forward, None);
            let after = dijkstra(&e, &[(s + 3, 0)], Direction::Forward, None);
            for v in 0..g.num_vertices() {
                assert!(after[v + 3] <= before[v]);
            }
        }
    }
}
