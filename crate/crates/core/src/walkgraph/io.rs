//! Footpath graph files.
//!
//! Text form: optional `p <vertices> <stops>` header, then one `u v seconds`
//! edge per line; `#` starts a comment. Coordinates live in a separate file
//! of `v lat lon` lines.
//!
//! Binary form: magic `THLWGRF1`, then little-endian `u32` vertex count,
//! stop count and edge count, followed by `(u32 u, u32 v, u32 seconds)`
//! triples.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::WalkGraph;
use crate::{Error, Result, Time, VertexId};

const MAGIC: &[u8; 8] = b"THLWGRF1";

/// Loads either form, sniffing the binary magic.
pub fn load_graph(path: &Path, coords: Option<&Path>) -> Result<WalkGraph> {
    let bytes = fs::read(path)?;
    let g = if bytes.starts_with(MAGIC) {
        decode_binary(path, &bytes)?
    } else {
        parse_text(path, &String::from_utf8_lossy(&bytes))?
    };
    match coords {
        Some(c) => attach_coords(g, c),
        None => Ok(g),
    }
}

pub fn load_graph_text(path: &Path, coords: Option<&Path>) -> Result<WalkGraph> {
    let g = parse_text(path, &fs::read_to_string(path)?)?;
    match coords {
        Some(c) => attach_coords(g, c),
        None => Ok(g),
    }
}

fn parse_text(path: &Path, text: &str) -> Result<WalkGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(VertexId, VertexId, Time)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::parse(path, i + 1, format!("bad number `{s}`")))
        };
        match f.as_slice() {
            ["p", n, s] => header = Some((num(n)?, num(s)?)),
            [u, v, w] => {
                let w = num(w)?;
                if w == 0 || w > Time::MAX as usize / 2 {
                    return Err(Error::parse(path, i + 1, "weights must be positive seconds"));
                }
                edges.push((num(u)?, num(v)?, w as Time));
            }
            _ => return Err(Error::parse(path, i + 1, "expected `u v seconds`")),
        }
    }
    let max_id = edges.iter().map(|e| e.0.max(e.1) + 1).max().unwrap_or(0);
    let (n, stops) = header.unwrap_or((max_id, 0));
    if max_id > n || stops > n {
        return Err(Error::parse(path, 1, "vertex id beyond declared vertex count"));
    }
    Ok(WalkGraph::from_edges(n, stops, &edges))
}

fn attach_coords(g: WalkGraph, path: &Path) -> Result<WalkGraph> {
    let text = fs::read_to_string(path)?;
    let mut coords = vec![(f64::NAN, f64::NAN); g.num_vertices()];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::parse(path, i + 1, "expected `v lat lon`");
        if f.len() != 3 {
            return Err(bad());
        }
        let v: usize = f[0].parse().map_err(|_| bad())?;
        if v >= coords.len() {
            return Err(Error::parse(path, i + 1, format!("vertex {v} out of range")));
        }
        coords[v] = (f[1].parse().map_err(|_| bad())?, f[2].parse().map_err(|_| bad())?);
    }
    if let Some(v) = coords.iter().position(|c| c.0.is_nan()) {
        return Err(Error::parse(path, 0, format!("vertex {v} has no coordinates")));
    }
    Ok(g.with_coords(coords))
}

pub fn save_graph_text(g: &WalkGraph, path: &Path, coords: Option<&Path>) -> Result<()> {
    let mut out = format!("p {} {}\n", g.num_vertices(), g.num_stops());
    for (u, v, w) in g.edge_list() {
        writeln!(out, "{u} {v} {w}").unwrap();
    }
    fs::write(path, out)?;
    if let (Some(cp), Some(c)) = (coords, g.coords()) {
        let mut out = String::new();
        for (v, (lat, lon)) in c.iter().enumerate() {
            writeln!(out, "{v} {lat} {lon}").unwrap();
        }
        fs::write(cp, out)?;
    }
    Ok(())
}

pub fn save_graph_binary(g: &WalkGraph, path: &Path) -> Result<()> {
    let edges = g.edge_list();
    let mut out = Vec::with_capacity(20 + 12 * edges.len());
    out.extend_from_slice(MAGIC);
    for x in [g.num_vertices(), g.num_stops(), edges.len()] {
        out.extend_from_slice(&(x as u32).to_le_bytes());
    }
    for (u, v, w) in edges {
        for x in [u as u32, v as u32, w] {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn load_graph_binary(path: &Path) -> Result<WalkGraph> {
    decode_binary(path, &fs::read(path)?)
}

fn decode_binary(path: &Path, bytes: &[u8]) -> Result<WalkGraph> {
    let corrupt = |msg: &str| Error::parse(path, 0, msg.to_string());
    if !bytes.starts_with(MAGIC) {
        return Err(corrupt("missing graph magic"));
    }
    let words: Vec<u32> = bytes[MAGIC.len()..]
        .chunks(4)
        .map(|c| <[u8; 4]>::try_from(c).map(u32::from_le_bytes))
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| corrupt("truncated graph file"))?;
    if words.len() < 3 {
        return Err(corrupt("truncated graph header"));
    }
    let (n, stops, m) = (words[0] as usize, words[1] as usize, words[2] as usize);
    if words.len() != 3 + 3 * m {
        return Err(corrupt("edge count does not match file size"));
    }
    let edges: Vec<_> = words[3..]
        .chunks_exact(3)
        .map(|c| (c[0] as usize, c[1] as usize, c[2]))
        .collect();
    if stops > n || edges.iter().any(|e| e.0 >= n || e.1 >= n || e.2 == 0) {
        return Err(corrupt("edge out of range"));
    }
    Ok(WalkGraph::from_edges(n, stops, &edges))
}
