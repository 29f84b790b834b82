//! Label files.
//!
//! Binary layout, little-endian:
//!
//! ```text
//! magic      8 bytes  "THLHUBLB"
//! version    u32      FORMAT_VERSION
//! vertices   u32      total vertex count of the walking graph
//! labeled    u32      vertices 0..labeled carry labels
//! per labeled vertex v:
//!   out_len u32, out_len × (hub u32, d(v, hub) u32)
//!   in_len  u32, in_len  × (hub u32, d(hub, v) u32)
//! ```
//!
//! Lists are stored sorted by distance, then hub. Loading checks the
//! ordering and that every labeled vertex is its own hub at distance 0.
//!
//! A text form with lines `o <v> <hub> <dist>` and `i <v> <hub> <dist>` can
//! be imported as well.

use std::fs;
use std::path::Path;

use super::{HubEntry, HubLabeling};
use crate::{Error, Result, Time};

const MAGIC: &[u8; 8] = b"THLHUBLB";
pub const FORMAT_VERSION: u32 = 1;

pub fn save_labeling(hl: &HubLabeling, path: &Path) -> Result<()> {
    let mut out = Vec::with_capacity(20 + 8 * (hl.total_out() + hl.total_in()));
    out.extend_from_slice(MAGIC);
    for x in [FORMAT_VERSION, hl.num_vertices() as u32, hl.num_labeled() as u32] {
        out.extend_from_slice(&x.to_le_bytes());
    }
    for (o, i) in hl.out_lists().zip(hl.in_lists()) {
        for list in [o, i] {
            out.extend_from_slice(&(list.len() as u32).to_le_bytes());
            for e in list {
                out.extend_from_slice(&e.node.to_le_bytes());
                out.extend_from_slice(&e.dist.to_le_bytes());
            }
        }
    }
    fs::write(path, out)?;
    Ok(())
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn u32(&mut self) -> Result<u32> {
        let end = self.pos + 4;
        let chunk = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::CorruptLabels(format!("truncated at byte {}", self.pos)))?;
        self.pos = end;
        Ok(u32::from_le_bytes(chunk.try_into().unwrap()))
    }
}

pub fn load_labeling(path: &Path) -> Result<HubLabeling> {
    let bytes = fs::read(path)?;
    if !bytes.starts_with(MAGIC) {
        return Err(Error::CorruptLabels("missing magic".into()));
    }
    let mut r = Reader {
        bytes: &bytes,
        pos: MAGIC.len(),
    };
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let n = r.u32()? as usize;
    let labeled = r.u32()? as usize;
    if labeled > n {
        return Err(Error::CorruptLabels("more labeled vertices than vertices".into()));
    }
    let mut out = Vec::with_capacity(labeled);
    let mut inn = Vec::with_capacity(labeled);
    for v in 0..labeled {
        for side in [&mut out, &mut inn] {
            let len = r.u32()? as usize;
            if len > (bytes.len() - r.pos) / 8 {
                return Err(Error::CorruptLabels(format!("list of vertex {v} overruns the file")));
            }
            let mut list = Vec::with_capacity(len);
            for _ in 0..len {
                list.push(HubEntry {
                    node: r.u32()?,
                    dist: r.u32()?,
                });
            }
            side.push(list);
        }
    }
    if r.pos != bytes.len() {
        return Err(Error::CorruptLabels("trailing bytes".into()));
    }
    validate(n, &out, &inn)?;
    Ok(HubLabeling::from_lists(n, out, inn))
}

fn validate(n: usize, out: &[Vec<HubEntry>], inn: &[Vec<HubEntry>]) -> Result<()> {
    for (v, (o, i)) in out.iter().zip(inn).enumerate() {
        for (name, list) in [("out", o), ("in", i)] {
            if list.iter().any(|e| e.vertex() >= n) {
                return Err(Error::CorruptLabels(format!("{name}-hub of vertex {v} out of range")));
            }
            if !list.windows(2).all(|w| (w[0].dist, w[0].node) < (w[1].dist, w[1].node)) {
                return Err(Error::CorruptLabels(format!("{name}-hubs of vertex {v} are not sorted")));
            }
            if !list.contains(&HubEntry { node: v as u32, dist: 0 }) {
                return Err(Error::CorruptLabels(format!("vertex {v} lacks its own {name}-hub")));
            }
        }
    }
    Ok(())
}

/// Imports `o <v> <hub> <dist>` / `i <v> <hub> <dist>` lines for a graph
/// with `num_vertices` vertices. Missing self-hubs are added.
pub fn load_labeling_text(path: &Path, num_vertices: usize) -> Result<HubLabeling> {
    let text = fs::read_to_string(path)?;
    let mut out: Vec<Vec<HubEntry>> = Vec::new();
    let mut inn: Vec<Vec<HubEntry>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::parse(path, i + 1, "expected `o|i vertex hub dist`");
        if f.len() != 4 {
            return Err(bad());
        }
        let v: usize = f[1].parse().map_err(|_| bad())?;
        let hub: u32 = f[2].parse().map_err(|_| bad())?;
        let dist: Time = f[3].parse().map_err(|_| bad())?;
        if v >= num_vertices || hub as usize >= num_vertices {
            return Err(Error::parse(path, i + 1, "vertex out of range"));
        }
        if v >= out.len() {
            out.resize(v + 1, Vec::new());
            inn.resize(v + 1, Vec::new());
        }
        match f[0] {
            "o" => out[v].push(HubEntry { node: hub, dist }),
            "i" => inn[v].push(HubEntry { node: hub, dist }),
            _ => return Err(bad()),
        }
    }
    for side in [&mut out, &mut inn] {
        for (v, l) in side.iter_mut().enumerate() {
            if !l.iter().any(|e| e.vertex() == v) {
                l.push(HubEntry { node: v as u32, dist: 0 });
            }
            l.sort_unstable_by_key(|e| (e.node, e.dist));
            l.dedup_by_key(|e| e.node);
        }
    }
    Ok(HubLabeling::from_lists(num_vertices, out, inn))
}
