//! Native on-disk timetable: a directory with two tab-separated tables.
//!
//! `stops.tsv`: `stop  external_id  lat  lon  min_transfer_time`, one row per
//! stop in id order, empty lat/lon when unknown.
//!
//! `trips.tsv`: `trip  external_id  seq  stop  arr  dep`, one row per call,
//! trips in id order and calls in sequence order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Stop, Timetable, TimetableBuilder};
use crate::{Error, Result, Time};

const STOPS_HEADER: &str = "stop\texternal_id\tlat\tlon\tmin_transfer_time";
const TRIPS_HEADER: &str = "trip\texternal_id\tseq\tstop\tarr\tdep";

pub fn save_native(tt: &Timetable, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("stops.tsv"), stops_table(tt))?;
    fs::write(dir.join("trips.tsv"), trips_table(tt))?;
    Ok(())
}

fn stops_table(tt: &Timetable) -> String {
    let mut out = String::from(STOPS_HEADER);
    out.push('\n');
    for (id, s) in tt.stops.iter().enumerate() {
        let coord = |c: Option<f64>| c.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{id}\t{}\t{}\t{}\t{}",
            s.external_id,
            coord(s.lat),
            coord(s.lon),
            s.min_transfer_time
        )
        .unwrap();
    }
    out
}

fn trips_table(tt: &Timetable) -> String {
    let mut out = String::from(TRIPS_HEADER);
    out.push('\n');
    for (id, trip) in tt.trips.iter().enumerate() {
        let stops = tt.trip_stops(id);
        for (seq, e) in trip.events.iter().enumerate() {
            writeln!(
                out,
                "{id}\t{}\t{seq}\t{}\t{}\t{}",
                trip.external_id, stops[seq], e.arr, e.dep
            )
            .unwrap();
        }
    }
    out
}

struct Rows<'a> {
    file: &'a Path,
    text: String,
}

impl<'a> Rows<'a> {
    fn open(file: &'a Path, header: &str) -> Result<Self> {
        let text = fs::read_to_string(file)?;
        let first = text.lines().next().unwrap_or_default();
        if first != header {
            return Err(Error::parse(file, 1, format!("expected header `{header}`")));
        }
        Ok(Rows { file, text })
    }

    /// Data rows with 1-based line numbers.
    fn each(&self, mut f: impl FnMut(usize, Vec<&str>) -> Result<()>) -> Result<()> {
        for (i, line) in self.text.lines().enumerate().skip(1) {
            if line.is_empty() {
                continue;
            }
            f(i + 1, line.split('\t').collect())?;
        }
        Ok(())
    }

    fn num<T: std::str::FromStr>(&self, line: usize, field: &str, what: &str) -> Result<T> {
        field
            .parse()
            .map_err(|_| Error::parse(self.file, line, format!("bad {what} `{field}`")))
    }
}

pub fn load_native(dir: &Path) -> Result<Timetable> {
    let mut b = TimetableBuilder::new();

    let stops_file = dir.join("stops.tsv");
    let stops = Rows::open(&stops_file, STOPS_HEADER)?;
    stops.each(|line, f| {
        if f.len() != 5 {
            return Err(Error::parse(&stops_file, line, "expected 5 fields"));
        }
        let id: usize = stops.num(line, f[0], "stop id")?;
        if id != b.num_stops() {
            return Err(Error::parse(&stops_file, line, "stop ids must be contiguous"));
        }
        let coord = |v: &str| -> Result<Option<f64>> {
            if v.is_empty() {
                Ok(None)
            } else {
                stops.num(line, v, "coordinate").map(Some)
            }
        };
        let mut stop = Stop::new(f[1]);
        stop.lat = coord(f[2])?;
        stop.lon = coord(f[3])?;
        stop.min_transfer_time = stops.num(line, f[4], "transfer time")?;
        if b.add_stop(stop) != id {
            return Err(Error::parse(&stops_file, line, "duplicate external stop id"));
        }
        Ok(())
    })?;

    let trips_file = dir.join("trips.tsv");
    let trips = Rows::open(&trips_file, TRIPS_HEADER)?;
    let mut current: Option<(usize, String)> = None;
    let mut calls: Vec<(usize, Time, Time)> = Vec::new();
    let flush = |b: &mut TimetableBuilder, cur: &Option<(usize, String)>, calls: &mut Vec<_>| {
        if let Some((_, ext)) = cur {
            b.add_trip(ext.clone(), calls)?;
        }
        calls.clear();
        Ok::<_, Error>(())
    };
    trips.each(|line, f| {
        if f.len() != 6 {
            return Err(Error::parse(&trips_file, line, "expected 6 fields"));
        }
        let id: usize = trips.num(line, f[0], "trip id")?;
        let seq: usize = trips.num(line, f[2], "sequence")?;
        let stop: usize = trips.num(line, f[3], "stop")?;
        let arr: Time = trips.num(line, f[4], "arrival")?;
        let dep: Time = trips.num(line, f[5], "departure")?;
        if current.as_ref().map(|c| c.0) != Some(id) {
            flush(&mut b, &current, &mut calls)?;
            current = Some((id, f[1].to_string()));
        }
        if seq != calls.len() {
            return Err(Error::parse(&trips_file, line, "calls must be in sequence order"));
        }
        if stop >= b.num_stops() {
            return Err(Error::DanglingReference {
                what: "stop",
                id: stop.to_string(),
            });
        }
        calls.push((stop, arr, dep));
        Ok(())
    })?;
    flush(&mut b, &current, &mut calls)?;
    Ok(b.build())
}
