//! Reader for the GTFS subset used here: `stops.txt`, `trips.txt`,
//! `stop_times.txt` and optionally `transfers.txt`. Calendars are not
//! interpreted; the feed is expected to hold a single service day.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use super::{Stop, Timetable, TimetableBuilder};
use crate::{Error, Result, StopId, Time};

#[derive(Debug, Clone)]
pub struct GtfsFeed {
    pub timetable: Timetable,
    /// Stop-to-stop footpaths from `transfers.txt` as `(from, to, seconds)`.
    pub footpaths: Vec<(StopId, StopId, Time)>,
}

struct Table {
    path: PathBuf,
    columns: HashMap<String, usize>,
    records: Vec<(usize, csv::StringRecord)>,
}

impl Table {
    fn read(path: PathBuf) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .flexible(true)
            .trim(csv::Trim::All)
            .from_path(&path)
            .map_err(|e| csv_error(&path, e))?;
        let columns = rdr
            .headers()
            .map_err(|e| csv_error(&path, e))?
            .iter()
            .enumerate()
            .map(|(i, h)| (h.trim_start_matches('\u{feff}').to_string(), i))
            .collect();
        let mut records = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| csv_error(&path, e))?;
            let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
            records.push((line, rec));
        }
        Ok(Table {
            path,
            columns,
            records,
        })
    }

    fn col(&self, name: &str) -> Result<usize> {
        self.columns
            .get(name)
            .copied()
            .ok_or_else(|| Error::parse(&self.path, 1, format!("missing column `{name}`")))
    }

    fn opt_col(&self, name: &str) -> Option<usize> {
        self.columns.get(name).copied()
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        kind => Error::parse(path, line, format!("{kind:?}")),
    }
}

fn field(rec: &csv::StringRecord, col: Option<usize>) -> &str {
    col.and_then(|c| rec.get(c)).unwrap_or("")
}

/// Parses `H:MM:SS`; hours may exceed 23 for service after midnight.
pub(crate) fn parse_gtfs_time(s: &str) -> Option<Time> {
    let mut it = s.split(':');
    let h: Time = it.next()?.trim().parse().ok()?;
    let m: Time = it.next()?.parse().ok()?;
    let sec: Time = it.next()?.parse().ok()?;
    if it.next().is_some() || m >= 60 || sec >= 60 {
        return None;
    }
    Some(h * 3600 + m * 60 + sec)
}

pub fn load_gtfs(dir: &Path) -> Result<GtfsFeed> {
    let mut b = TimetableBuilder::new();

    let stops = Table::read(dir.join("stops.txt"))?;
    let (id_col, lat_col, lon_col) = (stops.col("stop_id")?, stops.opt_col("stop_lat"), stops.opt_col("stop_lon"));
    for (line, rec) in &stops.records {
        let mut stop = Stop::new(field(rec, Some(id_col)));
        let coord = |c| -> Result<Option<f64>> {
            let v = field(rec, c);
            if v.is_empty() {
                return Ok(None);
            }
            v.parse()
                .map(Some)
                .map_err(|_| Error::parse(&stops.path, *line, format!("bad coordinate `{v}`")))
        };
        stop.lat = coord(lat_col)?;
        stop.lon = coord(lon_col)?;
        b.add_stop(stop);
    }

    let trips = Table::read(dir.join("trips.txt"))?;
    let trip_col = trips.col("trip_id")?;
    let mut trip_order: Vec<String> = Vec::new();
    let mut calls: HashMap<String, Vec<(u32, StopId, Time, Time)>> = HashMap::new();
    for (_, rec) in &trips.records {
        let id = field(rec, Some(trip_col)).to_string();
        if !calls.contains_key(&id) {
            calls.insert(id.clone(), Vec::new());
            trip_order.push(id);
        }
    }

    let st = Table::read(dir.join("stop_times.txt"))?;
    let cols = (
        st.col("trip_id")?,
        st.col("arrival_time")?,
        st.col("departure_time")?,
        st.col("stop_id")?,
        st.col("stop_sequence")?,
    );
    for (line, rec) in &st.records {
        let trip = field(rec, Some(cols.0));
        let stop_ext = field(rec, Some(cols.3));
        let list = calls.get_mut(trip).ok_or_else(|| Error::DanglingReference {
            what: "trip",
            id: trip.to_string(),
        })?;
        let stop = b.stop_id(stop_ext).ok_or_else(|| Error::DanglingReference {
            what: "stop",
            id: stop_ext.to_string(),
        })?;
        let time = |c| -> Result<Option<Time>> {
            let v = field(rec, Some(c));
            if v.is_empty() {
                return Ok(None);
            }
            parse_gtfs_time(v)
                .map(Some)
                .ok_or_else(|| Error::parse(&st.path, *line, format!("bad time `{v}`")))
        };
        let (arr, dep) = match (time(cols.1)?, time(cols.2)?) {
            (Some(a), Some(d)) => (a, d),
            (Some(a), None) => (a, a),
            (None, Some(d)) => (d, d),
            (None, None) => {
                return Err(Error::parse(&st.path, *line, "call without arrival or departure time"));
            }
        };
        let seq_str = field(rec, Some(cols.4));
        let seq: u32 = seq_str
            .parse()
            .map_err(|_| Error::parse(&st.path, *line, format!("bad stop_sequence `{seq_str}`")))?;
        list.push((seq, stop, arr, dep));
    }

    for id in trip_order {
        let mut list = calls.remove(&id).unwrap_or_default();
        if list.len() < 2 {
            continue;
        }
        list.sort_by_key(|c| c.0);
        let seq: Vec<_> = list.iter().map(|&(_, s, a, d)| (s, a, d)).collect();
        b.add_trip(id, &seq)?;
    }

    let mut footpaths = Vec::new();
    let transfers_path = dir.join("transfers.txt");
    if transfers_path.exists() {
        let tr = Table::read(transfers_path)?;
        let (from_col, to_col) = (tr.col("from_stop_id")?, tr.col("to_stop_id")?);
        let (type_col, time_col) = (tr.opt_col("transfer_type"), tr.opt_col("min_transfer_time"));
        for (line, rec) in &tr.records {
            if field(rec, type_col) == "3" {
                continue;
            }
            let lookup = |c| {
                let ext = field(rec, Some(c));
                b.stop_id(ext).ok_or_else(|| Error::DanglingReference {
                    what: "stop",
                    id: ext.to_string(),
                })
            };
            let (from, to) = (lookup(from_col)?, lookup(to_col)?);
            let v = field(rec, time_col);
            if v.is_empty() {
                continue;
            }
            let secs: Time = v
                .parse()
                .map_err(|_| Error::parse(&tr.path, *line, format!("bad min_transfer_time `{v}`")))?;
            if from == to {
                b.stop_mut(from).min_transfer_time = secs;
            } else {
                footpaths.push((from, to, secs.max(1)));
            }
        }
    }

    Ok(GtfsFeed {
        timetable: b.build(),
        footpaths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn write_feed(dir: &Path, stop_times: &str) {
        fs::write(
            dir.join("stops.txt"),
            "stop_id,stop_name,stop_lat,stop_lon\nA,a,48.85,2.35\nB,b,48.86,2.36\nC,c,48.87,2.37\n",
        )
        .unwrap();
        fs::write(dir.join("trips.txt"), "route_id,service_id,trip_id\nr,s,T1\nr,s,T2\n").unwrap();
        fs::write(dir.join("stop_times.txt"), stop_times).unwrap();
    }

    #[test]
    fn times_past_midnight() {
        assert_eq!(parse_gtfs_time("25:01:02"), Some(90062));
        assert_eq!(parse_gtfs_time("7:00:00"), Some(25200));
        assert_eq!(parse_gtfs_time("07:60:00"), None);
    }

    #[test]
    fn reads_feed_with_transfers() {
        let dir = tempfile::tempdir().unwrap();
        write_feed(
            dir.path(),
            "trip_id,arrival_time,departure_time,stop_id,stop_sequence\n\
             T1,08:00:00,08:00:00,A,1\nT1,08:10:00,08:11:00,B,2\n\
             T2,09:00:00,09:00:00,B,1\nT2,09:05:00,09:05:00,C,2\n",
        );
        fs::write(
            dir.path().join("transfers.txt"),
            "from_stop_id,to_stop_id,transfer_type,min_transfer_time\nB,B,2,120\nA,C,2,300\nA,B,3,\n",
        )
        .unwrap();
        let feed = load_gtfs(dir.path()).unwrap();
        let tt = &feed.timetable;
        assert_eq!(tt.stops.len(), 3);
        assert_eq!(tt.trips.len(), 2);
        assert_eq!(tt.connections.len(), 2);
        assert_eq!(tt.stops[1].min_transfer_time, 120);
        assert_eq!(feed.footpaths, vec![(0, 2, 300)]);
        assert_eq!(tt.stops[0].lat, Some(48.85));
    }

    #[test]
    fn unknown_stop_in_stop_times() {
        let dir = tempfile::tempdir().unwrap();
        write_feed(
            dir.path(),
            "trip_id,arrival_time,departure_time,stop_id,stop_sequence\nT1,08:00:00,08:00:00,Z,1\n",
        );
        assert!(matches!(load_gtfs(dir.path()), Err(Error::DanglingReference { .. })));
    }

    #[test]
    fn bad_time_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        write_feed(
            dir.path(),
            "trip_id,arrival_time,departure_time,stop_id,stop_sequence\nT1,08:00:00,08:00:00,A,1\nT1,xx,08:10:00,B,2\n",
        );
        match load_gtfs(dir.path()).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("unexpected {e}"),
        }
    }
}
