//! Canonical schedule CSV: header `project,activity,start`, one record per
//! activity, decimal integers, LF line endings.

use std::collections::btree_map::Entry;

use super::{ActivityKey, Schedule};
use crate::error::{Error, Result};

const HEADER: [&str; 3] = ["project", "activity", "start"];

/// Parses schedule records. Whether the activities exist in an instance is
/// checked later, when the schedule is resolved against it.
pub fn parse_schedule(text: &str, label: impl Into<String>) -> Result<Schedule> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::parse(1, e.to_string()))?
        .clone();
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(Error::parse(1, "expected header `project,activity,start`"));
    }

    let mut schedule = Schedule::new(label);
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 3 {
            return Err(Error::parse(
                line,
                format!("expected 3 fields, found {}", record.len()),
            ));
        }
        let project = record[0].to_string();
        let activity: u32 = record[1]
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid activity id `{}`", &record[1])))?;
        let start: i64 = record[2]
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid start `{}`", &record[2])))?;
        if start < 0 {
            return Err(Error::parse(
                line,
                format!("negative start {start} for activity {activity}"),
            ));
        }
        let start = u32::try_from(start)
            .map_err(|_| Error::parse(line, format!("start {start} out of range")))?;
        match schedule.starts.entry(ActivityKey { project, activity }) {
            Entry::Occupied(e) => {
                return Err(Error::parse(
                    line,
                    format!("duplicate record for activity {}", e.key()),
                ))
            }
            Entry::Vacant(e) => {
                e.insert(start);
            }
        }
    }
    Ok(schedule)
}

/// Writes the canonical form: records sorted by project name, then activity.
pub fn write_schedule(schedule: &Schedule) -> String {
    let mut out = String::from("project,activity,start\n");
    for (key, start) in &schedule.starts {
        out.push_str(&format!("{},{},{}\n", key.project, key.activity, start));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_records() {
        let s = parse_schedule("project,activity,start\np,1,0\np,2,4\n", "x").unwrap();
        assert_eq!(s.starts.len(), 2);
        assert_eq!(s.start("p", 2), Some(4));
        assert_eq!(s.label, "x");
    }

    #[test]
    fn negative_start_is_error() {
        let err = parse_schedule("project,activity,start\np,1,-1\n", "x").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn duplicate_is_error() {
        let err = parse_schedule("project,activity,start\np,1,0\np,1,3\n", "x").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn bad_header_is_error() {
        assert!(parse_schedule("a,b,c\n", "x").is_err());
    }

    #[test]
    fn canonical_order() {
        let s = parse_schedule("project,activity,start\nq,1,0\np,10,2\np,2,1\n", "x").unwrap();
        assert_eq!(
            write_schedule(&s),
            "project,activity,start\np,2,1\np,10,2\nq,1,0\n"
        );
    }

    proptest! {
        #[test]
        fn write_then_parse_is_identity(
            starts in proptest::collection::btree_map((0usize..3, 1u32..60), 0u32..500, 0..40)
        ) {
            let names = ["a", "mp_j30", "z9"];
            let mut s = Schedule::new("p");
            for ((p, a), st) in starts {
                s.starts.insert(ActivityKey::new(names[p], a), st);
            }
            let text = write_schedule(&s);
            let back = parse_schedule(&text, "p").unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(write_schedule(&back), text);
        }
    }
}
