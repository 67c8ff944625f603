use std::fs;
use std::path::{Path, PathBuf};

use schedrisk::{
    parse_instance, parse_multiproject, parse_schedule, write_instance, write_multiproject,
    write_schedule, Error,
};

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn sm_fixtures() -> Vec<(String, String)> {
    let mut out: Vec<_> = fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "sm"))
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(out.len() >= 6, "fixture corpus went missing");
    out
}

#[test]
fn every_fixture_round_trips() {
    for (name, text) in sm_fixtures() {
        let parsed = parse_instance(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let written = write_instance(&parsed);
        assert_eq!(parse_instance(&written).unwrap(), parsed, "{name}");
        // The writer reproduces the shipped layout byte for byte.
        assert_eq!(written, text, "{name}");
    }
}

#[test]
fn truncated_prefixes_never_panic() {
    for (name, text) in sm_fixtures() {
        let full = parse_instance(&text).unwrap();
        // Only a cut inside the capacity line or the closing rule can still
        // form a complete document (a capacity of 13 cut to 1 is legal).
        let body = text.trim_end_matches(['*', '\n']);
        let last_line = body.rfind('\n').unwrap() + 1;
        for cut in 0..text.len() {
            if !text.is_char_boundary(cut) {
                continue;
            }
            match parse_instance(&text[..cut]) {
                Ok(inst) => {
                    assert!(cut > last_line, "{name} accepted a prefix cut at {cut}");
                    assert!(inst.validate().is_ok());
                    assert_eq!(inst.activities, full.activities, "{name} at {cut}");
                }
                Err(e) => assert!(!e.to_string().is_empty(), "{name} at {cut}"),
            }
        }
    }
}

#[test]
fn truncation_reports_a_line() {
    let text = fs::read_to_string(fixture_dir().join("j30_1.sm")).unwrap();
    let cut = text.find("PRECEDENCE RELATIONS").unwrap();
    match parse_instance(&text[..cut]).unwrap_err() {
        Error::Parse { line, message } => {
            assert!(line > 0);
            assert!(message.contains("end of input"), "{message}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn bundle_round_trips() {
    let dir = fixture_dir();
    let descriptor = fs::read_to_string(dir.join("mp_j30_a2.mp")).unwrap();
    let load = |p: &str| fs::read_to_string(dir.join(p)).map_err(|e| e.to_string());
    let problem = parse_multiproject(&descriptor, load).unwrap();
    assert_eq!(problem.projects.len(), 2);
    assert_eq!(problem.projects[1].arrival, 5);
    assert_eq!(problem.globals.len(), 2);
    let again = parse_multiproject(&write_multiproject(&problem), load).unwrap();
    assert_eq!(again, problem);
}

#[test]
fn bundle_with_missing_file_is_unresolved() {
    let descriptor = "problem p\nproject a nowhere.sm 0\n";
    let err = parse_multiproject(descriptor, |_| Err("no such file".into())).unwrap_err();
    assert!(matches!(err, Error::Unresolved { .. }), "{err:?}");
}

#[test]
fn schedule_fixtures_round_trip() {
    for name in ["overlap_ok.csv", "overlap_bad.csv"] {
        let text = fs::read_to_string(fixture_dir().join(name)).unwrap();
        let s = parse_schedule(&text, name).unwrap();
        let again = parse_schedule(&write_schedule(&s), name).unwrap();
        assert_eq!(again, s);
    }
}
