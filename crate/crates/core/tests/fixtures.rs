use std::fs;
use std::path::Path;

use aspirrel::corpus::{regenerate_fixtures, render_fixtures};

#[test]
fn checked_in_fixtures_match_regeneration() {
    let dir = tempfile::tempdir().unwrap();
    let written = regenerate_fixtures(dir.path()).unwrap();
    let checked_in = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for rel in &written {
        let fresh = fs::read(dir.path().join(rel)).unwrap();
        let stored = fs::read(checked_in.join(rel)).unwrap_or_else(|_| panic!("missing fixture {rel}"));
        assert!(fresh == stored, "fixture {rel} differs from regeneration");
    }
}

#[test]
fn rendering_is_deterministic() {
    assert_eq!(render_fixtures().unwrap(), render_fixtures().unwrap());
}
