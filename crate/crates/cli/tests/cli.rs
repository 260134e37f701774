use std::path::Path;
use std::process::{Command, Output};

fn aw(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aw"))
        .env_remove("AW_CACHE")
        .arg("--cache")
        .arg(cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn compute_prints_value_and_fills_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let o = aw(&cache, &["compute", "--structure", "interval", "-n", "12", "-k", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "5");
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.lines().any(|l| l.contains(r#""n":12,"k":3,"aw":5"#)));
    // second run is served from the cache
    let o = aw(&cache, &["compute", "-n", "12", "-k", "3"]);
    assert_eq!(stdout(&o).trim(), "5");
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), text);
}

#[test]
fn cyclic_witness_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let o = aw(&cache, &["compute", "--structure", "cyclic", "-n", "17", "-k", "3", "--witness"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("4"));
    let witness: String = lines.map(|l| format!("{l}\n")).collect();
    assert!(witness.starts_with("structure=cyclic n=17 r=3"));
    let file = dir.path().join("w.txt");
    std::fs::write(&file, &witness).unwrap();
    let o = aw(&cache, &["verify", file.to_str().unwrap(), "-k", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("ok"));
}

#[test]
fn verify_reports_rainbow_progressions() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let file = dir.path().join("bad.txt");
    std::fs::write(&file, "structure=interval n=5 r=3\n1 2 3 3 3\n").unwrap();
    let o = aw(&cache, &["verify", file.to_str().unwrap(), "-k", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fail"));
    std::fs::write(&file, "not a coloring\n").unwrap();
    assert_eq!(aw(&cache, &["verify", file.to_str().unwrap(), "-k", "3"]).status.code(), Some(1));
}

#[test]
fn small_values() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let o = aw(&cache, &["compute", "-s", "cyclic", "-n", "7", "-k", "6"]);
    assert_eq!(stdout(&o).trim(), "6");
    let o = aw(&cache, &["formula", "-n", "30"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("5"));
    assert_eq!(stdout(&aw(&cache, &["sz", "-n", "9", "-k", "3"])).trim(), "5");
    assert_eq!(stdout(&aw(&cache, &["oracle", "-s", "interval", "-n", "8", "-k", "3"])).trim(), "5");
}

#[test]
fn node_budget_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let o = aw(&cache, &["--max-nodes", "10", "compute", "-n", "40", "-k", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).trim(), "inconclusive");
}

#[test]
fn table_formats() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let o = aw(&cache, &["--format", "csv", "table", "-n", "3..6", "-k", "3..4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,3,4\n3,3\n4,4\n5,4,5\n6,4,6\n");
    let o = aw(&cache, &["--format", "records", "table", "-n", "3..6", "-k", "3..4"]);
    assert_eq!(stdout(&o).lines().count(), 6);
    let o = aw(&cache, &["table", "-s", "interval", "-n", "3..5", "-k", "3", "--decades"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bounds_and_behrend() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let o = aw(&cache, &["bounds", "-n", "27", "-k", "3"]);
    assert!(stdout(&o).starts_with("[27] k=3: 5 <= aw <= 6"));
    let o = aw(&cache, &["behrend", "-n", "200", "-k", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("aw([200],4) >= "));
}

#[test]
fn corrupt_cache_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    std::fs::write(&cache, "{oops\n").unwrap();
    let o = aw(&cache, &["compute", "-n", "5", "-k", "3"]);
    assert_eq!(o.status.code(), Some(1));
}
