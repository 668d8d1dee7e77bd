use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mukai-walls"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table_matches_golden_g27() {
    let o = run(&["table", "--genus", "27"]);
    assert!(o.status.success());
    let golden = include_str!("golden/g27.md");
    assert_eq!(stdout(&o), golden);
}

#[test]
fn small_genus_is_a_usage_error() {
    let o = run(&["table", "--genus", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("genus must be ≥ 4"));
    let o = run(&["table", "--genus", "-5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_arguments_are_usage_errors() {
    assert_eq!(run(&["table"]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--genus", "27", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--range", "4..6"]).status.code(), Some(2));
}

#[test]
fn verify_ranges() {
    let o = run(&["verify", "--range", "27..27"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("18 pairs checked"));
    assert_eq!(run(&["verify", "--range", "3..5"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--range", "9..5"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--range", "four..5"]).status.code(), Some(2));
    let o = run(&["verify", "--range", "4..60", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["genera"], 57);
}

#[test]
fn duality_only_for_residue_three() {
    let o = run(&["duality", "--genus", "28"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("g ≡ 3 mod 4"));
    let o = run(&["duality", "--genus", "27"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("self-dual pairs: {(0,6),(1,2)}"));
}

#[test]
fn sod_and_cones_reports() {
    let o = run(&["sod", "--genus", "28", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sod"]["total"], 29 + 25 + 21 + 17 + 13 + 9 + 5 + 1 + 3);
    assert_eq!(v["verdict"]["kind"], "fano");
    let o = run(&["cones", "--genus", "28"]);
    let text = stdout(&o);
    assert!(text.contains("−K = O(4,25)"));
    assert!(text.contains("Fano model: M_7"));
}

#[test]
fn lattice_report() {
    let t = stdout(&run(&["lattice", "--genus", "27"]));
    assert!(t.contains("27 mod 52"));
    let t = stdout(&run(&["lattice", "--genus", "28"]));
    assert!(!t.contains("discriminant"));
}

#[test]
fn csv_output_parses() {
    let o = run(&["table", "--genus", "28", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 10);
    assert_eq!(&rows[9][1], "(1,3)");
    assert_eq!(&rows[9][2], "1/3");
}

#[test]
fn json_table_for_genus_four() {
    let o = run(&["table", "--genus", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "v1");
    assert_eq!(v["parity"], "even");
    assert_eq!(v["walls"][0]["pairs"][0]["d"], -1);
    assert_eq!(v["walls"][1]["pairs"][0]["d"], 0);
}

#[test]
fn out_file_and_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.md");
    let o = run(&["table", "--genus", "27", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), include_str!("golden/g27.md"));
    let o = run(&["verify", "--range", "4..10", "--quiet"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
}

#[test]
fn output_independent_of_thread_count() {
    let a = run(&["verify", "--range", "4..80", "--format", "json"]);
    let b = Command::new(env!("CARGO_BIN_EXE_mukai-walls"))
        .args(["verify", "--range", "4..80", "--format", "json"])
        .env("MUKAI_WALLS_THREADS", "3")
        .output()
        .unwrap();
    let c = run(&["verify", "--range", "4..80", "--format", "json", "--sequential"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}
