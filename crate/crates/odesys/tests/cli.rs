use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use odesys::ResultDocument;
use serde_json::{json, Value};

fn odesys(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_odesys")).args(args).current_dir(cwd).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_result(dir: &Path) -> ResultDocument {
    serde_json::from_slice(&fs::read(dir.join("result.json")).unwrap()).unwrap()
}

#[test]
fn run_writes_result_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let o = odesys(&["run", "rail_crossing.json", "--method", "imap", "--rng-seed", "42", "--out", "out"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("out");
    let r = read_result(&out);
    assert_eq!(r.method, "imap");
    assert_eq!(r.config.rng_seed, 42);
    assert_eq!(r.design.len(), 2);
    assert_eq!(r.objectives.len(), 3);
    assert_eq!(r.preferences.len(), 3);
    assert_eq!(r.score, 100.0);
    let lines = fs::read_to_string(out.join("diagnostics.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), r.generations);
    let first: Value = serde_json::from_str(lines.lines().next().unwrap()).unwrap();
    assert_eq!(first["generation"], 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("score 100"));
}

#[test]
fn runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a", "b"] {
        let o = odesys(&["run", "floating_wind", "--method", "minmax", "--rng-seed", "3", "--gens", "30", "--out", out], dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let a = fs::read(dir.path().join("a/result.json")).unwrap();
    let b = fs::read(dir.path().join("b/result.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn cheapest_fleet_is_a_single_barge() {
    let dir = tempfile::tempdir().unwrap();
    let o = odesys(&["run", "floating_wind.json", "--method", "sodo:installation_costs", "--out", "."], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let x = read_result(dir.path()).x();
    assert_eq!(&x[..3], &[0.0, 0.0, 1.0]);
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = odesys(&["run", "rail_crossing.json", "--method", "imap", "--pop", "2"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("population_size"), "{}", stderr(&o));
    assert!(!dir.path().join("result.json").exists());

    for args in [
        &["run", "rail_crossing.json", "--method", "nsga2"][..],
        &["run", "missing.json"],
        &["run", "rail_crossing.json", "--unknown-flag"],
        &["run", "rail_crossing.json", "--method", "sodo:nothing"],
    ] {
        assert_eq!(odesys(args, dir.path()).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn infeasible_problems_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: Value = serde_json::from_str(odesys::bundled::FLOATING_WIND).unwrap();
    v["variables"][3]["upper"] = json!(1.6);
    v["variables"][4]["upper"] = json!(2.1);
    fs::write(dir.path().join("tiny.json"), v.to_string()).unwrap();
    let o = odesys(&["run", "tiny.json", "--pop", "8", "--gens", "3"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("no feasible design"));
}

#[test]
fn seeds_file_enters_the_population() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("seeds.json"), "[[0.7, 4]]").unwrap();
    let o = odesys(
        &["run", "rail_crossing", "--method", "sodo:investment_cost", "--seeds", "seeds.json", "--gens", "1"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(read_result(dir.path()).x(), vec![0.7, 4.0]);

    fs::write(dir.path().join("bad.json"), "[[0.7]]").unwrap();
    let o = odesys(&["run", "rail_crossing", "--seeds", "bad.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

const TABLE2: &str = r#"[
  {"method": "sodo:maintenance_cost", "x": [0.39, 5]},
  {"method": "sodo:travel_comfort", "x": [0.35, 5]},
  {"method": "sodo:investment_cost", "x": [0.70, 4]},
  {"method": "minmax", "x": [0.35, 5]},
  {"method": "imap", "x": [0.38, 4]}
]"#;

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn compare_fixed_alternatives() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("alts.json"), TABLE2).unwrap();
    let o = odesys(&["compare", "rail_crossing", "--alternatives", "alts.json", "--out", "cmp"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout, fs::read_to_string(dir.path().join("cmp/comparison.csv")).unwrap());
    let rows = csv_rows(&stdout);
    assert_eq!(rows[0][0], "method");
    assert_eq!(rows[0].last().unwrap(), "score");
    assert_eq!(rows[0].len(), 1 + 2 + 3 + 3 + 1);
    assert_eq!(rows[3][0], "sodo:investment_cost");
    assert_eq!(rows[3].last().unwrap(), "0");
    assert_eq!(rows[5][0], "imap");
    assert_eq!(rows[5].last().unwrap(), "100");

    let plot = fs::read_to_string(dir.path().join("cmp/plot.csv")).unwrap();
    let plot = csv_rows(&plot);
    assert_eq!(plot[0], ["stakeholder", "objective", "series", "method", "value", "preference"]);
    let markers = plot.iter().filter(|r| r[2] == "marker").count();
    let knots = plot.iter().filter(|r| r[2] == "knot").count();
    assert_eq!(markers, 5 * 3);
    assert_eq!(knots, 5 + 5 + 4);
}

#[test]
fn compare_needs_three_alternatives() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("two.json"), r#"[{"method":"imap","x":[0.38,4]},{"method":"minmax","x":[0.35,5]}]"#).unwrap();
    let o = odesys(&["compare", "rail_crossing", "--alternatives", "two.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("at least 3"), "{}", stderr(&o));
    assert_eq!(odesys(&["compare", "rail_crossing"], dir.path()).status.code(), Some(1));
}

#[test]
fn compare_auto_puts_imap_on_top() {
    let dir = tempfile::tempdir().unwrap();
    let o = odesys(&["compare", "rail_crossing", "--auto", "--rng-seed", "5", "--out", "."], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let methods: Vec<&str> = rows[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(methods, ["sodo:maintenance_cost", "sodo:travel_comfort", "sodo:investment_cost", "minmax", "imap"]);
    assert_eq!(rows[5].last().unwrap(), "100");
}

#[test]
fn des_prints_the_event_log() {
    let dir = tempfile::tempdir().unwrap();
    let o = odesys(&["des", "--fleet", "0,0,1"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let log = String::from_utf8(o.stdout).unwrap();
    let rows = csv_rows(&log);
    assert_eq!(rows[0], ["time", "vessel", "event", "anchors_remaining"]);
    assert_eq!(rows.last().unwrap(), &["123", "barge#1", "install", "0"]);
    assert_eq!(rows.iter().filter(|r| r[2] == "install").count(), 108);

    let o = odesys(&["des", "--fleet", "1,0,1", "--problem", "floating_wind", "--out", "log.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(fs::read_to_string(dir.path().join("log.csv")).unwrap().contains("small_ocv#1"));
    assert_eq!(odesys(&["des", "--fleet", "0,0"], dir.path()).status.code(), Some(1));
}

#[test]
fn validate_reports_document_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(odesys(&["validate", "floating_wind"], dir.path()).status.code(), Some(0));
    fs::write(dir.path().join("broken.json"), r#"{"variables": [], "objectives": [], "stakeholders": [], "extra": 1}"#).unwrap();
    let o = odesys(&["validate", "broken.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("schema_error"), "{}", stderr(&o));
}
