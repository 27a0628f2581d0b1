use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use yc_cli::exit;

fn yc(args: &[&str]) -> Output {
    yc_env(args, None)
}

fn yc_env(args: &[&str], precision: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_yc"));
    cmd.args(args).env_remove("YC_PRECISION");
    if let Some(p) = precision {
        cmd.env("YC_PRECISION", p);
    }
    cmd.output().expect("yc runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn strip_times(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("wall_time_ms");
            m.values_mut().for_each(strip_times);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_times),
        _ => {}
    }
}

fn path(p: &Path) -> &str {
    p.to_str().expect("UTF-8 path")
}

const SMALL: [&str; 5] = ["certify", "--omega", "3..6", "--n-max", "40"];

#[test]
fn exit_codes() {
    assert_eq!(code(&yc(&["certify", "--omega", "3", "--n-max", "12"])), exit::CERTIFIED);
    assert_eq!(code(&yc(&["falsify", "--omega", "16", "--n", "1850..1870"])), exit::FALSIFIED);
    assert_eq!(code(&yc(&["falsify", "--omega", "3", "--n", "12..60"])), exit::CERTIFIED);
    assert_eq!(code(&yc(&["window", "--omega", "4", "--n", "14"])), exit::CERTIFIED);
    assert_eq!(code(&yc(&["--help"])), 0);
    for bad in [
        &["certify", "--omega", "2"][..],
        &["certify", "--omega", "7..5"],
        &["certify", "--omega", "3", "--precision", "20"],
        &["certify", "--omega", "3", "--n-max", "5"],
        &["certify", "--omega", "3", "--q", "0"],
        &["falsify", "--omega", "3..4"],
        &["falsify", "--omega", "3", "--n", "40..20"],
        &["threshold", "--n", "2"],
        &["verify", "/nonexistent/report.json"],
        &["frobnicate"],
    ] {
        let o = yc(bad);
        let expected = if bad[0] == "verify" { exit::INCONCLUSIVE } else { exit::USAGE };
        assert_eq!(code(&o), expected, "{bad:?}");
    }
}

#[test]
fn output_is_deterministic_up_to_timings() {
    let mut a = json(&yc(&SMALL));
    let mut b = json(&yc(&SMALL));
    strip_times(&mut a);
    strip_times(&mut b);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn thread_count_does_not_change_results() {
    let mut one: Vec<&str> = SMALL.to_vec();
    one.extend(["--threads", "1"]);
    let mut a = json(&yc(&one));
    let mut b = json(&yc(&SMALL));
    assert_eq!(a["verdict"], b["verdict"]);
    strip_times(&mut a);
    strip_times(&mut b);
    assert_eq!(a["certificates"], b["certificates"]);
    assert_eq!(a["omegas"], b["omegas"]);
}

#[test]
fn out_directory_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<&str> = SMALL.to_vec();
    args.extend(["--out", path(dir.path())]);
    let o = yc(&args);
    assert_eq!(code(&o), exit::CERTIFIED);
    assert!(stdout(&o).contains("CERTIFIED"));
    let file = dir.path().join("certify.json");
    assert!(file.exists());

    let v = yc(&["verify", path(&file)]);
    assert_eq!(code(&v), exit::CERTIFIED, "{}", stdout(&v));
    assert!(stdout(&v).contains("replayed"));

    // A tampered witness constant no longer replays.
    let mut report: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let certs = report["certificates"].as_array_mut().unwrap();
    let table = certs
        .iter_mut()
        .find(|c| c["witness"]["rows"].is_array())
        .expect("a witness table");
    table["witness"]["rows"][0]["c"] = Value::String("1000".into());
    let bad = dir.path().join("tampered.json");
    std::fs::write(&bad, serde_json::to_string(&report).unwrap()).unwrap();
    let v = yc(&["verify", path(&bad)]);
    assert_ne!(code(&v), exit::CERTIFIED);
    assert!(stdout(&v).contains("FAIL"));
}

#[test]
fn report_writes_json_and_markdown() {
    let dir = tempfile::tempdir().unwrap();
    let o = yc(&["report", "--omega", "3..4", "--n-max", "30", "--out", path(dir.path())]);
    assert_eq!(code(&o), exit::CERTIFIED);
    let md = std::fs::read_to_string(dir.path().join("report.md")).unwrap();
    assert!(md.contains("Witness table"));
    assert!(md.contains("| 12 | 5/1408 |"));
    assert!(dir.path().join("report.json").exists());
    assert_eq!(code(&yc(&["report", "--omega", "3"])), exit::USAGE);
}

#[test]
fn falsify_report_replays() {
    let dir = tempfile::tempdir().unwrap();
    let o = yc(&["falsify", "--omega", "16", "--n", "1800..1900", "--out", path(dir.path())]);
    assert_eq!(code(&o), exit::FALSIFIED);
    let file = dir.path().join("falsify.json");
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(r["first_empty"]["n"], 1859);
    let v = yc(&["verify", path(&file)]);
    assert_eq!(code(&v), exit::FALSIFIED, "{}", stdout(&v));
}

#[test]
fn precision_from_flag_then_environment() {
    let args = ["certify", "--omega", "3", "--n-max", "12"];
    assert_eq!(json(&yc(&args))["config"]["precision"], 60);
    assert_eq!(json(&yc_env(&args, Some("45")))["config"]["precision"], 45);
    let mut flagged = args.to_vec();
    flagged.extend(["--precision", "50"]);
    assert_eq!(json(&yc_env(&flagged, Some("45")))["config"]["precision"], 50);
    assert_eq!(code(&yc_env(&args, Some("lots"))), exit::USAGE);
    assert_eq!(code(&yc_env(&args, Some("10"))), exit::USAGE);
}

#[test]
fn small_commands() {
    let w = json(&yc(&["window", "--omega", "4", "--n", "14"]));
    assert_eq!(w["window"]["status"]["witness"], "3/1300");
    let t = json(&yc(&["threshold", "--n", "3"]));
    assert!((t["approx"].as_f64().unwrap() - 43.8232).abs() < 1e-4);
    let md = stdout(&yc(&["falsify", "--omega", "16", "--n", "1850..1870", "--format", "md"]));
    assert!(md.contains("n = 1859"));
}
