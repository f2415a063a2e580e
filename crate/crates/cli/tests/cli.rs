use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn trigauge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trigauge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("trigauge-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn info_theta() {
    let out = trigauge(&["info", "theta"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["genus"], 2);
    assert_eq!(r["result"]["q"], serde_json::json!([[0, 3], [3, 0]]));
    assert_eq!(r["result"]["hyperbolic"], true);
    assert_eq!(r["config"]["graph"], "theta");
}

#[test]
fn info_from_graph_files() {
    let json = temp_file(
        "theta3.json",
        r#"{"vertices": 4, "edges": [[0,1],[0,1],[0,2],[1,3],[2,3],[2,3]]}"#,
    );
    let toml = temp_file(
        "gamma2.toml",
        "vertices = 2\nedges = [[0, 0], [0, 1], [1, 1]]\n",
    );
    let r = report(&trigauge(&["info", "--graph", json.to_str().unwrap()]));
    assert_eq!(r["result"]["genus"], 3);
    let r = report(&trigauge(&["info", toml.to_str().unwrap()]));
    assert_eq!(r["result"]["q"], serde_json::json!([[2, 1], [1, 2]]));
    assert_eq!(r["result"]["hyperbolic"], false);
}

#[test]
fn volume_theta_matches_one_third() {
    let out = trigauge(&["volume", "theta", "--samples", "1000000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out)["result"].clone();
    let (est, se) = (
        r["estimate"].as_f64().unwrap(),
        r["stderr"].as_f64().unwrap(),
    );
    assert!((est - 1.0 / 3.0).abs() <= 3.0 * se, "{est} +- {se}");
}

#[test]
fn florentino_check_theta3_passes() {
    let out = trigauge(&[
        "florentino-check",
        "theta3",
        "--samples",
        "1000",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["passed"], true);
    assert_eq!(r["result"]["twist"], serde_json::json!([2, 5]));
    assert!(r["result"]["min_class_separation"].as_f64().unwrap() > 1e-6);
}

#[test]
fn section_and_abelian_checks_pass() {
    for args in [
        &["section-check", "theta^3", "--samples", "2000"][..],
        &["abelian-check", "gamma2", "--samples", "500"][..],
        &[
            "florentino-check",
            "theta",
            "--samples",
            "200",
            "--twist",
            "1",
        ][..],
    ] {
        let out = trigauge(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn reports_are_byte_identical_on_repeat() {
    for args in [
        &["volume", "theta3", "--samples", "100000", "--seed", "3"][..],
        &[
            "section-check",
            "theta3",
            "--samples",
            "2000",
            "--seed",
            "3",
        ][..],
        &[
            "florentino-check",
            "theta3",
            "--samples",
            "300",
            "--seed",
            "3",
            "--output",
            "csv",
        ][..],
        &["abelian-check", "theta", "--samples", "300", "--seed", "3"][..],
    ] {
        let (a, b) = (trigauge(args), trigauge(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn failed_check_exits_one() {
    // No two classes are 10 apart, so every pair counts as a collision.
    let out = trigauge(&[
        "florentino-check",
        "theta",
        "--samples",
        "50",
        "--tol",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["passed"], false);
}

#[test]
fn input_errors_exit_two_with_record() {
    let bad = temp_file("bad.json", r#"{"vertices": 2, "edges": [[0,1],[0,1]]}"#);
    for args in [
        &["info", "dodecahedron"][..],
        &["info", "theta^0"][..],
        &["info", bad.to_str().unwrap()][..],
        &["section-check", "gamma2"][..],
        &["volume", "theta", "--samples", "0"][..],
        &["section-check", "theta", "--tol", "-1"][..],
        &["polytope", "theta", "--point", "0.5,0.5"][..],
        &["florentino-check", "theta", "--twist", "9"][..],
        &["info"][..],
        &["bogus", "theta"][..],
        &["volume", "theta", "--samples", "many"][..],
    ] {
        let out = trigauge(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let r = report(&out);
        assert!(r["error"]["kind"].is_string(), "{args:?}");
        assert!(r["error"]["message"].is_string());
    }
}

#[test]
fn csv_has_dotted_header_and_one_row() {
    let out = trigauge(&[
        "polytope",
        "theta",
        "--point",
        "0.5,0.5,0.5",
        "--output",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let header: Vec<&str> = lines[0].split(',').collect();
    let row: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(header.len(), row.len());
    let member = header
        .iter()
        .position(|h| *h == "result.points.0.member")
        .unwrap();
    assert_eq!(row[member], "true");
    assert!(header.contains(&"config.seed"));
}
