use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use pcubed::matcore::DEFAULT_TOL;
use pcubed::qutritlab::{wedge_tag, SymmetricQutrit};
use pcubed::schema::ChannelSpec;

fn pcubed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcubed")).args(args).output().expect("binary runs")
}

fn pcubed_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pcubed"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn uniform_pair(b: f64, c: f64) -> String {
    let g = |x: f64| {
        let row = |i: usize| (0..3).map(|j| if i == j { "[1,0]".to_string() } else { format!("[{x},0]") }).collect::<Vec<_>>().join(",");
        format!("[[{}],[{}],[{}]]", row(0), row(1), row(2))
    };
    format!(r#"{{"B": {}, "C": {}}}"#, g(b), g(c))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn classify_reports_tags() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [((0.2, 0.5), "Degradable"), ((0.5, 0.2), "Antidegradable"), ((0.4, 0.4), "Both"), ((0.5, -0.4), "Undegradable")];
    for ((b, c), tag) in cases {
        let path = write(dir.path(), "pair.json", &uniform_pair(b, c));
        let v: serde_json::Value = serde_json::from_str(&stdout(&pcubed(&["classify", "--input", &path]))).unwrap();
        assert_eq!(v["tag"], tag, "({b}, {c})");
        assert!(v["minEigD"].is_number());
    }
}

#[test]
fn classify_reads_stdin_and_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("verdict.json");
    let out = pcubed_stdin(&["classify", "--input", "-", "--output", out_path.to_str().unwrap()], &uniform_pair(0.2, 0.5));
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(v["tag"], "Degradable");
}

#[test]
fn bad_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(pcubed(&["classify", "--input", missing.to_str().unwrap()]).status.code(), Some(2));
    let garbage = write(dir.path(), "bad.json", "{\"B\": 1}");
    assert_eq!(pcubed(&["classify", "--input", &garbage]).status.code(), Some(2));
    let ragged = write(dir.path(), "ragged.json", r#"{"B": [[[1,0],[0,0]],[[0,0]]], "C": [[[1,0]]]}"#);
    assert_eq!(pcubed(&["classify", "--input", &ragged]).status.code(), Some(2));
    assert_eq!(pcubed(&["scan", "--grid", "3by3"]).status.code(), Some(2));
}

#[test]
fn indefinite_gram_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "indef.json", &uniform_pair(-0.7, 0.5));
    let out = pcubed(&["classify", "--input", &path]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn capacity_reports_both_sides() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "pair.json", &uniform_pair(0.2, 0.5));
    let text = stdout(&pcubed(&["capacity", "--input", &path, "--starts", "4"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let direct = v["direct"]["value_bits"].as_f64().unwrap();
    let comp = v["complementary"]["value_bits"].as_f64().unwrap();
    assert!(direct > 0.01);
    assert!(comp < 1e-6);
    assert_eq!(v["direct"]["rho"].as_array().unwrap().len(), 3);
    let single = stdout(&pcubed(&["capacity", "--input", &path, "--starts", "4", "--side", "direct"]));
    let v: serde_json::Value = serde_json::from_str(&single).unwrap();
    assert!(v.get("complementary").is_none());
}

fn scan_rows(args: &[&str]) -> Vec<csv::StringRecord> {
    let text = stdout(&pcubed(args));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["b", "c", "verdict", "q1B", "q1C", "optClass", "concavity"]
    );
    reader.records().map(Result::unwrap).collect()
}

#[test]
fn small_scan_is_deterministic() {
    let args = ["scan", "--grid", "3x3", "--capacities", "--concavity", "--starts", "4", "--probe-samples", "20", "--seed", "7"];
    let first = stdout(&pcubed(&args));
    assert_eq!(first.lines().count(), 10);
    let again = stdout(&pcubed(&[&args[..], &["--workers", "1"]].concat()));
    assert_eq!(first, again);
    let rows = scan_rows(&args);
    for row in &rows {
        let q1b: f64 = row[3].parse().unwrap();
        assert!(q1b >= 0.0);
        assert!(row[5].contains('|'));
        assert!(["Concave", "Convex", "Flat", "Neither"].contains(&&row[6]));
    }
}

#[test]
fn verdict_scan_matches_library() {
    let rows = scan_rows(&["scan", "--grid", "51x51"]);
    assert_eq!(rows.len(), 2601);
    for row in rows {
        let (b, c): (f64, f64) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        let lib = SymmetricQutrit::new(b, c).unwrap().verdict(DEFAULT_TOL).tag;
        assert_eq!(row[2], *lib.as_str(), "({b}, {c})");
        assert_eq!(wedge_tag(b, c), lib, "({b}, {c})");
        assert!(row[3].is_empty() && row[6].is_empty());
    }
}

#[test]
fn wedge_scan_stays_in_rectangle() {
    let rows = scan_rows(&["scan", "--grid", "5x5", "--rect", "wedge"]);
    assert_eq!(rows.len(), 25);
    for row in rows {
        let (b, c): (f64, f64) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        assert!((0.0..=1.0).contains(&b) && (-0.5..=0.0).contains(&c));
    }
}

fn curve_rows(kind: &str) -> Vec<(f64, Option<f64>, String)> {
    let text = stdout(&pcubed(&["curves", "--kind", kind, "--samples", "21"]));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), ["b", "c", "status"]);
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().ok(), r[2].to_string())
        })
        .collect()
}

#[test]
fn closed_form_curves_on_stdout() {
    for (kind, f) in [("dotted", (|b: f64| -b / (1.0 - 2.0 * b)) as fn(f64) -> f64), ("line3", |b| -b / (1.0 + b))] {
        let rows = curve_rows(kind);
        assert_eq!(rows.len(), 21);
        for (b, c, status) in rows {
            assert_eq!(status, "ok");
            assert!((c.unwrap() - f(b)).abs() < 1e-12, "{kind} at {b}");
        }
    }
}

#[test]
fn implicit_curve_reports_missing_roots() {
    let rows = curve_rows("curve2");
    let ok: Vec<_> = rows.iter().filter(|r| r.2 == "ok").collect();
    assert!(!ok.is_empty());
    assert!(rows.iter().any(|r| r.2 == "no_root" && r.1.is_none()));
    for (b, c, _) in ok {
        let c = c.unwrap();
        assert!(c <= -b / 2.0 && c >= -2.0 * b - 1e-12);
    }
}

#[test]
fn curves_to_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = pcubed(&["curves", "--samples", "5", "--output", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    for name in ["line1", "line4", "dotted", "dotdash", "line3", "narrowdash", "longdash", "curve2"] {
        let text = std::fs::read_to_string(dir.path().join(format!("{name}.csv"))).unwrap();
        assert_eq!(text.lines().count(), 6, "{name}");
    }
}

#[test]
fn family_output_round_trips() {
    for (args, tag) in [
        (vec!["family", "--kind", "qubit"], "Degradable"),
        (vec!["family", "--kind", "erasure", "--param", "p=0.7"], "Antidegradable"),
        (vec!["family", "--kind", "damping", "--param", "p=0.3"], "Degradable"),
        (vec!["family", "--kind", "hadamard", "--param", "n=4"], "Degradable"),
    ] {
        let text = stdout(&pcubed(&args));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["verdict"]["tag"], tag, "{args:?}");
        let spec: ChannelSpec = serde_json::from_value(v).unwrap();
        let (b, c) = spec.grams().unwrap();
        assert_eq!(pcubed::degrade::classify(&b, &c, DEFAULT_TOL).tag.as_str(), tag);
    }
    assert_eq!(pcubed(&["family", "--kind", "qubit", "--param", "bogus=1"]).status.code(), Some(2));
}
