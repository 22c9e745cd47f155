use std::io::Write;
use std::process::Command;

use latsize::family::{make_family_simplex, FamilyParams};
use latsize_cli::document::PolytopeDocument;
use latsize_cli::{exit, run, Outcome};
use num_bigint::BigInt;
use proptest::prelude::*;
use serde_json::Value;
use tempfile::NamedTempFile;

fn doc_file(json: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

fn family_file(p: &[u64]) -> NamedTempFile {
    let t = make_family_simplex(&FamilyParams::from_u64(p).unwrap());
    doc_file(&PolytopeDocument::from_polytope(&t, None).to_json().to_string())
}

fn latsize(args: &[&str]) -> Outcome {
    run(std::iter::once("latsize").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = latsize(&all);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).unwrap())
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

const SIMPLEX3: &str = r#"{"dim":3,"points":[[0,0,0],[1,0,0],[0,1,0],[0,0,1]]}"#;
const SIMPLEX2: &str = r#"{"dim":2,"points":[[0,0],[1,0],[0,1]]}"#;
const TWO_SIMPLEX2: &str = r#"{"dim":2,"points":[[0,0],[2,0],[0,2]]}"#;
const CUBE3: &str = r#"{"dim":3,"points":[[0,0,0],[1,0,0],[0,1,0],[0,0,1],[1,1,0],[1,0,1],[0,1,1],[1,1,1]]}"#;

#[test]
fn width_command() {
    let f = family_file(&[1, 3]);
    let (code, v) = json(&["width", path(&f)]);
    assert_eq!(code, exit::OK);
    assert_eq!(v["width"], 1);
    assert_eq!(v["witness"], serde_json::json!([0, 0, 1]));

    let f = doc_file(SIMPLEX3);
    assert_eq!(json(&["width", path(&f)]).1["width"], 1);
    let f = doc_file(TWO_SIMPLEX2);
    let (_, v) = json(&["width", path(&f), "--all"]);
    assert_eq!(v["width"], 2);
    assert_eq!(v["minimizers"].as_array().unwrap().len(), 3);
}

#[test]
fn lsdelta_command() {
    let f = family_file(&[1, 3]);
    let (code, v) = json(&["lsdelta", path(&f), "--certify"]);
    assert_eq!(code, exit::OK);
    assert_eq!(v["ls_delta"], 3);
    assert_eq!(v["certified"], true);
    assert_eq!(v["certify"], "ok");

    let f = family_file(&[1, 1, 4]);
    let (_, v) = json(&["lsdelta", path(&f)]);
    assert_eq!(v["ls_delta"], 3);
    assert_eq!(v["lower_bound"], 3);

    let f = doc_file(SIMPLEX2);
    assert_eq!(json(&["lsdelta", path(&f)]).1["ls_delta"], 1);
}

#[test]
fn lscube_command() {
    let f = family_file(&[1, 3]);
    assert_eq!(json(&["lscube", path(&f), "--certify"]).1["ls_cube"], 2);
    let f = doc_file(CUBE3);
    assert_eq!(json(&["lscube", path(&f)]).1["ls_cube"], 1);
    let f = family_file(&[3, 6]);
    assert_eq!(json(&["lscube", path(&f)]).1["ls_cube"], 3);
}

#[test]
fn upper_bound_flag() {
    let f = family_file(&[1, 3]);
    let out = latsize(&["lsdelta", path(&f), "--upper-bound", "2"]);
    assert_eq!(out.code, exit::USAGE);
    assert!(out.stderr.contains("upper bound"));
    assert_eq!(json(&["lsdelta", path(&f), "--upper-bound", "3"]).1["ls_delta"], 3);
}

#[test]
fn family_command() {
    let (code, v) = json(&["family", "2", "6"]);
    assert_eq!(code, exit::OK);
    assert_eq!((v["alpha"].clone(), v["k"].clone()), (2.into(), 1.into()));
    assert_eq!(v["in_scope"], true);
    assert_eq!((v["ls_delta"].clone(), v["ls_cube"].clone()), (4.into(), 3.into()));

    let (code, v) = json(&["family", "3", "4"]);
    assert_eq!(code, exit::OK);
    assert_eq!(v["in_scope"], false);
    assert!(v["scope"].as_str().unwrap().contains("p_d < α²−α"));
    assert!(v["ls_delta"].is_null());
    assert_eq!(v["ls_delta_search"], 4);
    assert_eq!(v["ls_cube_search"], 3);

    let (_, v) = json(&["family", "1", "3", "--search"]);
    assert_eq!((v["alpha"].clone(), v["k"].clone()), (1.into(), 0.into()));
    assert_eq!((v["ls_delta"].clone(), v["ls_cube"].clone()), (3.into(), 2.into()));
    assert_eq!(v["match"], true);
}

#[test]
fn family_document_round_trip() {
    let (_, v) = json(&["family", "2", "1", "7"]);
    let doc = PolytopeDocument::parse(&v["polytope"].to_string()).unwrap();
    let t = make_family_simplex(&FamilyParams::from_u64(&[2, 1, 7]).unwrap());
    assert_eq!(doc.to_polytope(), t);
    assert_eq!(doc.name.as_deref(), Some("T_{2,1,7}"));
}

#[test]
fn lemmas_command() {
    for p in [["1", "3"], ["2", "6"]] {
        let (code, v) = json(&["lemmas", p[0], p[1]]);
        assert_eq!(code, exit::OK);
        assert_eq!(v["a_d_restriction"], "pass");
        assert_eq!(v["forced_width"], "pass");
    }
    let (_, v) = json(&["lemmas", "3", "9"]);
    assert_eq!(v["a_d_minus_one"], serde_json::json!([[2, -1, 2]]));
    assert_eq!(latsize(&["lemmas", "3", "1"]).code, exit::USAGE);
}

#[test]
fn verify_formats_agree() {
    let args = ["verify", "--p", "1:3", "--p", "2:6", "--in-scope-only", "--oracle", "--entry-bound", "2"];
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let csv_out = latsize(&csv_args);
    let (code, v) = json(&args);
    assert_eq!(code, exit::OK);
    assert_eq!(csv_out.code, exit::OK);

    let rows = v.as_array().unwrap();
    let mut reader = csv::Reader::from_reader(csv_out.stdout.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), rows.len());
    for (rec, row) in records.iter().zip(rows) {
        let obj = row.as_object().unwrap();
        assert_eq!(obj.keys().cloned().collect::<Vec<_>>(), header);
        for (cell, value) in rec.iter().zip(obj.values()) {
            let expected = match value {
                Value::Null => String::new(),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            assert_eq!(cell, expected);
        }
        assert_eq!(obj["match"], true);
    }
    assert_eq!(
        &header[..9],
        [
            "params",
            "alpha",
            "k",
            "in_scope",
            "ls_delta_formula",
            "ls_delta_search",
            "ls_cube_formula",
            "ls_cube_search",
            "match"
        ]
    );
}

#[test]
fn verify_empty_sweep() {
    let out = latsize(&["verify", "--format", "csv"]);
    assert_eq!(out.code, exit::OK);
    assert_eq!(out.stdout.lines().count(), 1);
    let (code, v) = json(&["verify", "--p", "3", "--p", "2:5", "--in-scope-only"]);
    assert_eq!(code, exit::OK);
    assert_eq!(v, serde_json::json!([]));
}

#[test]
fn verify_is_thread_independent() {
    let base = ["verify", "--p", "1:2", "--p", "2:10", "--format", "csv"];
    let one = latsize(&[&base[..], &["--threads", "1"]].concat());
    let eight = latsize(&[&base[..], &["--threads", "8"]].concat());
    assert_eq!(one, eight);
}

#[test]
fn usage_errors_exit_one() {
    let bad = doc_file(r#"{"dim":2,"points":[[0,0],[1]]}"#);
    assert_eq!(latsize(&["width", path(&bad)]).code, exit::USAGE);
    assert_eq!(latsize(&["width", "/nonexistent/file.json"]).code, exit::USAGE);
    assert_eq!(latsize(&["frobnicate"]).code, exit::USAGE);
    assert_eq!(latsize(&["verify", "--p", "4:2"]).code, exit::USAGE);
    assert_eq!(latsize(&["--node-budget", "0", "family", "1", "3"]).code, exit::USAGE);
    let seg = doc_file(r#"{"dim":2,"points":[[0,0],[3,1]]}"#);
    assert_eq!(latsize(&["lsdelta", path(&seg)]).code, exit::USAGE);
    let help = latsize(&["--help"]);
    assert_eq!(help.code, exit::OK);
    assert!(help.stdout.contains("lsdelta"));
}

#[test]
fn budget_exit_code() {
    let f = family_file(&[1, 12]);
    let out = latsize(&["--node-budget", "1", "lsdelta", path(&f)]);
    assert_eq!(out.code, exit::BUDGET);
    assert!(out.stdout.contains("certified: false"));
    let out = latsize(&["--node-budget", "1", "verify", "--p", "1", "--p", "12"]);
    assert_eq!(out.code, exit::BUDGET);
    assert!(out.stdout.contains("budget_exceeded"));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let out = latsize(&["family", "1", "3", "--format", "json", "--output", target.to_str().unwrap()]);
    assert_eq!(out.code, exit::OK);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["ls_delta"], 3);
}

#[test]
fn environment_and_flag_precedence() {
    let f = family_file(&[1, 12]);
    let bin = env!("CARGO_BIN_EXE_latsize");
    let status = Command::new(bin)
        .args(["lsdelta", path(&f)])
        .env("LATSIZE_NODE_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(exit::BUDGET));
    let status = Command::new(bin)
        .args(["lsdelta", path(&f), "--node-budget", "100000000"])
        .env("LATSIZE_NODE_BUDGET", "1")
        .env("LATSIZE_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(exit::OK));
    assert!(String::from_utf8_lossy(&status.stdout).contains("ls_delta: 8"));
}

#[test]
fn stdin_input() {
    let bin = env!("CARGO_BIN_EXE_latsize");
    let mut child = Command::new(bin)
        .args(["width", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(SIMPLEX3.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("width: 1\n"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn documents_round_trip(
        pts in (1usize..=4).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec(any::<i64>(), n), 1..6)
        })
    ) {
        let points: Vec<Vec<BigInt>> =
            pts.iter().map(|p| p.iter().map(|&x| BigInt::from(x) * 1_000_003).collect()).collect();
        let doc = PolytopeDocument { dim: points[0].len(), points, name: Some("p".into()) };
        let back = PolytopeDocument::parse(&doc.to_json().to_string()).unwrap();
        prop_assert_eq!(back, doc);
    }
}
