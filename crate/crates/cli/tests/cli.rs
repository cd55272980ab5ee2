use assert_cmd::Command;
use serde_json::Value;

fn nhol() -> Command {
    Command::cargo_bin("nhol").unwrap()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = nhol().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, stdout) = run(&full);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_str(&stdout).unwrap()
}

fn schema() -> jsonschema::JSONSchema {
    let text = include_str!("../schema/report.schema.json");
    let value: Value = serde_json::from_str(text).unwrap();
    jsonschema::JSONSchema::compile(&value).unwrap()
}

fn assert_valid(doc: &Value) {
    let schema = schema();
    if let Err(errors) = schema.validate(doc) {
        let msgs: Vec<String> = errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect();
        panic!("schema violations: {msgs:#?}");
    };
}

fn strip_metadata(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("metadata");
    v
}

#[test]
fn all_methods_agree_at_3332() {
    let v = json(&[
        "count", "--p", "3", "--m", "3", "--n", "3", "--r", "2", "--method", "all",
    ]);
    assert_eq!(v["counts"]["admissible_iso"], 18);
    assert_eq!(v["formula"], 18);
    assert_eq!(v["agreement"], true);
    for m in ["formula", "triplets", "triplets_fast", "oracle"] {
        assert_eq!(v["methods"][m], 18, "{m}");
    }
    assert_valid(&v);
}

#[test]
fn open_regime_reports_no_formula() {
    let v = json(&["count", "--p", "3", "--m", "3", "--n", "2", "--r", "2"]);
    assert_eq!(v["regime"], "OPEN");
    assert!(v["formula"].is_null());
    assert_eq!(v["counts"]["admissible_iso"], 18);
    let (code, table) = run(&["count", "--p", "3", "--m", "3", "--n", "2", "--r", "2"]);
    assert_eq!(code, 0);
    assert!(table.contains("n/a"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["count", "--p", "3"]).0, 1);
    assert_eq!(
        run(&["count", "--p", "4", "--m", "2", "--n", "2", "--r", "1"]).0,
        1
    );
    assert_eq!(
        run(&["count", "--p", "3", "--m", "2", "--n", "2", "--r", "2"]).0,
        1
    );
    assert_eq!(run(&["sweep", "--bound", "9:4"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["--version"]).0, 0);
}

#[test]
fn budget_exceeded_exits_3() {
    let (code, _) = run(&[
        "count", "--p", "3", "--m", "3", "--n", "3", "--r", "2", "--budget", "10",
    ]);
    assert_eq!(code, 3);
    let (code, _) = run(&[
        "count", "--p", "3", "--m", "3", "--n", "3", "--r", "2", "--method", "oracle", "--budget",
        "1000",
    ]);
    assert_eq!(code, 3);
}

#[test]
fn injected_fault_exits_2() {
    let (code, stdout) = run(&[
        "verify",
        "--no-oracle",
        "--params",
        "3,3,1,1",
        "--inject-fault",
    ]);
    assert_eq!(code, 2);
    assert!(stdout.contains("VIOLATION"));
    let (code, _) = run(&["verify", "--no-oracle", "--params", "3,3,1,1"]);
    assert_eq!(code, 0);
}

#[test]
fn verify_with_oracle_passes() {
    let v = json(&["verify", "--params", "3,2,1,1", "--params", "3,2,2,1"]);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    assert_eq!(v["records"][1]["methods"]["oracle"], 6);
    assert_valid(&v);
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let args = [
        "sweep", "--bound", "3:6", "--bound", "5:4", "--format", "csv",
    ];
    let (c1, a) = run(&args);
    let (c2, b) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p,m,n,r,regime,n_pre,n_adm,n_iso,formula,agreement"
    );
    assert!(lines.any(|l| l == "3,3,3,2,M_LE_N,135,18,18,18,true"));
}

#[test]
fn json_is_identical_without_metadata() {
    let args = ["sweep", "--bound", "3:6"];
    let a = json(&args);
    let b = json(&args);
    assert_valid(&a);
    assert_eq!(strip_metadata(a), strip_metadata(b));
}

#[test]
fn triplets_output_validates() {
    let v = json(&[
        "triplets", "--p", "3", "--m", "2", "--n", "1", "--r", "1", "--all", "--pi",
    ]);
    assert_valid(&v);
    let rows = v["triplets"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    let iso: Vec<&Value> = rows.iter().filter(|r| r["iso_to_G"] == true).collect();
    assert_eq!(iso.len(), 2);
    for r in iso {
        assert_eq!(r["pi"].as_array().unwrap().len(), 27);
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let mut v = json(&["count", "--p", "3", "--m", "2", "--n", "1", "--r", "1"]);
    v["regime"] = Value::from("SOMETHING_ELSE");
    assert!(!schema().is_valid(&v));
    let mut v = json(&["count", "--p", "3", "--m", "2", "--n", "1", "--r", "1"]);
    v.as_object_mut().unwrap().remove("counts");
    assert!(!schema().is_valid(&v));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let (code, stdout) = run(&[
        "count",
        "--p",
        "3",
        "--m",
        "2",
        "--n",
        "1",
        "--r",
        "1",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "3,2,1,1,N_LE_M_MINUS_R,9,3,2,2,true"
    );
}
