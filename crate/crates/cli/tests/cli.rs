use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use repairaf::io::parse_csv_relation;
use repairaf::reductions::encode_sat_somerepair;
use repairaf_cli::main_with;
use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, Value, Value) {
    let argv = std::iter::once("repairaf").chain(args.iter().copied());
    let (code, out, err) = main_with(argv, None);
    let parse = |s: &str| if s.is_empty() { Value::Null } else { serde_json::from_str(s).unwrap() };
    (code, parse(&out), parse(&err))
}

fn ok(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?} failed: {err}");
    out
}

fn fails(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    assert!(out.is_null(), "{args:?} printed {out}");
    assert_eq!(err["exit_code"], code);
    (code, err)
}

#[test]
fn third_example_repairs_and_cautious() {
    let dir = fixture("example3");
    let out = ok(&["--dir", &dir, "repairs"]);
    assert_eq!(out["command"], "repairs");
    assert_eq!(out["answer"], true);
    assert_eq!(out["repairs"], serde_json::json!([["t"]]));
    assert_eq!(out["instance_digest"].as_str().unwrap().len(), 64);
    assert_eq!(ok(&["--dir", &dir, "cautious", "t"])["answer"], true);
    assert_eq!(ok(&["--dir", &dir, "brave", "s"])["answer"], false);
    let brave = ok(&["--dir", &dir, "brave", "t"]);
    assert_eq!(brave["repairs"], serde_json::json!([["t"]]));
}

#[test]
fn empty_support_has_no_repair() {
    let out = ok(&["--dir", &fixture("empty_support"), "exists"]);
    assert_eq!(out["answer"], false);
    assert_eq!(out["repairs"], serde_json::json!([]));
    assert_eq!(out["removed_tuples"], serde_json::json!(["s"]));
}

#[test]
fn explicit_db_and_deps_flags() {
    let csv = fixtures().join("example1/T.csv");
    let deps = fixtures().join("example1/deps.txt");
    let out = ok(&[
        "--db",
        csv.to_str().unwrap(),
        "--deps",
        deps.to_str().unwrap(),
        "repairs",
    ]);
    assert_eq!(out["repairs"], serde_json::json!([["s", "u"], ["s", "v"], ["t", "u"]]));
    assert_eq!(out["stats"]["route"], "fd-only");
    assert_eq!(
        ok(&["--dir", &fixture("example1"), "size-atleast", "3"])["answer"],
        false
    );
    let named = format!("T={}", csv.display());
    let out = ok(&["--db", &named, "--deps", deps.to_str().unwrap(), "oracle"]);
    assert_eq!(out["repairs"].as_array().unwrap().len(), 3);
}

#[test]
fn semantics_override() {
    let dir = fixture("example3");
    let out = ok(&["--dir", &dir, "--semantics", "naive", "repairs"]);
    assert_eq!(out["stats"]["semantics"], "naive");
    assert!(out["repairs"]
        .as_array()
        .unwrap()
        .contains(&serde_json::json!(["s", "u"])));
    for bad in ["grounded", "admissible", "cf"] {
        let (code, _) = fails(&["--dir", &dir, "--semantics", bad, "repairs"]);
        assert_eq!(code, 2, "{bad}");
    }
}

#[test]
fn every_error_class_has_its_exit_code() {
    let tmp = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = tmp.path().join(name);
        fs::write(&p, text).unwrap();
        p.display().to_string()
    };
    let good = write("T.csv", "#id,a,b\nx,1,2\ny,1,3\n");
    let ragged = write("R.csv", "a,b\n1\n");
    let fd = write("fd.txt", "fd T: a -> b\n");
    let unknown_attr = write("bad_attr.txt", "fd T: zz -> b\n");
    let twice = write("twice.txt", "fd T: a -> b @d\nfd T: b -> a @d\n");
    let id = write("id.txt", "id T[a] <= T[b]\n");

    let cases: Vec<(Vec<&str>, i32, &str)> = vec![
        (vec!["repairs"], 2, "usage"),
        (vec!["--db", &ragged, "repairs"], 3, "parse"),
        (vec!["--db", &good, "--deps", &unknown_attr, "repairs"], 4, "schema"),
        (vec!["--db", &good, "--deps", &twice, "repairs"], 5, "dependency"),
        (vec!["--db", &good, "--deps", &fd, "brave", "zz"], 6, "domain"),
        (vec!["--db", &good, "--deps", &id, "size-atleast", "1"], 7, "precondition"),
        (vec!["--db", &good, "--oracle-ceiling", "1", "oracle"], 8, "resource"),
        (vec!["--db", "/nonexistent/T.csv", "repairs"], 9, "io"),
    ];
    for (args, code, kind) in cases {
        let (got, err) = fails(&args);
        assert_eq!(got, code, "{args:?}: {err}");
        assert_eq!(err["error"], kind, "{args:?}");
    }
    let (_, err) = fails(&["--db", &ragged, "repairs"]);
    assert_eq!(err["line"], 2);
}

#[test]
fn output_is_deterministic() {
    let dir = fixture("example5");
    let tmp = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    let mut apx = Vec::new();
    for k in 0..2 {
        let path = tmp.path().join(format!("{k}.apx"));
        let argv = ["repairaf", "--dir", &dir, "translate", "--apx", path.to_str().unwrap()];
        let (code, out, _) = main_with(argv, None);
        assert_eq!(code, 0);
        outputs.push(main_with(["repairaf", "--dir", &dir, "repairs"], None).1);
        apx.push(fs::read(&path).unwrap());
        assert!(out.contains("\"apx_path\""));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(apx[0], apx[1]);
}

#[test]
fn translate_writes_apx_and_sidecar() {
    let tmp = tempfile::tempdir().unwrap();
    let apx = tmp.path().join("fig.apx");
    let side = tmp.path().join("fig.json");
    ok(&[
        "--dir",
        &fixture("example1"),
        "translate",
        "--apx",
        apx.to_str().unwrap(),
        "--sidecar",
        side.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(&apx).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("arg(")).count(), 4);
    assert_eq!(text.lines().filter(|l| l.starts_with("att(")).count(), 6);
    let sidecar: Value = serde_json::from_str(&fs::read_to_string(&side).unwrap()).unwrap();
    assert_eq!(sidecar["tuple_arg_map"]["s"], "s");

    let raw = ok(&["--dir", &fixture("example2"), "translate", "--raw"]);
    let text = raw["details"]["apx"].as_str().unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("arg(")).count(), 12);
    assert!(text.contains("att(t,s_id1).\n"));
    assert_eq!(raw["stats"]["arguments"], 12);

    let pre = ok(&["--dir", &fixture("example2"), "translate"]);
    assert_eq!(pre["removed_tuples"], serde_json::json!(["v", "u"]));
    assert_eq!(pre["stats"]["arguments"], 6);
}

#[test]
fn encoders_round_trip_through_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("enc");
    let cnf = fixtures().join("example4/formula.cnf");
    let report = ok(&["encode-sat", cnf.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(report["details"]["distinguished_tuple"], "s_phi");

    let phi = repairaf::io::parse_dimacs(&fs::read_to_string(&cnf).unwrap(), "f").unwrap();
    let enc = encode_sat_somerepair(&phi).unwrap();
    let parsed = parse_csv_relation(&out.join("T.csv"), "T").unwrap();
    let rel = enc.instance.database().relation("T").unwrap();
    assert_eq!(parsed.schema, rel.schema());
    let expected: Vec<(String, Vec<String>)> = rel
        .tuples()
        .iter()
        .map(|t| {
            let values = rel.schema().iter().map(|a| t.value(a).unwrap().to_string()).collect();
            (t.id().to_string(), values)
        })
        .collect();
    assert_eq!(parsed.tuples, expected);

    // the checked-in fixture is exactly what the encoder writes
    for file in ["T.csv", "deps.txt"] {
        assert_eq!(
            fs::read_to_string(out.join(file)).unwrap(),
            fs::read_to_string(fixtures().join("example4").join(file)).unwrap(),
            "{file}"
        );
    }
    let digest = ok(&["--dir", out.to_str().unwrap(), "repairs"])["instance_digest"].clone();
    assert_eq!(report["instance_digest"], digest);
}

#[test]
fn checked_in_encodings_are_current() {
    let tmp = tempfile::tempdir().unwrap();
    let jobs = [
        ("encode-sat-rep", "example4/formula.cnf", "example4/rep"),
        ("encode-qbf", "example5/formula.qdimacs", "example5"),
    ];
    for (cmd, input, dir) in jobs {
        let out = tmp.path().join(dir);
        let input = fixtures().join(input);
        ok(&[cmd, input.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
        for file in ["T.csv", "deps.txt"] {
            assert_eq!(
                fs::read_to_string(out.join(file)).unwrap(),
                fs::read_to_string(fixtures().join(dir).join(file)).unwrap(),
                "{dir}/{file}"
            );
        }
    }
}

#[test]
fn verify_passes_on_every_fixture() {
    for dir in [
        "example1",
        "example2",
        "example3",
        "example4",
        "example4/rep",
        "example5",
        "empty_support",
    ] {
        let out = ok(&["--dir", &fixture(dir), "verify"]);
        assert_eq!(out["answer"], true, "{dir}: {}", out["details"]);
    }
    let out = ok(&["--seed", "9", "verify", "--random", "25"]);
    assert_eq!(out["answer"], true, "{}", out["details"]);
}

#[test]
fn binary_reports_errors_on_stderr_and_honours_the_seed_variable() {
    let bin = env!("CARGO_BIN_EXE_repairaf");
    let dir = fixture("example3");
    let out = Command::new(bin)
        .args(["--dir", &dir, "--seed", "3", "repairs"])
        .env("REPAIRAF_SEED", "77")
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["stats"]["seed"], 77);

    let out = Command::new(bin)
        .args(["--dir", &dir, "brave", "nobody"])
        .env_remove("REPAIRAF_SEED")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(6));
    assert!(out.stdout.is_empty());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "domain");
}
