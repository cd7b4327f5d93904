use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bispectra"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn is_rational(v: &Value) -> bool {
    let Some([n, d]) = v
        .as_array()
        .map(|a| a.as_slice())
        .and_then(|a| <&[Value; 2]>::try_from(a).ok())
    else {
        return false;
    };
    let (Some(n), Some(d)) = (n.as_str(), d.as_str()) else {
        return false;
    };
    let digits = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_digit());
    digits(n.strip_prefix('-').unwrap_or(n)) && digits(d) && !d.starts_with('0')
}

/// Envelope shape from the shipped schema, plus every `coeff`/`coeffs`
/// field holding exact rationals.
fn validate(v: &Value) {
    let schema = schema();
    let obj = v.as_object().expect("report is an object");
    let required: Vec<&str> = schema["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|k| k.as_str().unwrap())
        .collect();
    for k in &required {
        assert!(obj.contains_key(*k), "missing {k}");
    }
    assert_eq!(obj.len(), required.len());
    let commands = schema["properties"]["command"]["enum"].as_array().unwrap();
    assert!(
        commands.contains(&obj["command"]),
        "unknown command {}",
        obj["command"]
    );
    assert!(obj["passed"].is_boolean() || obj["passed"].is_null());
    assert!(obj["result"].is_object() || obj["result"].is_array());
    fn walk(v: &Value) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    match k.as_str() {
                        "coeff" | "coordinate" => assert!(is_rational(x), "{k}: {x}"),
                        "coeffs" | "moments" | "values" => {
                            assert!(x.as_array().unwrap().iter().all(is_rational), "{k}: {x}")
                        }
                        _ => walk(x),
                    }
                }
            }
            Value::Array(a) => a.iter().for_each(walk),
            _ => {}
        }
    }
    walk(v);
}

fn json(args: &[&str]) -> (Value, i32) {
    let o = run(args);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    validate(&v);
    (v, o.status.code().unwrap())
}

#[test]
fn polys_table() {
    let o = run(&["polys", "--d", "2", "--max-n", "3", "--format", "json"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains(r#"{"n":3,"coeffs":[["-2","1"],["0","1"],["0","1"],["1","1"]]}"#));
    let (v, _) = json(&["polys", "--d", "1", "--q", "0,-1/2", "--max-n", "2"]);
    assert_eq!(
        v["result"][2]["coeffs"],
        serde_json::json!([["-1", "1"], ["0", "1"], ["1", "1"]])
    );
}

#[test]
fn moments_csv() {
    let o = run(&["moments", "--d", "2", "--count", "7", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines,
        vec!["mu_0,mu_1,mu_2,mu_3,mu_4,mu_5,mu_6", "1,0,0,2,0,0,40"]
    );
}

#[test]
fn verifications_exit_zero() {
    assert_eq!(
        run(&["verify", "bochner", "--d", "2", "--max-n", "0"])
            .status
            .code(),
        Some(0)
    );
    let (v, code) = json(&["verify", "orthogonality", "--d", "3", "--max-n", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], Value::Bool(true));
    let (v, code) = json(&[
        "verify", "bochner", "--d", "2", "--q", "1,1/2,-1", "--max-n", "12",
    ]);
    assert_eq!(
        (code, v["result"]["passed"].clone()),
        (0, Value::Bool(true))
    );
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["polys", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["polys", "--format", "xml"]).status.code(), Some(2));
    let bad_q = run(&["polys", "--d", "2", "--q", "1,2"]);
    assert_eq!(bad_q.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad_q.stderr).contains("expected 3 coefficients"));
    let (v, code) = json(&[
        "virasoro",
        "check",
        "--d",
        "2",
        "--m",
        "-1",
        "--degree",
        "4",
        "--trivial-plane",
    ]);
    assert_eq!(code, 3);
    let failures = v["result"]["constraints"]["failures"].as_array().unwrap();
    assert!(failures
        .iter()
        .any(|f| f["case"].as_str().unwrap().starts_with("L_-1")));
}

#[test]
fn numerics() {
    let (v, code) = json(&["weights", "eval", "--d", "2", "--s", "-1", "--x", "0"]);
    assert_eq!(code, 0);
    let re = v["result"]["normalized"][0].as_f64().unwrap();
    assert!((re - 0.355_028_053_887_817_2).abs() < 1e-9);
    let (v, code) = json(&[
        "weights",
        "residuals",
        "--d",
        "3",
        "--points",
        "3",
        "--seed",
        "5",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"].as_array().unwrap().len(), 3);
}

#[test]
fn deterministic_output() {
    let args = [
        "weights",
        "residuals",
        "--d",
        "2",
        "--points",
        "4",
        "--seed",
        "11",
        "--format",
        "csv",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let other = run(&[
        "weights",
        "residuals",
        "--d",
        "2",
        "--points",
        "4",
        "--seed",
        "12",
        "--format",
        "csv",
    ]);
    assert_ne!(run(&args).stdout, other.stdout);
    let tau = ["tau", "--d", "2", "--m", "0", "--weight", "6"];
    assert_eq!(run(&tau).stdout, run(&tau).stdout);
}

#[test]
fn expansion_and_tau() {
    let (v, code) = json(&["expand", "--d", "2", "--s", "-1", "--order", "2"]);
    assert_eq!(code, 0);
    assert_eq!(
        v["result"]["zeta_coeffs"][1],
        serde_json::json!(["5", "72"])
    );
    let (v, _) = json(&["tau", "--d", "2", "--m", "-1", "--weight", "6", "--log"]);
    let terms = v["result"]["terms"].as_array().unwrap();
    let t3 = terms
        .iter()
        .find(|t| t["vars"] == serde_json::json!([3]))
        .unwrap();
    assert_eq!(t3["coeff"], serde_json::json!(["1", "16"]));
    let (v, code) = json(&["plucker", "--d", "2", "--m", "-1", "--weight", "5"]);
    assert_eq!(code, 0);
    assert_eq!(
        v["result"]["coordinates"][0]["coordinate"],
        serde_json::json!(["1", "1"])
    );
}

#[test]
fn virasoro_and_toda() {
    let (v, code) = json(&["virasoro", "build", "--d", "2", "--m", "-1", "--cap", "6"]);
    assert_eq!(code, 0);
    assert!(v["result"]["convention_log"].as_array().unwrap().len() >= 5);
    let (_, code) = json(&["virasoro", "check", "--d", "2", "--m", "0", "--degree", "4"]);
    assert_eq!(code, 0);
    let (v, code) = json(&["toda", "root", "--d", "2", "--order", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["root"]["terms"][0]["degree"], Value::from(-1));
    let (v, code) = json(&["toda", "flow", "--d", "2", "--k", "2", "--order", "8"]);
    assert_eq!(code, 0);
    assert_eq!(
        v["result"]["minus_form"]["terms"],
        serde_json::json!([{ "degree": -1, "coeffs": [["2", "1"]] }])
    );
}

#[test]
fn thread_cap_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_bispectra"))
        .args(["moments", "--count", "3"])
        .env("BISPECTRA_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_bispectra"))
        .args(["verify", "bochner", "--max-n", "5"])
        .env("BISPECTRA_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
