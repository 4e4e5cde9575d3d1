use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const JUMPS: &str = r#"{"r":1,"ebar":[3],"jumps":[["2"]],"orders":[3,1]}"#;
const JUMPS_2D: &str = r#"{"r":2,"ebar":[1,2],"jumps":[["7/2","-5/2"]],"orders":[2,1]}"#;

fn hdlf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdlf")).args(args).env_remove("HDLF_PRECISION").output().unwrap()
}

fn artifact(args: &[&str]) -> (i32, Value) {
    let out = hdlf(args);
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}; stderr {}", String::from_utf8_lossy(&out.stderr)));
    (code, v)
}

fn passes(args: &[&str]) -> Value {
    let (code, v) = artifact(args);
    assert_eq!(code, 0, "{args:?}: {v}");
    assert_eq!(v["pass"], true);
    v["result"].clone()
}

#[test]
fn herbrand_commands() {
    let r = passes(&["herbrand", "from-jumps", JUMPS, "--at", "5"]);
    assert_eq!(r["evaluations"][0]["value"], serde_json::json!(["3/1"]));
    passes(&["herbrand", "compose", JUMPS, JUMPS]);
    passes(&["herbrand", "invert", JUMPS_2D]);
    let r = passes(&["herbrand", "last-edge", JUMPS]);
    assert_eq!(r["j"], serde_json::json!(["2/1"]));
}

#[test]
fn krasner_commands() {
    let r = passes(&["krasner", "disc", JUMPS]);
    assert_eq!(r["closed_form"], serde_json::json!(["6/1"]));
    let r = passes(&["krasner", "disc", JUMPS_2D]);
    assert_eq!(r["unweighted_bound_holds"], false);
    let r = passes(&["krasner", "locate", JUMPS, "--value", "5/2"]);
    assert_eq!(r["unique"], true);
    passes(&["krasner", "check", JUMPS, "--a", "0", "--a", "7/2"]);
}

#[test]
fn witt_commands() {
    let a = r#"{"ring":"int","p":3,"comps":["1","2"]}"#;
    let r = passes(&["witt", "add", a, a]);
    assert_eq!(r["ghost_homomorphism"], true);
    passes(&["witt", "mul", a, a]);
    let r = passes(&["witt", "ghost", a]);
    assert_eq!(r["ghost"], serde_json::json!(["1", "7"]));
    passes(&["witt", "artin-hasse", "--p", "3", "--degree", "12"]);
    for el in ["kernel", "epsilon", "epsilon-minus-one", "p"] {
        passes(&["witt", "gamma", "--p", "3", "--element", el]);
    }
}

#[test]
fn epp_round_trip_through_emitted_trace() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = passes(&["corpus", "gen", "--kind", "epp", "--count", "4", "--seed", "9"]);
    for (k, item) in corpus["items"].as_array().unwrap().iter().enumerate() {
        let datum = item.to_string();
        passes(&["epp", "invariants", &datum]);
        let trace = dir.path().join(format!("t{k}.json"));
        passes(&["epp", "run", &datum, "--emit", trace.to_str().unwrap()]);
        passes(&["epp", "check", trace.to_str().unwrap()]);
    }
}

#[test]
fn norms_commands() {
    let r = passes(&["norms", "tower", "--p", "3", "--depth", "4", "--precision", "6561", "--basic-2d"]);
    assert_eq!(r["pi_seq"]["c"], "55/27");
    assert_eq!(r["M"], 8);
    passes(&["norms", "epsilon", "--p", "2", "--depth", "3"]);
    let series = r#"{"N":1,"p":3,"box":{"D":1,"lo":[0],"hi":[6]},"terms":[{"exp":[1],"coeff":[1]},{"exp":[2],"coeff":[2]}]}"#;
    passes(&["norms", "embed", series, "--p", "3", "--depth", "3"]);
    passes(&["norms", "descend", "--level", "1"]);
    let r = passes(&["norms", "descend", "--level", "2", "--control"]);
    assert!(r["no_close_root"].is_string());
    let r = passes(&["norms", "duality", "--p", "2"]);
    assert_eq!(r["expected_log_arg_valuation"], "2/1");
    passes(&["norms", "duality", "--element", "random", "--seed", "5"]);
}

#[test]
fn artifacts_are_deterministic_and_carry_config() {
    let args = ["corpus", "gen", "--kind", "ram-jumps", "--count", "6", "--seed", "42"];
    let a = hdlf(&args);
    let b = hdlf(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["config", "inputs", "pass", "result", "tool"]);
    assert_eq!(v["config"]["command"]["corpus"]["gen"]["seed"], 42);
    assert!(a.stdout.ends_with(b"\n"));
}

#[test]
fn output_flag_writes_the_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    let out = hdlf(&["herbrand", "last-edge", JUMPS, "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["inputs"]["map"]["r"], 1);
}

#[test]
fn stdin_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hdlf"))
        .args(["krasner", "disc", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(JUMPS.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn schema_errors_name_the_field_and_exit_3() {
    let bad = r#"{"r":1,"ebar":[3],"jumps":[["2"]],"orders":["x"]}"#;
    let out = hdlf(&["krasner", "disc", bad]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "schema");
    assert_eq!(err["error"]["path"], "orders[0]");
    let out = hdlf(&["krasner", "disc", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(3));
    let out = hdlf(&["herbrand", "bogus"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn box_exhaustion_exits_2() {
    // negative exponents leave the integral rings of the tower
    let series = r#"{"N":1,"p":3,"box":{"D":1,"lo":[-1],"hi":[6]},"terms":[{"exp":[-1],"coeff":[1]}]}"#;
    let out = hdlf(&["norms", "embed", series]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn precision_env_sets_the_exponent() {
    let out = Command::new(env!("CARGO_BIN_EXE_hdlf"))
        .args(["norms", "epsilon", "--p", "3", "--depth", "3"])
        .env("HDLF_PRECISION", "5")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["M"], 5);
    assert_eq!(v["config"]["HDLF_PRECISION"], "5");
}

#[test]
fn schemas_print() {
    let (code, all) = {
        let out = hdlf(&["--schema"]);
        (out.status.code().unwrap(), serde_json::from_slice::<Value>(&out.stdout).unwrap())
    };
    assert_eq!(code, 0);
    for name in ["RamJumps", "HerbrandMap", "WittVec", "EppTrace", "Artifact"] {
        assert_eq!(all[name]["title"], name);
    }
    let out = hdlf(&["--schema", "ramjumps"]);
    let one: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(one["required"], serde_json::json!(["r", "ebar", "jumps", "orders"]));
    assert_eq!(hdlf(&["--schema", "Nope"]).status.code(), Some(3));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(hdlf(&["--help"]).status.code(), Some(0));
    assert_eq!(hdlf(&["--version"]).status.code(), Some(0));
    assert!(Path::new(env!("CARGO_BIN_EXE_hdlf")).exists());
}

#[test]
fn tampered_trace_is_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = passes(&["corpus", "gen", "--kind", "epp", "--count", "8", "--seed", "9"]);
    let datum = corpus["items"][1].to_string();
    let emitted = dir.path().join("t.json");
    passes(&["epp", "run", &datum, "--emit", emitted.to_str().unwrap()]);
    let mut t: Value = serde_json::from_str(&std::fs::read_to_string(&emitted).unwrap()).unwrap();
    let entries = t["trace"]["entries"].as_array_mut().unwrap();
    assert!(entries.len() >= 3);
    let first_a = entries[0]["invariants"]["A"].clone();
    entries.last_mut().unwrap()["invariants"]["A"] = first_a;
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, t.to_string()).unwrap();
    let (code, v) = artifact(&["epp", "check", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
}
