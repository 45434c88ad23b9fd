use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cyclecones"));
    c.env_remove("CYCLECONES_FIXTURE_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn envelope(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn fixture_source(name: &str) -> Value {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{name}.json"));
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn toric_geometry() -> Value {
    json!({
        "eff": {
            "basis": "toric", "dim": 5,
            "generators": [["1","0","0","1","0"], ["0","1","0","1","0"], ["0","0","1","1","0"],
                           ["-1","-1","-1","-2","1"], ["0","0","0","-1","0"]]
        },
        "mov": {
            "basis": "toric", "dim": 5,
            "generators": [["1","0","0","0","2"], ["0","1","0","0","2"], ["0","0","1","0","2"],
                           ["0","0","0","1","1"], ["0","0","0","0","1"], ["1","1","1","0","3"]]
        },
        "degree_functional": ["2","2","2","-1","5"]
    })
}

fn surface_geometry() -> Value {
    json!({
        "eff": { "basis": "s", "dim": 3, "generators": [["1","0","0"], ["0","1","0"], ["0","0","1"]] },
        "mov": { "basis": "s", "dim": 3, "generators": [["1","0","0"], ["0","1","0"], ["2","0","1"]] },
        "degree_functional": ["1","3","5"]
    })
}

#[test]
fn projbundle_example() {
    let out = run(&["--json", "projbundle", "--hn", "2:0,2:2", "--k", "2", "--class", "2,-3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = envelope(&out);
    assert_eq!(v["status"], "ok");
    let d = &v["payload"]["decomposition"];
    assert_eq!(d["positive"]["coords"], json!(["1", "-1"]));
    assert_eq!(d["negative"]["coords"], json!(["1", "-2"]));
    assert_eq!(v["payload"]["verified"], true);
}

#[test]
fn toric_fixture_verifies() {
    let out = run(&["fixture", "toric-3fold", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("7 pass, 0 flagged, 0 fail"), "{text}");

    let v = envelope(&run(&["fixture", "toric-3fold", "--verify", "--json"]));
    assert_eq!(v["payload"]["all_as_expected"], true);
    assert!(v["payload"]["results"].as_array().unwrap().iter().all(|r| r["status"] == "pass"));
}

#[test]
fn flagged_claims_keep_the_suite_green() {
    let out = run(&["--json", "fixture", "m07-s7", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = envelope(&out);
    let flagged: Vec<&str> = v["payload"]["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "flagged")
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert_eq!(flagged, ["d1-curve-class", "gram-symmetry", "gamma-identity"]);
}

#[test]
fn empty_cone_has_full_space_dual() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "empty-cone.json", &json!({ "basis": "b", "dim": 3, "generators": [] }));
    let out = run(&["--json", "cone", "dual", "--input", &path]);
    assert_eq!(out.status.code(), Some(0));
    let v = envelope(&out);
    assert_eq!(v["payload"]["dual"]["lineality_dim"], 3);
    assert_eq!(v["payload"]["dual"]["inequalities"], json!([]));
}

#[test]
fn cone_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "c.json",
        &json!({ "basis": "b", "dim": 2, "generators": [["1","0"], ["1","1"], ["2","1"]] }),
    );
    let rays = envelope(&run(&["--json", "cone", "rays", "--input", &path]));
    assert_eq!(rays["payload"]["rays"], json!([["1", "0"], ["1", "1"]]));
    let conv = envelope(&run(&["--json", "cone", "convert", "--input", &path]));
    assert_eq!(conv["payload"]["cone"]["inequalities"].as_array().unwrap().len(), 2);
    let inside = envelope(&run(&["--json", "cone", "contains", "--input", &path, "--class", "3,1/2"]));
    assert_eq!(inside["payload"]["inside"], true);
    assert_eq!(inside["payload"]["verified"], true);
    let outside = envelope(&run(&["--json", "cone", "contains", "--input", &path, "--class", "-1,1"]));
    assert_eq!(outside["payload"]["inside"], false);
    assert_eq!(outside["payload"]["certificate"]["kind"], "separation");
}

#[test]
fn toric_decomposition_and_directedness() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", &toric_geometry());
    let out = run(&["--json", "directed", "--geometry", &g, "--class", "1,1,0,1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = envelope(&out);
    assert_eq!(v["payload"]["report"]["status"]["kind"], "no_maximum");
    assert_eq!(v["payload"]["verified"], true);

    let v = envelope(&run(&["--json", "decompose", "--geometry", &g, "--class", "1,1,0,1,2"]));
    assert_eq!(v["payload"]["decomposition"]["metadata"]["selection"], "objective_maximal_candidate");
    assert!(!v["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn surface_decomposition_with_plot() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", &surface_geometry());
    let svg = dir.path().join("section.svg");
    let out = run(&[
        "--json",
        "decompose",
        "--geometry",
        &g,
        "--class",
        "1,0,1",
        "--plot-section",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = envelope(&out);
    let d = &v["payload"]["decomposition"];
    assert_eq!(d["positive"]["coords"], json!(["1", "0", "1/2"]));
    assert_eq!(d["negative"]["coords"], json!(["0", "0", "1/2"]));
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("polygon") && text.contains("<title>P = (1, 0, 1/2)"));

    let v = envelope(&run(&["--json", "decompose", "--geometry", &g, "--class", "1,0,1", "--objective", "1,1,1"]));
    assert_eq!(v["payload"]["decomposition"]["positive"]["coords"], json!(["1", "0", "1/2"]));
}

#[test]
fn ring_and_bck() {
    let v = envelope(&run(&["--json", "ring", "eval", "--fixture", "p2-hilb2", "--expr", "S3*E", "--basis", "curves"]));
    assert_eq!(v["payload"]["coordinates"]["coords"], json!(["2", "-4"]));
    let v = envelope(&run(&["--json", "ring", "eval", "--fixture", "p2-hilb2", "--expr", "S3", "--pair", "S3"]));
    assert_eq!(v["payload"]["pairing"]["value"], "-2");

    let dir = tempfile::tempdir().unwrap();
    let gram = write(dir.path(), "gram.json", &json!({ "labels": ["Z"], "gram": [["-2"]] }));
    for extra in [None, Some("--brute-force")] {
        let mut args = vec!["--json", "bck", "--gram", &gram, "--class", "1"];
        args.extend(extra);
        let v = envelope(&run(&args));
        assert_eq!(v["payload"]["decomposition"]["negative"]["coords"], json!(["1"]));
    }
}

#[test]
fn error_statuses_and_codes() {
    let out = run(&["--json", "bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(envelope(&out)["reason"], "usage");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"basis\": \"b\",\n  \"dim\": 2,\n  \"generators\": [[1, 2]\n").unwrap();
    let out = run(&["--json", "cone", "rays", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = envelope(&out);
    assert_eq!(v["status"], "input_error");
    assert!(v["diagnostics"][0].as_str().unwrap().contains("line"), "{v}");

    let g = write(dir.path(), "g.json", &toric_geometry());
    let out = run(&["--json", "decompose", "--geometry", &g, "--class", "-1,0,0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(envelope(&out)["reason"], "not_pseudo_effective");

    let out = run(&["fixture", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown_fixture"));

    let out = run(&["projbundle", "--hn", "2:3,1:0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic_and_meta_stays_outside() {
    let args = ["--json", "fixture", "p2-hilb2", "--verify"];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert_eq!(a, b);
    let mut with_meta = args.to_vec();
    with_meta.push("--meta");
    let m = envelope(&run(&with_meta));
    assert!(m["meta"]["timestamp"].is_u64());
    let plain: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(m["payload"], plain["payload"]);
    assert!(plain.get("meta").is_none());
}

#[test]
fn fixture_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    let mut toric = fixture_source("toric-3fold");
    let claims = toric["claims"].as_array_mut().unwrap();
    let big = claims.iter_mut().find(|c| c["id"] == "alpha-big").unwrap();
    big["coefficients"] = json!([3, 3, 2, 2, 4]);
    write(dir.path(), "toric-3fold.json", &toric);

    let out = bin()
        .env("CYCLECONES_FIXTURE_DIR", dir.path())
        .args(["--json", "fixture", "toric-3fold", "--verify"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v = envelope(&out);
    assert_eq!(v["reason"], "claims_failed");
    let failed: Vec<&str> = v["payload"]["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "fail")
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["alpha-big"]);

    let mut p2 = fixture_source("p2-hilb2");
    p2["ring"]["top_values"].as_object_mut().unwrap().remove("source");
    write(dir.path(), "p2-hilb2.json", &p2);
    let out = bin()
        .env("CYCLECONES_FIXTURE_DIR", dir.path())
        .args(["--json", "fixture", "p2-hilb2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(envelope(&out)["reason"], "malformed_fixture");

    // names without a file in the directory fall back to the embedded copy
    let out = bin()
        .env("CYCLECONES_FIXTURE_DIR", dir.path())
        .args(["fixture", "m07-s7", "--verify"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
