//! End-to-end command behavior: exit codes, witness re-verification, and
//! the lift/incidence pipeline equality.

use std::fs;
use std::process::Command;

use boxdim::forbidden::KttWitness;
use boxdim::graph::Graph;

fn boxdim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_boxdim"))
}

#[test]
fn check_ktt_on_c4_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("c4.json");
    fs::write(&graph_path, r#"{"n":4,"edges":[[0,1],[1,2],[2,3],[3,0]]}"#).unwrap();
    let output = boxdim()
        .args([
            "check",
            "ktt",
            "--graph",
            graph_path.to_str().unwrap(),
            "--t",
            "2",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1), "witness found means exit 1");
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["free"], serde_json::Value::Bool(false));
    // The emitted witness re-verifies against the input graph.
    let witness: KttWitness = serde_json::from_value(report["witness"].clone()).unwrap();
    let g: Graph = serde_json::from_str(&fs::read_to_string(&graph_path).unwrap()).unwrap();
    assert!(witness.verify(&g));

    let star = dir.path().join("star.json");
    fs::write(&star, r#"{"n":4,"edges":[[0,1],[0,2],[0,3]]}"#).unwrap();
    let output = boxdim()
        .args([
            "check",
            "ktt",
            "--graph",
            star.to_str().unwrap(),
            "--t",
            "2",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "K_2,2-free means exit 0");
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "not json").unwrap();
    let output = boxdim()
        .args(["check", "ktt", "--graph", bad.to_str().unwrap(), "--t", "2"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    let output = boxdim()
        .args(["graph", "incidence", "--config", missing.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));

    // Structurally invalid geometry: corners out of order.
    let inverted = dir.path().join("inverted.json");
    fs::write(
        &inverted,
        r#"{"dim":1,"boxes":[{"lo":["5"],"hi":["0"]}]}"#,
    )
    .unwrap();
    let output = boxdim()
        .args(["graph", "build", "--boxes", inverted.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn lift_then_build_equals_incidence() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    let status = boxdim()
        .args([
            "gen",
            "dyadic",
            "--m",
            "5",
            "--out",
            config.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());

    let boxes = dir.path().join("boxes.json");
    let status = boxdim()
        .args(["gen", "lift3d", "--config", config.to_str().unwrap()])
        .args(["--out", boxes.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());

    let from_boxes = dir.path().join("g_boxes.json");
    let status = boxdim()
        .args(["graph", "build", "--boxes", boxes.to_str().unwrap()])
        .args(["--out", from_boxes.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());

    let from_incidence = dir.path().join("g_incid.json");
    let status = boxdim()
        .args(["graph", "incidence", "--config", config.to_str().unwrap()])
        .args(["--out", from_incidence.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());

    assert_eq!(
        fs::read(&from_boxes).unwrap(),
        fs::read(&from_incidence).unwrap(),
        "lifted intersection graph must equal the incidence graph"
    );
}

#[test]
fn sepcert_and_realizer_checks_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    fs::write(&graph, r#"{"n":4,"edges":[[0,1],[2,3]]}"#).unwrap();
    let valid = dir.path().join("cert.json");
    fs::write(
        &valid,
        r#"{"dim":1,"map":{"0":["0"],"1":["1"],"2":["2"],"3":["3"]}}"#,
    )
    .unwrap();
    let output = boxdim()
        .args(["check", "sepcert", "--graph", graph.to_str().unwrap()])
        .args(["--cert", valid.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));

    let invalid = dir.path().join("cert_bad.json");
    fs::write(
        &invalid,
        r#"{"dim":1,"map":{"0":["0"],"1":["2"],"2":["1"],"3":["3"]}}"#,
    )
    .unwrap();
    let output = boxdim()
        .args(["check", "sepcert", "--graph", graph.to_str().unwrap()])
        .args(["--cert", invalid.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));

    // P(two disjoint edges) is two interleaved 2-element fans; place the
    // components in mutually incomparable quadrants for a valid realizer.
    let poset = dir.path().join("p.json");
    let status = boxdim()
        .args(["poset", "build", "--graph", graph.to_str().unwrap()])
        .args(["--out", poset.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let cert = dir.path().join("emb.json");
    fs::write(
        &cert,
        r#"{"dim":2,"map":{"0:0":["0","1"],"1:0":["1","0"],"2:0":["10","-9"],"3:0":["11","-10"],"0:1":["2","3"],"1:1":["3","2"],"2:1":["12","-7"],"3:1":["13","-8"]}}"#,
    )
    .unwrap();
    let output = boxdim()
        .args(["check", "realizer", "--poset", poset.to_str().unwrap()])
        .args(["--cert", cert.to_str().unwrap()])
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["valid"], serde_json::Value::Bool(true));
    assert_eq!(output.status.code(), Some(0));

    // Collapsing a top into its bottom's position breaks the realizer.
    let broken = dir.path().join("emb_bad.json");
    fs::write(
        &broken,
        r#"{"dim":2,"map":{"0:0":["0","1"],"1:0":["1","0"],"2:0":["10","-9"],"3:0":["11","-10"],"0:1":["0","1"],"1:1":["3","2"],"2:1":["12","-7"],"3:1":["13","-8"]}}"#,
    )
    .unwrap();
    let output = boxdim()
        .args(["check", "realizer", "--poset", poset.to_str().unwrap()])
        .args(["--cert", broken.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn manifest_written_when_requested() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lines.json");
    let manifest = dir.path().join("manifest.json");
    let status = boxdim()
        .args(["gen", "lines3d", "--k", "2", "--out", out.to_str().unwrap()])
        .args(["--manifest", manifest.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["subcommand"], "gen lines3d");
    assert_eq!(m["parameters"]["k"], "2");
    assert_eq!(m["toolkit_version"], boxdim::VERSION);
}
