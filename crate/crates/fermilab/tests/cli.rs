//! End-to-end tests of the binary: exit codes, output formats, determinism,
//! and the environment override.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fermilab"));
    // Hygiene: the ambient environment must not steer these tests.
    c.env_remove("FERMILAB_QUAD_N");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name);
    p.to_str().unwrap().to_string()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("fermilab-cli-{}-{name}", std::process::id()))
}

#[test]
fn ex1_pins_the_closed_form() {
    let out = run(&["ex1", "--alpha", "0.6931471805599453"]);
    let v = stdout_json(&out);
    assert_eq!(v["lambda"].as_f64().unwrap(), -0.75);
    assert_eq!(v["v0"].as_f64().unwrap(), 0.75);
    assert_eq!(v["v1"].as_f64().unwrap(), 3.0);
    assert_eq!(v["multiplicity"].as_u64().unwrap(), 2);
    assert_eq!(v["embedded"].as_bool().unwrap(), true);
    assert!(v["interior_residual"].as_f64().unwrap() <= 1e-12);
    assert!(v["witness"].is_array());
}

#[test]
fn grid2d_reports_embedded() {
    let out = run(&["grid2d", "--mu", "0.5", "--bc", "dirichlet", "--box", "6", "--quad", "64"]);
    let v = stdout_json(&out);
    assert_eq!(v["embedded"].as_bool().unwrap(), true);
    assert!(v["residual"].as_f64().unwrap() <= 1e-10);
    assert!(v["tail_grows"].as_bool().unwrap());
    assert!((v["nu"].as_f64().unwrap() - 4.26589478689872).abs() < 1e-9);
}

#[test]
fn outputs_are_byte_identical() {
    let a = run(&["ex2", "--a", "0.5", "--b", "1.0", "--c", "0.75"]);
    let b = run(&["ex2", "--a", "0.5", "--b", "1.0", "--c", "0.75"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());

    let c = run(&["grid2d", "--mu", "0.5", "--bc", "dirichlet", "--box", "4", "--quad", "32"]);
    let d = run(&["grid2d", "--mu", "0.5", "--bc", "dirichlet", "--box", "4", "--quad", "32"]);
    assert!(c.status.success());
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn csv_tables_have_expected_shapes() {
    let out = run(&["ex1", "--alpha", "0.5", "--box", "10", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "g,v");
    assert_eq!(lines.len(), 1 + 21);

    let out = run(&["bands", "--stencil", &data("ex1.json"), "--format", "csv", "--samples", "40"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("k,lambda0\n"));
    assert_eq!(text.lines().count(), 1 + 40);

    let out = run(&["ex3", "--mu", "6.383185307179587", "--cells", "8", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("g,c,d,rung\n"));

    let out = run(&[
        "grid2d", "--mu", "0.5", "--bc", "dirichlet", "--box", "3", "--quad", "32", "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("g1,g2,k,c1,d1,c2,d2\n"));
    assert_eq!(text.lines().count(), 1 + 49);

    let out = run(&[
        "green", "--stencil", &data("chain.json"), "--lambda", "-3", "--box", "5", "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("x1,component,re,im\n"));
    assert_eq!(text.lines().count(), 1 + 11);
}

#[test]
fn exit_codes_follow_the_taxonomy() {
    let out = run(&["ex1", "--alpha", "99"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty(), "domain errors leave stdout clean");
    assert!(!out.stderr.is_empty());

    let out = run(&["green", "--stencil", &data("chain.json"), "--lambda", "-3", "--quad", "5"]);
    assert_eq!(out.status.code(), Some(3), "unsettled quadrature is a convergence error");

    let out = run(&["ex1", "--alfa", "0.7"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("usage") ||
            String::from_utf8_lossy(&out.stderr).contains("Usage"));

    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(64));

    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["ex3", "--mu", "1.4"]);
    assert_eq!(out.status.code(), Some(2), "in-band mu is a domain error");
}

#[test]
fn quad_env_override_and_flag_precedence() {
    let base = ["green", "--stencil", &data("chain.json"), "--lambda", "-3", "--box", "6"];

    let out = run(&base);
    assert_eq!(stdout_json(&out)["quad_n"].as_u64().unwrap(), 64);

    let out = bin().args(base).env("FERMILAB_QUAD_N", "128").output().unwrap();
    assert_eq!(stdout_json(&out)["quad_n"].as_u64().unwrap(), 128);

    let out = bin().args(base).args(["--quad", "32"]).env("FERMILAB_QUAD_N", "128").output().unwrap();
    assert_eq!(stdout_json(&out)["quad_n"].as_u64().unwrap(), 32);

    let out = bin().args(base).env("FERMILAB_QUAD_N", "banana").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let path = temp_path("out.json");
    let direct = run(&["ex2", "--a", "0.1", "--b", "0.4", "--c", "0.2"]);
    let out = run(&["ex2", "--a", "0.1", "--b", "0.4", "--c", "0.2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "--out leaves stdout empty");
    let written = fs::read(&path).unwrap();
    assert_eq!(written, direct.stdout);
    let _ = fs::remove_file(&path);
}

#[test]
fn malformed_input_files_are_domain_errors() {
    let bad = temp_path("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let out = run(&["bands", "--stencil", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let _ = fs::remove_file(&bad);

    let asym = temp_path("asym.json");
    fs::write(
        &asym,
        r#"{"dim":1,"fiber":1,"coeffs":[
            {"offset":[1],"matrix":[[1.0,0.0]]},
            {"offset":[-1],"matrix":[[2.0,0.0]]}
        ]}"#,
    )
    .unwrap();
    let out = run(&["bands", "--stencil", asym.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("self-adjoint"));
    let _ = fs::remove_file(&asym);

    let out = run(&["bands", "--stencil", temp_path("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn coupled_embeds_through_matching_involution() {
    let out = run(&[
        "coupled",
        "--stencil",
        &data("grid2.json"),
        "--K",
        &data("kswap.json"),
        "--theta",
        "1.5707963267948966",
        "--phi",
        "0",
        "--lambda0",
        "2.5",
        "--variant",
        "uniform",
        "--box",
        "10",
    ]);
    let v = stdout_json(&out);
    assert!(v["conjugation_residual"].as_f64().unwrap() <= 1e-12);
    assert!(v["factorization_residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["involution_defect"].as_f64().unwrap(), 0.0);
    let emb = &v["embedding"];
    assert!(emb.is_object(), "swap matches the two-layer form at theta=pi/2");
    assert!(emb["residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(emb["eigenvalue"].as_f64().unwrap(), -2.5);

    let out = run(&["coupled", "--stencil", &data("grid2.json"), "--K", &data("kswap.json"),
        "--theta", "0.3", "--phi", "0", "--lambda0", "1.0", "--variant", "uniform"]);
    let v = stdout_json(&out);
    assert!(v["embedding"].is_null() || v.get("embedding").is_none(),
        "angles that disagree with the file matrix give no embedding section");

    let out = run(&["coupled", "--stencil", &data("grid2.json"), "--K", &data("kswap.json"),
        "--theta", "0.3", "--phi", "0", "--lambda0", "1.0", "--variant", "uniform",
        "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_runs_configs_and_reports_controls() {
    let out = run(&["verify", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));

    let cfg = temp_path("suite.json");
    fs::write(
        &cfg,
        r#"{
            "cases": [
                { "id": "good", "kind": "chain_defect", "alpha": 0.6931471805599453, "boxes": [10, 20] },
                { "id": "bad", "kind": "chain_defect", "alpha": 0.6931471805599453, "boxes": [20],
                  "v0_shift": 0.1, "negative_control": true }
            ]
        }"#,
    )
    .unwrap();
    let out = run(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"].as_bool().unwrap(), true);
    assert_eq!(v["controls_fired"].as_u64().unwrap(), 1);
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 2);
    assert_eq!(cases[0]["case"], "bad");
    assert_eq!(cases[0]["pass"].as_bool().unwrap(), false);
    assert!(cases[0]["residual_interior"].as_f64().unwrap() >= 1e-3);
    assert_eq!(cases[1]["case"], "good");
    assert_eq!(cases[1]["pass"].as_bool().unwrap(), true);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("PASS good"));
    assert!(stderr.contains("FAIL bad"));
    let _ = fs::remove_file(&cfg);

    let empty = temp_path("empty.json");
    fs::write(&empty, r#"{ "cases": [] }"#).unwrap();
    let out = run(&["verify", "--config", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["cases"].as_array().unwrap().is_empty());
    let _ = fs::remove_file(&empty);

    let unknown = temp_path("unknown.json");
    fs::write(&unknown, r#"{ "cases": [], "only": ["nope"] }"#).unwrap();
    let out = run(&["verify", "--config", unknown.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown case id"));
    let _ = fs::remove_file(&unknown);
}

#[test]
fn verify_flags_a_failing_positive_case() {
    let cfg = temp_path("failing.json");
    fs::write(
        &cfg,
        r#"{
            "cases": [
                { "id": "drifted", "kind": "chain_defect", "alpha": 0.6931471805599453,
                  "boxes": [20], "v0_shift": 1e-6 }
            ]
        }"#,
    )
    .unwrap();
    let out = run(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "a failing non-control case exits 1");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"].as_bool().unwrap(), false);
    let _ = fs::remove_file(&cfg);
}
