use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn timeflat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_timeflat")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn schwarzschild_mass_is_recovered() {
    let out = timeflat(&["mass", "--scenario", path_str(&scenario("schwarzschild_sphere.toml"))]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!((r["results"]["m_H"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert_eq!(r["scenario"]["backend"]["kind"], "schwarzschild");
    assert!(r["version"].is_string());
}

#[test]
fn constant_beta_variation_vanishes_on_unit_sphere() {
    let s = scenario("minkowski_unit_sphere.toml");
    let out = timeflat(&["variation", "--scenario", path_str(&s), "--beta", "const:0.5", "--grid", "24x48"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    for key in ["v_mean", "v_momentum", "v_fd"] {
        assert!(r["results"][key].as_f64().unwrap().abs() < 1e-8, "{key}");
    }
    assert_eq!(r["scenario"]["beta"]["value"], 0.5);
}

#[test]
fn reports_are_deterministic_modulo_timings() {
    let s = scenario("perturbed_minkowski.toml");
    let args = ["mass", "--scenario", path_str(&s), "--grid", "16x32", "--seed", "5"];
    let mut a = report(&timeflat(&args));
    let mut b = report(&timeflat(&args));
    a.as_object_mut().unwrap().remove("timings");
    b.as_object_mut().unwrap().remove("timings");
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a["scenario"]["seed"], 5);
}

#[test]
fn flow_writes_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("flow.csv");
    let json = dir.path().join("flow.json");
    let out = timeflat(&[
        "flow",
        "--scenario",
        path_str(&scenario("schwarzschild_sphere.toml")),
        "--grid",
        "16x32",
        "--steps",
        "3",
        "--csv",
        path_str(&csv),
        "--out",
        path_str(&json),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,area,hawking_mass,time_flat_residual,beta_min,beta_max");
    assert_eq!(lines.len(), 5);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(r["results"]["steps"], 3);
    assert!((r["results"]["m_H_final"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn minimize_frame_reaches_divergence_free_frame() {
    let s = scenario("perturbed_minkowski.toml");
    let out = timeflat(&["minimize-frame", "--scenario", path_str(&s), "--grid", "24x48"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["divergence_free"], true);
    assert_eq!(r["results"]["energy_non_increasing"], true);
}

#[test]
fn round_sphere_is_time_flat() {
    let s = scenario("minkowski_unit_sphere.toml");
    let r = report(&timeflat(&["timeflat", "--scenario", path_str(&s), "--grid", "16x32"]));
    assert_eq!(r["results"]["is_time_flat"], true);
    assert_eq!(r["results"]["grid"]["n_theta"], 16);
    assert!(r["results"]["r_abs"].as_f64().unwrap() < 1e-8);
}

#[test]
fn tilted_graph_sphere_is_not_time_flat() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("g.toml");
    std::fs::write(
        &s,
        "[backend]\nkind = \"minkowski\"\n[embedding]\nfamily = \"graph_sphere\"\nradius = 1.0\nepsilon = 0.3\n\
         [[embedding.profile.terms]]\nl = 2\nm = 0\ncoeff = 1.0\n",
    )
    .unwrap();
    let r = report(&timeflat(&["timeflat", "--scenario", path_str(&s)]));
    assert_eq!(r["results"]["is_time_flat"], false);
    assert!(r["results"]["r_rel"].as_f64().unwrap() > 1e-2);
}

#[test]
fn verify_identities_passes() {
    let out = timeflat(&["verify-identities"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let reports = r["results"]["reports"].as_array().unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|x| x["passed"] == true));
}

#[test]
fn helix_curve_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("helix.csv");
    let out = timeflat(&["curve", "helix", "--samples", "64", "--csv", path_str(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!((r["results"]["torsion"]["max"].as_f64().unwrap() - 0.4).abs() < 1e-8);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("s,kappa,tau\n"));
    assert_eq!(text.lines().count(), 65);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(timeflat(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(timeflat(&["curve", "trefoil"]).status.code(), Some(2));
    assert_eq!(timeflat(&["mass", "--scenario", "/nonexistent.toml"]).status.code(), Some(2));
    let s = scenario("minkowski_unit_sphere.toml");
    assert_eq!(timeflat(&["mass", "--scenario", path_str(&s), "--grid", "3x5"]).status.code(), Some(2));
    assert_eq!(timeflat(&["mass", "--scenario", path_str(&s), "--beta", "const:2"]).status.code(), Some(2));
}

#[test]
fn parse_errors_carry_position_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "name = \"x\"\nbogus = 1\n").unwrap();
    let out = timeflat(&["mass", "--scenario", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");

    std::fs::write(&bad, "[backend]\nkind = \"minkowski\"\n[embedding]\nfamily = \"round_sphere\"\nradius = -1.0\n").unwrap();
    let out = timeflat(&["mass", "--scenario", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("embedding.radius"));
}

#[test]
fn computation_errors_exit_1() {
    // The P2 graph at epsilon 0.5 has a timelike mean curvature vector near the poles.
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.toml");
    std::fs::write(
        &s,
        "[backend]\nkind = \"minkowski\"\n[embedding]\nfamily = \"graph_sphere\"\nradius = 1.0\nepsilon = 0.5\n\
         [[embedding.profile.legendre]]\nl = 2\ncoeff = 1.0\n",
    )
    .unwrap();
    let out = timeflat(&["variation", "--scenario", path_str(&s), "--grid", "16x32"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}
