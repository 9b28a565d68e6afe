//! End-to-end runs of the `dmin` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dmin(args: &[&str]) -> Output {
    dmin_env(args, None)
}

fn dmin_env(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dmin"));
    cmd.args(args).env_remove("DMIN_THREADS");
    if let Some(t) = threads {
        cmd.env("DMIN_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

fn obj_vertices(path: &Path) -> Vec<[f64; 3]> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|l| {
            let x: Vec<f64> = l.split(' ').map(|t| t.parse().unwrap()).collect();
            [x[0], x[1], x[2]]
        })
        .collect()
}

fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
}

#[test]
fn gen_mesh_for_z_and_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.obj");
    let o = dmin(&["gen", "--F", "z", "--G", "1", "--domain", "-1,1,-1,1", "--grid", "64,64", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = obj_vertices(&out);
    assert_eq!(v.len(), 64 * 64);
    // Last node is (u, v) = (1, 1), where the closed form gives (0, 1, 1).
    assert!(close(v[64 * 64 - 1], [0.0, 1.0, 1.0], 1e-8), "{:?}", v[64 * 64 - 1]);
    // First node (−1, −1): (u² − v²)/2 = 0, uv = 1, u = −1.
    assert!(close(v[0], [0.0, 1.0, -1.0], 1e-8), "{:?}", v[0]);
    let text = std::fs::read_to_string(&out).unwrap();
    let faces: Vec<Vec<usize>> = text
        .lines()
        .filter_map(|l| l.strip_prefix("f "))
        .map(|l| l.split(' ').map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(faces.len(), 2 * 63 * 63);
    assert!(faces.iter().flatten().all(|&k| (1..=4096).contains(&k)));
}

#[test]
fn gen_helicoid_family_member() {
    let o = dmin(&["gen", "--F", "exp(z)", "--G", "1", "--theta", "1.5707963", "--grid", "9,9", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,v,x,y,z"));
    assert_eq!(lines.count(), 81);
}

#[test]
fn gen_reports_syntax_offset() {
    let o = dmin(&["gen", "--F", "z+", "--G", "1"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("offset 2"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&dmin(&["gen", "--F", "z"])), 2);
    assert_eq!(code(&dmin(&["gen", "--F", "z", "--G", "1", "--grid", "1,4"])), 2);
    assert_eq!(code(&dmin(&["gen", "--F", "z", "--G", "1", "--domain", "1,-1,0,1"])), 2);
    assert_eq!(code(&dmin(&["analyze", "--catalog", "catenoid"])), 2);
    assert_eq!(code(&dmin(&["analyze", "--graph", "u", "--F", "z", "--G", "1"])), 2);
    assert_eq!(code(&dmin(&["frobnicate"])), 2);
    assert_eq!(code(&dmin_env(&["catalog"], Some("zero"))), 2);
}

#[test]
fn analyze_helicoid() {
    let j = stdout_json(&dmin(&["analyze", "--catalog", "helicoid2"]));
    assert_eq!(j["schema"], 1);
    assert_eq!(j["d_minimal"], true);
    assert!(j["extrema"]["K_max"]["value"].as_f64().unwrap() < 0.0);
}

#[test]
fn analyze_saddle_graph_is_d_minimal() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.csv");
    let j = stdout_json(&dmin(&["analyze", "--graph", "u*v", "--grid", "8,8", "--out", out.to_str().unwrap()]));
    assert_eq!(j["d_minimal"], true);
    assert!(j["codazzi_residual_max"].as_f64().unwrap() < 1e-6);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,v,g11,g12,g22,h11,h12,h22,H,K,class"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r.ends_with(",hyperbolic")));
}

#[test]
fn analyze_paraboloid_is_elliptic_everywhere() {
    let j = stdout_json(&dmin(&["analyze", "--graph", "u^2+v^2"]));
    assert_eq!(j["d_minimal"], false);
    let c = &j["classes"];
    assert_eq!(c["elliptic"], j["samples"]);
    assert_eq!(c["hyperbolic"], 0);
}

#[test]
fn analyze_singular_budget() {
    // 31 cells put a sample center on the zero of F at the origin.
    let over = dmin(&["analyze", "--F", "z", "--G", "1", "--grid", "31,31"]);
    assert_eq!(code(&over), 4);
    let j = stdout_json(&dmin(&["analyze", "--F", "z", "--G", "1", "--grid", "31,31", "--singular-budget", "1"]));
    assert_eq!(j["classes"]["singular"], 1);
    assert_eq!(j["d_minimal"], true);
    assert_eq!(j["codazzi_residual_max"], Value::Null);
}

fn singular_points(f: &str, g: &str) -> Vec<Value> {
    stdout_json(&dmin(&["singular", "--F", f, "--G", g])).as_array().unwrap().clone()
}

#[test]
fn singular_reports() {
    let p = singular_points("z^3", "1");
    assert_eq!(p.len(), 1);
    assert!(p[0]["re"].as_f64().unwrap().hypot(p[0]["im"].as_f64().unwrap()) < 1e-10);
    assert_eq!((p[0]["multiplicity"].as_u64(), p[0]["rank"].as_u64()), (Some(3), Some(1)));

    let p = singular_points("z", "z^2");
    assert_eq!(p.len(), 1);
    assert_eq!((p[0]["multiplicity"].as_u64(), p[0]["rank"].as_u64()), (Some(1), Some(0)));
    assert_eq!(p[0]["g_vanishes"], true);

    assert!(singular_points("exp(z)", "1").is_empty());
}

#[test]
fn reconstruct_saddle() {
    let o = dmin(&["reconstruct", "--h11", "1", "--h12", "0", "--h22", "-1", "--grid", "5,5", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("pass"));
    let text = String::from_utf8(o.stdout).unwrap();
    for line in text.lines().skip(1) {
        let x: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
        assert!((x[2] - 0.5 * (x[0] * x[0] - x[1] * x[1])).abs() < 1e-12, "{line}");
    }
}

#[test]
fn reconstruct_paraboloid_with_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.obj");
    let o = dmin(&["reconstruct", "--h11", "2", "--h12", "0", "--h22", "2", "--seed", "1,0,0", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("codazzi residual"));
    let v = obj_vertices(&out);
    assert_eq!(v.len(), 33 * 33);
    assert!(v.iter().all(|p| (p[2] - (1.0 + p[0] * p[0] + p[1] * p[1])).abs() < 1e-12));
}

#[test]
fn reconstruct_rejects_codazzi_violation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.obj");
    let o = dmin(&["reconstruct", "--h11", "v", "--h12", "0", "--h22", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 5);
    assert!(!out.exists());
}

#[test]
fn reconstruct_from_sampled_forms() {
    let dir = tempfile::tempdir().unwrap();
    let forms = dir.path().join("h.csv");
    // Hessian of u³ − 3uv² on a 21×21 grid over [0, 1]².
    let mut text = String::from("u,v,h11,h12,h22\n");
    for j in 0..21 {
        for i in 0..21 {
            let (u, v) = (i as f64 / 20.0, j as f64 / 20.0);
            text += &format!("{u},{v},{},{},{}\n", 6.0 * u, -6.0 * v, -6.0 * u);
        }
    }
    std::fs::write(&forms, text).unwrap();
    let o = dmin(&["reconstruct", "--forms", forms.to_str().unwrap(), "--base", "0,0", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 21 * 21);
    for line in text.lines().skip(1) {
        let x: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
        let want = x[0].powi(3) - 3.0 * x[0] * x[1] * x[1];
        assert!((x[2] - want).abs() < 1e-2, "{line}");
    }
}

#[test]
fn embed_rotational_log_passes() {
    let j = stdout_json(&dmin(&["embed", "--catalog", "rotational_log"]));
    assert_eq!(j["report"]["pass"], true);
}

#[test]
fn embed_paraboloid_slice_fails_with_mean_curvature() {
    let j = stdout_json(&dmin(&["embed", "--x1", "0", "--x2", "u", "--x3", "v", "--x4", "u^2+v^2"]));
    let r = &j["report"];
    assert_eq!(r["pass"], false);
    assert_eq!(r["zmc"], false);
    assert!(r["max_mean_curvature"].as_f64().unwrap() > 1.0);
    assert_eq!(j["e_locus"], Value::Null);
}

#[test]
fn embed_cubic_graph_reports_e_locus() {
    let j = stdout_json(&dmin(&["embed", "--graph", "u^3-3*u*v^2"]));
    assert_eq!(j["report"]["pass"], true);
    let clusters = j["e_locus"]["clusters"].as_array().unwrap();
    assert_eq!(clusters.len(), 1);
    let c = &clusters[0]["center"];
    assert!(c[0].as_f64().unwrap().abs() < 1e-8 && c[1].as_f64().unwrap().abs() < 1e-8);
    assert_eq!(j["e_locus"]["discrete"], true);
}

#[test]
fn embed_timelike_surface_exits_4() {
    let o = dmin(&["embed", "--x1", "u", "--x2", "u", "--x3", "v", "--x4", "0", "--grid", "4,4"]);
    assert_eq!(code(&o), 4);
    let j: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["report"]["non_spacelike"].as_array().unwrap().len(), 16);
}

#[test]
fn embed_needs_all_four_coordinates() {
    assert_eq!(code(&dmin(&["embed", "--x1", "0", "--x2", "u"])), 2);
}

#[test]
fn catalog_lists_and_checks() {
    let j = stdout_json(&dmin(&["catalog", "--check"]));
    let entries = j["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 8);
    assert!(entries.iter().all(|e| e["measured"]["matches"] == true));
    let names: Vec<&str> = entries.iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"helicoid2") && names.contains(&"rotational_log"));
}

#[test]
fn output_is_byte_identical_across_thread_counts() {
    let runs = [
        vec!["analyze", "--catalog", "cubic_harmonic"],
        vec!["gen", "--F", "exp(z)", "--G", "z", "--grid", "17,9", "--format", "json"],
        vec!["reconstruct", "--h11", "2*u", "--h12", "-2*v", "--h22", "-2*u", "--format", "csv"],
    ];
    for args in runs {
        let one = dmin_env(&args, Some("1"));
        let many = dmin_env(&args, Some("4"));
        assert_eq!(code(&one), 0);
        assert_eq!(one.stdout, many.stdout, "{args:?}");
    }
}
