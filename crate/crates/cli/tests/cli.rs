use std::process::{Command, Output};

use serde_json::Value;

fn dof_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dof-lab")).args(args).output().expect("spawn dof-lab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const CFG_1233: [&str; 8] = ["--m1", "1", "--n1", "2", "--m2", "3", "--n2", "3"];

fn with_cfg(cmd: &str, extra: &[&str]) -> Output {
    let args: Vec<&str> = std::iter::once(cmd).chain(CFG_1233).chain(extra.iter().copied()).collect();
    dof_lab(&args)
}

#[test]
fn region_fic_nocsit_corner() {
    let o = with_cfg("region", &["--channel", "fic", "--csit", "no"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let verts: Vec<Vec<String>> = serde_json::from_value(v["vertices"].clone()).unwrap();
    assert_eq!(verts, vec![vec!["0", "0"], vec!["1", "0"], vec!["1", "3/2"], vec!["0", "3"]]);
}

#[test]
fn region_zic_csit_triangle_and_csv() {
    let o = dof_lab(&["region", "--m1", "1", "--n1", "1", "--m2", "1", "--n2", "1", "--channel", "zic", "--csit", "yes"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"], serde_json::json!([["0", "0"], ["1", "0"], ["0", "1"]]));
    let o = dof_lab(&[
        "region", "--m1", "1", "--n1", "1", "--m2", "1", "--n2", "1", "--channel", "zic", "--csit", "on", "--format", "csv",
    ]);
    assert_eq!(stdout(&o), "d1,d2\n0,0\n1,0\n0,1\n");
}

#[test]
fn region_usage_errors() {
    let o = dof_lab(&["region", "--n1", "2", "--m2", "3", "--n2", "3", "--channel", "fic", "--csit", "no"]);
    assert_eq!(o.status.code(), Some(2));
    let o = dof_lab(&["region", "--m1", "65", "--n1", "2", "--m2", "3", "--n2", "3", "--channel", "fic", "--csit", "no"]);
    assert_eq!(o.status.code(), Some(2));
    let o = dof_lab(&["region", "--m1", "1", "--n1", "2", "--m2", "3", "--n2", "3", "--channel", "fic", "--csit", "no", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn region_json_round_trips() {
    let o = dof_lab(&["region", "--m1", "3", "--n1", "4", "--m2", "1", "--n2", "2", "--channel", "fic", "--csit", "no"]);
    let text = stdout(&o);
    let region: dof_lab_core::DofRegion = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&region).unwrap(), text.trim_end());
}

#[test]
fn scheme_special_passes() {
    let o = with_cfg("scheme", &["--special"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["rank_u"], 2);
    assert!(v["v_frobenius"].as_f64().unwrap() <= 1e-12);
    assert_eq!(v["rank_tol"], 1e-10);
    assert_eq!(v["nulling_coeff"], 1e-9);
}

#[test]
fn scheme_random_passes() {
    let o = dof_lab(&["scheme", "--m1", "2", "--n1", "3", "--m2", "4", "--n2", "4", "--random", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["channels"], "random");
}

#[test]
fn scheme_precondition_violation() {
    let o = dof_lab(&["scheme", "--m1", "2", "--n1", "2", "--m2", "3", "--n2", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("M1 < N1 violated"));
    let o = dof_lab(&["scheme", "--m1", "1", "--n1", "2", "--m2", "3", "--n2", "3", "--special", "--random"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scheme_failing_tolerance_exits_one() {
    // A relative rank cutoff above σ_min/σ_max of Ũ makes condition 1 fail.
    let o = dof_lab(&["scheme", "--m1", "1", "--n1", "2", "--m2", "3", "--n2", "3", "--rank-tol", "0.9"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn scheme_exports_matrices() {
    let dir = std::env::temp_dir().join(format!("dof-lab-export-{}", std::process::id()));
    let o = dof_lab(&["scheme", "--m1", "1", "--n1", "2", "--m2", "3", "--n2", "3", "--export", dir.to_str().unwrap()]);
    assert!(o.status.success());
    let u = std::fs::read_to_string(dir.join("u.csv")).unwrap();
    let lines: Vec<&str> = u.lines().collect();
    assert_eq!(lines[0], "row,col,re,im");
    assert_eq!(lines.len(), 5);
    let last: Vec<f64> = lines[4].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(&last[..2], &[1.0, 1.0]);
    assert!(last[2].abs() < 1e-15 && (last[3] + 1.0).abs() < 1e-15);
    for name in ["q", "p", "v", "h12"] {
        assert!(dir.join(format!("{name}.csv")).exists());
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn simulate_outputs_csv_then_estimate() {
    let o = dof_lab(&[
        "simulate", "--m1", "1", "--n1", "2", "--m2", "3", "--n2", "3", "--powers-db", "60,80", "--trials", "4", "--seed", "1",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "power_db,r1_bits,r2_bits,trial");
    assert_eq!(lines.len(), 1 + 8 + 1);
    let est: Value = serde_json::from_str(lines.last().unwrap()).unwrap();
    assert_eq!(est["seed"], 1);
    assert_eq!(est["points"].as_array().unwrap().len(), 2);
    assert!((est["d1_hat"].as_f64().unwrap() - 1.0).abs() < 0.1);
}

#[test]
fn simulate_out_file() {
    let path = std::env::temp_dir().join(format!("dof-lab-rates-{}.csv", std::process::id()));
    let o = dof_lab(&[
        "simulate", "--m1", "1", "--n1", "2", "--m2", "3", "--n2", "3", "--powers-db", "60,70", "--trials", "2", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 5);
    let est: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(est["seed"], 0);
    std::fs::remove_file(path).ok();
}

#[test]
fn simulate_single_power_is_usage_error() {
    let o = dof_lab(&["simulate", "--m1", "1", "--n1", "2", "--m2", "3", "--n2", "3", "--powers-db", "60"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_outside_regime_is_usage_error() {
    let o = dof_lab(&["simulate", "--m1", "2", "--n1", "2", "--m2", "3", "--n2", "3", "--powers-db", "60,80"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_all_properties_pass() {
    let o = dof_lab(&["sweep", "--max-antennas", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["lemma3", "csit-dominance", "zic-dominance", "zf", "corner"] {
        assert!(text.contains(name), "{text}");
    }
}

#[test]
fn sweep_single_property_json() {
    let o = dof_lab(&["sweep", "--max-antennas", "4", "--property", "lemma3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["property"], "lemma3");
    assert_eq!(v[0]["checked"], v[0]["passed"]);
    assert_eq!(v[0]["checked"], 160);
}

#[test]
fn sweep_range_validation() {
    assert_eq!(dof_lab(&["sweep", "--max-antennas", "0"]).status.code(), Some(2));
    assert_eq!(dof_lab(&["sweep", "--max-antennas", "7"]).status.code(), Some(2));
}

#[test]
fn help_mentions_thread_env() {
    let o = dof_lab(&["--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("DOF_LAB_THREADS"));
}
