use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coherent-magic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SWEEP: &str = r#"
sizes = [4, 6]
alphas = [0.0, 0.7]
circuits = 4
master_seed = 3
depth = "n"
rate = { mode = "constant", r = 0.5 }
measures = ["cond_shannon", "cond_renyi", "ssre"]
"#;

fn write_config(dir: &Path) -> String {
    let p = dir.join("sweep.toml");
    std::fs::write(&p, SWEEP).unwrap();
    p.display().to_string()
}

#[test]
fn sample_circuit_is_reproducible() {
    let a = stdout(&bin(&["sample-circuit", "--n", "6", "--seed", "9"]));
    let b = stdout(&bin(&["sample-circuit", "--n", "6", "--seed", "9"]));
    let c = stdout(&bin(&["sample-circuit", "--n", "6", "--seed", "10"]));
    assert_eq!(a, b);
    assert_ne!(a, c);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["n"], 6);
    assert_eq!(v["layers"].as_array().unwrap().len(), 12);
}

#[test]
fn sweep_output_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let o1 = dir.path().join("a");
    let o2 = dir.path().join("b");
    stdout(&bin(&["sweep", "--config", &cfg, "--out", o1.to_str().unwrap(), "--threads", "1"]));
    stdout(&bin(&["sweep", "--config", &cfg, "--out", o2.to_str().unwrap(), "--threads", "2"]));
    let r1 = std::fs::read(o1.join("records.jsonl")).unwrap();
    assert_eq!(r1, std::fs::read(o2.join("records.jsonl")).unwrap());
    assert_eq!(
        std::fs::read(o1.join("summary.csv")).unwrap(),
        std::fs::read(o2.join("summary.csv")).unwrap()
    );
    // 2 sizes x 4 circuits x 2 angles x 3 measures
    assert_eq!(String::from_utf8(r1).unwrap().lines().count(), 48);
}

#[test]
fn seed_and_budget_flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let o1 = dir.path().join("a");
    let o2 = dir.path().join("b");
    stdout(&bin(&["sweep", "--config", &cfg, "--out", o1.to_str().unwrap(), "--budget", "0.5"]));
    stdout(&bin(&["sweep", "--config", &cfg, "--out", o2.to_str().unwrap(), "--seed", "4"]));
    let n1 = std::fs::read_to_string(o1.join("records.jsonl")).unwrap().lines().count();
    assert_eq!(n1, 24);
    assert_ne!(
        std::fs::read(o2.join("records.jsonl")).unwrap(),
        std::fs::read(dir.path().join("a").join("records.jsonl")).unwrap()
    );
}

#[test]
fn phase_diagram_writes_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let out = stdout(&bin(&["phase-diagram", "--config", &cfg, "--rates", "0.25,0.5"]));
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("r,n,k,alpha,measure,density"));
    // 2 rates x 2 sizes x 2 angles x 3 measures
    assert_eq!(lines.count(), 24);
}

#[test]
fn analytic_renyi_rows() {
    let out = stdout(&bin(&["analytic-renyi", "--sizes", "8,12", "--alphas", "0.3,0.9"]));
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "alpha,n,k,collision_joint,collision_syndrome,s2");
    assert_eq!(rows.len(), 5);
    let zero = stdout(&bin(&["analytic-renyi", "--sizes", "6", "--alphas", "0"]));
    let s2: f64 = zero.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!(s2.abs() < 1e-9);
}

#[test]
fn vanishing_reports_predictions() {
    let out = stdout(&bin(&["vanishing", "--n", "8", "--alphas", "1.2,1.5707963267948966", "--seed", "4"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0]["prediction"]["per_syndrome_m2"].as_array().unwrap().len(), 128);
    assert!(entries[1]["prediction"]["averaged_m2"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn bootstrap_of_constant_sample() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.txt");
    std::fs::write(&p, "2.5 2.5\n2.5\n").unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&bin(&["bootstrap", "--input", p.to_str().unwrap()]))).unwrap();
    assert_eq!(v["stderr"].as_f64().unwrap(), 0.0);
    assert_eq!(v["mean"].as_f64().unwrap(), 2.5);
}

#[test]
fn collapse_recovers_synthetic_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("data.csv");
    let mut text = String::from("n,alpha,density\n");
    for n in [8usize, 12, 16] {
        for i in 0..15 {
            let a = 0.6 + 0.05 * i as f64;
            let x = (a - 0.9) * (n as f64).powf(1.0 / 2.0);
            text.push_str(&format!("{n},{a},{}\n", 0.4 + 0.3 * x - 0.1 * x * x));
        }
    }
    std::fs::write(&p, text).unwrap();
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&bin(&["collapse", "--input", p.to_str().unwrap(), "--window", "0.5,1.4"]))).unwrap();
    assert!((v["alpha_c"].as_f64().unwrap() - 0.9).abs() < 1e-4, "{v}");
    assert!((v["nu"].as_f64().unwrap() - 2.0).abs() < 1e-3, "{v}");
}

#[test]
fn ingest_keeps_going_past_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "[]").unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(
        &good,
        r#"{"seed": 1, "n": 4, "k": 2, "d": 2, "alpha": 0.0, "counts": {"0000": 100}}"#,
    )
    .unwrap();
    let o = bin(&["ingest", bad.to_str().unwrap(), good.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failures"].as_array().unwrap().len(), 1);
    assert_eq!(v["records"].as_array().unwrap().len(), 1);
    assert!(v["records"][0]["shannon"].as_f64().unwrap().abs() < 1e-12);
    let only_bad = bin(&["ingest", bad.to_str().unwrap()]);
    assert!(!only_bad.status.success());
}

#[test]
fn sweep_without_config_fails() {
    let o = bin(&["sweep"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--config"));
}
