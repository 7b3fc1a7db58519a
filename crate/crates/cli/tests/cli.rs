use std::path::PathBuf;
use std::process::{Command, Output};

use nondense_cli::config::{MoranSpec, SystemSpec};

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn nondense(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nondense"))
        .args(args)
        .current_dir(repo())
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn bundled_systems() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(repo().join("systems"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    v
}

#[test]
fn every_bundled_system_round_trips() {
    let systems = bundled_systems();
    assert_eq!(systems.len(), 10);
    for path in systems {
        let spec = SystemSpec::load(&path).unwrap();
        let again = SystemSpec::parse(&spec.to_json()).unwrap();
        assert_eq!(spec, again, "{}", path.display());
        let a = spec.resolve().unwrap();
        let b = again.resolve().unwrap();
        assert_eq!(a.sft, b.sft);
        assert_eq!(a.phi.entries(), b.phi.entries());
    }
}

#[test]
fn bundled_moran_params_resolve() {
    let sys = SystemSpec::load(&repo().join("systems/full2.json")).unwrap().resolve().unwrap();
    for name in ["pass", "block_length_fail", "adversarial"] {
        let spec = MoranSpec::load(&repo().join(format!("systems/moran/{name}.json"))).unwrap();
        let p = spec.resolve(&sys).unwrap();
        assert_eq!(p.e, 5);
        assert_eq!(p.n_seq, vec![7, 8]);
    }
}

#[test]
fn pressure_with_oracle_prints_two_records() {
    let o = nondense(&["pressure", "systems/golden_mean.json", "--oracle", "12"]);
    assert!(o.status.success());
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["method"], "spectral");
    assert_eq!(lines[1]["method"], "word_sum");
    let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    assert!((lines[0]["value"].as_f64().unwrap() - golden).abs() < 1e-12);
    assert!(lines[1]["value"].as_f64().unwrap() > golden);
}

#[test]
fn entropy_ignores_the_potential() {
    let o = nondense(&["entropy", "systems/weighted_full2.json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
    let o = nondense(&["pressure", "systems/weighted_full2.json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-10);
}

#[test]
fn gibbs_reports_a_small_defect() {
    let o = nondense(&["gibbs", "systems/golden_mean.json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v["defect"].as_f64().unwrap() < 1e-10);
    let pi: f64 = v["stationary"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
    assert!((pi - 1.0).abs() < 1e-12);
}

#[test]
fn avoid_sweep_writes_csv_to_file() {
    let out = std::env::temp_dir().join(format!("nondense-sweep-{}.csv", std::process::id()));
    let o = nondense(&[
        "avoid-sweep",
        "systems/full2.json",
        "--z0",
        "zero",
        "--nmax",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    std::fs::remove_file(&out).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "n,pressure,error_bound,gap_to_full,empty_flag");
    assert_eq!(rows.len(), 4);
    assert!(rows[1].starts_with("1,0,"));
}

#[test]
fn empty_levels_are_flagged() {
    let o = nondense(&["avoid-sweep", "systems/two_point_empty.json", "--z0", "zero", "--nmax", "2"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "n,pressure,error_bound,gap_to_full,empty_flag\n1,-inf,0,inf,1\n2,-inf,0,inf,1\n"
    );
}

#[test]
fn dimension_rows() {
    let o = nondense(&["dimension", "systems/times3.json", "--z0", "zero", "--nmax", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let first = text.lines().nth(1).unwrap();
    let s: f64 = first.split(',').nth(1).unwrap().parse().unwrap();
    assert!((s - 2f64.ln() / 3f64.ln()).abs() < 1e-6);
    let o = nondense(&["dimension", "systems/times10.json"]);
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(row.starts_with("0,"));
    let s: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((s - 1.0).abs() < 1e-9);
}

#[test]
fn moran_verify_exit_codes() {
    let o = nondense(&["moran-verify", "systems/full2.json", "--params", "systems/moran/pass.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("verdict: PASS\n"));

    let o = nondense(&["moran-verify", "systems/full2.json", "--params", "systems/moran/block_length_fail.json"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("[FAIL] block length 2m(C + ||phi||)/(M + 2m) < eta"));
    assert_eq!(text.matches("[FAIL]").count(), 1);
    assert!(text.ends_with("verdict: FAIL\n"));
}

#[test]
fn adversarial_injection_fails_avoidance() {
    for args in [
        vec!["moran-verify", "systems/full2.json", "--params", "systems/moran/adversarial.json"],
        vec![
            "moran-verify",
            "systems/full2.json",
            "--params",
            "systems/moran/pass.json",
            "--inject-adversarial",
        ],
    ] {
        let o = nondense(&args);
        assert_eq!(o.status.code(), Some(1));
        let fails: Vec<String> = stdout(&o).lines().filter(|l| l.starts_with("[FAIL]")).map(String::from).collect();
        assert!(!fails.is_empty());
        assert!(fails.iter().all(|l| l.starts_with("[FAIL] avoidance")), "{fails:?}");
    }
}

#[test]
fn input_errors_exit_two() {
    let bad = std::env::temp_dir().join(format!("nondense-bad-{}.json", std::process::id()));
    std::fs::write(&bad, "{\"kind\": \"sft\",\n  \"label\": 3 }").unwrap();
    let o = nondense(&["pressure", bad.to_str().unwrap()]);
    std::fs::remove_file(&bad).unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let o = nondense(&["avoid-sweep", "systems/full2.json", "--z0", "nowhere"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nowhere"));

    let o = nondense(&["pressure", "systems/missing.json"]);
    assert_eq!(o.status.code(), Some(2));

    let o = nondense(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn word_sum_guard_is_an_input_error() {
    let o = nondense(&["pressure", "systems/times10.json", "--oracle", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));
}
