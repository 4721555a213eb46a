use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn starprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starprod"))
        .args(args)
        .env_remove("STARPROD_SEED")
        .output()
        .expect("binary runs")
}

fn scenario(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(format!("{name}.toml"));
    std::fs::write(&p, text).unwrap();
    p
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const WEYL3: &str = "carrier = \"weyl-system\"\nseed = 9\noutput = \"out.json\"\n[weyl]\nn = 3\n";

#[test]
fn weyl3_scenario_passes_at_least_twelve_checks() {
    let dir = tempfile::tempdir().unwrap();
    let p = scenario(dir.path(), "w", WEYL3);
    let out = starprod(&["run", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&dir.path().join("out.json"));
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.iter().filter(|c| c["pass"] == true).count() >= 12);
    assert_eq!(r["pass"], true);
    assert!(checks.iter().all(|c| c["wall_time"].is_null()));
    let mut names: Vec<_> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    let total = names.len();
    names.dedup();
    assert_eq!(names.len(), total);
}

#[test]
fn unknown_check_exits_2_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = scenario(
        dir.path(),
        "bad",
        "carrier = \"weyl-system\"\nseed = 1\nchecks = [\"no-such-check\"]\noutput = \"out.json\"\n[weyl]\nn = 3\n",
    );
    let out = starprod(&["run", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("out.json").exists());
}

#[test]
fn schema_violations_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for (i, text) in [
        "carrier = \"weyl-system\"\nseed = 1\noutput = \"o.json\"\nextra = 3\n[weyl]\nn = 3\n",
        "carrier = \"weyl-system\"\noutput = \"o.json\"\n[weyl]\nn = 3\n",
        "carrier = \"finite-group\"\nseed = 1\noutput = \"o.json\"\n[finite]\ngroup_file = \"missing.group\"\nrep_file = \"missing.rep\"\n",
        "carrier = \"finite-group\"\nseed = 1\noutput = \"o.json\"\nchecks = [\"moyal-kernel\"]\n[finite]\nrep = \"s3_std\"\n",
    ]
    .iter()
    .enumerate()
    {
        let p = scenario(dir.path(), &format!("s{i}"), text);
        assert_eq!(starprod(&["run", p.to_str().unwrap()]).status.code(), Some(2), "case {i}");
        assert!(!dir.path().join("o.json").exists());
    }
    assert_eq!(starprod(&["run", dir.path().join("absent.toml").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn failing_check_exits_1_with_full_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = scenario(
        dir.path(),
        "tight",
        "carrier = \"weyl-system\"\nseed = 1\noutput = \"out.json\"\n\
         checks = [\"explicit-vs-implicit-star\", \"involution-jm\"]\n[weyl]\nn = 3\n\
         [tolerances]\ndefault = 0.0\n",
    );
    let out = starprod(&["run", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&dir.path().join("out.json"));
    assert_eq!(r["pass"], false);
    assert_eq!(r["checks"].as_array().unwrap().len(), 2);
    assert_eq!(r["summary"]["failed"], 1);
}

#[test]
fn seed_environment_variable_overrides_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let p = scenario(dir.path(), "w", WEYL3);
    let out = Command::new(env!("CARGO_BIN_EXE_starprod"))
        .args(["run", p.to_str().unwrap()])
        .env("STARPROD_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&dir.path().join("out.json"))["environment"]["seed"], 123);
}

#[test]
fn timings_are_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let p = scenario(dir.path(), "w", WEYL3);
    assert_eq!(starprod(&["run", p.to_str().unwrap(), "--timings", "--parallel"]).status.code(), Some(0));
    let r = json(&dir.path().join("out.json"));
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["wall_time"].is_number()));
}

#[test]
fn list_checks_catalog() {
    let out = starprod(&["list-checks", "--json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), starprod::checks::REGISTRY.len());
    let anchor = |n: &str| {
        list.iter().find(|c| c["name"] == n).map(|c| c["anchor"].as_str().unwrap().to_string()).unwrap()
    };
    assert!(anchor("orthogonality-relations").contains("Duflo-Moore"));
    assert!(anchor("explicit-vs-implicit-star").contains("main theorem"));
    assert!(list.iter().all(|c| !c["description"].as_str().unwrap().is_empty()));
}

fn write_function(path: &Path, order: usize, phase: f64) {
    let s: String = (0..order)
        .map(|g| format!("{g} {} {}\n", (g as f64 * phase).cos(), (g as f64 * phase + 0.3).sin()))
        .collect();
    std::fs::write(path, s).unwrap();
}

#[test]
fn star_subcommand_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let (f1, f2) = (dir.path().join("f1.txt"), dir.path().join("f2.txt"));
    write_function(&f1, 6, 0.7);
    write_function(&f2, 6, 1.9);
    for method in ["implicit", "explicit", "twisted", "char"] {
        let out_path = dir.path().join(format!("{method}.json"));
        let out = starprod(&[
            "star", "--group", "s3", "--rep", "s3_std",
            "--f1", f1.to_str().unwrap(), "--f2", f2.to_str().unwrap(),
            "--method", method, "--out", out_path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{method}: {}", String::from_utf8_lossy(&out.stderr));
        let r = json(&out_path);
        assert_eq!(r["method"], method);
        assert!(r["max_dev_vs_oracle"].as_f64().unwrap() < 1e-10, "{method}");
        assert_eq!(r["result"].as_array().unwrap().len(), 6);
        assert!(r["timings"].is_null());
    }
}

#[test]
fn star_subcommand_with_deformation_operator() {
    let dir = tempfile::tempdir().unwrap();
    let (f1, f2, k) = (dir.path().join("f1.txt"), dir.path().join("f2.txt"), dir.path().join("k.txt"));
    write_function(&f1, 6, 0.4);
    write_function(&f2, 6, 2.2);
    std::fs::write(&k, "dim 2\n0.5 0 0.1 0.2\n0 0 0.3 -0.1\n").unwrap();
    let out_path = dir.path().join("k.json");
    let args = |method: &'static str| {
        vec![
            "star".to_string(), "--group".into(), "s3".into(), "--rep".into(), "s3_std".into(),
            "--f1".into(), f1.display().to_string(), "--f2".into(), f2.display().to_string(),
            "--K".into(), k.display().to_string(), "--method".into(), method.into(),
            "--out".into(), out_path.display().to_string(), "--timings".into(),
        ]
    };
    let a: Vec<String> = args("explicit");
    let out = starprod(&a.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out_path);
    assert!(r["max_dev_vs_oracle"].as_f64().unwrap() < 1e-10);
    assert!(r["timings"]["method_s"].is_number());
    let a: Vec<String> = args("twisted");
    assert_eq!(starprod(&a.iter().map(String::as_str).collect::<Vec<_>>()).status.code(), Some(2));
}

#[test]
fn weyl_subcommand_dumps_wigner_and_selects_checks() {
    let dir = tempfile::tempdir().unwrap();
    let (dump, out) = (dir.path().join("w.txt"), dir.path().join("r.json"));
    let o = starprod(&[
        "weyl", "--N", "4", "--check", "symplectic-fourier,standard-wigner-route",
        "--dump-wigner", dump.to_str().unwrap(), "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::metadata(&dump).unwrap().len() > 0);
    let r = json(&out);
    assert_eq!(r["summary"]["total"], 2);
    assert_eq!(r["environment"]["carrier"]["ordering"], "standard");
    let bad = starprod(&["weyl", "--N", "4", "--check", "moyal-kernel"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn affine_subcommand_reports_tau_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.json");
    let o = starprod(&[
        "affine", "--sign", "minus", "--check", "affine-unitarity,affine-semi-invariance",
        "--L", "16", "--M", "24", "--K", "16", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&out);
    assert!(r["environment"]["tau_grid"].is_number());
    assert_eq!(r["environment"]["carrier"]["sign"], "minus");
    let bad = starprod(&["affine", "--rho", "1.3", "--check", "affine-unitarity"]);
    assert_eq!(bad.status.code(), Some(2));
}
