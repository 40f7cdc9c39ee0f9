use std::fs;
use std::path::Path;
use std::process::Command as Process;

use chafee_cli::manifest::RunManifest;
use serde_json::Value;
use chafee_cli::{run, CliError, Command, ExperimentConfig, RunOptions};

fn opts(command: Command, config: ExperimentConfig, out: &Path) -> RunOptions {
    RunOptions {
        command,
        config,
        out: out.to_path_buf(),
        threads: 2,
        manifests: Vec::new(),
    }
}

fn small() -> ExperimentConfig {
    let mut c = ExperimentConfig::default();
    c.solver.n_modes = 63;
    c.solver.dt = 0.02;
    c
}

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_chafee"))
}

#[test]
fn empty_lambda_list_gives_empty_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small();
    c.equilibria.lambdas.clear();
    let (m, code) = run(&opts(Command::Equilibria, c, dir.path())).unwrap();
    assert_eq!(code, 0);
    assert!(m.artifacts.is_empty() && m.errors.is_empty() && m.certifications.is_empty());
    assert!(dir.path().join("manifest.json").is_file());
}

#[test]
fn bifurcation_lambda_is_isolated() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small();
    c.equilibria.lambdas = vec![2.0, 4.0, 5.0];
    let (m, code) = run(&opts(Command::Equilibria, c, dir.path())).unwrap();
    assert_eq!(code, 0);
    assert_eq!(m.errors.len(), 1);
    assert_eq!(m.errors[0].what, "lambda 4");
    assert_eq!(m.errors[0].exit_code, 2);
    assert_eq!(m.certifications.len(), 2);
    assert!(m.all_certified());
    // 3 states at lambda = 2 and 5 at lambda = 5, csv + json each
    assert_eq!(m.artifacts.len(), 16);
    assert!(m.artifacts.iter().all(|a| !a.path.contains("lambda_4")));
}

#[test]
fn evolve_output_is_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut c = small();
    c.evolve.t1 = 2.0;
    run(&opts(Command::Evolve, c.clone(), a.path())).unwrap();
    let mut o = opts(Command::Evolve, c, b.path());
    o.threads = 1;
    run(&o).unwrap();
    for f in ["trajectory/snapshots.csv", "trajectory/meta.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn omega_with_zero_runs_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small();
    c.omega.runs = 0;
    let (m, code) = run(&opts(Command::Omega, c, dir.path())).unwrap();
    assert_eq!(code, 0);
    assert_eq!(m.summary["runs"], 0);
    assert!(m.summary["counts"].as_object().unwrap().values().all(|v| v == 0));
}

#[test]
fn omega_census_is_deterministic_across_threads() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut c = small();
    c.seed = 11;
    c.omega.runs = 3;
    c.omega.horizon = 20.0;
    run(&opts(Command::Omega, c.clone(), a.path())).unwrap();
    let mut o = opts(Command::Omega, c, b.path());
    o.threads = 3;
    run(&o).unwrap();
    for f in ["omega/corpus.csv", "omega/census.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn report_detects_tampering() {
    let runs = tempfile::tempdir().unwrap();
    let mut c = small();
    c.equilibria.lambdas = vec![2.0];
    run(&opts(Command::Equilibria, c.clone(), runs.path())).unwrap();
    let manifest = runs.path().join("manifest.json");

    let out = tempfile::tempdir().unwrap();
    let mut r = opts(Command::Report, c.clone(), out.path());
    r.manifests = vec![manifest.clone()];
    let (m, code) = run(&r).unwrap();
    assert_eq!(code, 0);
    assert!(m.artifacts.iter().any(|a| a.path == "report.json"));
    assert!(m.artifacts.iter().any(|a| a.path.ends_with(".svg")));

    let target = runs.path().join("equilibria/lambda_2/phi_0.csv");
    assert!(m.artifacts.len() > 1);
    let mut bytes = fs::read(&target).unwrap();
    bytes.push(b'\n');
    fs::write(&target, bytes).unwrap();
    let err = run(&r).unwrap_err();
    assert!(matches!(err, CliError::Integrity(_)));
    assert_eq!(err.exit_code(), 4);

    fs::remove_file(&target).unwrap();
    assert!(matches!(run(&r).unwrap_err(), CliError::Integrity(_)));
}

#[test]
fn binary_rejects_bad_config_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[solver]\ndt = -1.0\n").unwrap();
    let out = dir.path().join("out");
    let status = bin()
        .args(["evolve", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    assert!(out.join("error.json").is_file());

    fs::write(&cfg, "bogus = 1\n").unwrap();
    let status = bin().args(["equilibria", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn binary_reports_non_convergence_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        "[solver]\nn_modes = 63\ndt = 0.02\n[pullback]\nlambda = 2.0\nt_b = 1.0\nk_max = 2\ntol = 1e-14\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let status = bin().args(["pullback", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(3));
    let m: RunManifest = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m.errors.len(), 2);
    assert!(m.artifacts.iter().any(|a| a.path == "pullback/xi_1_plus/convergence.csv"));
}

#[test]
fn binary_seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "seed = 1\n[solver]\nn_modes = 31\n[omega]\nruns = 0\n").unwrap();
    let out = dir.path().join("out");
    let status = bin()
        .args(["omega", "--seed", "99", "--threads", "2", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let m: RunManifest = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m.seed, 99);
    assert_eq!(m.threads, 2);
}

#[test]
fn antisymmetric_census_at_lambda_5_finds_second_modes() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small();
    c.seed = 3;
    c.omega.lambda = 5.0;
    c.omega.runs = 6;
    c.omega.horizon = 40.0;
    c.omega.antisymmetric = true;
    let (m, code) = run(&opts(Command::Omega, c, dir.path())).unwrap();
    assert_eq!(code, 0, "{:?}", m.certifications);
    let observed: Vec<&str> = m.summary["observed"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(!observed.is_empty());
    assert!(observed.iter().all(|l| ["xi_2_plus", "xi_2_minus", "zero"].contains(l)), "{observed:?}");
}

#[test]
fn pullback_then_report() {
    let runs = tempfile::tempdir().unwrap();
    let mut c = small();
    c.pullback.t_b = 2.0;
    c.pullback.tol = 1e-6;
    let (m, code) = run(&opts(Command::Pullback, c.clone(), runs.path())).unwrap();
    assert_eq!(code, 0, "{:?} {:?}", m.errors, m.certifications);
    assert!(runs.path().join("pullback/section/section.json").is_file());
    let labels = m.summary["section"].as_array().unwrap();
    assert_eq!(labels.len(), 3);

    let out = tempfile::tempdir().unwrap();
    let mut r = opts(Command::Report, c, out.path());
    r.manifests = vec![runs.path().join("manifest.json")];
    let (_, code) = run(&r).unwrap();
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&fs::read_to_string(out.path().join("report.json")).unwrap()).unwrap();
    let plots: Vec<&str> = report["plots"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(plots.iter().any(|p| p.starts_with("convergence_")));
    assert!(plots.iter().any(|p| p.starts_with("morse_inventory_")));
    let rows = report["morse_inventories"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["pullback_certified"] == true));
}
