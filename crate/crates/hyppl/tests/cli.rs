use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};
use tempfile::TempDir;

fn hyppl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyppl")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn run_json(command: &str, config: &str, extra: &[&str]) -> (i32, Value, String) {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "run.toml", config);
    let mut args = vec![command, "--config", &cfg];
    args.extend_from_slice(extra);
    let out = hyppl(&args);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v, String::from_utf8(out.stderr).unwrap())
}

const MINIMAL: &str = "command = \"verify-plancherel\"\nepsilon = 0\nktypes = [{ m = 0, width = 1.0 }]\n";
const M6: &str = "epsilon = 0\nktypes = [{ m = 6, width = 0.5, center = 0.15 }]\ns_max = 16.0\nn_points = 640\n";

#[test]
fn minimal_plancherel_passes() {
    let (code, r, _) = run_json("verify-plancherel", MINIMAL, &[]);
    assert_eq!(code, 0);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["config"]["grid"]["s_max"], 10.0);
    assert_eq!(r["config"]["grid"]["n_points"], 400);
    let ratio = r["result"]["ratio"].as_f64().unwrap();
    assert!((ratio - 1.0).abs() < 1e-3, "{ratio}");
    for key in [
        "lhs_norm_sq",
        "continuous_part",
        "discrete_terms",
        "rhs_total",
        "tail_estimate",
        "per_ktype",
        "convention",
        "warnings",
    ] {
        assert!(r["result"].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn reports_are_byte_identical_and_sorted() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "run.toml", MINIMAL);
    let outs: Vec<String> = ["a.json", "b.json"]
        .iter()
        .map(|name| {
            let p = dir.path().join(name);
            let o = hyppl(&["verify-plancherel", "--config", &cfg, "--out", p.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0));
            assert!(o.stdout.is_empty());
            std::fs::read_to_string(&p).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    let top: Vec<&str> = outs[0]
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
}

#[test]
fn inversion_passes_and_ablation_fails() {
    let (code, r, _) = run_json("verify-inversion", M6, &[]);
    assert_eq!(code, 0, "{r}");
    assert!(r["result"]["relative_sup_error"].as_f64().unwrap() < 1e-3);
    assert_eq!(r["table"]["rows"].as_array().unwrap().len(), 35);
    let (code, r, err) = run_json("verify-inversion", M6, &["--ablate-discrete"]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "check_failure");
    assert_eq!(r["config"]["ablate_discrete"], true);
    assert!(err.contains("inversion_relative_sup_error"), "{err}");
}

#[test]
fn config_errors_exit_2_with_line() {
    let (code, _, err) = run_json("verify-plancherel", "epsilon = 0\nktypes = [\n  { m = 0 },\n  { m = 3 },\n]\n", &[]);
    assert_eq!(code, 2);
    assert!(err.contains("line 4") && err.contains("parity"), "{err}");
    let (code, _, err) = run_json("verify-plancherel", "epsilon = 0\nepsilon = 1\n", &[]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2") && err.contains("epsilon"), "{err}");
    let (code, _, err) = run_json("identity-suite", "tolerance = 1e-3\n", &[]);
    assert_eq!(code, 2);
    assert!(err.contains("tolerance"), "{err}");
    let o = hyppl(&["identity-suite", "--config", "/nonexistent/run.toml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    let (code, r, err) = run_json("verify-inversion", "epsilon = 0\nlambda_imag = 0.5\nktypes = [{ m = 0 }]\n", &[]);
    assert_eq!(code, 3);
    assert_eq!(r["status"], "numerical_failure");
    assert!(r["error"].as_str().unwrap().contains("lambda = 0"));
    assert!(err.contains("numerical failure"));
}

#[test]
fn spectral_density_csv_table() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "run.toml", "epsilon = 1\nktypes = [{ m = 1 }, { m = -1 }]\nn_points = 60\n");
    let out = dir.path().join("density.csv");
    let o = hyppl(&[
        "spectral-density",
        "--config",
        &cfg,
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(Path::new(&out)).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,integrand"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (s, v) = l.split_once(',').unwrap();
            assert_eq!(s.split('e').next().unwrap().replace('.', "").len(), 17, "{s}");
            (s.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 60);
    assert!(rows.windows(2).all(|w| w[0].0 < w[1].0));
    assert!(rows.iter().all(|r| r.1 >= 0.0));
}

#[test]
fn identity_suite_table() {
    let (code, r, _) = run_json("identity-suite", "", &[]);
    assert_eq!(code, 0);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "identity_casselman"));
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert!(r["table"]["rows"].as_array().unwrap().len() > 100);
}

#[test]
fn roundtrip_and_casimir_pass() {
    let cfg = "epsilon = 0\nktypes = [{ m = 2, width = 0.8 }]\ns_max = 30.0\nn_points = 600\n";
    let (code, r, err) = run_json("jacobi-roundtrip", cfg, &[]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(r["checks"].as_array().unwrap().len(), 2);
    let (code, _, err) = run_json(
        "casimir-check",
        "epsilon = 1\nlambda_imag = 0.7\nktypes = [{ m = 1 }, { m = -3, center = 0.2 }]\n",
        &[],
    );
    assert_eq!(code, 0, "{err}");
}
