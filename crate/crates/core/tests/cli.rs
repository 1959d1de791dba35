use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn evasion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evasion"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_golden(dir: &Path) -> String {
    let path = dir.join("golden.json");
    fs::write(
        &path,
        r#"{"pursuer": [0, 0], "evaders": [[1, -0.5], [2, 0]], "u_min": 0.2, "u_max": 0.8}"#,
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn version_and_help() {
    let o = evasion(&["--version"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains(env!("CARGO_PKG_VERSION")));
    let o = evasion(&["--help"]);
    assert!(o.status.success());
    for cmd in [
        "simulate",
        "seq-grec",
        "brute-force",
        "baseline",
        "bound",
        "fig3",
        "fig4",
        "gen",
    ] {
        assert!(stdout(&o).contains(cmd), "{cmd}");
    }
}

#[test]
fn seq_grec_golden() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_golden(dir.path());
    let o = evasion(&["seq-grec", &s]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["assignment"]["speeds"], serde_json::json!([0.2, 0.8]));
    assert_eq!(v["assignment"]["labels"], serde_json::json!(["Cooperative", "Greedy"]));
    assert!((v["trace"]["total"].as_f64().unwrap() - 12.5).abs() < 1e-9);

    let o = evasion(&["seq-grec", &s, "--table"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("Cooperative"));
}

#[test]
fn simulate_and_search() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_golden(dir.path());
    for extra in [&[][..], &["--dt", "1e-4"][..]] {
        let mut args = vec!["simulate", s.as_str(), "--speeds", "0.2,0.8"];
        args.extend_from_slice(extra);
        let o = evasion(&args);
        assert!(o.status.success());
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!((v["total"].as_f64().unwrap() - 12.5).abs() < 1e-3);
    }
    let o = evasion(&["brute-force", &s]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["evaluations"], 4);
    let o = evasion(&["search", &s, "--method", "grid", "--points", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["evaluations"], 9);
    assert_eq!(v["method"], "Grid");
    let o = evasion(&["baseline", &s, "--delta", "0.1", "--seed", "4"]);
    assert!(o.status.success());
    let again = evasion(&["baseline", &s, "--delta", "0.1", "--seed", "4"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_golden(dir.path());
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"pursuer": [0, 0], "evaders": [[1, 0]], "u_min": 0.8, "u_max": 0.2}"#,
    )
    .unwrap();
    let o = evasion(&["seq-grec", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("u_min < u_max"));

    let missing = dir.path().join("missing.json");
    fs::write(&missing, r#"{"pursuer": [0, 0], "evaders": [[1, 0]], "u_max": 0.8}"#).unwrap();
    let o = evasion(&["brute-force", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("u_min"));

    assert_eq!(evasion(&["simulate", &s, "--speeds", "0.2"]).status.code(), Some(2));
    assert_eq!(evasion(&["baseline", &s, "--delta", "2"]).status.code(), Some(2));
    assert_eq!(evasion(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn io_errors_exit_1() {
    let o = evasion(&["seq-grec", "/nonexistent/scenario.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = evasion(&["gen", "--n", "5", "--seed", "42"]);
    let b = evasion(&["gen", "--n", "5", "--seed", "42"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let path = dir.path().join("s.json");
    let o = evasion(&["gen", "--n", "5", "--seed", "42", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    let from_file: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let from_stdout: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(from_file, from_stdout);
    assert_eq!(evasion(&["gen", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn bound_from_inputs_and_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = dir.path().join("in.json");
    fs::write(
        &inputs,
        r#"{"n": 100, "n_max": 63, "area_max": 1, "area_min": 1, "delta_x": 1, "delta_y": 0,
            "bounds": {"u_min": 0.2, "u_max": 0.8}}"#,
    )
    .unwrap();
    let sweep = dir.path().join("sweep.csv");
    let o = evasion(&[
        "bound",
        "--inputs",
        inputs.to_str().unwrap(),
        "--sweep",
        sweep.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["breakdown"]["t_nmax"].as_f64().unwrap() - 24.152).abs() < 1e-2);
    assert_eq!(v["n_max_star"], 63);
    let csv = fs::read_to_string(&sweep).unwrap();
    assert!(csv.starts_with("n_max,total\n1,"));
    assert_eq!(csv.lines().count(), 100);

    let s = write_golden(dir.path());
    let o = evasion(&["bound", "--scenario", &s, "--fast", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["inputs"]["n_max"], 1);
    assert!(v["realized"]["total"].as_f64().unwrap() > 0.0);
    assert_eq!(
        evasion(&["bound", "--scenario", &s, "--fast", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(evasion(&["bound"]).status.code(), Some(2));
}

#[test]
fn experiments_write_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    fs::write(&config, r#"{"n_values": [2, 3], "trials": 4, "master_seed": 9}"#).unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = evasion(&[
            "fig3",
            "--config",
            config.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(out).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let text = String::from_utf8(a).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "n,trial,seed,seq_grec,greedy,sampling,brute_force,wall_ms"
    );
    assert_eq!(text.lines().count(), 9);

    let out = dir.path().join("f4.csv");
    let o = evasion(&[
        "fig4",
        "--config",
        config.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert!(fs::read_to_string(out)
        .unwrap()
        .starts_with("n,trial,seed,n_max,realized,bound,heuristic"));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"trials": 0}"#).unwrap();
    assert_eq!(
        evasion(&["fig3", "--config", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
}
