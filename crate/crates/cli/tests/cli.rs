use std::path::Path;
use std::process::{Command, Output};

use dtqw::walker::{evolve, initial_state, CoinInit, PositionInit};
use dtqw::{build_petersen, compute_rotation_map, measure_positions, CMatrix64, CoinSchedule};

fn dtqw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dtqw")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn csv_column(text: &str, col: usize) -> Vec<f64> {
    text.lines().skip(1).map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect()
}

#[test]
fn walk_examples() {
    let o = dtqw(&["walk", "--graph", "petersen", "--coin", "torus:0,0,0", "--steps", "5", "--start", "1"]);
    assert_eq!(code(&o), 0);
    let p = csv_column(&String::from_utf8(o.stdout).unwrap(), 1);
    assert_eq!(p.len(), 10);
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    assert!(String::from_utf8(o.stderr).unwrap().contains("total probability"));

    let o = dtqw(&["walk", "--graph", "cycle:4", "--steps", "3", "--start", "1"]);
    assert_eq!(csv_column(&String::from_utf8(o.stdout).unwrap(), 1)[0], 0.0);

    let o = dtqw(&["walk", "--graph", "petersen", "--steps", "0", "--start", "1"]);
    let p = csv_column(&String::from_utf8(o.stdout).unwrap(), 1);
    assert_eq!(p[0], 1.0);
    assert!(p[1..].iter().all(|&x| x == 0.0));
}

#[test]
fn walk_files_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let probs = dir.path().join("p.csv");
    let state = dir.path().join("s.csv");
    let o = dtqw(&["walk", "--graph", "c60", "--steps", "13", "--out", s(&probs), "--state-out", s(&state)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("total probability: 1.0000000000000"));
    assert_eq!(std::fs::read_to_string(&state).unwrap().lines().count(), 181);
    let manifest = std::fs::read_to_string(dir.path().join("p.csv.manifest.json")).unwrap();
    assert!(manifest.contains("\"command\": \"walk\""));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&dtqw(&[])), 1);
    assert_eq!(code(&dtqw(&["walk", "--graph"])), 1);
    assert_eq!(code(&dtqw(&["frobnicate"])), 1);
    assert_eq!(code(&dtqw(&["--help"])), 0);
    assert_eq!(code(&dtqw(&["walk", "--graph", "cycle:2", "--steps", "1"])), 2);
    assert_eq!(code(&dtqw(&["walk", "--graph", "petersen", "--coin", "torus:1,2", "--steps", "1"])), 2);
    assert_eq!(code(&dtqw(&["walk", "--graph", "petersen", "--start", "11", "--steps", "1"])), 2);
    assert_eq!(code(&dtqw(&["walk", "--graph", "/no/such/graph.txt", "--steps", "1"])), 3);
    assert_eq!(code(&dtqw(&["error-vs-steps", "--run", "/no/such/run.json", "--t-max", "3"])), 3);
    assert_eq!(code(&dtqw(&["train", "--config", "/no/such/config.json"])), 3);
}

#[test]
fn graph_info_report() {
    let o = dtqw(&["graph-info", "--graph", "petersen"]);
    let text = String::from_utf8(o.stdout).unwrap();
    for line in ["vertices: 10", "degree: 3", "diameter: 2", "bipartite: false", "rotation map valid: true"] {
        assert!(text.contains(line), "{text}");
    }
    let text = String::from_utf8(dtqw(&["graph-info", "--graph", "cycle:6"]).stdout).unwrap();
    assert!(text.contains("bipartite: true"));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("k4.txt");
    std::fs::write(&file, "4 3\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n").unwrap();
    let text = String::from_utf8(dtqw(&["graph-info", "--graph", s(&file)]).stdout).unwrap();
    assert!(text.contains("diameter: 1"), "{text}");
}

fn write_config(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn train_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "cfg.json",
        r#"{"graph": "petersen", "target": "random:7", "parametrization": "torus",
            "schedule_mode": "per-step", "steps": 8, "iterations": 300}"#,
    );
    let out = dir.path().join("out");
    let o = dtqw(&["train", "--config", s(&cfg), "--out-dir", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["run.json", "trace.csv", "comparison.csv", "manifest.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let trace = std::fs::read_to_string(out.join("trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 302);
    assert_eq!(trace.lines().next(), Some("iteration,error"));
    let cmp = std::fs::read_to_string(out.join("comparison.csv")).unwrap();
    assert_eq!(cmp.lines().count(), 11);
}

#[test]
fn train_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_config(
        dir.path(),
        "zero.json",
        r#"{"graph": "petersen", "target": "uniform", "parametrization": "lie", "iterations": 0}"#,
    );
    let out = dir.path().join("zero");
    assert_eq!(code(&dtqw(&["train", "--config", s(&zero), "--out-dir", s(&out)])), 0);
    assert_eq!(std::fs::read_to_string(out.join("trace.csv")).unwrap().lines().count(), 2);

    let mismatch = write_config(
        dir.path(),
        "mismatch.json",
        r#"{"graph": "petersen", "target": "uniform", "parametrization": "torus", "schedule_mode": "per-step",
            "steps": 8, "init": {"kind": "explicit", "params": [0, 0, 0]}}"#,
    );
    let o = dtqw(&["train", "--config", s(&mismatch), "--out-dir", s(&dir.path().join("m"))]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().contains("expected 24"));

    let typo = write_config(
        dir.path(),
        "typo.json",
        r#"{"graph": "petersen", "target": "uniform", "parametrization": "torus", "init": {"kind": "random", "seed": 1, "scale": "big"}}"#,
    );
    let o = dtqw(&["train", "--config", s(&typo)]);
    assert_eq!(code(&o), 2);
    let msg = String::from_utf8(o.stderr).unwrap();
    assert!(msg.contains("at `init`") && msg.contains("\"big\""), "{msg}");

    let parity = write_config(
        dir.path(),
        "parity.json",
        r#"{"graph": "cycle:6", "target": "delta:1", "parametrization": "torus", "steps": 3}"#,
    );
    let o = dtqw(&["train", "--config", s(&parity)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().contains("bipartite"));
}

#[test]
fn divergence_exits_with_4_and_keeps_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "div.json",
        r#"{"graph": "petersen", "target": "random:1", "parametrization": "torus", "steps": 4,
            "iterations": 20, "stochastic_noise": 1.7e308}"#,
    );
    let out = dir.path().join("out");
    let o = dtqw(&["train", "--config", s(&cfg), "--out-dir", s(&out)]);
    assert_eq!(code(&o), 4);
    let trace = std::fs::read_to_string(out.join("trace.csv")).unwrap();
    assert!(trace.trim_end().ends_with("NaN"));
    assert!(out.join("manifest.json").exists());
}

#[test]
fn config_paths_resolve_against_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("k4.txt"), "4 3\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n").unwrap();
    std::fs::write(dir.path().join("t.csv"), "vertex,probability\n1,0.1\n2,0.2\n3,0.3\n4,0.4\n").unwrap();
    let cfg = write_config(
        dir.path(),
        "cfg.json",
        r#"{"graph": "k4.txt", "target": "t.csv", "parametrization": "torus", "iterations": 5}"#,
    );
    let out = dir.path().join("out");
    let o = Command::new(env!("CARGO_BIN_EXE_dtqw"))
        .args(["train", "--config", s(&cfg), "--out-dir", s(&out)])
        .current_dir(std::env::temp_dir())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn error_vs_steps_rows_and_identity_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "id.json",
        r#"{"graph": "petersen", "target": "random:2", "parametrization": "torus", "schedule_mode": "single-coin",
            "steps": 20, "iterations": 0, "init": {"kind": "zeros"}}"#,
    );
    let out = dir.path().join("out");
    assert_eq!(code(&dtqw(&["train", "--config", s(&cfg), "--out-dir", s(&out)])), 0);
    let run = out.join("run.json");

    let csv = dir.path().join("e.csv");
    assert_eq!(code(&dtqw(&["error-vs-steps", "--run", s(&run), "--t-max", "40", "--out", s(&csv)])), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("t,error"));
    let errors = csv_column(&text, 1);
    assert_eq!(errors.len(), 40);

    let one = dtqw(&["error-vs-steps", "--run", s(&run), "--t-max", "1"]);
    assert_eq!(String::from_utf8(one.stdout).unwrap().lines().count(), 2);

    // zero torus angles give the identity coin
    let g = build_petersen();
    let rm = compute_rotation_map(&g).unwrap();
    let s0 = initial_state::<f64>(&g, &PositionInit::Vertex(1), &CoinInit::Fourier).unwrap();
    let target = dtqw::random_target::<f64>(10, 2).unwrap();
    for (t, e) in errors.iter().enumerate() {
        let sched = CoinSchedule::single(CMatrix64::identity(3), vec![], t + 1).unwrap();
        let p = measure_positions(&evolve(&rm, &sched, &s0).unwrap());
        let want = p.iter().zip(target.probs()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        assert!((e - want).abs() < 1e-14, "t = {}: {e} vs {want}", t + 1);
    }
}

#[test]
fn filter_image_on_ppm() {
    let dir = tempfile::tempdir().unwrap();
    let (w, h) = (5usize, 6usize);
    let mut bytes = format!("P6\n# test\n{w} {h}\n255\n").into_bytes();
    for y in 0..h {
        for x in 0..w {
            bytes.extend([(10 * x) as u8, (20 * y + x + 1) as u8, 200]);
        }
    }
    let input = dir.path().join("in.ppm");
    std::fs::write(&input, bytes).unwrap();
    let out = dir.path().join("out.pgm");
    let o = dtqw(&["filter-image", "--in", s(&input), "--channel", "green", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let written = std::fs::read(&out).unwrap();
    assert!(written.starts_with(b"P5\n5 6\n255\n"));
    assert_eq!(written.len(), "P5\n5 6\n255\n".len() + 30);

    let zero_steps = dir.path().join("same.pgm");
    dtqw(&["filter-image", "--in", s(&input), "--steps", "0", "--out", s(&zero_steps)]);
    let raster = &std::fs::read(&zero_steps).unwrap()["P5\n5 6\n255\n".len()..];
    let green: Vec<u8> = (0..h).flat_map(|y| (0..w).map(move |x| (20 * y + x + 1) as u8)).collect();
    assert_eq!(raster, &green[..]);

    assert_eq!(code(&dtqw(&["filter-image", "--in", s(&input), "--channel", "teal", "--out", s(&out)])), 2);
    assert_eq!(code(&dtqw(&["filter-image", "--in", s(&dir.path().join("missing.pgm")), "--out", s(&out)])), 3);
}
