use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pagegap"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["sweep"]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "--preset", "copy", "--solver", "magic"]).status.code(), Some(1));
    assert_eq!(run(&["generate", "--preset", "copy"]).status.code(), Some(1));
    assert_eq!(run(&["analyze"]).status.code(), Some(1));
    assert_eq!(run(&["gap", "/definitely/not/here.txt"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--preset", "nope", "--out", "/tmp/x"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--config", "/definitely/not/here.toml"]).status.code(), Some(2));
}

#[test]
fn generate_then_gap() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["generate", "--preset", "copy", "--n", "40", "--count", "2", "--seed", "5", "--out", p(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let g0 = dir.path().join("graph_n40_0.txt");
    let text = fs::read_to_string(&g0).unwrap();
    assert!(text.starts_with("n 40\n"));
    assert!(dir.path().join("graph_n40_1.txt").exists());

    // generation is reproducible from the seed
    let again = tempfile::tempdir().unwrap();
    run(&["generate", "--preset", "copy", "--n", "40", "--count", "1", "--seed", "5", "--out", p(again.path())]);
    assert_eq!(fs::read(&g0).unwrap(), fs::read(again.path().join("graph_n40_0.txt")).unwrap());

    let out = run(&["gap", p(&g0), "--solver", "dense", "--out", p(dir.path())]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let delta = v["delta"].as_f64().unwrap();
    assert!(delta > 0.0 && delta <= 1.0);
    assert_eq!(v["mode"], "dense");
    assert!(dir.path().join("gap.json").exists());

    let it = run(&["gap", p(&g0), "--solver", "iterative"]);
    let w: serde_json::Value = serde_json::from_slice(&it.stdout).unwrap();
    assert!((w["delta"].as_f64().unwrap() - delta).abs() < 1e-8);
}

#[test]
fn gap_rejects_malformed_graph() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.txt");
    fs::write(&f, "n 3\n0 7\n").unwrap();
    let out = run(&["gap", p(&f)]);
    assert_eq!(out.status.code(), Some(2));
    fs::write(&f, "hello\n").unwrap();
    assert_eq!(run(&["gap", p(&f)]).status.code(), Some(2));
}

#[test]
fn sweep_fit_plot_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    let out_dir = dir.path().join("run");
    fs::write(
        &cfg,
        format!(
            r#"
model = "copy"
sizes = [16, 32, 64]
instances_per_size = 3
master_seed = 4
output_dir = "{}"

[targets]
gamma_in = 3.0
gamma_out = 3.0
mean_degree = 2.0

[solver]
mode = "iterative"
"#,
            p(&out_dir)
        ),
    )
    .unwrap();
    let out = run(&["sweep", "--config", p(&cfg), "--workers", "2", "--solver", "dense", "-q"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["records.jsonl", "timings.csv", "summary.csv", "fits.csv", "histogram.csv", "scaling.svg"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
    let records = fs::read_to_string(out_dir.join("records.jsonl")).unwrap();
    assert_eq!(records.lines().count(), 9);
    assert!(records.lines().all(|l| l.contains("\"solver\":\"dense\"")));
    assert!(fs::read_to_string(out_dir.join("summary.csv"))
        .unwrap()
        .starts_with("n,count,mean,std,stderr,min,max,errors,histogram\n"));

    // re-running computes nothing new and leaves records untouched
    let again = run(&["sweep", "--config", p(&cfg), "--solver", "dense", "-q"]);
    assert!(String::from_utf8_lossy(&again.stdout).contains("0 computed, 9 already recorded"));
    assert_eq!(fs::read_to_string(out_dir.join("records.jsonl")).unwrap(), records);

    let fit_dir = dir.path().join("fit");
    let out = run(&["fit", p(&out_dir.join("summary.csv")), "--out", p(&fit_dir)]);
    assert!(out.status.success());
    assert_eq!(
        fs::read(fit_dir.join("fits.csv")).unwrap(),
        fs::read(out_dir.join("fits.csv")).unwrap()
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    for form in ["semilog", "powerlaw", "polylog"] {
        assert!(stdout.contains(form));
    }

    let out = run(&["plot", p(&out_dir.join("summary.csv")), "--out", p(&fit_dir)]);
    assert!(out.status.success());
    assert_eq!(
        fs::read(fit_dir.join("scaling.svg")).unwrap(),
        fs::read(out_dir.join("scaling.svg")).unwrap()
    );

    let an = dir.path().join("an");
    let out = run(&["analyze", "--records", p(&out_dir.join("records.jsonl")), "--out", p(&an)]);
    assert!(out.status.success());
    assert_eq!(
        fs::read(an.join("summary.csv")).unwrap(),
        fs::read(out_dir.join("summary.csv")).unwrap()
    );
}

#[test]
fn analyze_degrees() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "analyze", "--preset", "copy", "--degrees-n", "2000", "--graphs", "10", "--weighted", "--out",
        p(dir.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("in-degree: mean 2.0000"), "{text}");
    let binned = fs::read_to_string(dir.path().join("degrees_in.csv")).unwrap();
    assert!(binned.starts_with("degree,probability,samples,span\n"));
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for (d, seed) in [(&a, "1"), (&b, "2")] {
        let out = run(&[
            "sweep", "--preset", "copy", "--sizes", "16", "--instances", "2", "--seed", seed, "--out", p(d),
            "--no-outputs", "-q",
        ]);
        assert!(out.status.success());
        assert!(!d.join("summary.csv").exists());
    }
    assert_ne!(fs::read(a.join("records.jsonl")).unwrap(), fs::read(b.join("records.jsonl")).unwrap());
}
