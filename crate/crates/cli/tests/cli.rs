use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dgshock"))
}

#[test]
fn zero_degree_exits_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "smooth-sine", "--override", "dg.N=0", "--output-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dg.N"));
}

#[test]
fn unknown_key_exits_with_validation_code() {
    let out = bin().args(["run", "sod", "--override", "mesh.bogus=3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mesh.bogus"));
}

#[test]
fn run_from_file_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("case.toml");
    std::fs::write(
        &cfg,
        "preset = \"smooth-sine\"\n[problem]\nT = 0.05\n[dg]\nN = 5\n[time]\nrtol = 1e-6\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = bin().arg("run").arg(&cfg).arg("--output-dir").arg(&out_dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["state.csv", "steps.csv", "viscosity.csv", "summary.json"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["status"], "ok");
    assert_eq!(summary["N"], 5);
    assert_eq!(summary["config"]["dg.N"], 5);
}

#[test]
fn repeated_runs_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let d = dir.path().join(sub);
        let st = bin()
            .args(["run", "advection-box", "--override", "problem.T=0.3", "--override", "mesh.K=10"])
            .arg("--output-dir")
            .arg(&d)
            .status()
            .unwrap();
        assert!(st.success());
        ["state.csv", "steps.csv", "viscosity.csv"].map(|f| std::fs::read(d.join(f)).unwrap())
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn solver_failure_exits_with_code_three() {
    // strong double rarefaction without viscosity drives pressure negative
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "run",
            "sod",
            "--override",
            "ic.left=[1.0, -0.55, 0.01]",
            "--override",
            "ic.right=[1.0, 0.55, 0.01]",
            "--override",
            "viscosity.enable=false",
            "--output-dir",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["status"], "failed");
    assert_eq!(summary["failure"]["stage"], "integration");
}

#[test]
fn detect_prints_report() {
    let out = bin().args(["detect", "jump", "9"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let s = v["baseline_skyline"]["s"].as_f64().unwrap();
    assert!((0.9..=1.15).contains(&s), "{s}");
    assert!(v["raw"]["s"].is_number() && v["skyline"]["s"].is_number());
    let bad = bin().args(["detect", "wiggle", "9"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn convergence_single_level() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "convergence",
            "smooth-sine",
            "--override",
            "convergence.K=[2]",
            "--override",
            "convergence.N=[4, 5]",
            "--override",
            "problem.T=0.05",
            "--override",
            "time.rtol=1e-6",
            "--output-dir",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    assert!(csv.lines().last().unwrap().starts_with("EOC_h,,,unavailable"));
}
