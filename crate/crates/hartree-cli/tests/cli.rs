//! End-to-end runs of the installed binary: exit codes, stdout markers,
//! and artifact layout for every subcommand.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hartree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hartree"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn feasible_witness_at_3_2_1() {
    let out = hartree(&["feasible", "3", "2", "1", "--witness"]);
    let text = stdout_of(&out);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
    assert!(text.contains("FEASIBLE"), "{text}");
    assert!(text.contains("critical power p = 3"), "{text}");
    assert!(text.contains("inv_q   = 3/20"), "{text}");
    assert!(text.contains("(exponent 20/3)"), "{text}");
    assert!(text.contains("raw constraint table (40 rows)"), "{text}");
    assert!(text.contains("all constraints PASS"), "{text}");
}

#[test]
fn feasible_reports_gate_violation() {
    let out = hartree(&["feasible", "5", "3", "1/2"]);
    let text = stdout_of(&out);
    assert_eq!(code(&out), 0);
    assert!(text.contains("INFEASIBLE"), "{text}");
    assert!(text.contains("violated: b <= p-2"), "{text}");
    assert!(text.contains("reduced n/r window: empty"), "{text}");
}

#[test]
fn feasible_marks_tight_gate() {
    let out = hartree(&["feasible", "4", "2", "1/2"]);
    let text = stdout_of(&out);
    assert_eq!(code(&out), 0);
    assert!(text.contains("FEASIBLE"), "{text}");
    assert!(text.contains("(tight: boundary point)"), "{text}");
}

#[test]
fn feasible_rejects_float_input() {
    // Exact commands take rationals only; 2.0 must fail at argument parsing.
    let out = hartree(&["feasible", "3", "2.0", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_of(&out).contains("looks like a float"), "{}", stderr_of(&out));
}

#[test]
fn feasible_flags_out_of_range_point() {
    let out = hartree(&["feasible", "3", "7", "1"]);
    let text = stdout_of(&out);
    assert_eq!(code(&out), 0);
    assert!(text.contains("OUT OF RANGE"), "{text}");
}

#[test]
fn region_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let render = |tag: &str| {
        let svg = dir.path().join(format!("{tag}.svg"));
        let csv = dir.path().join(format!("{tag}.csv"));
        let out = hartree(&[
            "region",
            "--n",
            "5",
            "--resolution",
            "24",
            "--svg",
            svg.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
        (fs::read(&svg).unwrap(), fs::read(&csv).unwrap())
    };
    let (svg_a, csv_a) = render("a");
    let (svg_b, csv_b) = render("b");
    assert_eq!(svg_a, svg_b, "svg bytes differ between runs");
    assert_eq!(csv_a, csv_b, "csv bytes differ between runs");
    assert!(dir.path().join("a.manifest.json").exists());

    let csv = String::from_utf8(csv_a).unwrap();
    assert!(csv.starts_with("# schema region.v1"), "{}", &csv[..60]);
    // Dimension 5: every in-range sample is covered by some result.
    assert!(!csv.lines().any(|l| l.ends_with(",open")), "open cells in n = 5");
}

#[test]
fn region_n3_svg_has_all_landmarks() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("r.svg");
    let csv = dir.path().join("r.csv");
    let out = hartree(&[
        "region",
        "--n",
        "3",
        "--resolution",
        "16",
        "--svg",
        svg.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&svg).unwrap();
    for name in ["B", "D", "F", "G", "J", "L", "M", "N"] {
        assert!(text.contains(&format!("id=\"landmark-{name}\"")), "missing {name}");
    }
}

#[test]
fn region_n4_has_open_cells() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("r.svg");
    let csv = dir.path().join("r.csv");
    let out = hartree(&[
        "region",
        "--n",
        "4",
        "--resolution",
        "24",
        "--svg",
        svg.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.lines().any(|l| l.ends_with(",open")), "expected open cells in n = 4");
}

#[test]
fn landmarks_prints_exact_surds() {
    let out = hartree(&["landmarks", "--n", "3"]);
    let text = stdout_of(&out);
    assert_eq!(code(&out), 0);
    assert!(text.contains("  M  alpha = 2"), "{text}");
    assert!(text.contains("sqrt(73)"), "{text}");
}

#[test]
fn landmarks_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pts.csv");
    let out = hartree(&["landmarks", "--n", "3", "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# schema landmarks.v1"), "{}", &text[..40]);
    assert!(dir.path().join("pts.manifest.json").exists());
}

#[test]
fn verify_reduction_small_sample() {
    let out = hartree(&["verify", "reduction", "--samples", "8"]);
    let text = stdout_of(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("suite reduction: 6/6 checks passed"), "{text}");
}

#[test]
fn verify_coverage_passes() {
    let out = hartree(&["verify", "coverage56", "--samples", "200"]);
    let text = stdout_of(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("suite coverage56: 1/1 checks passed"), "{text}");
}

#[test]
fn verify_redundancy_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("red.csv");
    let out = hartree(&[
        "verify",
        "redundancy",
        "--samples",
        "50",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# schema verify.v1"), "{}", &text[..40]);
    assert!(text.contains("redundancy"), "{text}");
    assert!(dir.path().join("red.manifest.json").exists());
}

#[test]
fn verify_numeric_suites_pass_at_64() {
    for suite in ["hls", "ckn"] {
        let out = hartree(&["verify", suite, "--resolution", "64"]);
        let text = stdout_of(&out);
        assert_eq!(code(&out), 0, "{suite}: {text}");
        assert!(text.contains("checks passed"), "{suite}: {text}");
    }
}

#[test]
fn verify_rejects_bad_resolution() {
    let out = hartree(&["verify", "hls", "--resolution", "31"]);
    assert_eq!(code(&out), 2);
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("run.json");
    fs::write(&path, body).unwrap();
    path
}

fn toy_config(out_dir: &Path, extra: &str) -> String {
    format!(
        r#"{{
  "grid": {{ "dim": 2, "n": 32, "half_width": 8.0 }},
  "params": {{ "kind": "toy", "dim": 2, "alpha": 1.0, "b": 0.5, "p": 3.0, "epsilon": 1 }},
  "initial": {{ "kind": "gaussian", "amplitude": 0.5, "sigma": 1.2 }},
  "evolution": {{ "dt": 0.01, "t_end": 0.1, "energy_every": 5 }},{extra}
  "output_dir": "{}"
}}"#,
        out_dir.display()
    )
}

#[test]
fn simulate_dry_run_writes_only_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let cfg = write_config(dir.path(), &toy_config(&out_dir, ""));
    let out = hartree(&["simulate", cfg.to_str().unwrap(), "--dry-run"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
    let entries: Vec<_> = fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(entries, vec!["manifest.json"]);
}

#[test]
fn simulate_rejects_unknown_config_key() {
    let dir = tempfile::tempdir().unwrap();
    let body = toy_config(&dir.path().join("out"), "").replace("output_dir", "output_dirs");
    let cfg = write_config(dir.path(), &body);
    let out = hartree(&["simulate", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr_of(&out).contains("output_dirs"), "{}", stderr_of(&out));
}

#[test]
fn simulate_runs_diagnostics_and_conserves_mass() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let extra = r#"
  "diagnostics": [
    { "kind": "picard", "t_end": 0.1, "k_max": 4, "nodes": 16 },
    { "kind": "scaling", "delta": 2.0, "refine": 1 }
  ],"#;
    let cfg = write_config(dir.path(), &toy_config(&out_dir, extra));
    let out = hartree(&["simulate", cfg.to_str().unwrap()]);
    let text = stdout_of(&out);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
    assert!(text.contains("picard: contracting"), "{text}");

    let cons = fs::read_to_string(out_dir.join("conservation.csv")).unwrap();
    let last = cons.lines().last().unwrap();
    let mass_drift: f64 = last.split(',').nth(2).unwrap().parse().unwrap();
    assert!(mass_drift.abs() < 1e-10, "mass drift {mass_drift:e}");
    assert!(out_dir.join("picard.csv").exists());
    assert!(out_dir.join("scaling.csv").exists());
    assert!(out_dir.join("manifest.json").exists());
}

#[test]
fn simulate_aborts_on_numerical_blowup() {
    // Focusing amplitude-8 datum: the fixed-point iterates overflow within a
    // few steps and the run must exit 3, keeping the manifest.
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let body = format!(
        r#"{{
  "grid": {{ "dim": 2, "n": 32, "half_width": 6.0 }},
  "params": {{ "kind": "toy", "dim": 2, "alpha": 1.0, "b": 0.5, "p": 3.0, "epsilon": -1 }},
  "initial": {{ "kind": "gaussian", "amplitude": 8.0, "sigma": 0.8 }},
  "evolution": {{ "dt": 0.05, "t_end": 0.5 }},
  "diagnostics": [ {{ "kind": "picard", "t_end": 0.5, "k_max": 10, "nodes": 16 }} ],
  "output_dir": "{}"
}}"#,
        out_dir.display()
    );
    let cfg = write_config(dir.path(), &body);
    let out = hartree(&["simulate", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 3, "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("numerical abort"), "{}", stderr_of(&out));
    assert!(out_dir.join("manifest.json").exists());
}
