//! End-to-end checks of the command-line interface: exit codes, report
//! shapes, and the FrameFile surface.
//!
//! Exit code contract: 0 when all asserted verdicts pass, 1 on input
//! errors, 2 on verdict failures.

use std::path::Path;
use std::process::Output;

use gfusion_core::fixtures::{decaying_shift_family, one_sided_shift_family};
use gfusion_core::framefile::save_frame_file;
use gfusion_core::Family64;

fn gfusion(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_gfusion"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a json report")
}

fn write_family(dir: &Path, name: &str, family: &Family64) -> String {
    let path = dir.join(name);
    save_frame_file(family, &path).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn analyze_reports_tight_bounds_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let family = decaying_shift_family(16, 8, 1, 0.5).unwrap();
    let path = write_family(dir.path(), "decay.json", &family);

    let out = gfusion(&["analyze", &path]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["command"], "analyze");
    let expected = 1.0 + (2.0 / 3.0) * (1.0 - 4f64.powi(-8));
    let lower = report["results"]["lower_bound"].as_f64().unwrap();
    let upper = report["results"]["upper_bound"].as_f64().unwrap();
    assert!((lower - expected).abs() <= 1e-9 * expected);
    assert!((upper - expected).abs() <= 1e-9 * expected);
    assert_eq!(report["results"]["is_tight"], true);
    assert_eq!(report["results"]["is_frame"], true);
    // the reconstruction verdict is asserted and passes
    let verdicts = report["verdicts"].as_array().unwrap();
    assert!(verdicts
        .iter()
        .any(|v| v["name"] == "canonical_dual_reconstruction" && v["pass"] == true));
}

#[test]
fn analyze_rejects_non_orthonormal_basis_naming_the_member() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{
  "dim": 2,
  "k_max": 0,
  "k_min": 0,
  "members": [
    {"k": 0,
     "subspace_basis": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[2.0,0.0]]],
     "theta": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]}
  ],
  "semantics": "truncated"
}"#,
    )
    .unwrap();
    let out = gfusion(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("member 0"), "stderr: {stderr}");
    assert!(stderr.contains("orthonormal"), "stderr: {stderr}");
}

#[test]
fn missing_file_is_an_input_error() {
    let out = gfusion(&["analyze", "/nonexistent/family.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    let out = gfusion(&["analyze"]);
    assert_eq!(out.status.code(), Some(1));
    let out = gfusion(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn represent_reports_half_norm_for_one_sided_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let family = one_sided_shift_family(16, 8, 1, 0.5).unwrap();
    let path = write_family(dir.path(), "one_sided.json", &family);

    let out = gfusion(&["represent", &path]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let op_norm = report["results"]["op_norm"].as_f64().unwrap();
    assert!((op_norm - 0.5).abs() <= 1e-9);
    assert_eq!(report["results"]["representable"], true);
    // truncated window: kernel invariance is skipped with a reason
    assert!(report["results"]["kernel_skipped"].is_string());
}

#[test]
fn represent_refuses_sandwich_assertion_without_hypotheses() {
    let dir = tempfile::tempdir().unwrap();
    // shift powers are not self-adjoint; cyclic window
    let family = {
        use gfusion_core::fixtures::dirac_shift;
        use gfusion_core::frame::{FrameFamily, FrameMember, WindowSemantics};
        let members = (0..3i64)
            .map(|k| FrameMember::full(k, dirac_shift::<f64>(3, k as usize).unwrap()))
            .collect();
        FrameFamily::new(3, WindowSemantics::Cyclic, members).unwrap()
    };
    let path = write_family(dir.path(), "shifts.json", &family);

    let out = gfusion(&["represent", &path, "--assert-sandwich"]);
    // refusal is not a verdict failure
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("refusing to assert"), "stderr: {stderr}");
    assert!(stderr.contains("self-adjoint"), "stderr: {stderr}");
    let report = stdout_json(&out);
    assert!(report["results"]["sandwich_assertion_refused"].is_string());
    // kernel invariance numbers are still reported for the cyclic family
    assert!(report["results"]["kernel_dim"].as_i64().unwrap() > 0);
    assert!(report["results"]["kernel_max_violation"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn represent_reports_non_representable_families_without_failing() {
    let dir = tempfile::tempdir().unwrap();
    // independent random self-adjoint members admit no exact representer
    let family = gfusion_core::fixtures::random_self_adjoint_family(
        4,
        gfusion_core::fixtures::WindowSpec::cyclic(3),
        5,
        (0.5, 2.0),
        gfusion_core::fixtures::SubspaceDims::Full,
    )
    .unwrap();
    let path = write_family(dir.path(), "random.json", &family);
    let out = gfusion(&["represent", &path, "--assert-sandwich"]);
    // the residual hypothesis fails, so the sandwich is refused, not failed
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["results"]["representable"], false);
    assert!(report["results"]["residual"].as_f64().unwrap() > 1e-9);
    assert!(report["results"]["sandwich_assertion_refused"].is_string());
}

#[test]
fn represent_asserts_sandwich_on_representable_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let (family, _) =
        gfusion_core::fixtures::random_representable_family::<f64>(4, 6, 7, (0.5, 2.0), 4).unwrap();
    let path = write_family(dir.path(), "representable.json", &family);
    let out = gfusion(&["represent", &path, "--assert-sandwich", "--tol", "1e-6"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let verdicts = report["verdicts"].as_array().unwrap();
    assert!(verdicts
        .iter()
        .any(|v| v["name"] == "norm_sandwich" && v["pass"] == true));
}

#[test]
fn perturb_passes_at_matching_alpha_and_fails_below() {
    let dir = tempfile::tempdir().unwrap();
    let family = decaying_shift_family(8, 2, 1, 0.5).unwrap();
    let scaled = family.scaled(1.1).unwrap();
    let path_a = write_family(dir.path(), "base.json", &family);
    let path_b = write_family(dir.path(), "scaled.json", &scaled);

    let out = gfusion(&["perturb", &path_a, &path_b, "--alpha", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["results"]["condition"], "passed_sampled");
    let computed_upper = report["results"]["computed_upper"].as_f64().unwrap();
    let theoretical_upper = report["results"]["theoretical_upper"].as_f64().unwrap();
    assert!((computed_upper - theoretical_upper).abs() <= 1e-9 * theoretical_upper);

    // too-small alpha: violated witness, exit 2
    let out = gfusion(&["perturb", &path_a, &path_b, "--alpha", "0.01"]);
    assert_eq!(out.status.code(), Some(2));
    let report = stdout_json(&out);
    assert_eq!(report["results"]["condition"], "violated_witness");
    let witness = &report["results"]["witness"];
    assert!(witness["lhs"].as_f64().unwrap() > witness["rhs"].as_f64().unwrap());
}

#[test]
fn perturb_rejects_invalid_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let family = decaying_shift_family(8, 2, 1, 0.5).unwrap();
    let path = write_family(dir.path(), "base.json", &family);
    let out = gfusion(&["perturb", &path, &path, "--alpha", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn scan_emits_linear_table_in_json_and_csv() {
    let out = gfusion(&["scan", "--fixture", "identity", "--windows", "4,8,16"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let rows = report["results"]["rows"].as_array().unwrap();
    let uppers: Vec<f64> = rows
        .iter()
        .map(|r| r["upper_bound"].as_f64().unwrap())
        .collect();
    assert_eq!(uppers, vec![9.0, 17.0, 33.0]);
    assert_eq!(report["results"]["growth_slope"].as_f64().unwrap(), 1.0);

    let out = gfusion(&[
        "scan",
        "--fixture",
        "translation",
        "--windows",
        "4,8",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8_lossy(&out.stdout);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "half_width,members,upper_bound,predicted,rel_error,ratio_ok"
    );
    assert!(lines.next().unwrap().starts_with("4,9,9,"));
}

#[test]
fn scan_rejects_unknown_fixture_and_empty_windows() {
    let out = gfusion(&["scan", "--fixture", "bogus", "--windows", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("identity"),
        "stderr should list fixtures: {stderr}"
    );

    let out = gfusion(&["scan", "--fixture", "identity", "--windows", ""]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_format_is_scan_only() {
    let dir = tempfile::tempdir().unwrap();
    let family = decaying_shift_family(8, 2, 1, 0.5).unwrap();
    let path = write_family(dir.path(), "f.json", &family);
    let out = gfusion(&["analyze", &path, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fixture_subcommand_writes_loadable_frame_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("generated.json");
    let out = gfusion(&[
        "fixture",
        "decaying-shift",
        "--n",
        "16",
        "--half-width",
        "8",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let family: Family64 = gfusion_core::framefile::load_frame_file(&path).unwrap();
    assert_eq!(family.len(), 17);

    // analyze what we just wrote
    let out = gfusion(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    // fixtures print to stdout without --output
    let out = gfusion(&["fixture", "identity", "--n", "3", "--members", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let parsed: Family64 = gfusion_core::framefile::parse_frame_file(&text).unwrap();
    assert_eq!(parsed.len(), 2);
}

#[test]
fn fixture_generation_is_seed_deterministic() {
    let args = [
        "fixture",
        "random-self-adjoint",
        "--n",
        "4",
        "--members",
        "3",
        "--seed",
        "7",
    ];
    let a = gfusion(&args);
    let b = gfusion(&args);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn reports_can_be_written_to_files_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let family = decaying_shift_family(8, 2, 1, 0.5).unwrap();
    let path = write_family(dir.path(), "f.json", &family);
    let report_path = dir.path().join("report.json");
    let out = gfusion(&["analyze", &path, "--output", report_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&report_path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["command"], "analyze");
}
