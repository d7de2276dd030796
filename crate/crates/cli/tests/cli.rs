//! Binary-level tests: exit codes, config layering, CSV schema, and
//! byte-identical sweep output across runs.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_flexwave"))
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("flexwave-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let out1 = temp_path("sweep1.csv");
    let out2 = temp_path("sweep2.csv");
    for out in [&out1, &out2] {
        let status = bin()
            .args([
                "sweep",
                "--values",
                "0.5,1.0,1.5",
                "--output",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert_eq!(a, b, "sweep CSV differs between identical runs");
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "sweep_value,theta,theta_branch,err_f_h32_g1,err_g_h12_g1,err_f_h32_g2,err_g_h12_g2,err_modal_h2,status,wall_ms"
    );
    assert_eq!(text.lines().count(), 1 + 3 + 1); // header + rows + summary
    assert!(text.lines().last().unwrap().starts_with("# summary"));
    std::fs::remove_file(out1).ok();
    std::fs::remove_file(out2).ok();
}

#[test]
fn verify_succeeds_on_defaults_and_writes_json() {
    let json = temp_path("report.json");
    let output = bin()
        .args(["verify", "--json", json.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("PASS denominator_identity"));
    assert!(stdout.contains("PASS fd_oracle"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["passed"], serde_json::Value::Bool(true));
    std::fs::remove_file(json).ok();
}

#[test]
fn verify_fails_with_exit_one_on_degenerate_profile() {
    let output = bin()
        .args(["verify", "--delta1", "1e-6", "--delta2", "1e-6"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("FAIL"), "{stdout}");
}

#[test]
fn config_errors_exit_two() {
    // invalid parameter value
    let output = bin().args(["modes", "--mu", "1.5"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));

    // unreadable config file
    let output = bin()
        .args(["modes", "--config", "/nonexistent/flexwave.toml"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));

    // unknown CLI flag (clap default behaviour)
    let output = bin().args(["modes", "--bogus"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn config_file_drives_sweep_and_flags_override() {
    let cfg_path = temp_path("study.toml");
    let out_path = temp_path("study-out.csv");
    std::fs::write(
        &cfg_path,
        r#"
[problem]
truncation = 5

[study]
axis = "delta"
values = [0.5, 1.0]
scenario = "clamped_line"
h0 = 0.25
"#,
    )
    .unwrap();
    let status = bin()
        .args([
            "sweep",
            "--config",
            cfg_path.to_str().unwrap(),
            "--output",
            out_path.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 + 1);

    // flag overrides the file's value list
    let status = bin()
        .args([
            "sweep",
            "--config",
            cfg_path.to_str().unwrap(),
            "--values",
            "1.0",
            "--output",
            out_path.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(text.lines().count(), 1 + 1 + 1);
    std::fs::remove_file(cfg_path).ok();
    std::fs::remove_file(out_path).ok();
}

#[test]
fn sweep_with_resonant_point_reports_and_exits_nonzero() {
    let output = bin()
        .args(["sweep", "--axis", "theta", "--values=-0.2,0,0.2"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stdout = String::from_utf8(output.stdout).unwrap();
    let resonant_rows: Vec<&str> = stdout.lines().filter(|l| l.contains("resonance")).collect();
    assert_eq!(resonant_rows.len(), 1, "{stdout}");
    let ok_rows = stdout.lines().filter(|l| l.ends_with(",ok,")).count();
    assert_eq!(ok_rows, 2, "{stdout}");
}

#[test]
fn modes_and_symbol_tables_have_full_precision() {
    let output = bin().args(["modes", "--truncation", "1"]).output().unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    // 17 significant digits: sqrt(3)/2 printed in scientific notation
    assert!(stdout.contains("8.6602540378443860e-1"), "{stdout}");

    let output = bin()
        .args(["symbol", "--n-min", "0", "--n-max", "0"])
        .output()
        .unwrap();
    assert!(output.status.success());

    let output = bin()
        .args(["symbol", "--n-min", "0", "--n-max", "0", "--pml"])
        .output()
        .unwrap();
    assert!(output.status.success());

    let output = bin().args(["pml-error", "--deltas", "1,2"]).output().unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 3);
}

#[test]
fn solve_emits_field_samples_per_region() {
    let out_path = temp_path("field.csv");
    let status = bin()
        .args([
            "solve",
            "--scenario",
            "clamped_line",
            "--h0",
            "0.25",
            "--pml",
            "--nx1",
            "4",
            "--nx2",
            "24",
            "--out",
            out_path.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("x1,x2,region,re_u,im_u,abs_u"));
    for region in ["pml_lower", "strip", "pml_upper"] {
        assert!(text.contains(region), "missing region {region}");
    }
    assert_eq!(text.lines().count(), 1 + 4 * 24);
    std::fs::remove_file(out_path).ok();
}
