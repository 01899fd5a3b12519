//! Black-box tests of the `tangent` binary: exit codes, output formats,
//! config handling, and byte determinism.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tangent_core::report::{MachineRecord, OracleRecord};

fn tangent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tangent"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("tangent-cli-tests");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn classify_exit_codes_encode_the_verdict() {
    let circle = tangent(&["classify", "x=cos(t); y=sin(t)", "--at", "0"]);
    assert_eq!(exit_code(&circle), 0, "{}", stderr(&circle));
    assert!(stdout(&circle).contains("verdict:   Tangent"));

    let corner = tangent(&["classify", "f=abs(t)", "--at", "0"]);
    assert_eq!(exit_code(&corner), 1);
    assert!(stdout(&corner).contains("verdict:   Corner"));

    let constant = tangent(&["classify", "x=1; y=1", "--at", "0"]);
    assert_eq!(exit_code(&constant), 2);
    assert!(stdout(&constant).contains("verdict:   Degenerate"));
}

#[test]
fn classify_machine_record_matches_the_schema() {
    let out = tangent(&[
        "classify",
        "x=cos(t); y=sin(t)",
        "--at",
        "0",
        "--format",
        "machine",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    let record = MachineRecord::parse(text.trim()).unwrap();
    assert_eq!(record.t0, 0.0);
    assert_eq!(record.verdict, "Tangent");
    assert_eq!(
        (record.x, record.y, record.z),
        (Some(1.0), Some(0.0), Some(0.0))
    );
    assert_eq!(record.dirx, Some(0.0));
    assert_eq!(record.diry, Some(1.0));
    assert_eq!(record.dirz, Some(0.0));
    assert!(record.residual.unwrap() < 1e-5);
    assert!(record.steps_plus > 0 && record.steps_minus > 0);
}

#[test]
fn usage_errors_exit_64_with_a_message() {
    let cases: &[&[&str]] = &[
        &["classify", "f=abs(", "--at", "0"],
        &["classify", "x=cos(t); y=sin(t)"], // missing --at
        &["sweep", "x=t; y=t", "--range", "0:1", "--n", "1"],
        &["sweep", "x=t; y=t", "--range", "1:0", "--n", "4"],
        &["sweep", "x=t; y=t", "--range", "nope", "--n", "4"],
        &["plot", "f=abs(", "--at", "0", "--range", "-1:1"],
        &["classify", "x=t; y=t", "--at", "0", "--h0", "-1"],
        &["classify", "x=t; y=t", "--at", "0", "--rho", "1.5"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = tangent(args);
        assert_eq!(exit_code(&out), 64, "args {args:?}: {}", stdout(&out));
        assert!(
            !stderr(&out).is_empty(),
            "args {args:?} should explain itself"
        );
    }
}

#[test]
fn help_and_version_exit_zero() {
    let help = tangent(&["--help"]);
    assert_eq!(exit_code(&help), 0);
    assert!(stdout(&help).contains("classify"));
    assert!(stdout(&help).contains("sweep"));

    let version = tangent(&["--version"]);
    assert_eq!(exit_code(&version), 0);
}

#[test]
fn sweep_reports_every_row_and_sets_the_exit_code() {
    let circle = tangent(&[
        "sweep",
        "x=cos(t); y=sin(t)",
        "--range",
        "0:6.28",
        "--n",
        "16",
    ]);
    assert_eq!(exit_code(&circle), 0, "{}", stderr(&circle));
    assert!(stdout(&circle).contains("summary: 16/16 Tangent"));

    let corner = tangent(&[
        "sweep", "f=abs(t)", "--range", "-1:1", "--n", "3", "--format", "machine",
    ]);
    assert_eq!(exit_code(&corner), 1);
    let text = stdout(&corner);
    let records: Vec<MachineRecord> = text
        .lines()
        .map(|l| MachineRecord::parse(l).unwrap())
        .collect();
    assert_eq!(records.len(), 3);
    assert_eq!(records[0].verdict, "Tangent");
    assert_eq!(records[1].verdict, "Corner");
    assert_eq!(records[1].t0, 0.0);
    assert_eq!(records[2].verdict, "Tangent");
}

#[test]
fn plot_produces_the_expected_svg_structure() {
    let circle = tangent(&[
        "plot",
        "x=cos(t); y=sin(t)",
        "--at",
        "0",
        "--range",
        "0:6.2832",
    ]);
    assert_eq!(exit_code(&circle), 0);
    let svg = stdout(&circle);
    assert!(svg.starts_with("<svg "));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<polyline").count(), 1);
    assert_eq!(svg.matches("class=\"tangent\"").count(), 1);
    assert_eq!(svg.matches("<circle").count(), 1);

    let corner = tangent(&["plot", "f=abs(t)", "--at", "0", "--range", "-1:1"]);
    assert_eq!(exit_code(&corner), 0);
    let svg = stdout(&corner);
    assert!(!svg.contains("class=\"tangent\""), "corners get no tangent");
    assert_eq!(svg.matches("<circle").count(), 1);
    assert!(svg.contains("Corner at t0 = 0"));
}

#[test]
fn oracle_passes_by_default_and_reacts_to_tolerances() {
    let ok = tangent(&["oracle"]);
    assert_eq!(exit_code(&ok), 0, "{}", stdout(&ok));
    assert!(stdout(&ok).contains("cases passed"));

    let tight = tangent(&["oracle", "--collinear-tol", "1e-12"]);
    assert_eq!(exit_code(&tight), 1);
    assert!(stdout(&tight).contains("FAIL"));
}

#[test]
fn oracle_machine_format_emits_one_record_per_case() {
    let out = tangent(&["oracle", "--format", "machine"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let records: Vec<OracleRecord> = text
        .lines()
        .map(|l| OracleRecord::parse(l).unwrap())
        .collect();
    assert!(records.len() >= 12, "corpus has {} cases", records.len());
    assert!(records.iter().all(|r| r.pass));
    assert!(records.iter().any(|r| r.name == "abs-corner"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["oracle", "--format", "machine"],
        vec![
            "classify",
            "x=cos(t); y=sin(t)",
            "--at",
            "0.9",
            "--format",
            "machine",
        ],
        vec![
            "plot",
            "x=cos(t); y=sin(t)",
            "--at",
            "0",
            "--range",
            "0:6.2832",
        ],
    ] {
        let first = tangent(&args);
        let second = tangent(&args);
        assert_eq!(first.stdout, second.stdout, "args {args:?}");
        assert_eq!(exit_code(&first), exit_code(&second), "args {args:?}");
    }
}

#[test]
fn config_file_is_honored_and_flags_override_it() {
    let path = temp_path("defaults.conf");
    fs::write(&path, "# test config\nformat = machine\nh0 = 0.005\n").unwrap();
    let config = path.to_str().unwrap();

    // The file switches the format to machine.
    let out = tangent(&[
        "classify",
        "x=cos(t); y=sin(t)",
        "--at",
        "0",
        "--config",
        config,
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(MachineRecord::parse(stdout(&out).trim()).is_ok());

    // A flag wins over the file.
    let out = tangent(&[
        "classify",
        "x=cos(t); y=sin(t)",
        "--at",
        "0",
        "--config",
        config,
        "--format",
        "human",
    ]);
    assert!(stdout(&out).contains("verdict:   Tangent"));

    // Broken config lines are usage errors with a location.
    let bad = temp_path("broken.conf");
    fs::write(&bad, "h0 = fast\n").unwrap();
    let out = tangent(&[
        "classify",
        "x=cos(t); y=sin(t)",
        "--at",
        "0",
        "--config",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 64);
    assert!(stderr(&out).contains("broken.conf:1"), "{}", stderr(&out));

    // A missing config file is a usage error too.
    let out = tangent(&[
        "classify",
        "x=cos(t); y=sin(t)",
        "--at",
        "0",
        "--config",
        temp_path("absent.conf").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 64);
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let path = temp_path("report.jsonl");
    let _ = fs::remove_file(&path);
    let out = tangent(&[
        "classify",
        "x=cos(t); y=sin(t)",
        "--at",
        "0",
        "--format",
        "machine",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).is_empty(), "output goes to the file");
    let text = fs::read_to_string(&path).unwrap();
    let record = MachineRecord::parse(text.trim()).unwrap();
    assert_eq!(record.verdict, "Tangent");
}

#[test]
fn negative_values_parse_on_the_command_line() {
    let out = tangent(&["classify", "x=cos(t); y=sin(t)", "--at", "-0.7"]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("t0:        -0.7"));

    let out = tangent(&["sweep", "f=abs(t)", "--range", "-1:1", "--n", "3"]);
    assert_eq!(exit_code(&out), 1, "{}", stderr(&out));
}
