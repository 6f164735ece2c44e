mod common;

use std::process::Command;

use common::fixture;
use stringy_core::cli::{run, Report, EXIT_INPUT, EXIT_OK, EXIT_VERDICT};

fn go(args: &[&str]) -> stringy_core::cli::Run {
    let mut argv = vec!["stringy".to_string()];
    for a in args {
        if a.ends_with(".json") {
            argv.push(fixture(a).display().to_string());
        } else {
            argv.push(a.to_string());
        }
    }
    run(argv)
}

#[test]
fn euler_prints_the_number() {
    let r = go(&["euler", "--snc", "a1_minimal.json"]);
    assert_eq!(r.exit_code, EXIT_OK);
    assert!(r.output.contains("e_st = 2"), "{}", r.output);
    let r = go(&["euler", "--action", "q8.json"]);
    assert_eq!(r.exit_code, EXIT_OK);
    assert!(r.output.contains("e_st = 5"));
}

#[test]
fn mckay_verify_passes() {
    let r = go(&["mckay-verify", "q8.json"]);
    assert_eq!(r.exit_code, EXIT_OK, "{}", r.output);
    assert!(r.report.verdicts.iter().all(|v| v.pass));
    let r = go(&["mckay-verify", "z2.json", "--snc", "a1_minimal.json"]);
    assert_eq!(r.exit_code, EXIT_OK, "{}", r.output);
    let r = go(&["mckay-verify", "z2.json", "--snc", "a1_blowup_wrong.json"]);
    assert_eq!(r.exit_code, EXIT_VERDICT);
}

#[test]
fn input_errors_exit_1() {
    let r = go(&["snc-eval", "a1_bad.json"]);
    assert_eq!(r.exit_code, EXIT_INPUT);
    assert_eq!(
        r.report.error.as_ref().unwrap().kind,
        "DegenerateDiscrepancy"
    );
    let r = go(&["mckay-eval", "z2_nonsl.json"]);
    assert_eq!(r.exit_code, EXIT_INPUT);
    assert_eq!(r.report.error.as_ref().unwrap().kind, "SlGateFailed");
    let r = go(&["mckay-verify", "z2_nonsl.json"]);
    assert_eq!(r.report.error.as_ref().unwrap().kind, "SlGateFailed");
    let r = go(&["snc-eval", "a1_schema_error.json"]);
    assert_eq!(r.exit_code, EXIT_INPUT);
    assert!(r
        .report
        .error
        .as_ref()
        .unwrap()
        .message
        .contains("components[0].a"));
    let r = go(&["snc-eval", "missing.json"]);
    assert_eq!(r.exit_code, EXIT_INPUT);
    let r = go(&["snc-eval", "a1_beyond_lt.json"]);
    assert_eq!(r.report.error.as_ref().unwrap().kind, "NotLogTerminal");
    let r = go(&["mckay-eval", "binary_tetrahedral.json", "--cap", "10"]);
    assert_eq!(r.report.error.as_ref().unwrap().kind, "CapExceeded");
}

#[test]
fn usage_errors_exit_1() {
    let r = go(&["frobnicate"]);
    assert_eq!(r.exit_code, EXIT_INPUT);
    let r = go(&["euler"]);
    assert_eq!(r.exit_code, EXIT_INPUT);
    let r = go(&["euler", "--snc", "a1_minimal.json", "--action", "z2.json"]);
    assert_eq!(r.exit_code, EXIT_INPUT);
    let r = go(&["snc-eval", "a1_minimal.json", "--format", "xml"]);
    assert_eq!(r.exit_code, EXIT_INPUT);
    assert!(r.output.contains("--format"));
    let r = go(&["--help"]);
    assert_eq!(r.exit_code, EXIT_OK);
}

#[test]
fn altered_discrepancy_exits_2() {
    let r = go(&["snc-compare", "a1_minimal.json", "a1_blowup_wrong.json"]);
    assert_eq!(r.exit_code, EXIT_VERDICT);
    assert!(r.output.contains("DIFFERENT"));
    let r = go(&["snc-compare", "a1_minimal.json", "a1_blowup.json"]);
    assert_eq!(r.exit_code, EXIT_OK);
}

#[test]
fn beyond_lt_flag_warns() {
    let r = go(&["snc-eval", "a1_beyond_lt.json", "--allow-beyond-lt"]);
    assert_eq!(r.exit_code, EXIT_OK, "{}", r.output);
    assert_eq!(r.report.warnings.len(), 1);
    assert!(r.output.contains("e_st = -3"));
}

#[test]
fn json_reports_round_trip_and_are_deterministic() {
    let cases: &[&[&str]] = &[
        &["snc-eval", "a1_blowup.json", "--format", "json"],
        &[
            "snc-compare",
            "a1_minimal.json",
            "a1_blowup_wrong.json",
            "--format",
            "json",
        ],
        &["mckay-eval", "binary_tetrahedral.json", "--format", "json"],
        &["mckay-verify", "z3.json", "--format", "json"],
        &["euler", "--action", "s3_sl3.json", "--format", "json"],
        &["snc-eval", "a1_bad.json", "--format", "json"],
    ];
    for args in cases {
        let a = go(args);
        let b = go(args);
        assert_eq!(a.output, b.output, "{args:?}");
        let parsed: Report = serde_json::from_str(&a.output).unwrap();
        assert_eq!(parsed, a.report, "{args:?}");
        assert_eq!(parsed.exit_code, a.exit_code);
    }
}

#[test]
fn rationals_are_strings() {
    let r = go(&["snc-eval", "a1_blowup.json", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&r.output).unwrap();
    assert_eq!(v["result"]["data"]["e_st"], "2");
    assert_eq!(v["result"]["data"]["phi"][1]["value"], "2");
}

#[test]
fn binary_end_to_end() {
    let out = Command::new(env!("CARGO_BIN_EXE_stringy"))
        .args(["euler", "--snc"])
        .arg(fixture("a1_minimal.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "e_st = 2");
    let out = Command::new(env!("CARGO_BIN_EXE_stringy"))
        .args(["snc-compare"])
        .arg(fixture("a1_minimal.json"))
        .arg(fixture("a1_blowup_wrong.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_stringy"))
        .args(["snc-eval"])
        .arg(fixture("a1_bad.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DegenerateDiscrepancy"));
}
