//! Acceptance criterion 10: golden-file JSON reports are byte-identical
//! across runs with a fixed seed, and the exit-code contract holds.

use std::process::Command;

fn spq(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_spq"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).to_string(),
        String::from_utf8_lossy(&out.stderr).to_string(),
        out.status.code().unwrap_or(-1),
    )
}

fn golden(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).expect("golden file exists")
}

#[test]
fn criterion_10_golden_reports_and_exit_codes() {
    let cases: Vec<(&str, Vec<&str>)> = vec![
        (
            "quantise_verify_quadratic.json",
            vec!["quantise-verify", "--dim", "1", "--f", "t^2/2"],
        ),
        (
            "twisted_derham_cubic.json",
            vec![
                "twisted-derham",
                "--dim",
                "1",
                "--f",
                "t^3/3",
                "--cutoff",
                "8",
            ],
        ),
        ("quad_regression.json", vec!["quad-regression"]),
    ];
    for (golden_name, args) in &cases {
        let (out1, _, code1) = spq(args);
        let (out2, _, code2) = spq(args);
        assert_eq!(code1, 0, "{:?} should pass", args);
        assert_eq!(code2, 0);
        assert_eq!(
            out1, out2,
            "report for {:?} not byte-identical across runs",
            args
        );
        assert_eq!(
            out1,
            golden(golden_name),
            "report for {:?} deviates from the golden file",
            args
        );
    }
    println!("ACCEPTANCE 10: PASS - golden reports byte-identical; exit codes honored");
}

#[test]
fn exit_code_contract() {
    // 0: all checks pass
    let (_, _, code) = spq(&["quad-regression"]);
    assert_eq!(code, 0);
    // 1: a failing check (unstabilised cutoff)
    let (out, _, code) = spq(&[
        "twisted-derham",
        "--dim",
        "1",
        "--f",
        "t^3/3",
        "--cutoff",
        "0",
    ]);
    assert_eq!(code, 1, "expected failure exit, report: {}", out);
    // 2: usage / parse errors
    let (_, err, code) = spq(&["quantise-verify", "--f", "2/0"]);
    assert_eq!(code, 2);
    assert!(err.contains("zero denominator"), "stderr: {}", err);
    let (_, _, code) = spq(&["no-such-command"]);
    assert_eq!(code, 2);
    let (_, err, code) = spq(&["quantise-verify", "--f", "t + s"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown identifier"), "stderr: {}", err);
}

#[test]
fn seed_is_echoed_and_respected() {
    let (out_a, _, _) = spq(&[
        "schouten-props",
        "--dim",
        "1",
        "--samples",
        "20",
        "--seed",
        "7",
    ]);
    let (out_b, _, _) = spq(&[
        "schouten-props",
        "--dim",
        "1",
        "--samples",
        "20",
        "--seed",
        "7",
    ]);
    assert_eq!(out_a, out_b);
    assert!(out_a.contains("\"seed\": 7"));
}
