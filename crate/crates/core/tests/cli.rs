use std::io::Write;
use std::process::{Command, Output};

use sphint::cli::Report;

fn sphint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphint"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn report(args: &[&str]) -> (Report, String, i32) {
    let out = sphint(args);
    let text = stdout(&out);
    let parsed: Report = serde_json::from_str(text.trim_end()).unwrap_or_else(|e| panic!("{e}: {text}"));
    (parsed, text, out.status.code().unwrap())
}

#[test]
fn volume_example() {
    let out = sphint(&["volume", "--D", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "2 * pi^2 = 19.7392088022\n");
    let out = sphint(&["--digits", "4", "volume", "--D", "2"]);
    assert_eq!(stdout(&out), "4 * pi^1 = 12.57\n");
}

#[test]
fn mu_power_verify_example() {
    let args = ["--json", "mu-power", "--D", "2", "--alpha", "2", "--verify", "--seed", "42", "--samples", "1000000"];
    let (r, _, code) = report(&args);
    assert_eq!(code, 0);
    assert_eq!(r.operation, "mu-power");
    assert_eq!(r.exact.as_deref(), Some("8/3 * pi^1"));
    assert!((r.decimal - 8.377_580_409_572_781).abs() < 1e-14);
    assert!(r.agreement_sigma.unwrap() <= 3.0);
    assert_eq!(r.status, "ok");
    assert_eq!(r.inputs["seed"], 42);

    let text = stdout(&sphint(&args[1..]));
    assert!(text.starts_with("8/3 * pi^1 = 8.37758040957\n"), "{text}");
}

#[test]
fn fluid_series_example() {
    let (r, _, code) = report(&["--json", "fluid", "--D", "2", "--omega", "0.5", "--series", "--kmax", "40"]);
    assert_eq!(code, 0);
    let closed = 16.0 * std::f64::consts::PI / 3.0;
    assert!((r.decimal - closed).abs() < 1e-14 * closed);
    let series = r.oracle_value.unwrap();
    assert!(((series - closed) / closed).abs() < 1e-10);
    assert_eq!(r.status, "ok");
    assert!(r.exact.is_none());

    let text = stdout(&sphint(&["fluid", "--D", "2", "--omega", "0.5", "--series", "--kmax", "40"]));
    assert!(text.starts_with("16.7551608191\n"), "{text}");
    assert!(text.contains("series: order 40, 41 terms"), "{text}");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| sphint(args).status.code().unwrap();
    assert_eq!(code(&["volume", "--D", "4"]), 0);
    assert_eq!(code(&["volume"]), 1);
    assert_eq!(code(&["bogus"]), 1);
    assert_eq!(code(&["mu-power", "--D", "5", "--alpha", "1,2"]), 1);
    assert_eq!(code(&["dirichlet", "--n", "2", "--alpha", "1,two,3"]), 1);
    assert_eq!(code(&["volume", "--D", "0"]), 2);
    assert_eq!(code(&["mu-power", "--D", "3", "--alpha", "-1.5,0"]), 2);
    assert_eq!(code(&["fluid", "--D", "3", "--omega", "0.5,1.2"]), 2);
    assert_eq!(code(&["fluid", "--D", "2", "--omega", "0.999", "--series"]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn errors_are_one_line_with_a_remedy() {
    let out = sphint(&["mu-power", "--D", "5", "--alpha", "1,2"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("expected 3") && err.contains("comma-separated"), "{err}");
}

#[test]
fn verify_exits_3_iff_disagreement() {
    // A zero-sigma threshold turns any Monte Carlo gap into a disagreement.
    let base = ["--json", "mu-power", "--D", "3", "--alpha", "2,1", "--verify", "--samples", "20000"];
    let (r, _, code) = report(&base);
    assert_eq!((code, r.status.as_str()), (0, "ok"));
    let mut strict = base.to_vec();
    strict.extend(["--sigma", "0"]);
    let (r, _, code) = report(&strict);
    assert_eq!((code, r.status.as_str()), (3, "disagree"));
    assert!(r.agreement_sigma.unwrap() > 0.0);

    // Without --verify the oracle does not run.
    let (r, _, code) = report(&base[..6]);
    assert_eq!(code, 0);
    assert!(r.agreement_sigma.is_none() && r.oracle_value.is_none());
}

#[test]
fn every_subcommand_verifies() {
    let poly = {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# x1^2 x2^2 on S^2\n1 2 2 0\n1/2 0 0 0").unwrap();
        f
    };
    let path = poly.path().to_str().unwrap();
    let cases: [&[&str]; 7] = [
        &["volume", "--D", "5"],
        &["dirichlet", "--n", "3", "--alpha", "2,0,2,4"],
        &["dirichlet", "--n", "2", "--alpha", "0.5,1.5,0", "--abs"],
        &["mu-power", "--D", "4", "--alpha", "-1,3"],
        &["fluid", "--D", "4", "--omega", "0.3,-0.6"],
        &["integrate-poly", path],
        &["integrate-poly", path, "--n", "2"],
    ];
    for args in cases {
        for oracle in ["mc", "quad"] {
            let mut full = vec!["--json"];
            full.extend_from_slice(args);
            full.extend(["--verify", "--oracle", oracle, "--samples", "200000"]);
            let (r, _, code) = report(&full);
            assert_eq!(code, 0, "{full:?}: {r:?}");
            assert!(r.agreement_sigma.is_some());
        }
    }
    let (r, _, _) = report(&["--json", "integrate-poly", path]);
    assert_eq!(r.exact.as_deref(), Some("34/15 * pi^1"));
}

#[test]
fn integrate_poly_dimension_mismatch() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "1 2 0 0").unwrap();
    let out = sphint(&["integrate-poly", f.path().to_str().unwrap(), "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = sphint(&["integrate-poly", "/nonexistent/poly.txt"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reduce_checks_the_identity() {
    let (r, _, code) = report(&["--json", "reduce", "--D", "6", "--alpha", "-1,2,5"]);
    assert_eq!(code, 0);
    assert_eq!(r.status, "ok");
    assert_eq!(r.oracle_value, Some(r.decimal));
    let (r, _, code) = report(&["--json", "reduce", "--D", "3", "--alpha", "0.5,1.5"]);
    assert_eq!(code, 0);
    assert!(r.exact.is_none());
}

#[test]
fn json_round_trip_is_stable() {
    let runs: [&[&str]; 4] = [
        &["--json", "volume", "--D", "7"],
        &["--json", "dirichlet", "--n", "2", "--alpha", "0.5,0,0", "--abs", "--verify", "--samples", "1000"],
        &["--json", "fluid", "--D", "3", "--omega", "0.3,0.4", "--series"],
        &["--json", "mu-power", "--D", "1", "--alpha", "3", "--verify", "--samples", "1"],
    ];
    for args in runs {
        let (r, text, _) = report(args);
        let again = serde_json::to_string(&r).unwrap() + "\n";
        assert_eq!(again, text);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let keys: Vec<&String> = value.as_object().unwrap().keys().collect();
        assert_eq!(
            keys,
            ["agreement_sigma", "decimal", "exact", "inputs", "operation", "oracle_error", "oracle_value", "status"]
                .iter()
                .collect::<Vec<_>>()
        );
    }
}

#[test]
fn sample_dumps_points() {
    let out = sphint(&["--json", "sample", "--D", "3", "--samples", "5", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 5);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["x"].as_array().unwrap().len(), 4);
        assert_eq!(v["mu"].as_array().unwrap().len(), 2);
        assert_eq!(v["phi"].as_array().unwrap().len(), 2);
    }
    let human = stdout(&sphint(&["sample", "--D", "2", "--samples", "2"]));
    assert!(human.lines().all(|l| l.starts_with("x: ") && l.contains(" | mu: ")));
}
