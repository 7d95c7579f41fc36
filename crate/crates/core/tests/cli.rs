use std::io::Write;
use std::process::{Command, Output};

fn normlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normlab"))
        .args(args)
        .env_remove("NORMLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn matrix_file(rows: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(rows.as_bytes()).unwrap();
    f
}

#[test]
fn eval_l1_rho_inf() {
    let o = normlab(&[
        "eval",
        "--norm",
        "lp:p=1:dim=2",
        "--x",
        "1,0",
        "--y",
        "0+1i,0",
        "--functional",
        "rho_inf",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).starts_with("0-1i (closed_form)"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn eval_euclidean_rho_inf() {
    let o = normlab(&[
        "eval",
        "--norm",
        "lp:p=2:dim=2",
        "--x",
        "1,0",
        "--y",
        "1,0",
        "--functional",
        "rho_inf",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("1+0i"), "{}", stdout(&o));
}

#[test]
fn eval_rho_n_rejects_small_n() {
    let o = normlab(&[
        "eval",
        "--norm",
        "lp:p=1:dim=2",
        "--x",
        "1,0",
        "--y",
        "0+1i,0",
        "--functional",
        "rho_n",
        "--n",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("N_TOO_SMALL"), "{}", stderr(&o));
}

#[test]
fn eval_parse_error_is_usage() {
    let o = normlab(&[
        "eval",
        "--norm",
        "lp:p=1:dim=2",
        "--x",
        "1,zz",
        "--y",
        "0,1",
        "--functional",
        "rho_plus",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_dimension_mismatch_is_usage() {
    let o = normlab(&[
        "eval",
        "--norm",
        "lp:p=1:dim=3",
        "--x",
        "1,0",
        "--y",
        "0,1",
        "--functional",
        "rho_plus",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_forced_quadrature_reports_path() {
    let o = normlab(&[
        "eval",
        "--norm",
        "lp:p=1:dim=2",
        "--x",
        "0,1",
        "--y",
        "2,1",
        "--functional",
        "rho_inf",
        "--method",
        "quadrature",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(quadrature)"), "{}", stdout(&o));
}

#[test]
fn check_rho_n_props_passes() {
    let o = normlab(&[
        "check",
        "--suite",
        "rho-n-props",
        "--norm",
        "lp:p=3:dim=4",
        "--samples",
        "500",
        "--seed",
        "42",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn check_symmetry_detector_on_inner_product() {
    let o = normlab(&[
        "check",
        "--suite",
        "symmetry-detector",
        "--norm",
        "pd:gram=I:dim=3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn check_lp1_closed_form() {
    let o = normlab(&[
        "check",
        "--suite",
        "lp1-closed-form",
        "--dim",
        "5",
        "--samples",
        "1000",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn every_suite_passes_with_its_default_norm() {
    for suite in [
        "nd-properties",
        "rho-n-props",
        "homogeneity",
        "translation",
        "bounds",
        "lp1-closed-form",
        "smooth-equivalence",
        "symmetry-detector",
        "preservation",
    ] {
        let o = normlab(&["check", "--suite", suite, "--samples", "200"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
    }
}

#[test]
fn suites_adapt_to_or_refuse_the_given_norm() {
    // ℓ² is recognised as an inner-product norm
    let o = normlab(&[
        "check",
        "--suite",
        "symmetry-detector",
        "--norm",
        "lp:p=2:dim=3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = normlab(&[
        "check",
        "--suite",
        "smooth-equivalence",
        "--norm",
        "lp:p=1:dim=3",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn unknown_suite_is_usage() {
    let o = normlab(&["check", "--suite", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_jsonl_records_have_the_documented_keys() {
    let o = normlab(&[
        "check",
        "--suite",
        "bounds",
        "--samples",
        "100",
        "--format",
        "jsonl",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.is_empty());
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            ["assertion", "lhs", "pass", "rhs", "seed", "suite", "tol"]
        );
    }
}

#[test]
fn check_csv_has_header() {
    let o = normlab(&[
        "check",
        "--suite",
        "homogeneity",
        "--samples",
        "50",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).lines().next(),
        Some("suite,assertion,lhs,rhs,tol,pass,seed")
    );
}

fn witness_count(o: &Output) -> usize {
    let first = stdout(o).lines().next().unwrap().to_string();
    first
        .rsplit("witnesses ")
        .next()
        .unwrap()
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn search_finds_rho_plus_witnesses_in_l1() {
    let o = normlab(&[
        "search",
        "--norm",
        "lp:p=1:dim=2",
        "--a",
        "rho_plus",
        "--b",
        "rho_inf",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(witness_count(&o) >= 1);
}

#[test]
fn search_finds_no_rho_inf_to_bj_witness_in_l1() {
    let o = normlab(&[
        "search",
        "--norm",
        "lp:p=1:dim=2",
        "--a",
        "rho_inf",
        "--b",
        "bj",
        "--samples",
        "10000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(witness_count(&o), 0);
}

#[test]
fn search_in_inner_product_space_finds_nothing() {
    let o = normlab(&[
        "search",
        "--norm",
        "pd:gram=I:dim=4",
        "--a",
        "rho_inf",
        "--b",
        "bj",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(witness_count(&o), 0);
}

#[test]
fn search_writes_witness_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.jsonl");
    let o = normlab(&[
        "search",
        "--norm",
        "lp:p=1:dim=2",
        "--a",
        "bj",
        "--b",
        "rho_inf",
        "--samples",
        "200",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), witness_count(&o));
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["relation_a"], "BIRKHOFF_JAMES");
    assert_eq!(first["seed"], 42);
}

#[test]
fn analyze_map_permutation_preserves() {
    let f = matrix_file("0,1\n1,0\n");
    let o = normlab(&[
        "analyze-map",
        "--norm",
        "lp:p=1:dim=2",
        "--matrix",
        f.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("preserves              true"));
}

#[test]
fn analyze_map_diagonal_fails_with_witness() {
    let f = matrix_file("1,0\n0,2\n");
    let o = normlab(&[
        "analyze-map",
        "--norm",
        "lp:p=1:dim=2",
        "--matrix",
        f.path().to_str().unwrap(),
        "--samples",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("witness index"));
}

#[test]
fn analyze_map_zero_is_rejected() {
    let f = matrix_file("0,0\n0,0\n");
    let o = normlab(&[
        "analyze-map",
        "--norm",
        "lp:p=1:dim=2",
        "--matrix",
        f.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ZERO_MAP"));
}

#[test]
fn analyze_map_missing_file_is_usage() {
    let o = normlab(&[
        "analyze-map",
        "--norm",
        "lp:p=1:dim=2",
        "--matrix",
        "/nonexistent/m.txt",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_tolerance_is_usage() {
    let o = normlab(&["check", "--suite", "bounds", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_comes_from_environment() {
    let run = |seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_normlab"));
        c.args([
            "search",
            "--norm",
            "lp:p=1:dim=2",
            "--a",
            "rho_plus",
            "--b",
            "rho_inf",
            "--samples",
            "20",
        ]);
        match seed {
            Some(s) => c.env("NORMLAB_SEED", s),
            None => c.env_remove("NORMLAB_SEED"),
        };
        stdout(&c.output().unwrap())
    };
    let explicit = stdout(&normlab(&[
        "search",
        "--norm",
        "lp:p=1:dim=2",
        "--a",
        "rho_plus",
        "--b",
        "rho_inf",
        "--samples",
        "20",
        "--seed",
        "7",
    ]));
    assert_eq!(run(Some("7")), explicit);
    assert_ne!(run(None), explicit);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for format in ["table", "csv", "jsonl"] {
        let args = [
            "check",
            "--suite",
            "nd-properties",
            "--samples",
            "100",
            "--format",
            format,
        ];
        assert_eq!(normlab(&args).stdout, normlab(&args).stdout, "{format}");
    }
    let args = [
        "search",
        "--norm",
        "lp:p=1:dim=3",
        "--a",
        "bj",
        "--b",
        "rho_inf",
        "--samples",
        "100",
        "--format",
        "jsonl",
    ];
    assert_eq!(normlab(&args).stdout, normlab(&args).stdout);
}

#[test]
fn report_runs_every_suite() {
    let o = normlab(&["report", "--samples", "100", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    for suite in ["nd-properties", "preservation", "smooth-equivalence"] {
        assert!(
            text.lines().any(|l| l.starts_with(suite)),
            "{suite} missing"
        );
    }
}

#[test]
fn help_exits_cleanly() {
    let o = normlab(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("analyze-map"));
}
