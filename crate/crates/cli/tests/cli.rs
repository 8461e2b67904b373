use std::io::Write;

use symspec_cli::{run, EXIT_FINDING, EXIT_OK, EXIT_USAGE};

fn symspec(args: &str) -> symspec_cli::Outcome {
    run(std::iter::once("symspec").chain(args.split_whitespace()))
}

#[test]
fn t2_table_ends_at_page_two() {
    let out = symspec("pages --model t2 --format table");
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("E_2") && !out.stdout.contains("E_3"));
    let expected = "\nE_2\n   1 |  2  1\n   0 |  1  ·\n     +------\n   q/p  0  1\n";
    assert!(out.stdout.contains(expected), "{}", out.stdout);
}

#[test]
fn json_pages_omit_zeros_and_sort_keys() {
    let out = symspec("pages --model t2 --format json");
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(
        doc["pages"]["2"],
        serde_json::json!({"0,0": 1, "0,1": 2, "1,1": 1})
    );
    assert_eq!(doc["stabilization_page"], 0);
    let keys: Vec<&String> = doc.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["model", "pages", "stabilization_page", "verdicts"]);
}

#[test]
fn max_page_limits_output() {
    let doc: serde_json::Value =
        serde_json::from_str(&symspec("pages --model kt4 --max-page 1 --format json").stdout)
            .unwrap();
    assert_eq!(doc["pages"].as_object().unwrap().len(), 2);
    assert_eq!(doc["stabilization_page"], 2);
}

#[test]
fn kt4_sequence_and_stabilization() {
    let out = symspec("verify --model kt4 --suites thm1,stab");
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    assert!(out.stdout.contains("Theorem 1"));
}

#[test]
fn kt4_is_not_harmonic() {
    let out = symspec("harmonic --model kt4");
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("verdict: not harmonic"));
    assert!(out.stdout.contains("Theorem 5"));
    assert!(out.stdout.contains("q = 1"));
}

#[test]
fn closed_type_claims_on_exact_model_are_findings() {
    assert_eq!(
        symspec("verify --model solv2 --suites harmonic").code,
        EXIT_FINDING
    );
    assert_eq!(
        symspec("verify --model solv2 --suites symmetry").code,
        EXIT_FINDING
    );
    assert_eq!(
        symspec("verify --model solv2 --suites thm1,stab").code,
        EXIT_OK
    );
}

#[test]
fn usage_errors() {
    assert_eq!(symspec("verify --model t2 --suites eq9").code, EXIT_USAGE);
    assert_eq!(symspec("pages --model t2 --format yaml").code, EXIT_USAGE);
    assert_eq!(symspec("pages --model nosuchmodel").code, EXIT_USAGE);
    assert!(symspec("pages --model nosuchmodel").stderr.contains("kt4"));
    assert_eq!(symspec("--help").code, EXIT_OK);
}

#[test]
fn model_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("kt4.json");
    std::fs::File::create(&good)
        .unwrap()
        .write_all(
            br#"{"name": "kt4", "generators": ["e1","e2","e3","e4"],
                "d": {"e4": [["1", ["e1","e2"]]]},
                "omega": [["1", ["e1","e4"]], ["1", ["e2","e3"]]]}"#,
        )
        .unwrap();
    let from_file = symspec(&format!("pages --model {} --format json", good.display()));
    assert_eq!(from_file, symspec("pages --model kt4 --format json"));

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        br#"{"name": "x", "generators": ["a","b","c"], "omega": []}"#,
    )
    .unwrap();
    let out = symspec(&format!("cohomology --model {}", bad.display()));
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("odd"), "{}", out.stderr);
}

#[test]
fn cohomology_report() {
    let out = symspec("cohomology --model solv2");
    assert!(out.stdout.contains("dim H^2 = 0") && out.stdout.contains("t_min = 1"));
}

#[test]
fn binary_output_is_byte_identical_across_runs() {
    let bin = env!("CARGO_BIN_EXE_symspec");
    for args in [
        &["pages", "--model", "kt4", "--format", "json"][..],
        &["verify", "--model", "t4", "--suites", "thm1,stab"][..],
    ] {
        let a = std::process::Command::new(bin).args(args).output().unwrap();
        let b = std::process::Command::new(bin).args(args).output().unwrap();
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), Some(EXIT_OK));
    }
    let broken = std::process::Command::new(bin)
        .args(["pages", "--model", "/nonexistent/model.json"])
        .output()
        .unwrap();
    assert_eq!(broken.status.code(), Some(EXIT_USAGE));
}
