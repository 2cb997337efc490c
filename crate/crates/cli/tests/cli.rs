use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use foliated_tori_cli::document::Document;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn ftori(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ftori"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn ftori");
    if let Some(bytes) = stdin {
        child.stdin.take().unwrap().write_all(bytes).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().expect("wait for ftori")
}

fn on_fixture(args: &[&str], name: &str) -> Output {
    let path = fixture(name);
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--in", path.to_str().unwrap()]);
    ftori(&all, None)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// `(args, fixture, expected exit code)`
const CASES: &[(&[&str], &str, i32)] = &[
    (&["validate-polarization"], "standard_1_1.json", 0),
    (&["validate-polarization"], "negated_polarization.json", 1),
    (&["validate-polarization"], "twisted_2_1.json", 0),
    (&["adapt"], "adapt_scaled.json", 0),
    (&["adapt"], "adapt_cyclic.json", 0),
    (&["adapt"], "degenerate_period.json", 1),
    (&["embed"], "standard_1_1.json", 0),
    (&["orbit-sample", "--bound", "1", "--radius", "1e-6", "--beta-zero"], "elliptic_plane.json", 0),
    (&["transport-check"], "elliptic_plane.json", 0),
    (&["transport-check"], "elliptic_shear.json", 0),
    (&["transport-check"], "transport_not_symplectic.json", 1),
    (&["check-plane"], "real_plane.json", 1),
    (&["extract"], "real_plane.json", 1),
    (&["verify-equiv", "--polarized"], "witness_beta.json", 0),
    (&["verify-equiv"], "witness_not_unimodular.json", 1),
    (&["snf"], "alternating_3x3.json", 0),
    (&["frobenius"], "alternating_3x3.json", 0),
    (&["frobenius"], "symmetric_2x2.json", 1),
    (&["snf"], "big_integers.json", 0),
    (&["canonicalize"], "non_normalized.json", 0),
    (&["dim-check"], "sample_2_1.json", 0),
    (&["check-plane", "--strict"], "sample_3_1_twisted.json", 0),
    (&["validate-polarization"], "sample_3_1_twisted.json", 0),
    (&["canonicalize"], "malformed_syntax.json", 2),
    (&["canonicalize"], "malformed_ragged.json", 2),
    (&["canonicalize"], "malformed_type.json", 2),
    (&["canonicalize"], "malformed_version.json", 2),
    (&["verify-equiv", "--polarized"], "malformed_fraction.json", 2),
];

#[test]
fn fixture_exit_codes() {
    for (args, name, code) in CASES {
        let out = on_fixture(args, name);
        assert_eq!(out.status.code(), Some(*code), "{args:?} {name}: {}", String::from_utf8_lossy(&out.stderr));
        if *code == 2 {
            assert!(out.stdout.is_empty());
            assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: malformed input"));
        } else {
            let _ = json(&out);
        }
    }
}

#[test]
fn every_fixture_is_exercised() {
    let mut names: Vec<String> = fs::read_dir(fixture(""))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    for name in names {
        assert!(CASES.iter().any(|(_, n, _)| *n == name), "{name} has no case");
    }
}

#[test]
fn canonical_form_is_a_fixed_point() {
    for entry in fs::read_dir(fixture("")).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let Ok(doc) = Document::parse(&text) else { continue };
        if doc.check().is_err() {
            continue;
        }
        let once = doc.emit();
        let reparsed = Document::parse(&once).unwrap();
        assert_eq!(reparsed, doc, "{}", path.display());
        assert_eq!(reparsed.emit(), once, "{}", path.display());

        let first = ftori(&["canonicalize"], Some(text.as_bytes()));
        assert_eq!(first.status.code(), Some(0));
        let second = ftori(&["canonicalize"], Some(&first.stdout));
        assert_eq!(first.stdout, second.stdout, "{}", path.display());
        assert_eq!(first.stdout, once.as_bytes());
    }
}

#[test]
fn big_integers_survive_as_strings() {
    let out = on_fixture(&["canonicalize"], "big_integers.json");
    let v = json(&out);
    assert_eq!(v["matrix"][0][1], Value::from("1329227995784915872903807060280344576"));
    assert_eq!(v["matrix"][0][0], Value::from(0));
    let snf = json(&on_fixture(&["snf"], "big_integers.json"));
    assert_eq!(snf["diagonal"][0], Value::from("1329227995784915872903807060280344576"));
}

#[test]
fn normalization_rewrites_numbers() {
    let v = json(&on_fixture(&["canonicalize"], "non_normalized.json"));
    assert_eq!(v["matrix"], serde_json::json!([[0, 2], [-2, 0]]));
}

#[test]
fn adapt_output_feeds_verify_equiv() {
    for name in ["adapt_scaled.json", "adapt_cyclic.json"] {
        let adapted = on_fixture(&["adapt"], name);
        assert_eq!(adapted.status.code(), Some(0));
        let v = json(&adapted);
        assert_eq!(v["target"]["real"], serde_json::json!([[0.5, 0.0, 1.0]]));
        let verified = ftori(&["verify-equiv"], Some(&adapted.stdout));
        assert_eq!(verified.status.code(), Some(0), "{}", String::from_utf8_lossy(&verified.stdout));
    }
    let p = json(&on_fixture(&["adapt"], "adapt_cyclic.json"))["witness"]["p"].clone();
    assert_eq!(p, serde_json::json!([[0, 1, 0], [0, 0, 1], [1, 0, 0]]));
}

#[test]
fn embed_then_extract_returns_the_period() {
    let embedded = on_fixture(&["embed"], "standard_1_1.json");
    let v = json(&embedded);
    assert_eq!(v["plane"], serde_json::json!([[{"re": 1.0, "im": 0.0}, {"re": 0.0, "im": -1.0}, {"re": 0.0, "im": 0.0}]]));
    let extracted = ftori(&["extract"], Some(&embedded.stdout));
    assert_eq!(json(&extracted)["period"], v["period"]);
}

#[test]
fn reports_carry_expected_values() {
    let v = json(&on_fixture(&["validate-polarization"], "twisted_2_1.json"));
    assert_eq!(v["g_eigenvalues"], serde_json::json!([1.0, 1.0, 2.0, 2.0]));
    assert_eq!(v["hermitian_eigenvalues"], serde_json::json!([1.0, 2.0]));
    let v = json(&on_fixture(&["validate-polarization"], "negated_polarization.json"));
    assert_eq!(v["positive"], Value::Bool(false));
    let v = json(&on_fixture(&["dim-check"], "sample_2_1.json"));
    assert_eq!(v["tangent_dimension"], Value::from(5));
    let v = json(&on_fixture(&["orbit-sample", "--bound", "1", "--radius", "1e-6", "--beta-zero"], "elliptic_plane.json"));
    assert_eq!(v["count"], Value::from(4));
    let v = json(&on_fixture(&["frobenius"], "alternating_3x3.json"));
    assert_eq!(v["divisors"], serde_json::json!([2]));
    assert_eq!(v["kernel_dim"], Value::from(1));
    let v = json(&on_fixture(&["transport-check"], "elliptic_shear.json"));
    assert_eq!(v["spectra_agree"], Value::Bool(false));
    assert_eq!(v["valid"], Value::Bool(true));
}

#[test]
fn generation_is_deterministic() {
    let a = ftori(&["gen", "--seed", "17", "--n", "2", "--k", "2"], None);
    let b = ftori(&["gen", "--seed", "17", "--n", "2", "--k", "2"], None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = ftori(&["gen", "--seed", "18", "--n", "2", "--k", "2"], None);
    assert_ne!(a.stdout, c.stdout);
    let checked = ftori(&["check-plane", "--strict"], Some(&a.stdout));
    assert_eq!(checked.status.code(), Some(0));
    let orbit1 = ftori(&["orbit-sample", "--bound", "1", "--radius", "0.5"], Some(&ftori(&["gen", "--seed", "3"], None).stdout));
    let orbit2 = ftori(&["orbit-sample", "--bound", "1", "--radius", "0.5"], Some(&ftori(&["gen", "--seed", "3"], None).stdout));
    assert_eq!(orbit1.stdout, orbit2.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let input = fixture("standard_1_1.json");
    let out = ftori(
        &["validate-polarization", "--in", input.to_str().unwrap(), "--out", target.to_str().unwrap()],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["valid"], Value::Bool(true));
}

#[test]
fn tolerance_flags_change_verdicts() {
    // The 1e-12 perturbation is below eps_rank = 1e-9 but above 1e-14.
    let strict = on_fixture(&["adapt", "--eps-rank", "1e-14"], "degenerate_period.json");
    assert_eq!(strict.status.code(), Some(0));
    let default = on_fixture(&["adapt"], "degenerate_period.json");
    assert_eq!(default.status.code(), Some(1));
}

#[test]
fn missing_input_file_is_malformed() {
    let out = ftori(&["snf", "--in", "/nonexistent/doc.json"], None);
    assert_eq!(out.status.code(), Some(2));
}
