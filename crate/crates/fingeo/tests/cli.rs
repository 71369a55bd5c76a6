//! End-to-end checks of the installed binary: exact output bytes,
//! repeatability, exit codes, and export file contents.

use std::process::{Command, Output};

use fingeo::geometry::GeomConfig;
use fingeo::incidence::{build_incidence, Orientation};
use fingeo::ksets::{build_kset, KSpec};

fn fingeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fingeo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_line(args: &[&str]) -> String {
    let out = fingeo(args);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

#[test]
fn rank_hyperoval_mod_3_has_pinned_shape() {
    let got = stdout_line(&[
        "rank", "--p", "2", "--e", "2", "--n", "3", "--kset", "hyperoval", "--char", "3",
    ]);
    assert_eq!(got, "{\"rank\":46,\"h_k\":15,\"dual_zero\":46}\n");
}

#[test]
fn rank_char_zero_smallest_geometry() {
    let got = stdout_line(&["rank", "--p", "2", "--e", "1", "--n", "2", "--char", "0"]);
    assert_eq!(got, "{\"rank\":4,\"h_k\":3,\"dual_zero\":4}\n");
}

#[test]
fn wenger_output_has_pinned_shape() {
    let got = stdout_line(&["wenger", "--n", "3", "--q", "2", "--char", "3"]);
    assert_eq!(
        got,
        "{\"matrix_rank\":6,\"formula\":6,\"rootless\":2,\"consistent\":true}\n"
    );
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "dims", "--p", "3", "--e", "1", "--n", "2", "--kset", "line:2", "--char", "2",
    ];
    let first = stdout_line(&args);
    let second = stdout_line(&args);
    assert_eq!(first, second);

    let decode_args = [
        "decode", "--p", "2", "--e", "2", "--n", "2", "--code", "D", "--errors", "2", "--trials",
        "200", "--seed", "9",
    ];
    assert_eq!(stdout_line(&decode_args), stdout_line(&decode_args));
}

#[test]
fn usage_errors_exit_2() {
    // unknown subcommand (clap) and domain validation both use code 2
    assert_eq!(fingeo(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        fingeo(&["rank", "--p", "4", "--e", "1", "--n", "2", "--char", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fingeo(&["rank", "--p", "2", "--e", "1", "--n", "2", "--char", "6"])
            .status
            .code(),
        Some(2)
    );
    let bad_kset = fingeo(&["rank", "--p", "2", "--e", "1", "--n", "2", "--kset", "nope", "--char", "0"]);
    assert_eq!(bad_kset.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&bad_kset.stderr).is_empty());
}

#[test]
fn export_writes_the_library_serialization() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = GeomConfig::new(2, 1, 2).unwrap();
    let k = build_kset(&cfg, &KSpec::parse("full").unwrap()).unwrap();
    let inc = build_incidence(&cfg, &k).unwrap();

    let alist_path = dir.path().join("m.alist");
    let out = stdout_line(&[
        "export", "--p", "2", "--e", "1", "--n", "2", "--format", "alist", "--out",
        alist_path.to_str().unwrap(),
    ]);
    assert!(out.contains("\"format\":\"alist\""));
    assert!(out.contains("\"n_rows\":4,\"n_cols\":6,\"nnz\":12"));
    let written = std::fs::read_to_string(&alist_path).unwrap();
    assert_eq!(written, inc.alist_string(Orientation::N));

    let mtx_path = dir.path().join("m.mtx");
    stdout_line(&[
        "export", "--p", "2", "--e", "1", "--n", "2", "--format", "mtx", "--orient", "NT",
        "--out", mtx_path.to_str().unwrap(),
    ]);
    let written = std::fs::read_to_string(&mtx_path).unwrap();
    assert_eq!(written, inc.matrix_market_string(Orientation::Nt));
}

#[test]
fn charlemma_counts_and_exit_code() {
    let got = stdout_line(&["charlemma", "--p", "2", "--aux", "3"]);
    assert_eq!(
        got,
        "{\"p\":2,\"aux\":3,\"omega\":2,\"checked\":252,\"violations\":0}\n"
    );
    // aux not congruent to 1 mod p is a usage error
    assert_eq!(fingeo(&["charlemma", "--p", "3", "--aux", "5"]).status.code(), Some(2));
}

#[test]
fn verify_reduced_grid_reports_nine_criteria() {
    let got = stdout_line(&["verify", "--max-q", "3", "--max-n", "2", "--seed", "7"]);
    let v: serde_json::Value = serde_json::from_str(&got).unwrap();
    assert_eq!(v["passed"], serde_json::Value::Bool(true));
    let criteria = v["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 9);
    for (i, c) in criteria.iter().enumerate() {
        assert_eq!(c["id"], serde_json::json!(i as u64 + 1));
        assert_eq!(c["passed"], serde_json::Value::Bool(true));
        assert!(c.get("seconds").is_none(), "timing leaked into JSON");
        assert!(c.get("detail").is_none(), "detail emitted on success");
    }
}

#[test]
fn words_kgon_lists_hexagon_and_octagon() {
    let got = stdout_line(&["words", "--p", "5", "--e", "1", "--n", "2", "--kind", "kgon"]);
    let v: serde_json::Value = serde_json::from_str(&got).unwrap();
    let words = v["words"].as_array().unwrap();
    assert_eq!(words.len(), 2);
    assert_eq!(words[0]["label"], "hexagon");
    assert_eq!(words[1]["label"], "octagon");
    // binary field: no k-gon words at all
    assert_eq!(
        fingeo(&["words", "--p", "2", "--e", "1", "--n", "2", "--kind", "kgon"])
            .status
            .code(),
        Some(2)
    );
}
