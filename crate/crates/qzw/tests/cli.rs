use std::path::PathBuf;
use std::process::Command;

fn qzw() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qzw"))
}

fn tmp(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("qzw-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

#[test]
fn sampling_is_deterministic_for_a_seed() {
    let (a, b) = (tmp("a"), tmp("b"));
    for d in [&a, &b] {
        let st = qzw().args(["zw", "sample", "--n", "3", "--draws", "50", "--seed", "9", "--out"]).arg(d).status().unwrap();
        assert!(st.success());
    }
    let fa = std::fs::read(a.join("zw_sample.csv")).unwrap();
    let fb = std::fs::read(b.join("zw_sample.csv")).unwrap();
    assert_eq!(fa, fb);
    assert!(String::from_utf8(fa).unwrap().starts_with("# {"));
}

#[test]
fn kernel_eval_writes_one_value() {
    let d = tmp("eval");
    let st = qzw().args(["kernel", "eval", "--x", "+q^0", "--y", "-q^1", "--out"]).arg(&d).status().unwrap();
    assert!(st.success());
    let text = std::fs::read_to_string(d.join("kernel_eval.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    let k: f64 = lines[2].split(',').nth(2).unwrap().parse().unwrap();
    assert!((k - 4.268268390809e-4).abs() < 1e-15);
}

#[test]
fn inadmissible_parameters_exit_with_config_error() {
    let d = tmp("bad");
    std::fs::create_dir_all(&d).unwrap();
    let cfg = d.join("cfg.json");
    // αβ exceeds γδq
    std::fs::write(&cfg, r#"{"alpha":[5.0,5.0],"beta":[5.0,-5.0],"gamma":[1.0,1.0],"delta":[1.0,-1.0]}"#).unwrap();
    let out = qzw().args(["kernel", "eval", "--x", "+q^0", "--y", "+q^1", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("configuration error") && msg.contains("admissible and nondegenerate"), "{msg}");
}

#[test]
fn links_row_is_a_json_array() {
    let d = tmp("row");
    let st = qzw().args(["links", "row", "--points=+q^0,-q^1", "--out"]).arg(&d).status().unwrap();
    assert!(st.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("links_row.json")).unwrap()).unwrap();
    let entries = v.as_array().unwrap();
    let mass: f64 = entries.iter().map(|e| e["probability"].as_f64().unwrap()).sum();
    assert!((mass - 1.0).abs() < 1e-9);
}

#[test]
fn shipped_reference_config_equals_defaults() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/reference.json")).unwrap();
    let cfg: qzw::cli::RunConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(cfg, qzw::cli::RunConfig::default());
}

#[test]
fn verify_all_passes_on_reference_config() {
    let d = tmp("verify");
    let out = qzw()
        .args(["verify-all", "--config", concat!(env!("CARGO_MANIFEST_DIR"), "/configs/reference.json"), "--out"])
        .arg(&d)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("verify_all.json")).unwrap()).unwrap();
    assert_eq!(report.as_array().unwrap().len(), 14);
}
