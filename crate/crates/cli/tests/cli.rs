use std::process::{Command, Output};

fn etaid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etaid"))
        .args(args)
        .env_remove("ETAID_OUT_DIR")
        .output()
        .expect("spawn etaid")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn euler_to_order_100_matches() {
    let o = etaid(&["verify", "euler", "--order", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.starts_with("identity=euler "), "{out}");
    assert!(out.contains("match=true"));
}

#[test]
fn weber_reports_its_constant() {
    let o = etaid(&["verify", "weber", "--order", "20", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["manifest"], serde_json::Value::Null);
    assert_eq!(doc["reports"][0]["constant"], "7/256");
    assert_eq!(doc["reports"][0]["match"], true);
    assert!(doc["runtime_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn parameter_spellings_agree() {
    let a = stdout(&etaid(&["verify", "macdonald", "--k", "3", "--order", "6"]));
    let b = stdout(&etaid(&["verify", "macdonald(3)", "--order", "6"]));
    let c = stdout(&etaid(&["verify", "macdonald", "3", "--order", "6"]));
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert!(a.contains("k=3"), "{a}");
}

#[test]
fn suite_runs_every_model_in_manifest_order() {
    let o = etaid(&["verify", "suite", "--max-st", "40", "--order", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "manifest=suite-v1 reports=72");
    assert_eq!(lines.len(), 73);
    assert!(lines[1].starts_with("identity=euler "));
    assert!(lines[7].starts_with("identity=denominator s=2 t=3 "), "{}", lines[7]);
    assert!(lines.iter().skip(1).all(|l| l.contains("match=true")));
}

#[test]
fn suite_text_output_is_deterministic() {
    let args = ["verify", "suite", "--max-st", "20", "--order", "5"];
    assert_eq!(etaid(&args).stdout, etaid(&args).stdout);
}

#[test]
fn suite_json_records_manifest_and_runtime() {
    let o = etaid(&["verify", "suite", "--max-st", "10", "--order", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["manifest"], "suite-v1");
    assert!(doc["runtime_seconds"].is_number());
    assert!(doc["reports"].as_array().unwrap().len() > 6);
}

#[test]
fn custom_manifest_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.toml");
    std::fs::write(
        &path,
        "version = \"tiny\"\norder = \"4\"\nmax_st = 6\n[[family]]\nidentity = \"wronskian_raw\"\n",
    )
    .unwrap();
    let o = etaid(&["verify", "suite", "--manifest", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    // (2,3) is the only model with st <= 6
    assert_eq!(
        stdout(&o).lines().next(),
        Some("manifest=tiny reports=1")
    );
}

#[test]
fn invalid_model_and_usage_errors_exit_2() {
    assert_eq!(etaid(&["verify", "denominator", "--s", "4", "--t", "6"]).status.code(), Some(2));
    assert_eq!(etaid(&["verify", "macdonald", "--k", "1"]).status.code(), Some(2));
    assert_eq!(etaid(&["verify", "euler", "--order", "0"]).status.code(), Some(2));
    assert_eq!(etaid(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(etaid(&["frobnicate"]).status.code(), Some(2));
    let o = etaid(&["series", "eta^6", "--order", "1/4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("order must exceed 1/4"));
}

#[test]
fn series_prints_the_text_format() {
    let o = etaid(&["series", "eta", "--order", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "D=24 P=5\n1/24 1\n25/24 -1\n49/24 -1\n");
}

#[test]
fn char_forms_agree() {
    let base = ["char", "--s", "2", "--t", "5", "--m", "1", "--n", "1", "--order", "12"];
    let double = stdout(&etaid(&base));
    for form in ["chi", "product"] {
        let mut args = base.to_vec();
        args.extend(["--form", form]);
        assert_eq!(stdout(&etaid(&args)), double, "{form}");
    }
}

#[test]
fn out_dir_receives_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_etaid"))
        .args(["verify", "jacobi", "--order", "10", "--output", "jacobi.txt"])
        .env("ETAID_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("jacobi.txt")).unwrap();
    assert!(text.starts_with("identity=jacobi "));
}

#[test]
fn suite_json_is_deterministic_apart_from_runtime() {
    let args = ["verify", "suite", "--max-st", "15", "--order", "4", "--format", "json"];
    let doc = || {
        let mut v: serde_json::Value = serde_json::from_slice(&etaid(&args).stdout).unwrap();
        v.as_object_mut().unwrap().remove("runtime_seconds");
        v
    };
    assert_eq!(doc(), doc());
}
