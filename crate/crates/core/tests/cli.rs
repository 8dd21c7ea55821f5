mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::fixture;
use serde_json::Value;

fn gell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gell"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn spec(name: &str) -> String {
    fixture(&format!("specs/{name}.json")).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn report(name: &str, extra: &[&str]) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let spec_path = spec(name);
    let mut args = vec!["gell", spec_path.as_str(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = gell(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap()
}

fn write_temp(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn trivial_spec_has_integer_labels() {
    let r = report("trivial_d1", &[]);
    assert_eq!(r["gap_labels"]["untwisted"]["rhs"], "Z");
    assert_eq!(r["gap_labels"]["untwisted"]["equal"], true);
    assert_eq!(r["order_unit"]["trace"], "1");
    assert_eq!(r["spec"]["depth"], 0);
}

#[test]
fn dyadic_labels_at_depth_eight() {
    let r = report("dyadic", &[]);
    assert_eq!(r["gap_labels"]["untwisted"]["lhs"]["generator"], "1/256");
    assert_eq!(r["gap_labels"]["untwisted"]["lhs"]["completion"], "2^inf");
    assert_eq!(r["transfer"][8]["trace"], "1/256");
    assert_eq!(r["transfer"][8]["cylinders"], "256");
    assert_eq!(r["k_odd"]["connecting"][0], serde_json::json!([["2"]]));
    let shallow = report("dyadic", &["--depth", "3"]);
    assert_eq!(shallow["gap_labels"]["untwisted"]["lhs"]["generator"], "1/8");
}

#[test]
fn default_depth_is_six() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(dir.path(), "s.json", r#"{"rank": 1, "steps": [], "periodic_tail": [[["3"]]]}"#);
    let out = dir.path().join("r.json");
    let o = gell(&["gell", &p, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(r["spec"]["depth"], 6);
    assert_eq!(r["gap_labels"]["untwisted"]["rhs_generator"], "1/729");
}

#[test]
fn symbolic_twist_reports_label_pairs() {
    let r = report("diag23_symbolic", &[]);
    let a = &r["gap_labels"]["twisted_route_a"];
    assert_eq!(a["kind"], "symbolic");
    assert_eq!(a["constant_generator"], "1/216");
    assert_eq!(a["theta_generator"], "1");
    assert_eq!(r["gap_labels"]["twisted_route_b"], *a);
    assert_eq!(r["gap_labels"]["agree"], true);
    assert_eq!(r["order_unit"]["twisted_trace"], serde_json::json!({"constant": "1", "theta": "0"}));
}

#[test]
fn rational_twist_routes_agree() {
    let r = report("diag23_fifth", &[]);
    assert_eq!(r["gap_labels"]["twisted_route_a"]["generator"], "1/30");
    assert_eq!(r["gap_labels"]["agree"], true);
    let r = report("plane_fifth", &[]);
    assert_eq!(r["gap_labels"]["twisted_route_a"]["generator"], "1/5");
}

#[test]
fn report_embeds_conventions_and_version() {
    let r = report("gaussian", &[]);
    assert_eq!(r["conventions"]["pullback"], "M^T");
    assert_eq!(r["conventions"]["empty_pfaffian"], "Pf(empty)=1");
    assert!(r["conventions"]["shift"].as_str().unwrap().contains("g(U)"));
    assert_eq!(r["tool"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["trace_simplex"], "single point (uniquely ergodic)");
}

#[test]
fn verify_gap_tables() {
    let o = gell(&["verify-gap", &spec("diag23"), "--depth", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.matches("PASS").count(), 6);
    assert!(text.contains("(1/7776)Z"));
    let o = gell(&["verify-gap", &spec("trivial_d1")]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches("PASS").count(), 1);
    let o = gell(&["verify-gap", &spec("plane_fifth")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/theta"));
}

#[test]
fn schema_violations_exit_one_with_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"rank": 2, "steps": [[["1", "0"], ["0", "x"]]]}"#, "/steps/0/1/1"),
        (r#"{"rank": 2, "steps": [], "theta": ["1", "2"]}"#, "/theta"),
        (r#"{"rank": 1, "steps": [[["0"]]]}"#, "/steps"),
        (r#"{"rank": 2, "bases": [[["2", "0"], ["0", "2"]], [["3", "0"], ["0", "3"]]]}"#, "/bases/1"),
        (r#"{"steps": []}"#, "/rank"),
        ("not json", "not valid JSON"),
    ];
    for (i, (body, needle)) in cases.iter().enumerate() {
        let p = write_temp(dir.path(), &format!("bad{i}.json"), body);
        let o = gell(&["gell", &p]);
        assert_eq!(o.status.code(), Some(1), "{body}");
        assert!(stderr(&o).contains(needle), "{body}: {}", stderr(&o));
    }
    let o = gell(&["gell", "/nonexistent/spec.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn compare_verdicts() {
    let o = gell(&["compare", &spec("dyadic"), &spec("triadic")]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("verdict: distinguished"));
    assert!(stdout(&o).contains("2^inf != 3^inf"));

    let o = gell(&["compare", &spec("dyadic_2222"), &spec("dyadic_44")]);
    assert!(stdout(&o).starts_with("verdict: not distinguished at this depth"));

    let cert = fixture("certificates/identity_d1.json");
    let o = gell(&["compare", &spec("dyadic"), &spec("dyadic"), "--certificate", cert.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("verdict: certificate verified"));

    let cert = fixture("certificates/floor_map.json");
    let o = gell(&["compare", &spec("dyadic_2222"), &spec("dyadic_44"), "--certificate", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("verdict: certificate rejected"));

    let o = gell(&["compare", &spec("dyadic"), &spec("diag23")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn rieffel_records() {
    for (p, q, trace) in [("2", "7", 2.0 / 7.0), ("1", "4", 0.25)] {
        let o = gell(&["rieffel", "--p", p, "--q", q]);
        assert!(o.status.success());
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert!((v["trace"].as_f64().unwrap() - trace).abs() <= 1e-12);
        assert_eq!(v["within_tolerances"], true);
        for k in ["projection_residual", "spectrum_gap", "eps", "convention"] {
            assert!(!v[k].is_null(), "{k}");
        }
    }
    let o = gell(&["rieffel", "--p", "3", "--q", "8", "--eps", "3/8"]);
    assert!(o.status.success());
    let o = gell(&["rieffel", "--p", "3", "--q", "6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not reduced"));
    let o = gell(&["rieffel", "--p", "2", "--q", "7", "--eps", "1/5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn report_schema_lists_every_top_level_key() {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/gell_report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let mut required: Vec<&str> = schema["required"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    required.sort();
    for name in ["diag23_symbolic", "trivial_d1"] {
        let r = report(name, &[]);
        let mut keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(keys, required);
    }
}
