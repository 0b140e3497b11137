use std::process::{Command, Output};

use serde_json::Value;
use trigonal_core::evalmap::CodimReport;
use trigonal_core::GradedTate;

fn trigonal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trigonal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = trigonal(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn stable_genus_forty() {
    let doc = json(&["stable", "--genus", "40", "--output", "json"]);
    let classes: GradedTate = serde_json::from_value(doc["result"]["classes"].clone()).unwrap();
    assert_eq!(classes, GradedTate::from_pairs([(0, 0), (2, -1), (4, -2)]));
    assert_eq!(doc["result"]["bound"], 10);
    assert_eq!(doc["result"]["strict"], true);
    assert_eq!(doc["command"], "stable");
    assert!(!doc["assumptions"].as_array().unwrap().is_empty());
}

#[test]
fn framed_genus_forty() {
    let doc = json(&["framed", "--genus", "40", "--output", "json"]);
    let classes: GradedTate = serde_json::from_value(doc["result"]["classes"].clone()).unwrap();
    assert_eq!(classes, GradedTate::from_pairs([(0, 0), (2, -1), (5, -3), (7, -4)]));
}

#[test]
fn class_records_keep_field_order() {
    let o = trigonal(&["confspace", "--cells", "2,1", "--k", "2", "--output", "json"]);
    let text = stdout(&o);
    assert!(text.contains("\"degree\": 6,\n      \"weight\": 3,\n      \"mult\": 1"), "{text}");
    let doc: Value = serde_json::from_str(&text).unwrap();
    let empty = json(&["confspace", "--cells", "2,1", "--k", "3", "--output", "json"]);
    assert_eq!(empty["result"], Value::Array(vec![]));
    assert_eq!(doc["parameters"]["k"], 2);
}

#[test]
fn confspace_text() {
    let o = trigonal(&["confspace", "--cells", "2,1,1,0", "--k", "3", "--output", "text"]);
    assert_eq!(stdout(&o), "deg 4: Q(2); deg 6: 2Q(3); deg 8: Q(4)\n");
}

#[test]
fn verify_codim_example() {
    let args = [
        "verify-codim", "--n", "1", "--h", "3", "--d", "7", "--N", "2", "--trials", "50", "--seed", "0", "--output",
        "json",
    ];
    let o = trigonal(&args);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let report: CodimReport = serde_json::from_value(doc["result"].clone()).unwrap();
    assert_eq!(report.failures, 0);
    assert_eq!(report.trials, 50);
    // byte-identical on a second run
    assert_eq!(trigonal(&args).stdout, o.stdout);
}

#[test]
fn paired_and_sharpness_modes() {
    let doc = json(&["verify-codim", "--n", "0", "--d", "5", "--k", "2", "--mode", "paired", "--output", "json"]);
    assert_eq!(doc["result"]["codim"], 12);
    let o = trigonal(&["verify-codim", "--n", "1", "--d", "7", "--N", "3", "--mode", "sharpness", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn exit_statuses() {
    assert_eq!(trigonal(&["stable", "--genus", "7"]).status.code(), Some(2));
    assert_eq!(trigonal(&["stratum", "--genus", "5", "--n", "1"]).status.code(), Some(2));
    assert_eq!(trigonal(&["e1-page", "--n", "2", "--d", "5"]).status.code(), Some(2));
    assert_eq!(trigonal(&["verify-codim", "--n", "1", "--d", "3", "--N", "3"]).status.code(), Some(2));
    assert_eq!(trigonal(&["stable"]).status.code(), Some(2));
}

#[test]
fn stratum_document() {
    let doc = json(&["stratum", "--genus", "20", "--n", "2", "--output", "json"]);
    let classes: GradedTate = serde_json::from_value(doc["result"]["classes"].clone()).unwrap();
    assert_eq!(classes, GradedTate::from_pairs([(0, 0), (2, -1)]));
    assert_eq!(doc["result"]["max_degree"], 4);
    let doc = json(&["stratum", "--genus", "20", "--n", "0", "--output", "json"]);
    assert_eq!(doc["result"]["max_degree"], 5);
}

#[test]
fn chow_document() {
    let doc = json(&["chow", "--genus", "11", "--n", "1", "--output", "json"]);
    assert_eq!(doc["result"]["dims"], serde_json::json!([1, 1, 0]));
    assert_eq!(doc["result"]["euler_ranks"]["ranks"]["5"], 1);
}

#[test]
fn e1_page_latex_rows() {
    let o = trigonal(&["e1-page", "--n", "1", "--d", "25", "--output", "latex"]);
    let text = stdout(&o);
    assert!(text.contains("$2v_{d,n}-3$&$\\mathbf{Q}(v_{d,n}-1)$&&&&\\\\"), "{text}");
    assert!(text.contains("$2v_{d,n}-18$"));
    let doc = json(&["e1-page", "--n", "1", "--d", "25", "--output", "json"]);
    assert_eq!(doc["result"]["v"], 98);
}

#[test]
fn maroni_table_latex() {
    let o = trigonal(&["stable", "--genus", "44", "--output", "latex"]);
    let text = stdout(&o);
    assert!(text.starts_with("\\begin{tabular}"));
    assert!(text.contains("$-13$\\\\"));
}

#[test]
fn documents_round_trip() {
    for args in [
        &["stable", "--genus", "21", "--output", "json"][..],
        &["framed", "--genus", "22", "--output", "json"][..],
        &["chow", "--genus", "14", "--n", "2", "--output", "json"][..],
        &["e1-page", "--n", "2", "--d", "30", "--output", "json"][..],
    ] {
        let o = trigonal(args);
        let value: Value = serde_json::from_slice(&o.stdout).unwrap();
        let again = serde_json::to_string_pretty(&value).unwrap();
        let reparsed: Value = serde_json::from_str(&again).unwrap();
        assert_eq!(value, reparsed);
        assert_eq!(trigonal(args).stdout, o.stdout);
    }
}
