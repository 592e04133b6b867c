use std::path::Path;

use clap::CommandFactory;
use trigroup::cli::{run, Cli, EXIT_OK, EXIT_USAGE};
use trigroup::format::parse_text;

fn trigroup(args: &[&str]) -> i32 {
    run(std::iter::once("trigroup").chain(args.iter().copied()))
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

fn all_help() -> String {
    let mut cmd = Cli::command();
    cmd.build();
    let mut out = cmd.render_help().to_string();
    for sub in cmd.get_subcommands_mut().filter(|s| s.get_name() != "help") {
        out.push_str(&format!("\n===== {} =====\n", sub.get_name()));
        out.push_str(&sub.render_help().to_string());
    }
    out
}

#[test]
fn help_matches_golden_file() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/help.txt");
    let text = all_help();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&golden, &text).unwrap();
    }
    assert_eq!(text, std::fs::read_to_string(golden).unwrap());
}

#[test]
fn decide_reports_cyclic_group_as_nontrivial() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.txt");
    let out = dir.path().join("v.json");
    std::fs::write(&input, "n=1\ng1 g1 g1\n").unwrap();
    let code = trigroup(&["decide", "--input", path_str(&input), "--max-cosets", "1000", "--output", path_str(&out)]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["verdict"]["outcome"], "Nontrivial");
    assert_eq!(v["verdict"]["certificate"]["divisors"], serde_json::json!([3]));
    assert_eq!(v["certificate_verified"], true);
}

#[test]
fn decide_exhausted_budget_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.txt");
    // abelianization is trivial and a single coset row cannot close the table
    std::fs::write(&input, "n=2\ng1 g1 g2\ng2 g2 g1\ng1 G2 G2\n").unwrap();
    let code = trigroup(&["decide", "--input", path_str(&input), "--max-cosets", "1", "--cascade", "off"]);
    assert_eq!(code, 3);
}

#[test]
fn sample_with_zero_probability_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.txt");
    assert_eq!(trigroup(&["sample", "--n", "3", "--p", "0", "--seed", "7", "--output", path_str(&out)]), EXIT_OK);
    let text = std::fs::read_to_string(&out).unwrap();
    let p = parse_text(&text).unwrap();
    assert_eq!((p.n(), p.len()), (3, 0));
    assert!(text.lines().any(|l| l == "n=3"));
    assert!(Path::new(&format!("{}.manifest.json", out.display())).exists());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(trigroup(&["sample", "--n", "3"]), EXIT_USAGE);
    assert_eq!(trigroup(&["sample", "--n", "3", "--p", "1.5"]), EXIT_USAGE);
    assert_eq!(trigroup(&["sweep", "--n", "3", "--c", "1:0:0.1"]), EXIT_USAGE);
    assert_eq!(trigroup(&["davkd-enum", "--m", "0"]), EXIT_USAGE);
    assert_eq!(trigroup(&["bogus"]), EXIT_USAGE);
}

#[test]
fn sweep_bytes_do_not_depend_on_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (threads, ext) in [("1", "csv"), ("3", "csv"), ("1", "jsonl"), ("4", "jsonl")] {
        let out = dir.path().join(format!("s{threads}.{ext}"));
        let args = ["sweep", "--n", "8", "--c", "0.02:0.2:0.02", "--trials", "25", "--seed", "11", "--threads", threads, "--output", path_str(&out)];
        assert_eq!(trigroup(&args), EXIT_OK);
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[2], outputs[3]);
    let csv = String::from_utf8(outputs[0].clone()).unwrap();
    assert!(csv.starts_with("# manifest "));
    assert_eq!(csv.lines().nth(1), Some("c,p,lower,upper,undecided,ci_lo,ci_hi"));
}

#[test]
fn davkd_check_reads_a_diagram_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("d.json");
    let out = dir.path().join("r.jsonl");
    std::fs::write(
        &input,
        r#"{"faces":[{"label":1,"orientation":"ccw","basepoint":0}],"edges":[{"a":[0,0],"boundary":true},{"a":[0,1],"boundary":true},{"a":[0,2],"boundary":true}]}"#,
    )
    .unwrap();
    let code = trigroup(&["davkd-check", "--input", path_str(&input), "--f", "0.5", "--n", "2", "--p", "0.1", "--output", path_str(&out)]);
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(&out).unwrap();
    let row: serde_json::Value = serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
    assert_eq!(row["C"], serde_json::json!([3]));
    assert_eq!(row["d"], serde_json::json!(["1"]));
    assert_eq!(row["holds"], true);
    assert!((row["fulfillability_bound"].as_f64().unwrap() - 0.8).abs() < 1e-12);
}
