//! End-to-end checks of the command-line interface.

use std::path::Path;
use std::process::{Command, Output};

fn omaslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omaslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = omaslab(args);
    assert!(
        out.status.success(),
        "`omaslab {}` failed: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn json_of(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout_of(args)).expect("JSON output")
}

#[test]
fn sample_emits_the_complete_edge_list_for_a_unit_kernel() {
    let text = stdout_of(&[
        "sample",
        "--graphon",
        "constant:1",
        "--n",
        "5",
        "--seed",
        "3",
    ]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "i,j");
    assert_eq!(lines.len() - 1, 10); // C(5, 2) edges
}

#[test]
fn spectrum_of_the_expected_complete_pair() {
    let text = stdout_of(&[
        "spectrum",
        "--graphon",
        "constant:1",
        "--n",
        "2",
        "--expected",
    ]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,lambda,mu");
    let last: Vec<&str> = lines[2].split(',').collect();
    let lambda: f64 = last[1].parse().unwrap();
    let mu: f64 = last[2].parse().unwrap();
    assert!((lambda - 2.0).abs() < 1e-10);
    assert!((mu - 1.0).abs() < 1e-10);
}

#[test]
fn mu2_sbm_reports_the_reduction() {
    let value = json_of(&["mu2-sbm", "--graphon", "two-block:0.8,0.2", "--n", "100"]);
    assert_eq!(value["blocks"], 2);
    assert!((value["mu2_bar"].as_f64().unwrap() - 0.2).abs() < 1e-12);
    assert!((value["lambda2_l_sbm"].as_f64().unwrap() - 0.2).abs() < 1e-12);
}

#[test]
fn exp_mu2_exact_matches_the_frozen_enumeration() {
    let value = json_of(&[
        "exp-mu2",
        "--graphon",
        "constant:0.5",
        "--n",
        "4",
        "--gamma",
        "1",
        "--method",
        "exact",
    ]);
    assert_eq!(value["method"], "exact-enumeration");
    assert_eq!(value["trials"], 64);
    assert!((value["estimate"].as_f64().unwrap() - 0.751624413783445).abs() < 1e-12);
}

#[test]
fn exp_mu2_over_a_size_range_reports_the_argmax() {
    let value = json_of(&[
        "exp-mu2",
        "--graphon",
        "constant:0.5",
        "--n-min",
        "2",
        "--n-max",
        "4",
        "--gamma",
        "1",
        "--method",
        "exact",
    ]);
    assert_eq!(value["argmax_n"], 4);
}

#[test]
fn exp_mu2_exact_refuses_large_sizes() {
    let out = omaslab(&[
        "exp-mu2",
        "--graphon",
        "constant:0.5",
        "--n",
        "6",
        "--gamma",
        "1",
        "--method",
        "exact",
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("exact enumeration refused"), "stderr: {err}");
}

#[test]
fn bound_thm1_accepts_a_direct_e_term() {
    let value = json_of(&[
        "bound", "thm1", "--n", "10", "--sigma2", "1", "--gamma", "0", "--e-term", "1",
    ]);
    assert_eq!(value["formula"], "thm1");
    assert!((value["value"].as_f64().unwrap() - 0.9).abs() < 1e-12);
    assert_eq!(value["valid"], true);
}

#[test]
fn bound_thm2_rejects_small_n_max() {
    let out = omaslab(&[
        "bound", "thm2", "--n-min", "1", "--n-max", "3", "--sigma2", "1", "--gamma", "1",
        "--e-term", "0.5",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis"));
}

#[test]
fn bound_thm3_attaches_the_large_n_flag_when_a_graphon_is_given() {
    let value = json_of(&[
        "bound",
        "thm3",
        "--n",
        "500",
        "--gamma",
        "1",
        "--graphon",
        "constant:0.5",
    ]);
    assert_eq!(value["formula"], "thm3");
    assert_eq!(value["flags"]["large_n"], true);
    assert_eq!(value["flags"]["contraction_lt_one"], true);
    assert!((value["value"].as_f64().unwrap() - 0.850814).abs() < 1e-5);
}

#[test]
fn check_large_n_flags_each_condition() {
    let value = json_of(&["check-large-n", "--graphon", "constant:0.5", "--n", "10"]);
    assert_eq!(value["tail"], false);
    assert_eq!(value["satisfied"], false);
    let value = json_of(&["check-large-n", "--graphon", "constant:0.5", "--n", "200"]);
    assert_eq!(value["satisfied"], true);
}

#[test]
fn simulate_run_writes_summary_manifest_and_trajectories_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let args = |out: &Path| {
        vec![
            "simulate".to_string(),
            "replacements".to_string(),
            "--graphon".into(),
            "two-block:0.8,0.2".into(),
            "--n".into(),
            "8".into(),
            "--gamma".into(),
            "1".into(),
            "--sigma2".into(),
            "1".into(),
            "--events".into(),
            "50".into(),
            "--trials".into(),
            "20".into(),
            "--seed".into(),
            "11".into(),
            "--e-term-trials".into(),
            "500".into(),
            "--out".into(),
            out.display().to_string(),
        ]
    };
    for out in [&out_a, &out_b] {
        let strings = args(out);
        let refs: Vec<&str> = strings.iter().map(String::as_str).collect();
        let summary = stdout_of(&refs);
        assert!(summary.contains("\"kind\": \"replacements\""));
    }
    // identical digests on a rerun of the same spec
    let manifest_a: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_a.join("manifest.json")).unwrap())
            .unwrap();
    let manifest_b: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_b.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest_a["outputs"], manifest_b["outputs"]);
    assert_eq!(manifest_a["seed"], 11);

    let trajectory = std::fs::read_to_string(out_a.join("trials/trial_0000.csv")).unwrap();
    assert!(trajectory.starts_with("k,t,event,n_before,n_after,V_before,V_after,mu2\n"));
    assert_eq!(trajectory.lines().count(), 51);
}

#[test]
fn run_executes_a_spec_document() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{
            "kind": "oracle-check",
            "graphon": { "family": "constant", "p": 0.5 },
            "n": 4,
            "gamma": 1.0,
            "trials": 20000,
            "seed": 9
        }"#,
    )
    .unwrap();
    let out = dir.path().join("run");
    stdout_of(&[
        "run",
        "--spec",
        &spec.display().to_string(),
        "--out",
        &out.display().to_string(),
    ]);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["kind"], "oracle-check");
    assert!((summary["exact"].as_f64().unwrap() - 0.751624413783445).abs() < 1e-12);
    assert_eq!(summary["within_three_stderr"], true);
}

#[test]
fn compare_tabulates_and_groups_by_formula() {
    let dir = tempfile::tempdir().unwrap();
    // Two replacement campaigns on a gamma grid plus one open campaign.
    let mut summaries = Vec::new();
    for (idx, gamma) in [("g05", "0.5"), ("g20", "2.0")] {
        let out = dir.path().join(idx);
        stdout_of(&[
            "simulate",
            "replacements",
            "--graphon",
            "constant:1",
            "--n",
            "8",
            "--gamma",
            gamma,
            "--sigma2",
            "1",
            "--events",
            "60",
            "--trials",
            "30",
            "--seed",
            "5",
            "--mu2",
            "1",
            "--out",
            &out.display().to_string(),
        ]);
        summaries.push(out.join("summary.json"));
    }
    let open_out = dir.path().join("open");
    stdout_of(&[
        "simulate",
        "open",
        "--graphon",
        "constant:1",
        "--n-min",
        "4",
        "--n-max",
        "10",
        "--gamma",
        "1",
        "--sigma2",
        "1",
        "--events",
        "60",
        "--trials",
        "30",
        "--seed",
        "5",
        "--mu2",
        "1",
        "--out",
        &open_out.display().to_string(),
    ]);
    summaries.push(open_out.join("summary.json"));

    let cmp = dir.path().join("cmp");
    let mut args: Vec<String> = summaries.iter().map(|p| p.display().to_string()).collect();
    args.insert(0, "compare".into());
    args.push("--out".into());
    args.push(cmp.display().to_string());
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    stdout_of(&refs);

    let table = std::fs::read_to_string(cmp.join("comparison.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines.len(), 4); // header + 3 rows
                                // grouped by formula: both thm1 rows precede the thm2 row,
                                // and the thm1 rows are ordered by gamma
    let formulas: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(formulas, ["thm1", "thm1", "thm2"]);

    let long = std::fs::read_to_string(cmp.join("comparison_long.csv")).unwrap();
    assert_eq!(long.lines().count(), 1 + 2 * 3); // two metrics per row

    // the thm1 bound shrinks as gamma grows (faster mixing)
    let bounds: Vec<f64> = lines[1..3]
        .iter()
        .map(|l| l.split(',').nth(9).unwrap().parse().unwrap())
        .collect();
    assert!(bounds[0] > bounds[1]);
}

#[test]
fn compare_requires_input_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = omaslab(&[
        "compare",
        "--out",
        &dir.path().join("x").display().to_string(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least one summary"));
}

#[test]
fn compare_names_the_offending_file_on_schema_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let bogus = dir.path().join("bogus.json");
    std::fs::write(&bogus, r#"{"kind": "something-else"}"#).unwrap();
    let out = omaslab(&[
        "compare",
        &bogus.display().to_string(),
        "--out",
        &dir.path().join("x").display().to_string(),
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bogus.json"), "stderr: {err}");
}
