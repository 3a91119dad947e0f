// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const FIG_R: &str = "a>c>b\nb>c>a\nc>a>b\n";

fn sdslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdslab")).args(args).env_remove("SDSLAB_BUDGET").output().unwrap()
}

fn sdslab_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sdslab"))
        .args(args)
        .env_remove("SDSLAB_BUDGET")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn scratch(name: &str, contents: &str) -> String {
    let path: PathBuf = [env!("CARGO_TARGET_TMPDIR"), name].iter().collect();
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn eval_prints_the_exact_lottery() {
    let profile = scratch("fig_r.txt", FIG_R);
    let out = sdslab(&["eval", "--rule", "copeland", "--profile", &profile]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "{\"a\":\"1/3\",\"b\":\"0\",\"c\":\"2/3\"}\n");
    let out = sdslab(&["eval", "--rule", "uniform", "--profile", &profile]);
    assert_eq!(stdout(&out), "{\"a\":\"1/3\",\"b\":\"1/3\",\"c\":\"1/3\"}\n");
}

#[test]
fn eval_reads_standard_input_and_formats_csv() {
    let out = sdslab_stdin(&["eval", "--rule", "borda", "--profile", "-", "--format", "csv", "--decimals", "2"], FIG_R);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "alternative,probability,probability_decimal\na,1/3,0.33\nb,2/9,0.22\nc,4/9,0.44\n");
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(sdslab(&["eval", "--rule", "borda", "--profile", "missing.txt"]).status.code(), Some(2));
    let profile = scratch("bad.txt", "a>b>c\na>b\n");
    let out = sdslab(&["eval", "--rule", "borda", "--profile", &profile]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(sdslab(&["audit", "--rule", "plurality", "-m", "3", "-n", "3"]).status.code(), Some(2));
    assert_eq!(sdslab(&["audit", "--rule", "borda", "-m", "3"]).status.code(), Some(2));
}

#[test]
fn audit_of_cond2m_fails_with_the_swap_witness() {
    let out = sdslab(&["audit", "--rule", "cond2m", "-m", "3", "-n", "3", "--axioms", "sp"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let w = &report["verdicts"][0]["canonical_witness"];
    assert_eq!(w["profile"], "a>c>b / b>c>a / c>a>b");
    assert_eq!(w["voter"], 1);
    assert_eq!(w["deviation"], "a>b>c");
}

#[test]
fn audit_of_copeland_holds() {
    let out = sdslab(&["audit", "--rule", "copeland", "-m", "3", "-n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["all_hold"], true);
    assert_eq!(report["verdicts"].as_array().unwrap().len(), 5);
}

#[test]
fn measure_reproduces_copeland_values() {
    let out = sdslab(&["measure", "--rule", "copeland", "-m", "3", "-n", "3", "--metrics", "alpha,beta,gamma"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["alpha"]["value"], "2/3");
    assert_eq!(report["beta"]["value"], "1/3");
    assert_eq!(report["gamma"]["value"], "0");
}

#[test]
fn gamma_of_a_manipulable_rule_is_refused_with_a_witness() {
    let out = sdslab(&["measure", "--rule", "cond2m", "-m", "3", "-n", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["strategyproof"], false);
    assert!(report.get("gamma").is_none());
    assert_eq!(report["strategyproofness_witness"]["kind"], "manipulation");
}

#[test]
fn bounds_hold_for_random_dictatorship() {
    let out = sdslab(&["bounds", "--rule", "rd-uniform", "-m", "4", "-n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    for bound in report["bounds"].as_array().unwrap() {
        assert_eq!(bound["status"], "holds", "{bound}");
    }
}

#[test]
fn table_flags_the_inapplicable_cell() {
    let out = sdslab(&["table", "-m", "3", "-n", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "rule,alpha,beta,gamma,alpha_formula,beta_formula,gamma_formula\n\
         RD,1/3,0,1,n/a,0,1\n\
         U,1/3,1/3,0,1/3,1/3,0\n\
         B,4/9,1/3,1/3,4/9,1/3,1/3\n\
         C,2/3,1/3,0,2/3,1/3,0\n"
    );
}

#[test]
fn fixtures_print_profiles() {
    let out = sdslab(&["fixtures", "cwc", "-m", "4", "-n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let fixture = json(&out);
    assert_eq!(fixture["candidates"], serde_json::json!(["a", "b"]));
    let out = sdslab(&["fixtures", "minimal-margin", "-m", "4", "-n", "3"]);
    assert_eq!(json(&out)["profile"], "d>a>b>c / b>a>c>d / c>a>b>d");
    assert_eq!(sdslab(&["fixtures", "minimal-margin", "-m", "4", "-n", "4"]).status.code(), Some(2));
}

#[test]
fn symmetrized_cyclic_rule_decomposes_as_copeland() {
    let tab = sdslab(&["symmetrize", "--rule", "cyclic", "-m", "3", "-n", "3"]);
    assert_eq!(tab.status.code(), Some(0));
    assert_eq!(stdout(&tab).lines().count(), 216);
    let out = sdslab_stdin(&["decompose"], &stdout(&tab));
    assert_eq!(out.status.code(), Some(0));
    let d = json(&out);
    assert_eq!(d["lambda"], "0");
    assert_eq!(d["supporting"], serde_json::json!(["1/3", "1/3", "0", "0"]));
}

#[test]
fn borda_decomposition_is_not_unique() {
    let tab = sdslab(&["tabulate", "--rule", "borda", "-m", "3", "-n", "3"]);
    let path = scratch("borda-tab.jsonl", &stdout(&tab));
    let d = json(&sdslab(&["decompose", &path]));
    assert_eq!(d["unique"], false);
    assert_eq!(d["lambda_range"], serde_json::json!(["0", "1"]));
}

#[test]
fn non_decomposable_rule_exits_with_a_certificate() {
    let tab = sdslab(&["tabulate", "--rule", "drop-voter", "-m", "3", "-n", "3"]);
    let out = sdslab_stdin(&["decompose"], &stdout(&tab));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["feasible"], false);
}

#[test]
fn budget_overruns_exit_with_three() {
    let out = Command::new(env!("CARGO_BIN_EXE_sdslab"))
        .args(["audit", "--rule", "borda", "-m", "3", "-n", "3"])
        .env("SDSLAB_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("required"));
    assert_eq!(sdslab(&["audit", "--rule", "borda", "-m", "3", "-n", "3", "--budget", "100"]).status.code(), Some(3));
    assert_eq!(sdslab(&["audit", "--rule", "borda", "-m", "3", "-n", "3", "--budget", "0"]).status.code(), Some(2));
}

#[test]
fn file_based_rules_resolve() {
    let point = scratch("point.txt", "1/3 0 0\n");
    let support = scratch("support.txt", "[\"1/3\", \"1/3\", \"0\", \"0\"]");
    let mix = scratch("mix.txt", &format!("1/2 point:{point}\n1/2 support:{support}\n"));
    let descriptor = scratch("rule.json", "{\"family\":\"supporting_size\",\"b\":[\"1/3\",\"1/3\",\"0\",\"0\"]}");
    let profile = scratch("fig_r_files.txt", FIG_R);
    let lottery = |rule: &str| stdout(&sdslab(&["eval", "--rule", rule, "--profile", &profile]));
    assert_eq!(lottery(&format!("point:{point}")), lottery("rd-uniform"));
    assert_eq!(lottery(&format!("support:{support}")), lottery("copeland"));
    assert_eq!(lottery(&descriptor), lottery("copeland"));
    assert_eq!(lottery("{\"family\":\"copeland\"}"), lottery("copeland"));
    let half = json(&sdslab(&["measure", "--rule", &format!("mix:{mix}"), "-m", "3", "-n", "3"]));
    assert_eq!(half["beta"]["value"], "1/6");
    let tab =
        scratch("copeland-tab.jsonl", &stdout(&sdslab(&["tabulate", "--rule", "copeland", "-m", "3", "-n", "3"])));
    assert_eq!(lottery(&format!("tab:{tab}")), lottery("copeland"));
}

#[test]
fn output_is_deterministic() {
    let args = ["audit", "--rule", "drop-voter", "-m", "3", "-n", "4"];
    let first = sdslab(&args);
    assert_eq!(first.status.code(), Some(1));
    assert_eq!(first.stdout, sdslab(&args).stdout);
}
