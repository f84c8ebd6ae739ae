use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn tracemine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracemine"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn contrast() -> String {
    fixtures().join("contrast.toml").display().to_string()
}

#[test]
fn clean_run_exits_zero_and_writes_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tracemine(&["--config", &contrast(), "--out", tmp.path().to_str().unwrap(), "mine"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("mine/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "mine");
    assert_eq!(manifest["inputs"]["logs"]["file"], "events.jsonl");
    let text = manifest.to_string();
    assert!(
        !text.contains(tmp.path().to_str().unwrap()),
        "manifest leaks an absolute path"
    );
    assert!(String::from_utf8_lossy(&o.stdout).contains("frequent patterns"));
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&tracemine(&["--help"])), 0);
    assert_eq!(code(&tracemine(&["no-such-command"])), 1);
}

#[test]
fn out_of_range_minsup_is_invalid() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tracemine(&[
        "--config",
        &contrast(),
        "--out",
        tmp.path().to_str().unwrap(),
        "mine",
        "--minsup",
        "101",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("101"), "{}", stderr(&o));
    assert!(!tmp.path().join("mine").exists());
}

#[test]
fn missing_input_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("absent.jsonl");
    let o = tracemine(&[
        "--out",
        tmp.path().to_str().unwrap(),
        "mine",
        "--logs",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn malformed_log_names_the_line() {
    let tmp = tempfile::tempdir().unwrap();
    let log = tmp.path().join("bad.jsonl");
    fs::write(&log, "{\"student_id\":\"s1\",\"seq_index\":0,\"codes\":[\"hec\"]}\n{\"student_id\":\"s1\",\"seq_index\":1,\"codes\":[\"zzz\"]}\n").unwrap();
    let o = tracemine(&[
        "--out",
        tmp.path().to_str().unwrap(),
        "mine",
        "--logs",
        log.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn empty_log_is_a_notice_not_a_warning() {
    let tmp = tempfile::tempdir().unwrap();
    let log = tmp.path().join("empty.jsonl");
    fs::write(&log, "").unwrap();
    let o = tracemine(&[
        "--out",
        tmp.path().to_str().unwrap(),
        "mine",
        "--logs",
        log.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("no events"));
    let csv = fs::read_to_string(tmp.path().join("mine/patterns.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1, "header only");
}

#[test]
fn single_cluster_override_skips_the_tests_with_a_warning() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tracemine(&[
        "--config",
        &contrast(),
        "--out",
        tmp.path().to_str().unwrap(),
        "rq1",
        "--k-override",
        "1",
    ]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("warning:"));
    assert!(tmp.path().join("rq1/cluster_means.md").exists());
    assert!(!tmp.path().join("rq1/stats.csv").exists());
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("rq1/manifest.json")).unwrap()).unwrap();
    assert!(!manifest["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn simulate_without_profiles_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("c.toml");
    fs::write(&cfg, "[clustering]\nseed = 3\n").unwrap();
    let o = tracemine(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
        "simulate",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("config error"), "{}", stderr(&o));
}

#[test]
fn unknown_config_key_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("c.toml");
    fs::write(&cfg, "[mining]\nminsup = 50\n").unwrap();
    let o = tracemine(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
        "mine",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn seed_flag_changes_the_simulated_cohort() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    assert_eq!(
        code(&tracemine(&["--config", &contrast(), "--out", out, "-q", "simulate"])),
        0
    );
    let a = fs::read(tmp.path().join("simulate/events.jsonl")).unwrap();
    assert_eq!(
        code(&tracemine(&[
            "--config",
            &contrast(),
            "--out",
            out,
            "--seed",
            "7",
            "-q",
            "simulate"
        ])),
        0
    );
    let b = fs::read(tmp.path().join("simulate/events.jsonl")).unwrap();
    assert_ne!(a, b);
}

/// Label and value text in the support chart must match the pattern table.
#[test]
fn support_chart_round_trips_the_pattern_table() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tracemine(&["--config", &contrast(), "--out", tmp.path().to_str().unwrap(), "plots"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let svg = fs::read_to_string(tmp.path().join("plots/patterns.svg")).unwrap();
    let grab = |class: &str| -> Vec<String> {
        let open = format!("class=\"{class}\"");
        svg.lines()
            .filter(|l| l.contains(&open))
            .map(|l| {
                let start = l[l.find(&open).unwrap()..].find('>').unwrap() + l.find(&open).unwrap() + 1;
                let end = l[start..].find("</text>").unwrap() + start;
                l[start..end].to_string()
            })
            .collect()
    };
    let table = tracemine::miner::read_pattern_csv(fs::read(tmp.path().join("plots/patterns.csv")).unwrap().as_slice())
        .unwrap();
    let labels: Vec<String> = table.iter().map(|f| f.pattern.to_string()).collect();
    let values: Vec<String> = table.iter().map(|f| f.support.to_string()).collect();
    assert!(!labels.is_empty());
    assert_eq!(grab("label"), labels);
    assert_eq!(grab("value"), values);
    for f in ["elbow.svg", "scores.svg"] {
        assert!(fs::read_to_string(tmp.path().join("plots").join(f))
            .unwrap()
            .starts_with("<svg"));
    }
}

#[test]
fn misaligned_labels_report_the_row() {
    let tmp = tempfile::tempdir().unwrap();
    let b = tmp.path().join("b.csv");
    fs::write(&b, "item_id,code\nm01,hec\nm03,hec\n").unwrap();
    let a = fixtures().join("irr/rater_a.csv");
    let o = tracemine(&[
        "--out",
        tmp.path().to_str().unwrap(),
        "irr",
        "--labels-a",
        a.to_str().unwrap(),
        "--labels-b",
        b.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("row 2"), "{}", stderr(&o));
}

#[test]
fn bench_reports_recovery() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tracemine(&["--config", &contrast(), "--out", tmp.path().to_str().unwrap(), "bench"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("ARI: 1.0000"), "{stdout}");
}
