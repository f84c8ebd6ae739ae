//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria listed in `EXPECTED_FAILURES` are known not to hold for a
//! faithful implementation; the run fails if any other criterion fails or if
//! an expected failure starts passing.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use tracemine::agreement::{gwet_ac1, kendalls_w, scores_to_ranks};
use tracemine::corpus::SequenceDatabase;
use tracemine::miner::{contains, count_nonoverlapping, min_support_threshold, prefixspan, MiningOptions};
use tracemine::stats::{effect_size_r, holm_adjust, mann_whitney_u, shapiro_wilk};
use tracemine_cli::Cli;

/// The uncorrected normal approximation is up to 0.0465 away from the exact
/// p at 8 vs 8, above the 0.03 bound.
const EXPECTED_FAILURES: &[u32] = &[6];

struct Check {
    ok: bool,
    detail: String,
}

impl Check {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Check {
            ok,
            detail: detail.into(),
        }
    }
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn timed(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let c = f();
    let took = start.elapsed();
    let within = took <= limit;
    Check::new(
        c.ok && within,
        format!(
            "{}; {:.3}s (limit {}s{})",
            c.detail,
            took.as_secs_f64(),
            limit.as_secs_f64(),
            if within { "" } else { ", exceeded" }
        ),
    )
}

fn c1() -> Check {
    let got = holm_adjust(&[0.39, 0.51, 0.04, 0.91]).unwrap();
    Check::new(got == [1.0, 1.0, 0.16, 1.0], format!("{got:?}"))
}

fn c2() -> Check {
    let got: Vec<f64> = [-0.86, -0.68, -2.03, -0.13]
        .iter()
        .map(|&z| (effect_size_r(z, 32).unwrap() * 100.0).round() / 100.0)
        .collect();
    Check::new(got == [0.15, 0.12, 0.36, 0.02], format!("{got:?}"))
}

fn c3() -> Check {
    let got: Vec<usize> = [(32, 50.0), (21, 65.0), (11, 65.0)]
        .iter()
        .map(|&(n, pct)| min_support_threshold(n, pct).unwrap())
        .collect();
    Check::new(got == [16, 14, 8], format!("{got:?}"))
}

fn brute_supports(rows: &[Vec<u8>], min_count: usize) -> BTreeMap<Vec<String>, usize> {
    let mut support = BTreeMap::new();
    for row in rows {
        let subs: BTreeSet<Vec<String>> = (1u32..(1 << row.len()))
            .map(|m| {
                (0..row.len())
                    .filter(|i| m & (1 << i) != 0)
                    .map(|i| row[i].to_string())
                    .collect()
            })
            .collect();
        for s in subs {
            *support.entry(s).or_insert(0) += 1;
        }
    }
    support.retain(|_, s| *s >= min_count);
    support
}

fn c4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut compared = 0;
    for case in 0..500 {
        let alphabet = rng.random_range(1..=4u8);
        let rows: Vec<Vec<u8>> = (0..rng.random_range(1..=6))
            .map(|_| {
                (0..rng.random_range(0..=8))
                    .map(|_| rng.random_range(0..alphabet))
                    .collect()
            })
            .collect();
        let db = SequenceDatabase::from_codes(rows.iter().map(|r| r.iter().map(|c| c.to_string())));
        for min_count in [1, 2, rows.len()] {
            let mined: BTreeMap<Vec<String>, usize> = prefixspan(&db, min_count, MiningOptions::default())
                .unwrap()
                .iter()
                .map(|f| (f.pattern.elements().to_vec(), f.support))
                .collect();
            if mined != brute_supports(&rows, min_count) {
                return Check::new(false, format!("database {case} differs at min_count {min_count}"));
            }
            compared += 1;
        }
    }
    Check::new(true, format!("{compared} pattern sets identical"))
}

fn c5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..1000 {
        let s: Vec<u8> = (0..rng.random_range(0..=16)).map(|_| rng.random_range(0..3)).collect();
        let p: Vec<u8> = (0..rng.random_range(1..=4)).map(|_| rng.random_range(0..3)).collect();
        let c = count_nonoverlapping(&s, &p);
        let k = rng.random_range(0..=5);
        if c > s.len() / p.len() || (c >= 1) != contains(&s, &p) || count_nonoverlapping(&p.repeat(k), &p) != k {
            return Check::new(false, format!("pair {i} breaks the law: {s:?} / {p:?}"));
        }
    }
    let run = vec!["hec"; 10];
    let floors: Vec<usize> = (2..=4).map(|m| count_nonoverlapping(&run, &vec!["hec"; m])).collect();
    Check::new(floors == [5, 3, 2], format!("1000 pairs hold; 10 x hec -> {floors:?}"))
}

fn splits(n: usize) -> impl Iterator<Item = (Vec<f64>, Vec<f64>)> {
    (0u32..(1 << (2 * n)))
        .filter(move |m| m.count_ones() as usize == n)
        .map(move |m| {
            let (a, b): (Vec<usize>, Vec<usize>) = (1..=2 * n).partition(|r| m & (1 << (r - 1)) != 0);
            (
                a.iter().map(|&r| r as f64).collect(),
                b.iter().map(|&r| r as f64).collect(),
            )
        })
}

fn c6() -> Check {
    let warp = |v: &[f64]| -> Vec<f64> { v.iter().map(|x| x.exp() + 2.0 * x).collect() };
    let same = |a: &[f64], b: &[f64]| {
        let r = mann_whitney_u(a, b).unwrap();
        let t = mann_whitney_u(&warp(a), &warp(b)).unwrap();
        (r.u1 + r.u2 - (a.len() * b.len()) as f64).abs() < 1e-9
            && (r.u, r.z, r.p_two_sided) == (t.u, t.z, t.p_two_sided)
    };
    for n in 2..=6 {
        if let Some((a, b)) = splits(n).find(|(a, b)| !same(a, b)) {
            return Check::new(false, format!("tie-free split {a:?} / {b:?} fails"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..200 {
        let (n1, n2) = (rng.random_range(2..=12), rng.random_range(2..=12));
        let mut draw = |n| -> Vec<f64> { (0..n).map(|_| f64::from(rng.random_range(1u8..=4))).collect() };
        let (a, b) = (draw(n1), draw(n2));
        if !same(&a, &b) {
            return Check::new(false, format!("tied sample {i} fails"));
        }
    }
    let gap = splits(8)
        .map(|(a, b)| {
            let r = mann_whitney_u(&a, &b).unwrap();
            (r.p_exact.unwrap() - r.p_two_sided).abs()
        })
        .fold(0.0, f64::max);
    Check::new(
        gap <= 0.03,
        format!("U1 + U2 and rank invariance hold; max |p_exact - p_asymptotic| at 8 vs 8 = {gap:.4} (bound 0.03)"),
    )
}

fn c7() -> Check {
    let codes = ["hec", "hep", "p", "w"];
    let perfect = gwet_ac1(&codes, &codes, None).unwrap().statistic;
    let fixture = gwet_ac1(&["x", "x", "y", "y"], &["x", "y", "y", "y"], None)
        .unwrap()
        .statistic;
    let same = kendalls_w(&vec![vec![1.0, 2.0, 3.0]; 3], true).unwrap().statistic;
    let reversed = kendalls_w(&[vec![1.0, 2.0, 3.0], vec![3.0, 2.0, 1.0]], true)
        .unwrap()
        .statistic;
    let ranks = scores_to_ranks(&[
        vec![5.0, 1.0, 3.0, 2.0],
        vec![4.0, 2.0, 3.0, 1.0],
        vec![1.0, 2.0, 4.0, 3.0],
    ])
    .unwrap();
    let (on, off) = (
        kendalls_w(&ranks, true).unwrap().statistic,
        kendalls_w(&ranks, false).unwrap().statistic,
    );
    let ok = perfect == 1.0
        && (fixture - 0.5294).abs() <= 1e-4
        && (same - 1.0).abs() < 1e-12
        && reversed == 0.0
        && on == off;
    Check::new(
        ok,
        format!("AC1 perfect {perfect}, fixture {fixture:.4}; W identical {same}, reversed {reversed}, tie-free corrected = uncorrected: {}", on == off),
    )
}

fn c8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let normal = Normal::new(50.0, 10.0).unwrap();
    let draws = 10_000;
    let rejected = (0..draws)
        .filter(|_| {
            let s: Vec<f64> = (0..30).map(|_| normal.sample(&mut rng)).collect();
            shapiro_wilk(&s).unwrap().p < 0.05
        })
        .count();
    let rate = rejected as f64 / draws as f64;
    Check::new(
        (0.04..=0.06).contains(&rate),
        format!("rejection rate {:.2}%", rate * 100.0),
    )
}

fn run_cli(args: &[&str]) -> Result<tracemine_cli::Outcome, String> {
    let mut argv = vec!["tracemine"];
    argv.extend_from_slice(args);
    let cli = Cli::try_parse_from(argv).map_err(|e| e.to_string())?;
    tracemine_cli::run(cli).map_err(|e| e.to_string())
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

fn c9() -> Check {
    let tmp = tempfile::tempdir().unwrap();
    let config = fixtures().join("contrast.toml");
    let config = config.to_str().unwrap();
    let mut bench = Vec::new();
    for run in ["a", "b"] {
        let out = tmp.path().join(run);
        if let Err(e) = run_cli(&["--config", config, "--out", out.to_str().unwrap(), "-q", "bench"]) {
            return Check::new(false, format!("bench failed: {e}"));
        }
        bench.push(fs::read(out.join("bench/bench.json")).unwrap());
    }
    let report: serde_json::Value = serde_json::from_slice(&bench[0]).unwrap();
    let k = report["selected_k"].as_u64().unwrap();
    let ari = report["ari"].as_f64().unwrap();
    let by_elbow = report["k_source"] == "elbow";

    // the cohort files the data commands read must match the generator
    let sim = tmp.path().join("a");
    run_cli(&["--config", config, "--out", sim.to_str().unwrap(), "-q", "simulate"]).unwrap();
    let regenerated = ["events.jsonl", "scores.csv", "ground_truth.csv"].iter().all(|f| {
        fs::read(sim.join("simulate").join(f)).unwrap() == fs::read(fixtures().join("contrast").join(f)).unwrap()
    });

    let db = {
        let bytes = fs::read(fixtures().join("contrast/events.jsonl")).unwrap();
        let codebook = tracemine::corpus::Codebook::bundled();
        let sessions = tracemine::corpus::parse_event_log(bytes.as_slice(), &codebook).unwrap();
        tracemine::corpus::flatten(&sessions, tracemine::corpus::IntraEventOrder::Listed, &codebook).unwrap()
    };
    let lengths_ok = db.sequences().iter().all(|s| (5..=57).contains(&s.codes.len()));

    if let Err(e) = run_cli(&["--config", config, "--out", sim.to_str().unwrap(), "-q", "rq2"]) {
        return Check::new(false, format!("rq2 failed: {e}"));
    }
    let truth: BTreeMap<String, String> = fs::read_to_string(fixtures().join("contrast/ground_truth.csv"))
        .unwrap()
        .lines()
        .skip(1)
        .filter_map(|l| l.split_once(',').map(|(a, b)| (a.to_string(), b.to_string())))
        .collect();
    let clusters = fs::read_to_string(sim.join("rq2/score_clusters.csv")).unwrap();
    let high_is_planted = clusters.lines().skip(1).all(|l| {
        let f: Vec<&str> = l.split(',').collect();
        (f[1] == "1") == (truth[f[0]] == "structure")
    });
    let unique = fs::read_to_string(sim.join("rq2/unique_patterns.csv")).unwrap();
    let planted_at: Vec<String> = unique
        .lines()
        .filter_map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[1] == "w" && f[2] == "unique_1").then(|| f[0].to_string())
        })
        .filter(|pct| (50.0..=70.0).contains(&pct.parse::<f64>().unwrap()))
        .collect();

    let ok = k == 2
        && by_elbow
        && ari >= 0.9
        && bench[0] == bench[1]
        && regenerated
        && lengths_ok
        && high_is_planted
        && !planted_at.is_empty();
    Check::new(
        ok,
        format!(
            "k = {k} via {}, ARI = {ari:.4}, repeat identical: {}, fixture regenerates: {regenerated}, lengths in [5, 57]: {lengths_ok}; \
             rq2 cluster 1 is the high-score profile: {high_is_planted}, (w) unique to it at {:?}%",
            report["k_source"].as_str().unwrap_or("?"),
            bench[0] == bench[1],
            planted_at
        ),
    )
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                files.insert(
                    p.strip_prefix(dir).unwrap().display().to_string(),
                    fs::read(&p).unwrap(),
                );
            }
        }
    }
    files
}

fn c10() -> Check {
    let tmp = tempfile::tempdir().unwrap();
    let config = fixtures().join("contrast.toml");
    let irr = fixtures().join("irr");
    let (a, b, s) = (
        irr.join("rater_a.csv"),
        irr.join("rater_b.csv"),
        irr.join("rater_scores.csv"),
    );
    let cfg = config.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["mine"],
        vec!["rq1"],
        vec!["rq2"],
        vec!["plots"],
        vec!["simulate"],
        vec!["bench"],
        vec![
            "irr",
            "--labels-a",
            a.to_str().unwrap(),
            "--labels-b",
            b.to_str().unwrap(),
            "--rater-scores",
            s.to_str().unwrap(),
        ],
    ];
    for run in ["first", "second"] {
        let out = tmp.path().join(run);
        for c in &commands {
            let mut args = vec!["--config", cfg, "--out", out.to_str().unwrap(), "-q"];
            args.extend(c);
            if let Err(e) = run_cli(&args) {
                return Check::new(false, format!("{} failed: {e}", c[0]));
            }
        }
    }
    let (first, second) = (
        snapshot(&tmp.path().join("first")),
        snapshot(&tmp.path().join("second")),
    );
    let manifests = commands.iter().all(|c| {
        let m = format!("{}/manifest.json", c[0]);
        read_json(&tmp.path().join("first").join(&m)) == read_json(&tmp.path().join("second").join(&m))
    });
    let differing: Vec<&String> = first
        .keys()
        .chain(second.keys())
        .filter(|k| first.get(*k) != second.get(*k))
        .collect();
    let ok = differing.is_empty() && manifests && first.len() > commands.len();
    Check::new(
        ok,
        format!(
            "{} subcommands, {} files, differing: {differing:?}",
            commands.len(),
            first.len()
        ),
    )
}

type Criterion = (u32, &'static str, Duration, fn() -> Check);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        (1, "Holm adjustment", Duration::from_millis(1), c1),
        (2, "effect size r", Duration::from_millis(1), c2),
        (3, "support threshold", Duration::from_millis(1), c3),
        (4, "mining oracle equivalence", Duration::from_secs(10), c4),
        (5, "occurrence-count law", Duration::from_secs(1), c5),
        (6, "rank-test oracle", Duration::from_secs(30), c6),
        (7, "agreement correctness", Duration::from_secs(1), c7),
        (8, "normality calibration", Duration::from_secs(60), c8),
        (9, "end-to-end recovery", Duration::from_secs(30), c9),
        (10, "determinism", Duration::from_secs(60), c10),
    ];
    let mut unexpected = Vec::new();
    for (id, name, limit, f) in criteria {
        let c = timed(limit, f);
        let expected_fail = EXPECTED_FAILURES.contains(&id);
        let tag = if c.ok { "PASS" } else { "FAIL" };
        let note = match (c.ok, expected_fail) {
            (false, true) => " [known failure]",
            (true, true) => " [expected to fail]",
            _ => "",
        };
        println!("{tag} criterion {id:>2}: {name}: {}{note}", c.detail);
        if c.ok == expected_fail {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: outcome matches expectations (known failures: {EXPECTED_FAILURES:?})");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
