//! End-to-end behavior of the `sumset` binary: exit codes, output contracts,
//! determinism, and checkpointed resumption.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sumset"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should spawn")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be utf-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code (killed?)")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("stdout should be one JSON document")
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn table_matches_the_pinned_grid() {
    let out = run(&["table", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[0], "h,alpha_root,alpha,order_bound");
    assert_eq!(lines[1], "4,0.404,0.405,18807.96");
    assert_eq!(lines[2], "5,0.388,0.389,37255.68");
    let roots: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(
        roots,
        ["0.404", "0.388", "0.377", "0.370", "0.365", "0.361", "0.358", "0.356"]
    );
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let args_sets: Vec<Vec<&str>> = vec![
        vec![
            "verify", "--h", "4", "--alpha", "0.405", "--n", "1001", "--trials", "3", "--force",
            "--format", "json", "--seed", "11",
        ],
        vec![
            "critical", "--group", "3x9", "--h", "3", "--mode", "greedy", "--trials", "6",
            "--format", "json", "--seed", "5",
        ],
        vec!["partitions", "--h", "6", "--format", "json"],
        vec!["thresholds", "--h", "5", "--alpha", "0.389", "--format", "json"],
    ];
    for args in &args_sets {
        let a = run(args);
        let b = run(args);
        assert_eq!(code(&a), 0, "{args:?}: {}", stderr(&a));
        assert_eq!(
            stdout(&a),
            stdout(&b),
            "two identical invocations must agree byte for byte: {args:?}"
        );
    }
    // timing never leaks into the deterministic formats
    let v = run(&[
        "verify", "--h", "4", "--alpha", "0.405", "--n", "1001", "--trials", "3", "--force",
        "--format", "json",
    ]);
    let text = stdout(&v);
    assert!(!text.contains("elapsed") && !text.contains("ms\""), "{text}");
}

#[test]
fn the_seed_changes_the_draws() {
    let a = run(&[
        "verify", "--h", "4", "--alpha", "0.405", "--n", "1001", "--trials", "3", "--force",
        "--format", "json", "--seed", "1",
    ]);
    let b = run(&[
        "verify", "--h", "4", "--alpha", "0.405", "--n", "1001", "--trials", "3", "--force",
        "--format", "json", "--seed", "2",
    ]);
    assert_eq!(code(&a), 0);
    assert_eq!(code(&b), 0);
    assert_ne!(stdout(&a), stdout(&b));
    let doc = json(&a);
    let trials = doc["trials"].as_array().unwrap();
    assert_eq!(trials.len(), 3);
    assert_eq!(trials[0]["strategy"], "random");
    assert_eq!(trials[1]["strategy"], "interval");
    assert_eq!(trials[2]["strategy"], "coset-union");
}

#[test]
fn bench_is_deterministic_apart_from_timing() {
    let args = [
        "bench", "--sizes", "101,201", "--h", "4", "--reps", "1", "--seed", "3", "--format",
        "csv",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    let strip = |s: &str| -> Vec<Vec<String>> {
        s.lines()
            .skip(1)
            .map(|line| {
                let mut cols: Vec<String> = line.split(',').map(str::to_owned).collect();
                assert_eq!(cols.len(), 5, "{line}");
                cols.remove(3); // the milliseconds column is wall time
                cols
            })
            .collect()
    };
    assert_eq!(strip(&stdout(&a)), strip(&stdout(&b)));
    // both methods appear for each n, and census only when the guard allows
    let rows = strip(&stdout(&a));
    assert!(rows.iter().any(|r| r[2] == "identity-ntt"));
    assert!(rows.iter().any(|r| r[2] == "identity-naive"));
}

#[test]
fn pair_scan_completes_and_resumes() {
    let single = run(&["exhaustive-pairs", "--n", "16", "--format", "json"]);
    assert_eq!(code(&single), 0);
    let doc = json(&single);
    assert_eq!(doc["total"], 8008); // C(16, 10)
    assert_eq!(doc["checked"], 8008);
    assert_eq!(doc["complete"], true);
    assert_eq!(doc["failures_found"], 0);
    assert_eq!(doc["pass"], true);

    let ckpt = tmp("pairs16.ckpt.json");
    let _ = std::fs::remove_file(&ckpt);
    let ckpt_s = ckpt.to_str().unwrap();
    let part = run(&[
        "exhaustive-pairs", "--n", "16", "--checkpoint", ckpt_s, "--max-steps", "3000",
        "--format", "json",
    ]);
    assert_eq!(code(&part), 0, "an interrupted scan is not a failure");
    let part_doc = json(&part);
    assert_eq!(part_doc["complete"], false);
    assert_eq!(part_doc["checked"], 3000);
    assert_eq!(part_doc["pass"], serde_json::Value::Null);
    assert!(ckpt.exists(), "interrupted scan must leave its checkpoint");

    let resumed = run(&["exhaustive-pairs", "--n", "16", "--checkpoint", ckpt_s, "--format", "json"]);
    assert_eq!(code(&resumed), 0);
    assert_eq!(
        stdout(&resumed),
        stdout(&single),
        "a resumed scan must report exactly what a single-shot scan reports"
    );
    assert!(!ckpt.exists(), "a finished scan cleans up its checkpoint");
}

#[test]
fn triple_scan_reports_on_the_exceptional_order() {
    let out = run(&["exhaustive-triples", "--n", "15", "--format", "json"]);
    assert_eq!(code(&out), 0, "report-only order must not fail the run");
    let doc = json(&out);
    assert_eq!(doc["total"], 6435); // C(15, 8)
    assert_eq!(doc["report_only"], true);
    assert_eq!(doc["failures_found"], 15);
    assert_eq!(doc["pass"], true);
    let failures = doc["failures"].as_array().unwrap();
    let first: Vec<u64> = failures[0]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(first, [0, 1, 4, 6, 7, 9, 10, 12]);

    let clean = run(&["exhaustive-triples", "--n", "12", "--format", "json"]);
    assert_eq!(code(&clean), 0);
    let doc = json(&clean);
    assert_eq!(doc["total"], 792); // C(12, 7)
    assert_eq!(doc["failures_found"], 0);
    assert_eq!(doc["report_only"], false);
    assert_eq!(doc["pass"], true);
}

#[test]
fn critical_sizes_on_small_groups() {
    for (group, h, value, largest_failing) in [
        ("5", "2", Some(4), 3),
        ("7", "2", Some(5), 4),
        ("9", "3", Some(7), 6),
        ("12", "3", Some(7), 6),
    ] {
        let out = run(&["critical", "--group", group, "--h", h, "--format", "json"]);
        assert_eq!(code(&out), 0, "group {group}: {}", stderr(&out));
        let doc = json(&out);
        assert_eq!(doc["exact"], true, "group {group}");
        assert_eq!(doc["value"], serde_json::json!(value), "group {group}");
        assert_eq!(doc["largest_failing_size"], largest_failing, "group {group}");
        assert_eq!(doc["no_size_works"], false);
    }

    // three distinct summands in Z_3 only ever produce 0+1+2 = 0
    let out = run(&["critical", "--group", "3", "--h", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["value"], serde_json::Value::Null);
    assert_eq!(doc["no_size_works"], true);
    assert_eq!(doc["witness"], serde_json::json!([0, 1, 2]));
}

#[test]
fn sumset_reports_counts_missing_and_checksum() {
    let set = tmp("a5.txt");
    std::fs::write(&set, "# three elements of Z_5\n0\n1\n3\n").unwrap();
    let set_s = set.to_str().unwrap();

    let out = run(&["sumset", "--group", "5", "--set", set_s, "--h", "2", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = json(&out);
    assert_eq!(doc["n"], 5);
    assert_eq!(doc["k"], 3);
    assert_eq!(doc["covered"], false);
    assert_eq!(doc["missing"], serde_json::json!([[0], [2]]));
    assert_eq!(doc["sum_R"], "6");
    assert_eq!(doc["checksum"], "0x3169b1add422188d");

    // census agrees byte for byte apart from the method label
    let census = run(&[
        "sumset", "--group", "5", "--set", set_s, "--h", "2", "--method", "census", "--format",
        "json",
    ]);
    assert_eq!(
        stdout(&out).replace("\"identity\"", "\"census\""),
        stdout(&census)
    );

    let counts_path = tmp("a5_counts.json");
    let _ = std::fs::remove_file(&counts_path);
    let out = run(&[
        "sumset", "--group", "5", "--set", set_s, "--h", "2", "--emit-counts",
        counts_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let counts: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&counts_path).unwrap()).unwrap();
    assert_eq!(counts["counts"], serde_json::json!(["0", "2", "0", "2", "2"]));

    // multi-factor groups use comma-separated coordinates
    let set2 = tmp("a33.txt");
    std::fs::write(&set2, "0,0\n1,2\n2,1\n0,1\n").unwrap();
    let out = run(&["sumset", "--group", "3x3", "--set", set2.to_str().unwrap(), "--h", "2", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = json(&out);
    assert_eq!(doc["group"], serde_json::json!([3, 3]));
    assert_eq!(doc["sum_R"], "12");
}

#[test]
fn character_audits_pass_and_flag_even_orders() {
    let coset = tmp("coset9.txt");
    std::fs::write(&coset, "0\n3\n6\n").unwrap();
    let out = run(&["audit-characters", "--group", "9", "--set", coset.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = json(&out);
    assert_eq!(doc["pass"], true);
    let ratio = doc["spectrum_max"]["ratio"].as_f64().unwrap();
    assert!(ratio > 0.999, "an index-3 subgroup saturates the bound: {ratio}");

    let even = tmp("even8.txt");
    std::fs::write(&even, "0\n1\n5\n").unwrap();
    let out = run(&["audit-characters", "--group", "8", "--set", even.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = json(&out);
    assert_eq!(doc["spectrum_max"], serde_json::Value::Null);
    assert_eq!(doc["pass"], true);
}

#[test]
fn forced_runs_tolerate_uncovered_trials() {
    // far below the order bound, so coverage is not promised; --force runs
    // anyway and a missed covering is reported, not treated as a failure
    let out = run(&[
        "verify", "--h", "4", "--alpha", "0.405", "--n", "27", "--trials", "6", "--force",
        "--format", "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = json(&out);
    assert_eq!(doc["forced"], true);
    assert_eq!(doc["trials"].as_array().unwrap().len(), 6);
}

#[test]
fn inapplicable_parameters_are_refused_without_force() {
    // below the order bound
    let out = run(&["verify", "--h", "4", "--alpha", "0.405", "--n", "4001", "--trials", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("order bound"), "{}", stderr(&out));
    // even order
    let out = run(&["verify", "--h", "4", "--alpha", "0.405", "--n", "18810", "--trials", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("odd"), "{}", stderr(&out));
    // density at or below the root
    let out = run(&["verify", "--h", "4", "--alpha", "0.4", "--n", "auto", "--trials", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn usage_errors_exit_two() {
    let set = tmp("bad_dup.txt");
    std::fs::write(&set, "1\n1\n").unwrap();
    let out = run(&["sumset", "--group", "5", "--set", set.to_str().unwrap(), "--h", "2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("duplicate"), "{}", stderr(&out));

    let set = tmp("bad_range.txt");
    std::fs::write(&set, "0\n7\n").unwrap();
    let out = run(&["sumset", "--group", "5", "--set", set.to_str().unwrap(), "--h", "2"]);
    assert_eq!(code(&out), 2);

    let set = tmp("bad_empty.txt");
    std::fs::write(&set, "# nothing\n").unwrap();
    let out = run(&["sumset", "--group", "5", "--set", set.to_str().unwrap(), "--h", "2"]);
    assert_eq!(code(&out), 2);

    // commands without a tabular form refuse csv
    let set = tmp("ok.txt");
    std::fs::write(&set, "0\n1\n3\n").unwrap();
    let out = run(&["sumset", "--group", "5", "--set", set.to_str().unwrap(), "--h", "2", "--format", "csv"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("csv"), "{}", stderr(&out));

    // scan ranges are guarded
    let out = run(&["exhaustive-pairs", "--n", "30"]);
    assert_eq!(code(&out), 2);
    let out = run(&["exhaustive-triples", "--n", "11"]);
    assert_eq!(code(&out), 2);

    // bench sizes must be odd (the covering theory is odd-order)
    let out = run(&["bench", "--sizes", "100", "--h", "4"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn boundary_scan_orders_run_clean() {
    for n in ["4", "5"] {
        let out = run(&["exhaustive-pairs", "--n", n, "--format", "json"]);
        assert_eq!(code(&out), 0, "n={n}: {}", stderr(&out));
        let doc = json(&out);
        assert_eq!(doc["failures_found"], 0, "n={n}");
        assert_eq!(doc["pass"], true, "n={n}");
    }
}

#[test]
fn out_flag_redirects_the_report() {
    let direct = run(&["table", "--format", "csv"]);
    let path = tmp("table.csv");
    let _ = std::fs::remove_file(&path);
    let redirected = run(&["table", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&redirected), 0);
    assert!(stdout(&redirected).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&direct));
}

#[test]
fn alpha_agrees_with_the_table_root() {
    let out = run(&["alpha", "--h", "5", "--digits", "9", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    let alpha = doc["alpha"].as_f64().unwrap();
    assert!((alpha - 0.388).abs() < 5e-4, "{alpha}");
    assert_eq!(doc["alpha_text"], "0.388011713");
    let poly = doc["poly_at_alpha"].as_f64().unwrap();
    assert!(poly.abs() < 1e-12, "the reported value is a root: {poly}");
}
