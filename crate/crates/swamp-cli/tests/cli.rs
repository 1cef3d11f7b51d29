//! End-to-end checks of the `swamp` binary: argument handling, exit codes,
//! ingestion formats, and agreement between the pruned search and the oracle.

use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn swamp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swamp"))
        .args(args)
        .output()
        .expect("failed to spawn swamp binary")
}

fn swamp_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_swamp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("failed to spawn swamp binary");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is not valid JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process was killed by a signal")
}

#[test]
fn help_and_version_exit_zero() {
    let help = swamp(&["--help"]);
    assert_eq!(code(&help), 0);
    assert!(String::from_utf8_lossy(&help.stdout).contains("Usage"));

    let version = swamp(&["--version"]);
    assert_eq!(code(&version), 0);
    assert!(String::from_utf8_lossy(&version.stdout).contains("swamp"));
}

#[test]
fn missing_required_arguments_exit_one() {
    let no_length = swamp(&["find", "--generate", "random-walk", "--n", "100"]);
    assert_eq!(code(&no_length), 1);

    let no_window = swamp(&[
        "find",
        "--generate",
        "random-walk",
        "--n",
        "100",
        "--length",
        "10",
    ]);
    assert_eq!(code(&no_window), 1);
    assert!(String::from_utf8_lossy(&no_window.stderr).contains("--window"));

    let both_windows = swamp(&[
        "find",
        "--generate",
        "random-walk",
        "--n",
        "100",
        "--length",
        "10",
        "--window",
        "2",
        "--window-frac",
        "0.1",
    ]);
    assert_eq!(code(&both_windows), 1);

    let both_sources = swamp(&[
        "find",
        "--input",
        "x.txt",
        "--generate",
        "random-walk",
        "--n",
        "100",
        "--length",
        "10",
        "--window",
        "2",
    ]);
    assert_eq!(code(&both_sources), 1);
}

#[test]
fn bad_data_exits_two() {
    let dir = std::env::temp_dir().join("swamp_cli_bad_data");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.txt");
    std::fs::write(&path, "1.0\noops\n3.0\n").unwrap();

    let out = swamp(&[
        "find",
        "--input",
        path.to_str().unwrap(),
        "--length",
        "2",
        "--window",
        "0",
    ]);
    assert_eq!(code(&out), 2);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("line 2"), "stderr was: {msg}");

    let missing = swamp(&[
        "find",
        "--input",
        dir.join("no_such_file.txt").to_str().unwrap(),
        "--length",
        "2",
        "--window",
        "0",
    ]);
    assert_eq!(code(&missing), 2);

    // Series shorter than 2L is a data problem, not a usage problem.
    std::fs::write(&path, "1.0\n2.0\n3.0\n").unwrap();
    let short = swamp(&[
        "find",
        "--input",
        path.to_str().unwrap(),
        "--length",
        "8",
        "--window",
        "1",
    ]);
    assert_eq!(code(&short), 2);
}

#[test]
fn find_agrees_with_oracle_on_seeded_input() {
    for seed in ["41", "42"] {
        let common = [
            "--generate",
            "planted-motif",
            "--n",
            "1200",
            "--length",
            "60",
            "--seed",
            seed,
            "--noise",
            "0.1",
            "--window",
            "3",
            "--no-timings",
        ];
        let mut find_args = vec!["find"];
        find_args.extend_from_slice(&common);
        let mut oracle_args = vec!["oracle"];
        oracle_args.extend_from_slice(&common);

        let find = stdout_json(&swamp(&find_args));
        let oracle = stdout_json(&swamp(&oracle_args));

        assert_eq!(find["motif"]["i"], oracle["motif"]["i"], "seed {seed}");
        assert_eq!(find["motif"]["j"], oracle["motif"]["j"], "seed {seed}");
        let df = find["motif"]["distance"].as_f64().unwrap();
        let dr = oracle["motif"]["distance"].as_f64().unwrap();
        assert!((df - dr).abs() <= 1e-9, "seed {seed}: {df} vs {dr}");
    }
}

#[test]
fn generated_file_and_stdin_give_the_same_motif() {
    let gen = swamp(&[
        "generate",
        "--kind",
        "random-walk",
        "--n",
        "700",
        "--seed",
        "9",
    ]);
    assert_eq!(code(&gen), 0);
    let series = String::from_utf8(gen.stdout).unwrap();

    let dir = std::env::temp_dir().join("swamp_cli_roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("walk.txt");
    std::fs::write(&path, &series).unwrap();

    let search = ["--length", "40", "--window", "2", "--no-timings"];
    let mut from_file = vec!["find", "--input", path.to_str().unwrap()];
    from_file.extend_from_slice(&search);
    let mut from_stdin = vec!["find", "--input", "-"];
    from_stdin.extend_from_slice(&search);
    let mut from_gen = vec![
        "find",
        "--generate",
        "random-walk",
        "--n",
        "700",
        "--seed",
        "9",
    ];
    from_gen.extend_from_slice(&search);

    let a = stdout_json(&swamp(&from_file));
    let b = stdout_json(&swamp_with_stdin(&from_stdin, &series));
    let c = stdout_json(&swamp(&from_gen));

    assert_eq!(a["motif"], b["motif"]);
    assert_eq!(a["motif"], c["motif"]);
    assert_eq!(a["stats"], b["stats"]);
}

#[test]
fn csv_ingestion_by_name_and_position() {
    let dir = std::env::temp_dir().join("swamp_cli_csv");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("data.csv");

    let mut body = String::from("time,value\n");
    for i in 0..200 {
        body.push_str(&format!("{i},{}\n", (i as f64 * 0.37).sin()));
    }
    std::fs::write(&path, &body).unwrap();

    let by_name = stdout_json(&swamp(&[
        "find",
        "--input",
        path.to_str().unwrap(),
        "--column",
        "value",
        "--length",
        "16",
        "--window",
        "1",
        "--no-timings",
    ]));
    let by_pos = stdout_json(&swamp(&[
        "find",
        "--input",
        path.to_str().unwrap(),
        "--column",
        "2",
        "--length",
        "16",
        "--window",
        "1",
        "--no-timings",
    ]));
    assert_eq!(by_name["motif"], by_pos["motif"]);
    assert_eq!(by_name["input"]["n"], 200);

    let bad_column = swamp(&[
        "find",
        "--input",
        path.to_str().unwrap(),
        "--column",
        "pressure",
        "--length",
        "16",
        "--window",
        "1",
    ]);
    assert_eq!(code(&bad_column), 2);
}

#[test]
fn znorm_mode_is_accepted_and_reported() {
    let report = stdout_json(&swamp(&[
        "find",
        "--generate",
        "random-walk",
        "--n",
        "900",
        "--seed",
        "14",
        "--length",
        "50",
        "--window",
        "3",
        "--mode",
        "znorm",
        "--no-timings",
    ]));
    assert_eq!(report["config"]["mode"], "znorm");
    // Per-subsequence normalization collapses the hierarchy to one exact level.
    let levels = report["stats"]["pruned_per_level"].as_array().unwrap();
    assert_eq!(levels.len(), 1);
    assert_eq!(levels[0]["level"], 1);
}

#[test]
fn report_is_stable_across_repeats_and_thread_counts() {
    let base = [
        "find",
        "--generate",
        "planted-motif",
        "--n",
        "2000",
        "--length",
        "64",
        "--seed",
        "23",
        "--noise",
        "0.05",
        "--window",
        "4",
        "--no-timings",
    ];
    let mut one = base.to_vec();
    one.extend_from_slice(&["--threads", "1"]);
    let mut eight = base.to_vec();
    eight.extend_from_slice(&["--threads", "8"]);

    let first = swamp(&one);
    let second = swamp(&one);
    let wide = swamp(&eight);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, wide.stdout);
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join("swamp_cli_outfile");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");

    let to_stdout = swamp(&[
        "find",
        "--generate",
        "random-walk",
        "--n",
        "500",
        "--seed",
        "3",
        "--length",
        "30",
        "--window",
        "2",
        "--no-timings",
    ]);
    let to_file = swamp(&[
        "find",
        "--generate",
        "random-walk",
        "--n",
        "500",
        "--seed",
        "3",
        "--length",
        "30",
        "--window",
        "2",
        "--no-timings",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&to_file), 0);
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, to_stdout.stdout);
}

#[test]
fn bench_lb_reports_admissible_tightness() {
    let report = stdout_json(&swamp(&[
        "bench-lb",
        "--generate",
        "random-walk",
        "--n",
        "2000",
        "--seed",
        "6",
        "--length",
        "64",
        "--window",
        "4",
        "--pairs",
        "40",
        "--levels",
        "64,16,4",
    ]));
    let table = report["table"].as_array().unwrap();
    // lb_kim_fl + three requested levels + full lb_keogh + dtw.
    assert_eq!(table.len(), 6);
    for row in table {
        let t = row["tightness"].as_f64().unwrap();
        assert!(t > 0.0 && t <= 1.0 + 1e-12, "tightness {t} out of range");
    }
    assert_eq!(table[5]["bound"], "dtw");
    assert!((table[5]["tightness"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn dump_profiles_writes_one_file_per_level() {
    let dir = std::env::temp_dir().join("swamp_cli_dumps");
    let _ = std::fs::remove_dir_all(&dir);

    let report = stdout_json(&swamp(&[
        "find",
        "--generate",
        "random-walk",
        "--n",
        "400",
        "--seed",
        "8",
        "--length",
        "32",
        "--window",
        "2",
        "--no-timings",
        "--dump-profiles",
        dir.to_str().unwrap(),
    ]));
    let dumps = report["dumps"].as_array().unwrap();
    assert!(dumps.iter().any(|d| d == "ed_mp.csv"));
    assert!(dumps.iter().any(|d| d == "lbmp_d1.csv"));
    for name in dumps {
        let file = dir.join(name.as_str().unwrap());
        let text = std::fs::read_to_string(&file).unwrap();
        // Every profile entry covers one admissible start position.
        assert_eq!(text.lines().count(), 400 - 32 + 1);
    }
}
