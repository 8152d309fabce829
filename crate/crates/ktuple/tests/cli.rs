//! End-to-end checks of the command-line interface: output formats, file
//! round trips, option precedence and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ktuple"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn solve_prints_summary_and_writes_verified_tuple() {
    let dir = tempfile::tempdir().unwrap();
    let tuple_path = dir.path().join("h.txt");
    let out = run(&[
        "solve",
        "--k",
        "20",
        "--T",
        "50",
        "--seed",
        "7",
        "--out",
        tuple_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let summary = stdout(&out);
    let fields: Vec<&str> = summary.trim().split(',').collect();
    assert_eq!(fields.len(), 3, "summary is k,diameter,seconds: {summary:?}");
    assert_eq!(fields[0], "20");
    let d: i64 = fields[1].parse().unwrap();
    fields[2].parse::<f64>().unwrap();

    let verify = run(&["verify", tuple_path.to_str().unwrap(), "--k", "20"]);
    assert!(verify.status.success());
    assert!(stdout(&verify).contains(&format!("diameter={d}")));
}

#[test]
fn solve_is_deterministic_per_seed() {
    let a = stdout(&run(&["solve", "--k", "15", "--T", "80", "--seed", "3"]));
    let b = stdout(&run(&["solve", "--k", "15", "--T", "80", "--seed", "3"]));
    let c = stdout(&run(&["solve", "--k", "15", "--T", "80", "--seed", "4"]));
    let d_of = |s: &str| s.trim().split(',').nth(1).unwrap().to_owned();
    assert_eq!(d_of(&a), d_of(&b));
    // A different seed may coincide in diameter; the run itself must differ
    // or match by chance, so only the seeded repeatability is asserted.
    let _ = c;
}

#[test]
fn trace_and_landscape_files_have_pinned_headers() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let land = dir.path().join("land.csv");
    let out = run(&[
        "solve",
        "--k",
        "12",
        "--T",
        "30",
        "--trace",
        trace.to_str().unwrap(),
        "--landscape",
        land.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let trace_text = fs::read_to_string(&trace).unwrap();
    let mut lines = trace_text.lines();
    assert_eq!(lines.next(), Some("iter,best_d,selected_v,op,accepted"));
    let mut rows = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 5, "trace row: {line:?}");
        f[0].parse::<u64>().unwrap();
        f[1].parse::<i64>().unwrap();
        f[2].parse::<i64>().unwrap();
        assert!(matches!(f[3], "shift" | "ls1" | "ls2"), "op column: {line:?}");
        assert!(matches!(f[4], "0" | "1"), "accepted column: {line:?}");
        rows += 1;
    }
    assert!(rows > 0);

    let land_text = fs::read_to_string(&land).unwrap();
    let mut lines = land_text.lines();
    assert_eq!(lines.next(), Some("v,f_v"));
    let mut prev = i64::MIN;
    for line in lines {
        let (v, f) = line.split_once(',').unwrap();
        let v: i64 = v.parse().unwrap();
        f.parse::<i64>().unwrap();
        assert!(v > prev, "landscape sorted by start value");
        prev = v;
    }
}

#[test]
fn flags_override_config_file_which_overrides_preset() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("solver.cfg");
    fs::write(&cfg, "preset = best\nseed = 3  # comment\nT = 80\n").unwrap();

    let from_file = stdout(&run(&[
        "solve", "--k", "15", "--config", cfg.to_str().unwrap(),
    ]));
    let reference = stdout(&run(&[
        "solve", "--k", "15", "--preset", "best", "--T", "80", "--seed", "3",
    ]));
    assert_eq!(
        from_file.split(',').nth(1),
        reference.split(',').nth(1),
        "config file settings behave like the equivalent flags"
    );

    // An explicit flag beats the file's seed.
    let overridden = stdout(&run(&[
        "solve", "--k", "15", "--config", cfg.to_str().unwrap(), "--seed", "9",
    ]));
    let direct = stdout(&run(&[
        "solve", "--k", "15", "--preset", "best", "--T", "80", "--seed", "9",
    ]));
    assert_eq!(overridden.split(',').nth(1), direct.split(',').nth(1));
}

#[test]
fn preset_tokens_are_accepted() {
    for preset in ["basever", "best"] {
        let out = run(&["solve", "--k", "10", "--T", "20", "--preset", preset]);
        assert!(out.status.success(), "preset {preset} runs");
    }
}

#[test]
fn sieve_prints_csv_record() {
    let out = run(&["sieve", "--method", "schinzel", "--k", "40"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let f: Vec<&str> = text.trim().split(',').collect();
    assert_eq!(f[0], "schinzel");
    assert_eq!(f[1], "40");
    f[2].parse::<i64>().unwrap();
    f[3].parse::<f64>().unwrap();
}

#[test]
fn bench_emits_one_row_per_method_and_k() {
    let out = run(&[
        "bench",
        "--k-list",
        "10,20",
        "--methods",
        "rals,primes-past-k",
        "--runs",
        "3",
        "--T",
        "30",
        "--target",
        "36,94",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("method,k,runs,min_d,mean_d,mean_seconds,succ_rate"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f.len(), 7, "bench row: {row:?}");
        if f[0] == "rals" {
            let rate: f64 = f[6].parse().unwrap();
            assert!((0.0..=1.0).contains(&rate));
        } else {
            assert!(f[6].is_empty(), "success rate only applies to rals");
        }
    }
}

#[test]
fn oracle_prints_diameter_then_witness() {
    let out = run(&["oracle", "--k", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("20"));
    let witness: Vec<i64> =
        lines.next().unwrap().split(' ').map(|v| v.parse().unwrap()).collect();
    assert_eq!(witness.len(), 7);
    assert_eq!(witness[6] - witness[0], 20);
}

#[test]
fn sieve_context_dumps_the_standard_small_pool() {
    let out = run(&["sieve-context", "--k", "7", "--U", "30"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("k=7 U=30"));
    assert!(text.contains("exempt primes: 2 3"));
    assert!(text.contains("active primes: 5 7"));
    assert!(text.contains("0 2 6 8 12 14 18 20 24 26 30"));
}

#[test]
fn improve_never_worsens_a_tuple() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.txt");
    let solve = run(&[
        "solve", "--k", "30", "--T", "20", "--seed", "2", "--out", path.to_str().unwrap(),
    ]);
    assert!(solve.status.success());
    let d_in: i64 =
        stdout(&solve).trim().split(',').nth(1).unwrap().parse().unwrap();

    let improved = dir.path().join("better.txt");
    let out = run(&[
        "improve",
        path.to_str().unwrap(),
        "--iterations",
        "200",
        "--out",
        improved.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let f = stdout(&out);
    let fields: Vec<i64> =
        f.trim().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(fields[0], 30);
    assert_eq!(fields[1], d_in);
    assert!(fields[2] <= d_in);

    let verify = run(&["verify", improved.to_str().unwrap(), "--k", "30"]);
    assert!(verify.status.success());
}

#[test]
fn verify_rejects_a_bad_tuple_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    // 0,2,4 covers every class mod 3.
    fs::write(&path, "0\n2\n4\n").unwrap();
    let out = run(&["verify", path.to_str().unwrap(), "--k", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains('3'), "names the failing prime: {err:?}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["solve"]).status.code(), Some(2), "missing --k");
    assert_eq!(run(&["bench"]).status.code(), Some(2), "missing --k-list");
    assert_eq!(
        run(&["sieve", "--method", "nonsense", "--k", "10"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["solve", "--k", "10", "--preset", "fastest"]).status.code(),
        Some(2)
    );
}

#[test]
fn missing_input_file_fails_cleanly() {
    let out = run(&["verify", "/nonexistent/h.txt", "--k", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!Path::new("/nonexistent/h.txt").exists());
}
