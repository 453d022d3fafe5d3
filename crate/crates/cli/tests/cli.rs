use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const PAIR: &str = r#"{"P": 5, "lambda": 1, "c_hold": 2,
  "suppliers": [{"alpha": 0, "beta": 1, "m": 2, "M": 3},
                {"alpha": 0, "beta": 1, "m": 2, "M": 3}]}"#;

fn lotdp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lotdp"))
        .args(args)
        .env_remove("LOTDP_MAX_CELLS")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn rational(v: &Value) -> (i64, i64) {
    (v["num"].as_i64().unwrap(), v["den"].as_i64().unwrap())
}

#[test]
fn solve_pair() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "pair.json", PAIR);
    let out = lotdp(&["solve", &file]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = stdout_json(&out);
    assert_eq!(rational(&v["solution"]["objective"]), (35, 2));
    let deliveries = v["solution"]["deliveries"].as_array().unwrap();
    assert_eq!(deliveries.len(), 2);
    for (i, d) in deliveries.iter().enumerate() {
        assert_eq!(d["supplier"].as_u64(), Some(i as u64 + 1));
        assert_eq!(rational(&d["volume"]), (5, 2));
    }
    assert!(v["solution"].get("objective_approx").is_none());
    assert_eq!(v["report"]["best_H"].as_u64(), Some(1));
    assert_eq!(v["report"]["per_H"].as_array().unwrap().len(), 2);
}

#[test]
fn solve_writes_files_and_trace() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "pair.json", PAIR);
    let result = dir.path().join("out.json");
    let timeline = dir.path().join("timeline.csv");
    let out = lotdp(&[
        "solve",
        &file,
        "--pretty",
        "--trace",
        "--out",
        result.to_str().unwrap(),
        "--schedule",
        timeline.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).starts_with("H,phi_nP_num,phi_nP_den,cells,micros\n1,35,2,"));

    let v: Value = serde_json::from_str(&fs::read_to_string(&result).unwrap()).unwrap();
    assert_eq!(v["solution"]["objective_approx"].as_f64(), Some(17.5));
    assert_eq!(
        fs::read_to_string(&timeline).unwrap(),
        "time_num,time_den,supplier,volume_num,volume_den\n0,1,1,5,2\n5,2,2,5,2\n"
    );
}

#[test]
fn mode_override_enables_repeated_batches() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "one.json",
        r#"{"P": 6, "lambda": 1, "c_hold": 1, "suppliers": [{"alpha": 1, "beta": 0, "m": 1, "M": 10}]}"#,
    );
    let single = stdout_json(&lotdp(&["solve", &file]));
    assert_eq!(rational(&single["solution"]["objective"]), (19, 1));
    let out = lotdp(&["solve", &file, "--mode", "multi"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let multi = stdout_json(&out);
    assert_eq!(rational(&multi["solution"]["objective"]), (17, 2));
    assert_eq!(multi["solution"]["deliveries"].as_array().unwrap().len(), 4);
}

#[test]
fn infeasible_demand_exits_2() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "inf.json",
        r#"{"P": 7, "lambda": 1, "c_hold": 1, "suppliers": [{"alpha": 0, "beta": 1, "m": 2, "M": 3}]}"#,
    );
    let out = lotdp(&["solve", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("demand constraint"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn input_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let empty = write(
        &dir,
        "empty.json",
        r#"{"P": 5, "lambda": 1, "c_hold": 1, "suppliers": []}"#,
    );
    let out = lotdp(&["solve", &empty]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("supplier list is empty"));

    let bad = write(
        &dir,
        "bad.json",
        "{\"P\": 5, \"lambda\": 1, \"c_hold\": 1,\n \"suppliers\": [{\"alpha\": 0, \"beta\": 1, \"m\": 2, \"M\": \"3\"}]}",
    );
    let out = lotdp(&["solve", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let msg = stderr(&out);
    assert!(
        msg.contains("suppliers[0].M") && msg.contains("line 2"),
        "{msg}"
    );

    let out = lotdp(&["solve", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cell_limit_exits_1() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "pair.json", PAIR);
    let out = Command::new(env!("CARGO_BIN_EXE_lotdp"))
        .args(["solve", &file])
        .env("LOTDP_MAX_CELLS", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("limit is 10"));
}

#[test]
fn verify_agrees() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "pair.json", PAIR);
    let out = lotdp(&["verify", &file]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("grid        35/2") && text.ends_with("agree\n"),
        "{text}"
    );

    let out = lotdp(&["verify", "--seed-batch", "25", "--seed", "100"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("25/25 agree"));
}

#[test]
fn verify_refuses_oversized() {
    let dir = TempDir::new().unwrap();
    let big = dir.path().join("big.json");
    let out = lotdp(&[
        "gen",
        "--n",
        "12",
        "--pmax",
        "30",
        "--seed",
        "5",
        "--out",
        big.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = lotdp(&["verify", big.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("size guard"));

    let file = write(&dir, "pair.json", PAIR);
    let out = lotdp(&["verify", &file, "--grid-budget", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("grid oracle"));
}

#[test]
fn gen_is_deterministic_and_valid() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = lotdp(&[
            "gen",
            "--n",
            "3",
            "--pmax",
            "20",
            "--seed",
            "1",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let out = lotdp(&["solve", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let stdout = lotdp(&["gen", "--n", "3", "--pmax", "20", "--seed", "1"]).stdout;
    assert_eq!(stdout, fs::read(&a).unwrap());
    let other = lotdp(&["gen", "--n", "3", "--pmax", "20", "--seed", "2"]).stdout;
    assert_ne!(stdout, other);
}

#[test]
fn gen_infeasible_and_bad_ranges() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("inf.json");
    let out = lotdp(&[
        "gen",
        "--n",
        "2",
        "--seed",
        "3",
        "--infeasible",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        lotdp(&["solve", path.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let out = lotdp(&["gen", "--n", "0", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = lotdp(&["gen", "--seed", "1", "--cmax", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

fn csv_rows(text: &str) -> Vec<Vec<i64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect()
}

#[test]
fn bench_single_row() {
    let out = lotdp(&["bench", "--sweep", "P", "--values", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n,P,c_hold,cells,wall_micros,objective_num,objective_den\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][..3], &[5, 20, 1]);
}

#[test]
fn bench_cells_grow_linearly_in_p() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = lotdp(&["bench", "--sweep", "P", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let rows = csv_rows(&fs::read_to_string(Path::new(&path)).unwrap());
    let cells: Vec<i64> = rows.iter().map(|r| r[3]).collect();
    // n = 5, c_hold = 1: sum over H = 1..5 of 5 (P H + 1)
    assert_eq!(cells, vec![75 * 50 + 25, 75 * 100 + 25, 75 * 200 + 25]);
}
