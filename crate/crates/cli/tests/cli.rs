use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn perr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perr"))
        .args(args)
        .env_remove("PERR_TEST_MODE")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn two_node_swap(dir: &Path) -> (PathBuf, PathBuf) {
    let map = write(dir, "two.map", "type octile\nheight 1\nwidth 2\nmap\n..\n");
    let scen = write(dir, "two.scen", "robot,start,goal\n0,0,1\n1,1,0\n");
    (map, scen)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_two_node_swap() {
    let dir = TempDir::new().unwrap();
    let (map, scen) = two_node_swap(dir.path());
    let out = dir.path().join("plan.csv");
    let o = perr(&[
        "solve",
        "--map",
        s(&map),
        "--scen",
        s(&scen),
        "--algo",
        "rip",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        "t,robot_0,robot_1\n0,0,1\n1,1,0\n"
    );
    assert!(String::from_utf8_lossy(&o.stdout).contains("makespan=1"));
}

#[test]
fn every_algo_name_is_accepted() {
    let dir = TempDir::new().unwrap();
    let (map, scen) = two_node_swap(dir.path());
    for algo in ["rip", "rip-ic", "bubbletree", "bubbletree2", "oddeven", "oracle"] {
        let out = dir.path().join(format!("{algo}.csv"));
        let o = perr(&[
            "solve",
            "--map",
            s(&map),
            "--scen",
            s(&scen),
            "--algo",
            algo,
            "--out",
            s(&out),
        ]);
        assert_eq!(o.status.code(), Some(0), "{algo}");
    }
}

#[test]
fn unknown_algo_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let (map, scen) = two_node_swap(dir.path());
    let o = perr(&["solve", "--map", s(&map), "--scen", s(&scen), "--algo", "astar"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn oracle_budget_is_a_solver_error() {
    let dir = TempDir::new().unwrap();
    let map = write(
        dir.path(),
        "line.map",
        "type octile\nheight 1\nwidth 8\nmap\n........\n",
    );
    let scen = write(
        dir.path(),
        "line.scen",
        "robot,start,goal\n0,0,7\n1,1,6\n2,2,5\n3,3,4\n4,4,3\n5,5,2\n6,6,1\n7,7,0\n",
    );
    let o = perr(&["oracle", "--map", s(&map), "--scen", s(&scen), "--budget", "100"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn parse_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let map = write(dir.path(), "bad.map", "type octile\nheight x\n");
    let scen = write(dir.path(), "s.scen", "robot,start,goal\n");
    let o = perr(&["solve", "--map", s(&map), "--scen", s(&scen)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn validate_reports_each_outcome() {
    let dir = TempDir::new().unwrap();
    let (map, scen) = two_node_swap(dir.path());
    let good = write(dir.path(), "good.csv", "t,robot_0,robot_1\n0,0,1\n1,1,0\n");
    let o = perr(&[
        "validate",
        "--map",
        s(&map),
        "--scen",
        s(&scen),
        "--plan",
        s(&good),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("makespan=1 swaps=1"));

    let clash = write(
        dir.path(),
        "clash.csv",
        "t,robot_0,robot_1\n0,0,1\n1,1,1\n2,1,0\n",
    );
    let o = perr(&[
        "validate",
        "--map",
        s(&map),
        "--scen",
        s(&scen),
        "--plan",
        s(&clash),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("t = 1"));

    let short = write(dir.path(), "short.csv", "t,robot_0,robot_1\n0,0,1\n");
    let o = perr(&[
        "validate",
        "--map",
        s(&map),
        "--scen",
        s(&scen),
        "--plan",
        s(&short),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not all at their goals"));
}

#[test]
fn bench_csvs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let runs = [
        vec![
            "bench-linear",
            "--max-n",
            "12",
            "--trials",
            "3",
            "--algo",
            "rip,oddeven,bubbletree",
        ],
        vec![
            "bench-square",
            "--max-side",
            "4",
            "--trials",
            "2",
            "--algo",
            "rip-ic,shearsort",
        ],
        vec![
            "bench-grid",
            "--densities",
            "0,0.2",
            "--ks",
            "10,20",
            "--trials",
            "2",
            "--algo",
            "rip,bubbletree2",
        ],
        vec!["bench-cycle", "--ns", "16,32", "--algo", "rip"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut texts = Vec::new();
        for rep in 0..2 {
            let out = dir.path().join(format!("{i}-{rep}.csv"));
            let summary = dir.path().join(format!("{i}-{rep}-summary.csv"));
            let mut full = args.clone();
            full.extend(["--seed", "42", "--out", s(&out), "--summary", s(&summary)]);
            let o = perr(&full);
            assert_eq!(
                o.status.code(),
                Some(0),
                "{args:?}: {}",
                String::from_utf8_lossy(&o.stderr)
            );
            texts.push((fs::read(&out).unwrap(), fs::read(&summary).unwrap()));
        }
        assert_eq!(texts[0], texts[1], "{args:?}");
        let csv = String::from_utf8(texts[0].0.clone()).unwrap();
        assert!(csv.lines().skip(1).all(|l| l.contains(",true,")));
    }
}

#[test]
fn bench_linear_single_length() {
    let o = perr(&["bench-linear", "--max-n", "1", "--trials", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("rip,1,1,"));
}
