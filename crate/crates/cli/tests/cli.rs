use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn teamgame(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_teamgame"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value_after(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no `{key}` in {text}"))
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn simulate_writes_trajectory_and_summary() {
    let tmp = TempDir::new().unwrap();
    let o = teamgame(
        tmp.path(),
        &[
            "simulate",
            "--M",
            "12",
            "--preset",
            "decreasing",
            "--T",
            "0.5",
        ],
    );
    assert!(o.status.success(), "{o:?}");
    let traj = fs::read_to_string(tmp.path().join("trajectory.csv")).unwrap();
    let header = traj.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.starts_with("t,regime,mca,mass,l2,payoff_vs_initial,y_0"));
    assert!(header.ends_with("y_12"));
    let mca = value_after(&stdout(&o), "final mca");
    assert!((mca - 0.5).abs() < 1e-9 || mca < 0.5);
}

#[test]
fn output_is_deterministic() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let args = [
        "simulate", "--N", "64", "--preset", "random", "--seed", "11", "--T", "0.3",
    ];
    assert!(teamgame(a.path(), &args).status.success());
    assert!(teamgame(b.path(), &args).status.success());
    for name in ["initial.csv", "trajectory.csv"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn strategy_file_round_trip() {
    let tmp = TempDir::new().unwrap();
    fs::write(
        tmp.path().join("start.csv"),
        "# hand written\nindex,value\n0,1\n1,2\n2,3\n3,2\n",
    )
    .unwrap();
    let o = teamgame(
        tmp.path(),
        &[
            "simulate",
            "--file",
            "start.csv",
            "--T",
            "0.2",
            "--out",
            "run",
        ],
    );
    assert!(o.status.success(), "{o:?}");
    let init = fs::read_to_string(tmp.path().join("run/initial.csv")).unwrap();
    let values: Vec<f64> = init
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values, vec![1.0, 2.0, 3.0, 2.0]);
    // the written file is itself a valid input
    let again = teamgame(
        tmp.path(),
        &[
            "simulate",
            "--file",
            "run/initial.csv",
            "--T",
            "0.2",
            "--out",
            "run2",
        ],
    );
    assert!(again.status.success());
    let data = |p: &str| -> Vec<String> {
        fs::read_to_string(tmp.path().join(p))
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(str::to_owned)
            .collect()
    };
    assert_eq!(data("run/trajectory.csv"), data("run2/trajectory.csv"));
}

#[test]
fn spectrum_prints_small_polynomials() {
    let tmp = TempDir::new().unwrap();
    let o = teamgame(tmp.path(), &["spectrum", "--M", "1"]);
    assert!(stdout(&o).contains("charpoly λ^2 + 1"));
    let coeffs: Vec<i64> = fs::read_to_string(tmp.path().join("charpoly.txt"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(coeffs, vec![1, 0, 1]);

    let o = teamgame(tmp.path(), &["spectrum", "--M", "2"]);
    let out = stdout(&o);
    assert!(out.contains("charpoly -λ^3 - 3λ"));
    assert!(out.contains("binomial identity PASS"));
    assert!(out.contains("kernel dim constrained 2"));
}

#[test]
fn spectrum_beyond_exact_budget_is_skipped() {
    let tmp = TempDir::new().unwrap();
    let o = teamgame(tmp.path(), &["spectrum", "--M", "40"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("SKIPPED"));
}

#[test]
fn gradient_demo_on_parabola() {
    let tmp = TempDir::new().unwrap();
    let o = teamgame(tmp.path(), &["gradient-demo"]);
    assert!(o.status.success(), "{o:?}");
    let g = value_after(&stdout(&o), "gradient at x=2/3");
    assert!((g + 11.0 / 810.0).abs() < 1e-6, "{g}");
    let csv = fs::read_to_string(tmp.path().join("gradient.csv")).unwrap();
    assert!(csv.lines().any(|l| l == "x,f0,gradient,updated"));
}

#[test]
fn branch_and_reverse_report() {
    let tmp = TempDir::new().unwrap();
    let o = teamgame(
        tmp.path(),
        &["branch", "--M", "10", "--T", "1", "--dt", "1e-2"],
    );
    assert!(o.status.success());
    assert!(value_after(&stdout(&o), "max mirror residual") < 1e-10);

    let o = teamgame(tmp.path(), &["reverse", "--M", "9", "--T", "0.05"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(value_after(&out, "round trip error") < 1e-8);
    assert!(!out.contains("warning"));
    assert!(tmp.path().join("reverse_initial.csv").exists());
}

#[test]
fn config_file_with_flag_precedence() {
    let tmp = TempDir::new().unwrap();
    fs::write(
        tmp.path().join("run.toml"),
        "M = 8\nT = 0.2\npreset = \"parabola\"\n",
    )
    .unwrap();
    let o = teamgame(
        tmp.path(),
        &["simulate", "--config", "run.toml", "--M", "6"],
    );
    assert!(o.status.success(), "{o:?}");
    let traj = fs::read_to_string(tmp.path().join("trajectory.csv")).unwrap();
    assert!(traj.contains("# M 6"));
    assert!(traj.contains("# preset parabola"));
    assert!(traj.contains("T 0.2"));
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let code = |args: &[&str]| teamgame(tmp.path(), args).status.code();
    assert_eq!(code(&["simulate", "--preset", "nonsense"]), Some(3));
    assert_eq!(code(&["simulate", "--M", "4", "--N", "16"]), Some(3));
    assert_eq!(code(&["simulate", "--dt", "-1"]), Some(3));
    assert_eq!(code(&["simulate", "--frobnicate"]), Some(3));
    assert_eq!(code(&["simulate", "--file", "missing.csv"]), Some(2));
    fs::write(tmp.path().join("bad.toml"), "M = 4\ncolour = 1\n").unwrap();
    assert_eq!(code(&["simulate", "--config", "bad.toml"]), Some(3));
    fs::write(tmp.path().join("zero.csv"), "index,value\n0,0\n1,0\n").unwrap();
    assert_eq!(code(&["simulate", "--file", "zero.csv"]), Some(4));
    assert_eq!(code(&["--help"]), Some(0));
}
