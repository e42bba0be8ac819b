use std::path::Path;
use std::process::{Command, Output};

fn isg(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isg"))
        .args(args)
        .current_dir(dir)
        .env_remove("ISG_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const SMALL: [&str; 4] = ["--n-phi", "32", "--n-z", "50"];

#[test]
fn ideal_square_probe() {
    let dir = tempfile::tempdir().unwrap();
    let o = isg(
        &["probe", "--ideal", "square", "--od", "2", "--out", "-"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let eta = v["eta"].as_f64().unwrap();
    assert!((eta - 0.2194).abs() < 5e-5, "{eta}");
    assert!((v["transmission"].as_f64().unwrap() - (-2.0f64).exp()).abs() < 1e-9);
}

#[test]
fn unpumped_engraving_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["engrave", "--preset", "tmyag-isg", "--xr", "0", "--od", "2"];
    args.extend(SMALL);
    let o = isg(&args, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("contrast 0.000000 at entrance, 0.000000 at exit"));
    let csv = std::fs::read_to_string(dir.path().join("engrave.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 33);
    assert_eq!(header[0], "z");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 51);
    for row in rows {
        let values: Vec<f64> = row.split(',').skip(1).map(|x| x.parse().unwrap()).collect();
        assert!(values.iter().all(|&a| a == values[0]));
    }
}

#[test]
fn out_dir_variable_and_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("artifacts");
    let mut args = vec!["probe", "--quiet"];
    args.extend(SMALL);
    let o = Command::new(env!("CARGO_BIN_EXE_isg"))
        .args(&args)
        .current_dir(dir.path())
        .env("ISG_OUT_DIR", &out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stderr.is_empty());
    assert!(o.stdout.is_empty());
    assert!(out.join("probe.json").is_file());
}

#[test]
fn sweep_writes_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec![
        "sweep",
        "--preset",
        "tmyag-standard",
        "--step",
        "0.5",
        "--max",
        "3",
        "--out",
        "-",
    ];
    args.extend(SMALL);
    let o = isg(&args, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "optical_depth,eta,transmission,regime,scheme");
    assert_eq!(lines.len(), 7);
    assert!(lines[4].starts_with("2,") && lines[4].ends_with(",small-angle,standard3"));
}

#[test]
fn drive_sweep_with_explicit_values() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec![
        "sweep", "--over", "drive", "--values", "1,10,30", "--out", "-",
    ];
    args.extend(SMALL);
    let o = isg(&args, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let eta: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(eta.len(), 3);
    assert!(eta[0] < eta[1] && eta[1] < eta[2]);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{
  "scheme": "tmyag-isg",
  "drive": 30,
  "optical_depth": 1.0,
  "regime": "large-angle",
  "grid": { "n_phi": 32, "n_z": 50 }
}"#,
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let base = isg(&["probe", "--config", cfg, "--out", "-"], dir.path());
    let over = isg(
        &["probe", "--config", cfg, "--od", "2", "--out", "-"],
        dir.path(),
    );
    let parse = |o: &Output| serde_json::from_str::<serde_json::Value>(&stdout(o)).unwrap();
    let (a, b) = (parse(&base), parse(&over));
    assert_eq!(a["optical_depth"], 1.0);
    assert_eq!(b["optical_depth"], 2.0);
    assert_eq!(b["regime"], "large-angle");
}

#[test]
fn geometry_picks_the_regime() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["probe", "--angle", "0.0175", "--out", "-"];
    args.extend(SMALL);
    let o = isg(&args, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("\"regime\": \"large-angle\""));

    let o = isg(&["probe", "--angle", "0.0075"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("geometry.angle"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"drive\": 3,\n  \"bogus\": 1\n}\n").unwrap();
    let o = isg(&["probe", "--config", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let o = isg(&["probe", "--n-z", "10"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("grid.n_z"));

    let o = isg(
        &["probe", "--preset", "tmyag-standard", "--xr", "3"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));

    let o = isg(&["figure", "12"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn convergence_failure_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = isg(
        &[
            "probe", "--od", "40", "--n-phi", "32", "--n-z", "50", "--out", "-",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("did not converge"));
}

#[test]
fn figures_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "figure", "3", "9-calc", "--n-phi", "64", "--n-z", "60", "--out", "a",
    ];
    assert!(isg(&args, dir.path()).status.success());
    let mut again = args;
    again[8] = "b";
    assert!(isg(&again, dir.path()).status.success());
    for f in ["figure-3.csv", "figure-9-calc.csv", "manifest.json"] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
    let m: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("a/manifest.json")).unwrap())
            .unwrap();
    assert_eq!(m["datasets"].as_array().unwrap().len(), 2);
}

#[test]
fn figure_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let o = isg(
        &["figure", "2", "--n-phi", "64", "--out", "-", "-q"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("series,"));
    let o = isg(&["figure", "2", "3", "--out", "-"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = isg(
        &[
            "oracle",
            "--preset",
            "tmyag-lambda",
            "--r",
            "0.0085",
            "--out",
            "-",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["max_error"].as_f64().unwrap() < 1e-6);

    let o = isg(&["oracle", "--points", "6"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("PASS oracle equivalence"));
}

#[test]
fn validate_prints_pass_lines() {
    let dir = tempfile::tempdir().unwrap();
    let o = isg(
        &["validate", "--n-phi", "64", "--n-z", "100", "--points", "9"],
        dir.path(),
    );
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert_eq!(text.lines().count(), 12);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn book_config_example_runs() {
    let chapter = include_str!("../../../book/src/config.md");
    let start = chapter.find("```json\n").unwrap() + 8;
    let len = chapter[start..].find("```").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("example.json");
    std::fs::write(&cfg, &chapter[start..start + len]).unwrap();
    let mut args = vec!["probe", "--config", cfg.to_str().unwrap(), "--out", "-"];
    args.extend(SMALL);
    let o = isg(&args, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("\"scheme\": \"tm5\""));
}
