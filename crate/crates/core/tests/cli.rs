use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn wavedim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavedim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn catalog(dir: &TempDir, name: &str) -> String {
    let file = path(dir, &format!("{name}.json"));
    assert_eq!(
        wavedim(&["catalog", name, "--out", &file]).status.code(),
        Some(0)
    );
    file
}

#[test]
fn witness_for_n2() {
    let o = wavedim(&["witness", "--n", "2", "--eps-ratio", "1/5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("pairs: (1,1),(2,-1),(3,0)\n"), "{out}");
    assert!(out.contains("dim: 3\n"));
}

#[test]
fn construct_rejects_large_eps() {
    let dir = TempDir::new().unwrap();
    let o = wavedim(&[
        "construct",
        "--n",
        "2",
        "--eps-ratio",
        "1/2",
        "--depth",
        "3",
        "--out",
        &path(&dir, "w.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("eps exceeds delta = 16/45·π"));
    assert!(!Path::new(&path(&dir, "w.json")).exists());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(wavedim(&[]).status.code(), Some(2));
    assert_eq!(
        wavedim(&["witness", "--n", "2", "--eps-ratio", "0.2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        wavedim(&["verify", "/nonexistent/file.json"]).status.code(),
        Some(2)
    );
    let dir = TempDir::new().unwrap();
    let s = catalog(&dir, "shannon");
    assert_eq!(
        wavedim(&["dim", &s, "--xi", "1/2+eps"]).status.code(),
        Some(2)
    );
    assert_eq!(wavedim(&["dim", &s, "--xi", "abc"]).status.code(), Some(2));
    fs::write(path(&dir, "v2.json"), r#"{"version": 2, "intervals": []}"#).unwrap();
    let o = wavedim(&["verify", &path(&dir, "v2.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("version 2"));
}

#[test]
fn verify_catalog_sets() {
    let dir = TempDir::new().unwrap();
    for name in ["shannon", "journe"] {
        let file = catalog(&dir, name);
        let o = wavedim(&["verify", &file]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        assert_eq!(
            out.matches("gap 0/1·π = 0.000000000000; overlap 0/1·π = 0.000000000000")
                .count(),
            3
        );
        let o = wavedim(&["verify", &file, "--json"]);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["is_wavelet_set"], true);
    }
}

#[test]
fn truncated_construction_is_not_exact() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "w.json");
    let o = wavedim(&[
        "construct",
        "--n",
        "2",
        "--eps-ratio",
        "1/5",
        "--depth",
        "2",
        "--out",
        &file,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("excess_measure: "));
    assert_eq!(wavedim(&["verify", &file]).status.code(), Some(1));
    let o = wavedim(&["dim", &file, "--xi", "2/3+1/80"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "D(163/240·π) = 3\npairs: (1,1),(2,-1),(3,0)\n");
}

#[test]
fn dim_and_profile() {
    let dir = TempDir::new().unwrap();
    let j = catalog(&dir, "journe");
    let o = wavedim(&["dim", &j, "--xi", "1/7"]);
    assert_eq!(stdout(&o), "D(1/7·π) = 2\npairs: (1,1),(2,0)\n");
    let csv = path(&dir, "j.csv");
    let svg = path(&dir, "j.svg");
    let o = wavedim(&["profile", &j, "--out", &csv, "--svg", &svg]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("max: 2\n"));
    assert!(stdout(&o).contains("integral: 2/1·π"));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with(
        "breakpoint_lo,breakpoint_hi,breakpoint_lo_exact,breakpoint_hi_exact,value\n"
    ));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn identities_exit_codes() {
    assert_eq!(
        wavedim(&["identities", "--n", "2", "--eps-ratio", "8/45"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        wavedim(&["identities", "--n", "1", "--eps-ratio", "1/3"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = path(&dir, "a.json");
    let b = path(&dir, "b.json");
    let args = |out: &str| {
        vec![
            "construct",
            "--n",
            "3",
            "--eps-ratio",
            "1/10",
            "--depth",
            "3",
            "--out",
        ]
        .into_iter()
        .chain([out])
        .map(str::to_owned)
        .collect::<Vec<_>>()
    };
    let ra = wavedim(&args(&a).iter().map(String::as_str).collect::<Vec<_>>());
    let rb = wavedim(&args(&b).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(stdout(&ra).replace(&a, ""), stdout(&rb).replace(&b, ""));
    let p1 = wavedim(&["profile", &a, "--out", &path(&dir, "1.csv")]);
    let p2 = wavedim(&["profile", &a, "--out", &path(&dir, "2.csv")]);
    assert_eq!(p1.stdout, p2.stdout);
    assert_eq!(
        fs::read(path(&dir, "1.csv")).unwrap(),
        fs::read(path(&dir, "2.csv")).unwrap()
    );
}

#[test]
fn in_process_run_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = wavedim::cli::run(
        ["wavedim", "witness", "--n", "3", "--eps-ratio", "1/10"],
        &mut out,
        &mut err,
    );
    let o = wavedim(&["witness", "--n", "3", "--eps-ratio", "1/10"]);
    assert_eq!(Some(code), o.status.code());
    assert_eq!(out, o.stdout);
    assert!(String::from_utf8(out).unwrap().contains("dim: 4\n"));
}
