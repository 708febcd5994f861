use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lensmassey"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn torus_homology() {
    let o = run(&[
        "homology",
        "--no-cache",
        "--fixture",
        "torus33",
        "--ring",
        "Z",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(
        s.contains("H_0 = Z\n") && s.contains("H_1 = Z^2\n") && s.contains("H_2 = Z\n"),
        "{s}"
    );
}

#[test]
fn heisenberg_sweep_and_named_triple() {
    let dga = fixture("heisenberg.dga");
    let o = run(&[
        "massey",
        "--no-cache",
        "--dga",
        &dga,
        "--degrees",
        "1",
        "1",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains(" 0 nontrivial"), "{}", stdout(&o));
    let o = run(&[
        "massey",
        "--no-cache",
        "--dga",
        &dga,
        "--classes",
        "a",
        "a",
        "b",
    ]);
    let s = stdout(&o);
    assert!(
        s.contains("verdict NONTRIVIAL") && s.contains("representative ac"),
        "{s}"
    );
}

#[test]
fn pattern_table() {
    let o = run(&["pattern", "--no-cache", "--m", "7", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("offsets [3, 4], symmetric true, shift-invariant true"));
}

#[test]
fn comparison_mode_is_trivial() {
    let o = run(&[
        "verify",
        "--no-cache",
        "--modulus",
        "3",
        "--twist",
        "1",
        "--samples",
        "200",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all verdicts match"));
}

#[test]
fn input_errors_exit_three_with_positions() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.complex");
    std::fs::write(&bad, "0 1 2\n3 x\n").unwrap();
    let o = run(&["homology", "--no-cache", "--file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(
        String::from_utf8_lossy(&o.stderr).contains("line"),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(
        run(&["homology", "--no-cache", "--fixture", "klein"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&[
            "homology",
            "--no-cache",
            "--fixture",
            "rp2",
            "--ring",
            "Fp:4"
        ])
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn budget_refusal_exits_two() {
    let o = run(&[
        "model",
        "--no-cache",
        "--m",
        "3",
        "--q",
        "1",
        "--complement",
        "--budget",
        "1000",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stdout(&o).contains("projects 933120 top simplices"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn reports_are_byte_identical_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let args = |out: &Path| {
        vec![
            "formulas".to_string(),
            "--cache-dir".into(),
            cache.display().to_string(),
            "--m".into(),
            "5".into(),
            "--n".into(),
            "3".into(),
            "--out".into(),
            out.display().to_string(),
        ]
    };
    let first = Command::new(env!("CARGO_BIN_EXE_lensmassey"))
        .args(args(&a))
        .output()
        .unwrap();
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    let second = Command::new(env!("CARGO_BIN_EXE_lensmassey"))
        .args(args(&b))
        .output()
        .unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!(doc["seed"], 0);

    // Uncached verify runs agree byte for byte as well.
    let (c, d) = (dir.path().join("c.json"), dir.path().join("d.json"));
    for p in [&c, &d] {
        let o = run(&[
            "verify",
            "--no-cache",
            "--seed",
            "5",
            "--samples",
            "500",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&c).unwrap(), std::fs::read(&d).unwrap());
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&c).unwrap()).unwrap();
    assert_eq!(doc["seed"], 5);
}
