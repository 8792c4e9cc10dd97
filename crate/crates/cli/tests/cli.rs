use std::path::Path;
use std::process::{Command, Output};

fn kazhdan(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kazhdan"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn bound_writes_report_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let o = kazhdan(&["bound", "cyclic:3", "-d", "1", "--out", "."], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["status"], "certified");
    assert_eq!(report["s_size"], 2);
    let eps = report["eps_certified"].as_f64().unwrap();
    assert!(eps > 2.99 && eps <= 3.0, "{eps}");
    assert!(dir.path().join("cyclic_3-d1.json").exists());
    assert!(dir.path().join("cyclic_3-d1.cert").exists());
}

#[test]
fn verify_accepts_fresh_and_rejects_tampered_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let o = kazhdan(&["bound", "coxeter:A2", "-d", "3", "--out", "."], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let cert = dir.path().join("coxeter_A2-d3.cert");

    let ok = kazhdan(&["verify", cert.to_str().unwrap()], dir.path());
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));
    assert!(stdout(&ok).starts_with("certificate ok"));

    let text = std::fs::read_to_string(&cert).unwrap();
    let tampered: String = text
        .lines()
        .map(|l| if l.starts_with("eps ") { "eps 2".to_string() } else { l.to_string() })
        .map(|l| l + "\n")
        .collect();
    assert_ne!(tampered, text);
    let bad = dir.path().join("bad.cert");
    std::fs::write(&bad, tampered).unwrap();
    let rejected = kazhdan(&["verify", bad.to_str().unwrap()], dir.path());
    assert_eq!(code(&rejected), 3, "{}", stderr(&rejected));
}

#[test]
fn input_errors_exit_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let o = kazhdan(&["bound", "nosuchgroup:7"], dir.path());
    assert_eq!(code(&o), 4);
    assert!(!stderr(&o).is_empty());
    assert_eq!(code(&kazhdan(&["bound"], dir.path())), 4);
    assert_eq!(code(&kazhdan(&["--help"], dir.path())), 0);
}

#[test]
fn describe_shows_generators() {
    let dir = tempfile::tempdir().unwrap();
    let o = kazhdan(&["describe", "steinberg:3"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("|S|: 12"), "{out}");
    assert!(out.contains("relator lengths:"), "{out}");
    assert_eq!(code(&kazhdan(&["list"], dir.path())), 0);
}

#[test]
fn generated_triangle_files_validate() {
    let dir = tempfile::tempdir().unwrap();
    let o = kazhdan(&["gen-triangle", "--out", "tri"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let files: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert!(!files.is_empty());
    for f in &files {
        let v = kazhdan(&["validate-triangle", f], dir.path());
        assert_eq!(code(&v), 0, "{f}: {}", stderr(&v));
        assert!(stdout(&v).contains("|S| = 14"));
    }

    // a second triple on an existing pair, with its rotations so (B) holds
    let mut text = std::fs::read_to_string(dir.path().join(&files[0])).unwrap();
    let first = text.lines().find_map(|l| l.strip_prefix("triple: ")).unwrap().to_string();
    let t: Vec<&str> = first.split_whitespace().collect();
    let w = ["x1", "x2", "x3"].into_iter().find(|p| *p != t[2]).unwrap();
    for (a, b, c) in [(t[0], t[1], w), (t[1], w, t[0]), (w, t[0], t[1])] {
        text.push_str(&format!("triple: {a} {b} {c}\n"));
    }
    let bad = dir.path().join("bad.tri");
    std::fs::write(&bad, text).unwrap();
    let v = kazhdan(&["validate-triangle", bad.to_str().unwrap()], dir.path());
    assert_eq!(code(&v), 4);
    assert!(stderr(&v).contains("(C)"), "{}", stderr(&v));
}

#[test]
fn exported_problem_and_external_solution() {
    let dir = tempfile::tempdir().unwrap();
    let o = kazhdan(&["export-sdp", "coxeter:A3", "-d", "1", "--out", "a3.dat-s"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("a3.dat-s")).unwrap();
    assert!(text.starts_with('"'));

    let o = kazhdan(&["bound", "coxeter:A3", "-d", "1", "--solver", "export", "--out", "."], dir.path());
    assert_eq!(code(&o), 2, "{}", stderr(&o));

    // A solution with Q = 0 and ε = 0 is feasible only if every target vanishes,
    // so it is reported as infeasible (input error).
    let sol = dir.path().join("zero.sol");
    std::fs::write(&sol, "0\n2 2 1 1 0.0\n").unwrap();
    let o = kazhdan(
        &["certify-from-solution", "coxeter:A3", "-d", "1", "--solution", sol.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(code(&o), 4, "{}", stderr(&o));
}

#[test]
fn repeated_runs_are_identical_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        let o = kazhdan(&["bound", "coxeter:B2", "-d", "3"], dir.path());
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let mut v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v.as_object_mut().unwrap().remove("wall_time_secs");
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn table_and_csv_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = kazhdan(&["bound", "cyclic:3", "coxeter:A2", "-d", "3", "--table"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.lines().count() >= 3 && out.contains("coxeter:A2"), "{out}");
    let o = kazhdan(&["bound", "cyclic:3", "-d", "1", "--csv"], dir.path());
    assert_eq!(stdout(&o).lines().count(), 2);
}
