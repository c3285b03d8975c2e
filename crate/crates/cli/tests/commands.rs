use std::process::{Command, Output};

fn wgalaxy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wgalaxy")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dist_reports_certified_value() {
    let o = wgalaxy(&["dist", "ladder1", "b1[0]", "b1[2]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "w*2 (certified, window=16)\n");
    let m = wgalaxy(&["--machine", "dist", "ladder1", "b1[0]", "b1[2]"]);
    assert_eq!(stdout(&m), "distance=w*2 certified=true window=16\n");
}

#[test]
fn walk_is_printed_with_its_length() {
    let o = wgalaxy(&["--machine", "walk", "ladder1", "b1[1]", "r[1,2]", "--window", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("length=\"w*1 + 2\"\n"), "{}", stdout(&o));
}

#[test]
fn classify_splits_diagonal_from_constant() {
    let o =
        wgalaxy(&["--machine", "--window", "8", "classify", "ladder1", "1", "const(b1[0])", "diag(b1[n])", "b1[n+3]"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("block=")).count(), 2, "{out}");
    assert!(out.contains(r#"members="b1[n] b1[n + 3]""#), "{out}");
}

#[test]
fn order_and_ladder() {
    let o = wgalaxy(&["--machine", "--window", "8", "order", "ladder1", "1", "b1[n^2]", "b1[n]", "b1[2n]"]);
    let out = stdout(&o);
    assert!(out.contains(r#"hasse="b1[n] < b1[2n]""#), "{out}");
    assert!(out.contains(r#"hasse="b1[2n] < b1[n^2]""#), "{out}");
    let l = wgalaxy(&["--machine", "--window", "8", "ladder", "ladder1", "1", "const(b1[0])", "b1[n]", "1"]);
    assert_eq!(l.status.code(), Some(0));
    assert_eq!(stdout(&l).lines().count(), 3);
}

#[test]
fn exit_codes() {
    assert_eq!(wgalaxy(&["catalog"]).status.code(), Some(0));
    assert_eq!(wgalaxy(&["dist", "nowhere", "a[0]", "a[1]"]).status.code(), Some(1));
    assert_eq!(wgalaxy(&["classify", "ladder1", "1", "b1[n"]).status.code(), Some(1));
    assert_eq!(wgalaxy(&["--window", "1", "catalog"]).status.code(), Some(1));
    assert_eq!(wgalaxy(&["verify", "nonsense"]).status.code(), Some(1));
    assert_eq!(wgalaxy(&["witness", "hub1", "1"]).status.code(), Some(2));
    assert_eq!(wgalaxy(&["--suite", "metric", "verify"]).status.code(), Some(0));
}

#[test]
fn family_file_is_loaded() {
    let dir = std::env::temp_dir().join(format!("wgalaxy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{\n  \"name\": \"x\",\n  oops\n}").unwrap();
    let o = wgalaxy(&["--family-file", path.to_str().unwrap(), "sections", "x", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}
