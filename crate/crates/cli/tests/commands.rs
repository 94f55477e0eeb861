use std::io::Write;
use std::process::{Command, Output, Stdio};

fn syncfn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syncfn")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn piped(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_syncfn"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn verify_sweeps_pass() {
    for args in [
        &["verify", "prefix", "--bound", "100000"][..],
        &["verify", "suffix", "--bound", "10000"],
        &["verify", "power", "--accel", "--a", "5", "--b", "1", "--n", "3", "--bound", "1000"],
        &["verify", "closure", "--n", "4", "--bound", "2000"],
    ] {
        let out = syncfn(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stdout(&out));
        assert!(stdout(&out).starts_with("PASS"));
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(syncfn(&["verify", "suffix", "--accel"]).status.code(), Some(2));
    assert_eq!(syncfn(&["power", "--n"]).status.code(), Some(2));
    assert_eq!(syncfn(&["build", "div", "--a", "1", "--d", "0"]).status.code(), Some(2));
}

#[test]
fn state_limit_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_syncfn"))
        .args(["power", "--n", "5", "--json"])
        .env("SYNCFN_STATE_LIMIT", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn accelerated_example_through_every_path() {
    let eval = stdout(&syncfn(&["eval", "--accel", "--a", "5", "--b", "1", "--n", "3", "--k", "113"]));
    assert!(eval.contains("= 354") && eval.contains("423 -> 02404"), "{eval}");
    let closure = stdout(&syncfn(&["closure", "--accel", "--a", "5", "--b", "1", "eval", "--k", "113", "--n", "3"]));
    assert_eq!(closure.trim(), "354");
    let table = stdout(&syncfn(&["power", "--accel", "--a", "5", "--b", "1", "--n", "3", "--table"]));
    assert!(table.lines().any(|l| l.starts_with("1\t100\t") && l.ends_with("\t04")), "{table}");
}

#[test]
fn orbit_tables() {
    let out = stdout(&syncfn(&["orbit", "--accel", "--a", "5", "--b", "1", "--k", "113", "--n", "3"]));
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split('\t').collect()).collect();
    let values: Vec<&str> = rows.iter().map(|r| r[1]).collect();
    assert_eq!(values, ["113", "283", "708", "354"]);
    let running: Vec<&str> = rows.iter().skip(1).map(|r| r[3]).collect();
    assert_eq!(running, ["1", "2", "2"]);
    let out = stdout(&syncfn(&["orbit", "--k", "1", "--n", "3"]));
    let values: Vec<&str> = out.lines().skip(1).map(|l| l.split('\t').nth(1).unwrap()).collect();
    assert_eq!(values, ["1", "4", "2", "1"]);
    let out = stdout(&syncfn(&["orbit", "--k", "7", "--n", "0"]));
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn built_machines_round_trip_and_render() {
    for kind in ["mult", "multadd", "div", "suffix-f", "prefix-f", "prefix-accel"] {
        let json = stdout(&syncfn(&["build", kind, "--json"]));
        let again = piped(&["render", "--machine", "-"], &json);
        assert_eq!(again.status.code(), Some(0), "{kind}");
        assert!(stdout(&again).starts_with("digraph"));
    }
    let json = stdout(&syncfn(&["build", "prefix-f"]));
    let out = piped(&["eval", "--machine", "-", "--input", "11"], &json);
    // 7 = "11" in base 6 goes to 22, written with a leading zero
    assert_eq!(stdout(&out).trim(), "034");
}

#[test]
fn division_render_is_deterministic() {
    let args = ["build", "div", "--a", "5", "--d", "8", "--dot"];
    let first = stdout(&syncfn(&args));
    assert_eq!(first, stdout(&syncfn(&args)));
    let nodes = first.lines().filter(|l| l.trim_start().starts_with('n') && l.contains("pos=")).count();
    assert_eq!(nodes, 8);
    let edges = first
        .lines()
        .filter(|l| {
            let l = l.trim_start();
            l.starts_with('n') && l.contains(" -> n")
        })
        .count();
    assert_eq!(edges, 40);
}

#[test]
fn cone_and_cycles() {
    let dot = stdout(&syncfn(&["render", "--cone", "3", "--accel", "--a", "3", "--b", "1"]));
    let nodes = dot.lines().filter(|l| l.trim_start().starts_with('s') && l.contains("pos=")).count();
    assert_eq!(nodes, 15);
    assert_eq!(dot.matches("style=dashed").count(), 14);
    let cycles = stdout(&syncfn(&["closure", "cycles", "--n", "3", "--bound", "100"]));
    let ks: Vec<&str> = cycles.lines().map(|l| l.split(':').next().unwrap()).collect();
    assert_eq!(ks, ["0", "1", "2", "4"]);
}
