use std::collections::HashMap;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn hallkit(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hallkit"))
        .args(args)
        .env_remove("HALLKIT_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Report without its timing fields.
fn report_of(bytes: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(bytes).unwrap();
    v.as_object_mut().unwrap().remove("timings_ms");
    v
}

#[test]
fn gen_orient_verify_pipeline() {
    let g = stdout(&hallkit(&["gen", "--hyper", "-n", "1000", "-d", "4", "-r", "2", "--seed", "7"], ""));
    let o = stdout(&hallkit(&["hso", "--local"], &g));
    let v = hallkit(&["--json", "verify"], &o);
    assert!(v.status.success());
    let rep = report_of(&v.stdout);
    assert_eq!(rep["schema_version"], 1);
    assert_eq!(rep["ok"], true);
    assert_eq!(rep["certificates"]["orientation"]["failures"].as_array().unwrap().len(), 0);
    let seq = stdout(&hallkit(&["hso", "--sequential"], &g));
    assert_eq!(seq, o);
}

#[test]
fn corrupted_orientation_is_rejected_and_localized() {
    let g = stdout(&hallkit(&["gen", "-n", "200", "-d", "4", "-r", "2", "--seed", "3"], ""));
    let o = stdout(&hallkit(&["hso"], &g));
    let members: HashMap<&str, Vec<&str>> = o
        .lines()
        .filter_map(|l| l.strip_prefix("e "))
        .map(|l| {
            let mut it = l.split_whitespace();
            (it.next().unwrap(), it.collect())
        })
        .collect();
    let owners: Vec<(&str, &str)> =
        o.lines().filter_map(|l| l.strip_prefix("o ")).map(|l| l.split_once(' ').unwrap()).collect();
    let (e, v) = *owners.iter().find(|(_, v)| owners.iter().filter(|(_, w)| w == v).count() == 1).unwrap();
    let other = members[e].iter().find(|&&w| w != v).unwrap();
    let bad = o.replace(&format!("o {e} {v}\n"), &format!("o {e} {other}\n"));
    assert_ne!(bad, o);
    let out = hallkit(&["verify"], &bad);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(&format!("vertex {v}: no outgoing edge")), "{text}");
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let g = stdout(&hallkit(&["gen", "-n", "2000", "-d", "8", "-r", "3", "--seed", "11"], ""));
    let s = stdout(&hallkit(&["gen", "--simple", "random-delta", "-n", "400", "-d", "24", "--seed", "11"], ""));
    let runs: Vec<(String, String, String, serde_json::Value)> = ["1", "2", "4"]
        .iter()
        .map(|t| {
            let o = stdout(&hallkit(&["--threads", t, "hso", "--local"], &g));
            let sp = stdout(&hallkit(&["--threads", t, "split"], &g));
            let c = hallkit(&["--threads", t, "--json", "color", "--mode", "eps", "--eps", "0.5"], &s);
            let rep = report_of(&c.stderr);
            (o, sp, stdout(&c), rep)
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn petersen_palette() {
    let g = stdout(&hallkit(&["gen", "--simple", "petersen"], ""));
    let out = hallkit(&["--json", "color", "--mode", "3half"], &g);
    let rep = report_of(&out.stderr);
    assert!(out.status.success());
    assert!(rep["palette"].as_u64().unwrap() <= 4);
    assert_eq!(rep["ok"], true);
    let v = hallkit(&["verify"], &String::from_utf8(out.stdout).unwrap());
    assert!(v.status.success());
}

#[test]
fn seed_defaults_from_the_environment() {
    let flag = stdout(&hallkit(&["gen", "-n", "300", "--seed", "5"], ""));
    let env = Command::new(env!("CARGO_BIN_EXE_hallkit")).args(["gen", "-n", "300"]).env("HALLKIT_SEED", "5").output().unwrap();
    assert_eq!(String::from_utf8(env.stdout).unwrap(), flag);
    assert_ne!(stdout(&hallkit(&["gen", "-n", "300"], "")), flag);
}

#[test]
fn bad_input_exits_with_an_error() {
    let out = hallkit(&["hso"], "h 2 1\ne 0 0 7\n");
    assert_eq!(out.status.code(), Some(2));
    let out = hallkit(&["verify"], "h 2 1\nq\n");
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));
    let lb = stdout(&hallkit(&["gen", "--lowerbound", "-d", "2", "-n", "5"], ""));
    assert_eq!(hallkit(&["hso"], &lb).status.code(), Some(2));
}
