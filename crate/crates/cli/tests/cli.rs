use std::io::Write;
use std::process::{Command, Output, Stdio};

fn nlmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlmc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

const AND2: &str = "INPUTS 2\nw3 = AND w1 w2\nOUTPUT w3\n";
const XOR2: &str = "INPUTS 2\nw3 = XOR w1 w2\nOUTPUT w3\n";

#[test]
fn nl_inline_and_circuit() {
    let o = nlmc(&["nl", "--tt", "0001", "-n", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "nl=1\na=00 c=0 agreements=3\n");
    assert!(stdout(&nlmc(&["nl", "--tt", "0110"])).starts_with("nl=0\n"));
    let f = file(AND2);
    let o = nlmc(&["nl", "-i", f.path().to_str().unwrap(), "--paranoid"]);
    assert_eq!(stdout(&o), "nl=1\na=00 c=0 agreements=3\nbruteforce=1 match=true\n");
}

#[test]
fn nl_table_file_and_stdin() {
    let f = file("n:2 tt:0001\nn:3 tt:96\n");
    let o = nlmc(&["nl", "--json", "-i", f.path().to_str().unwrap()]);
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["nl"], 1);
    assert_eq!(lines[1]["nl"], 0);

    let mut child = Command::new(env!("CARGO_BIN_EXE_nlmc"))
        .args(["nl", "-i", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(XOR2.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(stdout(&o).starts_with("nl=0\n"));
}

#[test]
fn mc_values() {
    assert!(stdout(&nlmc(&["mc", "--tt", "0001"])).starts_with("mc=1\n"));
    assert!(stdout(&nlmc(&["mc", "--tt", "0110"])).starts_with("mc=0\n"));
    // majority of three is a quadratic of rank two
    assert!(stdout(&nlmc(&["mc", "--tt", "00010111"])).starts_with("mc=1\n"));
    assert!(stdout(&nlmc(&["mc", "--tt", "00000001"])).starts_with("mc=2\n"));
    let o = nlmc(&["mc", "--tt", "0000000000000000000000000000000000000000000000000000000000000001"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mc_solver"));
}

#[test]
fn spectrum_lines() {
    let o = nlmc(&["spectrum", "--tt", "0001"]);
    assert_eq!(stdout(&o), "a=00 W=2\na=10 W=2\na=01 W=2\na=11 W=-2\n");
    assert!(nlmc(&["spectrum", "--tt", "0001", "--paranoid"]).status.success());
}

#[test]
fn affine_witness() {
    let f = file(AND2);
    let o = nlmc(&["affine", "-i", f.path().to_str().unwrap()]);
    assert_eq!(stdout(&o), "affine=false\nx=10 y=01\n");
    assert_eq!(stdout(&nlmc(&["affine", "--tt", "1001"])), "affine=true\n");
}

#[test]
fn reduce_satcount_and_tautology() {
    let f = file(XOR2);
    let o = nlmc(&["reduce", "satcount", "-i", f.path().to_str().unwrap(), "-t", "10"]);
    let out = stdout(&o);
    assert!(out.starts_with("INPUTS 12\n"));
    assert!(out.ends_with("nl=2 satcount=2 match=true\n"));
    let text: String = out.lines().take_while(|l| !l.starts_with("nl=")).map(|l| format!("{l}\n")).collect();
    let c: nlmc::Circuit = text.parse().unwrap();
    assert_eq!(c.n(), 12);

    let one = file("INPUTS 1\nw2 = ONE\nOUTPUT w2\n");
    let out = stdout(&nlmc(&["reduce", "tautology", "-i", one.path().to_str().unwrap()]));
    assert_eq!(out, "INPUTS 1\nw2 = ONE\nOUTPUT w2\ntautology=true affine=true match=true\n");
    let x1 = file("INPUTS 1\nOUTPUT w1\n");
    let out = stdout(&nlmc(&["reduce", "tautology", "-i", x1.path().to_str().unwrap()]));
    assert!(out.contains("AND w1 w2"));
    assert!(out.ends_with("tautology=false affine=false match=true\n"));
}

#[test]
fn census_output() {
    let out = stdout(&nlmc(&["census", "-s", "2"]));
    assert!(out.starts_with("s=2 total=16 distribution={0:8, 1:8}\n"));
    assert!(out.lines().skip(1).all(|l| l.ends_with("ok=true")));
    assert_eq!(stdout(&nlmc(&["census", "-s", "1"])).lines().next(), Some("s=1 total=4 distribution={0:4}"));
    let out = stdout(&nlmc(&["census", "-s", "3", "--k-max", "0"]));
    assert!(out.contains("k=0 count=16 cumulative=16 bound=16 ok=true"));
    assert_eq!(nlmc(&["census", "-s", "5"]).status.code(), Some(1));
}

#[test]
fn distinguish_reports() {
    let args = ["distinguish", "--json", "--trials", "40", "--seed", "9", "-s", "3", "--budget", "1"];
    let a = nlmc(&args);
    let b = nlmc(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["trials"], 40);
    assert!(v["census_expectation"].as_f64().unwrap() > 0.0);
    for key in ["n", "s", "budget", "freq_keyed", "freq_random", "advantage"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let v: serde_json::Value = serde_json::from_slice(&nlmc(&["distinguish", "--json", "--trials", "10"]).stdout).unwrap();
    assert_eq!(v["freq_keyed"], 0.0);
    assert_eq!(v["budget"], 4);
    // the budget exceeds every value in B_4
    assert_eq!(v["advantage"], 0.0);
    assert_eq!(nlmc(&["distinguish", "-s", "6"]).status.code(), Some(1));
}

#[test]
fn normalform_rebuild() {
    let f = file(AND2);
    let out = stdout(&nlmc(&["normalform", "-i", f.path().to_str().unwrap(), "--rebuild", "--paranoid"]));
    assert!(out.starts_with("NORMALFORM n=2 ands=1\n"));
    assert!(out.contains("INPUTS 2\n"));
    assert!(out.ends_with("match=true\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(nlmc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(nlmc(&["nl"]).status.code(), Some(2));
    assert_eq!(nlmc(&["nl", "--tt", "01x1"]).status.code(), Some(2));
    let bad = file("INPUTS 2\nw3 = AND w1 w4\nOUTPUT w3\n");
    assert_eq!(nlmc(&["nl", "-i", bad.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(nlmc(&["nl", "-i", "/nonexistent/file"]).status.code(), Some(2));
    let help = stdout(&nlmc(&["--help"]));
    assert!(help.contains("n ≤ 24") && help.contains("n ≤ 5") && help.contains("s ≤ 4"));
}
