use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drinfeld")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn success_is_complete() {
    let out = run(&["torsion-test", "--lambda", "t+1", "--x", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["budget_status"], "complete");
    assert_eq!(v["command"], "torsion-test");
    assert_eq!(v["inputs"]["lambda"], "t+1");
    assert!(out.stdout.ends_with(b"}\n"));
}

#[test]
fn exhausted_budget_exits_two() {
    let out = run(&["--budget-iter", "0", "height", "--lambda", "t", "--x", "1/t"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["budget_status"], "exhausted");
    assert_eq!(v["result"]["exact"], false);
    assert_eq!(v["result"]["height"], "<=3/2");
}

#[test]
fn input_errors_exit_one() {
    for args in [
        &["height", "--lambda", "t+", "--x", "1"][..],
        &["height", "--lambda", "t", "--x", "1/0"],
        &["--p", "4", "height", "--lambda", "t", "--x", "1"],
        &["--family", "r=2;g2=z", "height", "--lambda", "t", "--x", "1"],
        &["local-height", "--lambda", "t", "--x", "1", "--place", "t^2+1"],
        &["capacity", "--c", "1", "--place", "inf"],
        &["bogus"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn csv_has_a_header() {
    let out = run(&["--format", "csv", "capacity", "--c", "z", "--place", "inf"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("key,value"));
    assert!(text.lines().any(|l| l == "result.capacity_log,0"));
    assert!(text.lines().any(|l| l == "budget_status,complete"));

    let out = run(&["--format", "csv", "sweep", "--c", "z", "--place", "inf"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("lambda,place,n,green,stabilized,membership"));
    assert!(text.lines().any(|l| l == "t,inf,2,1,true,out(0)"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
