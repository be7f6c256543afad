use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bergman-hypo"))
        .args(args)
        .env("BERGMAN_HYPO_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_exit_codes_follow_the_verdict() {
    let proven = run(&["check", "z^2 zb + (1/7) z^3 zb^4", "--size", "64"]);
    assert_eq!(proven.status.code(), Some(0));
    assert!(stdout(&proven).contains("theorem: HypoCoHypo35"));

    let refuted = run(&["check", "z^2 zb - z^3 zb^2", "--size", "64"]);
    assert_eq!(refuted.status.code(), Some(1));
    assert!(stdout(&refuted).contains("violation at alpha = 2"));

    assert_eq!(run(&["check", "zb^3", "--size", "32"]).status.code(), Some(1));
}

#[test]
fn inconclusive_exits_two() {
    // No criterion covers an analytic plus radial pair, and an 8 x 8 section
    // has no negative eigenvalue.
    let o = run(&["check", "z^2 + (1/100) z zb", "--size", "8", "--max-section", "8"]);
    assert!(stdout(&o).contains("verdict: Inconclusive"), "{}", stdout(&o));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_64_with_position() {
    let o = run(&["check", "z^^2"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error at 2"));
    assert_eq!(run(&["check"]).status.code(), Some(64));
}

#[test]
fn json_check_report() {
    let o = run(&["check", "z^2 zb - z^3 zb^2", "--size", "32", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"]["tag"], "NotHyponormal");
    assert_eq!(v["verdict"]["violation_alpha"], 2);
    assert_eq!(v["symbol"], "z^2 zb - z^3 zb^2");
    assert!(v["routes"].as_array().unwrap().iter().any(|r| r["route"] == "mellin criterion"));
}

#[test]
fn matrix_csv_of_z() {
    let o = run(&["matrix", "z", "--size", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Vec<f64>> = stdout(&o)
        .lines()
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    let want = [1.0 / 2.0, 1.0 / 6.0, 1.0 / 12.0];
    for (j, row) in rows.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            let e = if j == k { want[j] } else { 0.0 };
            assert!((x - e).abs() < 1e-15, "({j},{k}) = {x}");
        }
    }
}

#[test]
fn construct_reports_j_and_symbol() {
    let o = run(&["construct", "--n", "1", "--delta", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("j = 4"), "{out}");
    assert!(out.contains("11/3"));
    assert!(out.contains("symbol: z^2 zb + (1/9) z^4 zb^5"));

    let csv = stdout(&run(&["construct", "--n", "1", "--delta", "1", "--format", "csv"]));
    assert_eq!(csv.lines().nth(1).unwrap(), "1,1,4,11/3,z^2 zb + (1/9) z^4 zb^5,ProvenHyponormal");
}

#[test]
fn mellin_rows_fail_from_two() {
    let o = run(&["mellin", "z^2 zb - z^3 zb^2", "--alpha-max", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "alpha,c_squared,lhs_sq,rhs_sq,holds");
    assert_eq!(lines[1], "1,1/3,1/1600,1/1728,true");
    assert_eq!(lines[2], "2,1/2,1/3600,1/3200,false");
    assert_eq!(lines.len(), 6);
}

#[test]
fn norm_of_z2_zb() {
    let o = run(&["norm", "z^2 zb", "--size", "60", "--grid", "64", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["norm"]["exact_sup"], "2/9");
    let h = v["norm"]["half_area_conjecture"].as_f64().unwrap();
    assert!((h - 0.5).abs() < 0.01);
}

#[test]
fn reproduce_items() {
    let o = run(&["reproduce", "ex3.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("-2.82842712475"));

    let o = run(&["reproduce", "thm5.1", "--size", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("m = 3, n = 0..2"));

    let o = run(&["reproduce", "mellin-counterexample", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);

    // The displayed numerator is not reproduced; the run says so and exits 1.
    let o = run(&["reproduce", "ex3.5-rational"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL] margin equals the published rational function"));

    assert_eq!(run(&["reproduce", "nope"]).status.code(), Some(3));
    assert!(stdout(&run(&["reproduce"])).contains("ex4.5"));
}

#[test]
fn precondition_errors_exit_three() {
    assert_eq!(run(&["construct", "--n", "0", "--delta", "1"]).status.code(), Some(3));
    assert_eq!(run(&["mellin", "z + zb^2"]).status.code(), Some(3));
}
