use std::process::{Command, Output};

fn pfq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn eval_exponential() {
    let o = pfq(&["eval", "--num", "2.5", "--den", "2.5", "--x", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2.71828182845904523536028747"), "{}", stdout(&o));
}

#[test]
fn eval_logarithm_closed_form() {
    let o = pfq(&["eval", "--num", "1,1", "--den", "2", "--x", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1.38629436111989061883"));
}

#[test]
fn eval_divergent_class_is_input_error() {
    let o = pfq(&["eval", "--num", "1,2,3", "--den", "1.5", "--x", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("diverges"));
}

#[test]
fn eval_outside_unit_disk() {
    let o = pfq(&["eval", "--num", "1,1", "--den", "2", "--x", "1.2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("|x| < 1"));
}

#[test]
fn eval_nonconvergence_exit_code() {
    let o = pfq(&["eval", "--num", "1", "--den", "1.5", "--x", "-30", "--max-order", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn eval_routes_agree() {
    let value = |via: &str, num: &str, den: &str, x: &str| {
        let o = pfq(&["eval", "--num", num, "--den", den, "--x", x, "--via", via, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{via}: {}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v["value"][0].to_string().parse::<f64>().unwrap()
    };
    let direct = value("direct", "0.9,1.3", "2.1", "0.5");
    assert!((value("laplace-integral", "0.9,1.3", "2.1", "0.5") - direct).abs() < 1e-14);
    let direct = value("direct", "1.1,1.5", "1.9,2.5", "0.7");
    assert!((value("euler-integral", "1.1,1.5", "1.9,2.5", "0.7") - direct).abs() < 1e-14);
    assert!((value("kummer", "1.1,1.5", "1.9,2.5", "0.7") - direct).abs() < 1e-14);
    let direct = value("direct", "0.9,1.3,0.7", "2.1,1.8", "0.4");
    assert!((value("euler-transform", "0.9,1.3,0.7", "2.1,1.8", "0.4") - direct).abs() < 1e-14);
}

#[test]
fn eval_complex_parameters() {
    let o = pfq(&["eval", "--num", "0.5:0.25", "--den", "1.5:-0.5", "--x", "-0.3,0.2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn check_t1_at_zero_x() {
    let o = pfq(&["check", "--theorem", "t1", "--p", "1", "--num", "1.3", "--den", "2.1", "--x", "0", "--y", "0.7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn check_t3_classical_kummer() {
    let o = pfq(&["check", "--theorem", "t3", "--p", "1", "--num", "1.5,0.7", "--den", "1.5,1.9", "--x", "-3.5"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn check_t2_gate() {
    let args = ["check", "--theorem", "t2", "--num", "0.9,1.3", "--den", "2.1", "--x", "0.2", "--y", "0.3"];
    let o = pfq(&args);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("|y| < |x|"), "{}", stderr(&o));

    let mut relaxed = args.to_vec();
    relaxed.push("--relaxed-domain");
    let o = pfq(&relaxed);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("experimental"));
}

#[test]
fn check_failure_exit_code() {
    // a tolerance below what the arithmetic can deliver must fail, not pass
    let o = pfq(&["check", "--theorem", "t3", "--num", "1.2,0.8", "--den", "2.3,1.7", "--x", "1.9", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn check_json_report() {
    let o = pfq(&[
        "check",
        "--theorem",
        "t4",
        "--num",
        "0.9,1.3,0.7",
        "--den",
        "2.1,1.8",
        "--x",
        "0.4",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["p"], 1);
    assert!(v["parameters"]["a0"].is_array());
}

#[test]
fn check_input_errors() {
    let o = pfq(&["check", "--theorem", "t1", "--num", "1.3", "--den", "2.1", "--x", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--y"));
    let o = pfq(&["check", "--theorem", "t3", "--p", "2", "--num", "1,2", "--den", "3,4", "--x", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = pfq(&["check", "--theorem", "t9", "--num", "1", "--den", "2", "--x", "0.1", "--y", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = pfq(&["check", "--theorem", "t3", "--num", "1,2", "--den", "-3,4", "--x", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic_across_threads() {
    let run = |threads: &str| {
        let o = pfq(&["sweep", "--theorem", "t1", "--p", "1,2", "--draws", "12", "--seed", "42", "--threads", threads]);
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    let one = run("1");
    assert_eq!(one, run("1"));
    assert_eq!(one, run("3"));
    let v: serde_json::Value = serde_json::from_slice(&one).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 12);
    assert_eq!(v["summary"]["passed"], 12);
}

#[test]
fn sweep_formats() {
    let o = pfq(&["sweep", "--theorem", "t3", "--draws", "3", "--seed", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("theorem,draw_index,p,parameters,x,y,lhs,rhs,"));
    assert_eq!(out.lines().count(), 4);
    let o = pfq(&["sweep", "--theorem", "t4", "--draws", "3", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3 draws, 3 passed"));
}

#[test]
fn sweep_failure_exit_code() {
    let o = pfq(&["sweep", "--theorem", "t3", "--draws", "2", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_relaxed_t2_flags_experimental_draws() {
    let o = pfq(&[
        "sweep",
        "--theorem",
        "t2",
        "--p",
        "1,2",
        "--draws",
        "20",
        "--seed",
        "3",
        "--relaxed-domain",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["summary"]["experimental"].as_u64().unwrap() > 0);
}

#[test]
fn sweep_config_file() {
    let dir = std::env::temp_dir().join(format!("pfq-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.cfg");
    std::fs::write(
        &path,
        "# T4 sweep\ntheorem = t4\np = 1,2\ndraws = 4\nseed = 11\nslot-box = a0=0.5,1.5,0,0\nformat = json\n",
    )
    .unwrap();
    let path = path.to_str().unwrap();
    let o = pfq(&["sweep", "--config", path]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let from_flags = pfq(&[
        "sweep",
        "--theorem",
        "t4",
        "--p",
        "1,2",
        "--draws",
        "4",
        "--seed",
        "11",
        "--slot-box",
        "a0=0.5,1.5,0,0",
    ]);
    assert_eq!(o.stdout, from_flags.stdout);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for r in v["records"].as_array().unwrap() {
        let a0 = r["parameters"]["a0"][0].to_string().parse::<f64>().unwrap();
        assert!((0.5..=1.5).contains(&a0));
    }
    // command-line flags override the file
    let o = pfq(&["sweep", "--config", path, "--draws", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 2);

    std::fs::write(dir.join("bad.cfg"), "theorem = t1\nno-such-flag = 3\n").unwrap();
    let o = pfq(&["sweep", "--config", dir.join("bad.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn rules_subcommand() {
    let o = pfq(&["rules", "--kind", "legendre_01", "--order", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2.1132486540518711774542560974"));
    let o = pfq(&["rules", "--kind", "laguerre_0inf", "--order", "20", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 20);
    let o = pfq(&["rules", "--order", "1000"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(pfq(&["eval", "--num", "1"]).status.code(), Some(2));
    assert_eq!(pfq(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pfq(&["--help"]).status.code(), Some(0));
}
