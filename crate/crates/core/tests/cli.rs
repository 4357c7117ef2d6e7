use std::path::PathBuf;
use std::process::{Command, Output};

const HEADER: &str = "scheme,metric,x_name,x_value,analytic,asymptotic,mc_estimate,std_err,trials,seed,status";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relay-secrecy")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("relay-secrecy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn analytic_prints_csv() {
    let out = run(&["analytic", "--scheme", "DT,DMC"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("DT,SOP,anchor_snr_db,1e1,"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["analytic", "--scheme", "XYZ"]).status.code(), Some(2));
    assert_eq!(run(&["figure", "7"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(run(&["analytic", "--mode", "fast"]).status.code(), Some(2));

    let unknown = scratch("unknown.toml");
    std::fs::write(&unknown, "bogus = 1\n").unwrap();
    assert_eq!(run(&["--config", unknown.to_str().unwrap(), "analytic"]).status.code(), Some(2));
    assert_eq!(run(&["--config", "/nonexistent/cfg.toml", "analytic"]).status.code(), Some(2));

    // identical eavesdropper means make the selection-minimum laws degenerate
    let singular = scratch("singular.toml");
    std::fs::write(&singular, "eps_tilde = 1.0\n").unwrap();
    assert_eq!(run(&["--config", singular.to_str().unwrap(), "analytic"]).status.code(), Some(3));

    assert_eq!(run(&["simulate", "--cardinality", "5", "--trials", "2000"]).status.code(), Some(4));
}

#[test]
fn sweep_is_reproducible_and_plots() {
    let a = scratch("a.csv");
    let b = scratch("b.csv");
    let args = |p: &PathBuf| {
        vec![
            "sweep".to_string(),
            "--grid".into(),
            "0:20:10".into(),
            "--metric".into(),
            "both".into(),
            "--trials".into(),
            "20000".into(),
            "--seed".into(),
            "9".into(),
            "--out".into(),
            p.to_str().unwrap().into(),
            "--plot".into(),
        ]
    };
    for p in [&a, &b] {
        let out = Command::new(env!("CARGO_BIN_EXE_relay-secrecy")).args(args(p)).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 9 * 2);
    assert!(text.lines().skip(1).all(|l| l.split(',').count() == 11 && l.ends_with(",ok")));
    assert!(std::fs::read_to_string(a.with_extension("svg")).unwrap().starts_with("<svg"));
}

#[test]
fn plot_needs_out() {
    assert_eq!(run(&["analytic", "--plot"]).status.code(), Some(2));
}

#[test]
fn conditional_simulation_and_selfcheck() {
    let out = run(&["simulate", "--cardinality", "4", "--scheme", "DMC", "--trials", "50000", "--config", "/dev/null"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("DMC,SOP,cardinality,4e0,"));

    let out = run(&["selfcheck", "--trials", "20000"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().lines().all(|l| l.starts_with("PASS")));
}
