use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_certicone"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("CERTICONE_THREADS", t),
        None => cmd.env_remove("CERTICONE_THREADS"),
    };
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(out: &'a str, key: &str) -> Option<&'a str> {
    out.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix(' '))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn lower_bound_of_a_tiny_lp() {
    let dir = tempfile::tempdir().unwrap();
    let prob = dir.path().join("p.conic");
    let sol = dir.path().join("y.sol");
    // min x1 + 2 x2 s.t. x1 + x2 = 1, x >= 0.
    fs::write(&prob, "conic v1\nlin 2\nm 1\nb 1\nc l 1 1\nc l 2 2\na 1 l 1 1\na 1 l 2 1\n").unwrap();
    fs::write(&sol, "solution v1\ny 1\n").unwrap();
    let o = run(&["lower", "--problem", p(&prob), "--dual-approx", p(&sol)], None);
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{s}");
    assert_eq!(value(&s, "lower_bound"), Some("1"));
    assert_eq!(value(&s, "dual_feasible"), Some("proved"));
    assert_eq!(value(&s, "lower_bound_hex"), Some("0x1p+0"));
}

#[test]
fn upper_bound_without_caps_is_infinite() {
    let dir = tempfile::tempdir().unwrap();
    let prob = dir.path().join("p.conic");
    let sol = dir.path().join("x.sol");
    fs::write(&prob, "conic v1\nlin 2\nm 1\nb 1\nc l 1 1\nc l 2 2\na 1 l 1 1\na 1 l 2 1\n").unwrap();
    fs::write(&sol, "solution v1\nx l 1 0.999999\n").unwrap();
    let o = run(&["upper", "--problem", p(&prob), "--primal-approx", p(&sol)], None);
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(2), "{s}");
    assert_eq!(value(&s, "upper_bound"), Some("inf"));
    assert_eq!(value(&s, "primal_feasible"), Some("unproved"));
    fs::write(&sol, "solution v1\nx l 1 0.999999\nybar * 10\n").unwrap();
    let o = run(&["upper", "--problem", p(&prob), "--primal-approx", p(&sol)], None);
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{s}");
    let v: f64 = value(&s, "upper_bound").unwrap().parse().unwrap();
    assert!((1.0..1.0001).contains(&v), "{v}");
}

#[test]
fn generated_certificates_check() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(&["gen", "--spec", "sdp 3 | soc 4 | lin 5", "--seed", "7", "--kind", "primal-infeasible", "--out", p(d)], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let cert = d.join("c.cert");
    let prob = d.join("problem.conic");
    let o = run(&["certify-primal", "--problem", p(&prob), "--ray", p(&d.join("ray.sol")), "--out", p(&cert)], None);
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{s}");
    assert_eq!(value(&s, "verdict"), Some("certified"));
    let o = run(&["check", "--problem", p(&prob), "--certificate", p(&cert)], None);
    assert_eq!(value(&stdout(&o), "reverified"), Some("true"));
    assert_eq!(o.status.code(), Some(0));

    // A feasible instance: the optimal y is no ray.
    let o = run(&["gen", "--spec", "lin 4", "--seed", "3", "--out", p(d)], None);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["certify-primal", "--problem", p(&prob), "--ray", p(&d.join("solution.sol"))], None);
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(2), "{s}");
    assert_eq!(value(&s, "verdict"), Some("refused"));
}

#[test]
fn equicut_on_k4() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("k4.graph");
    fs::write(&g, "4\n1 2 1\n1 3 1\n1 4 1\n2 3 1\n2 4 1\n3 4 1\n").unwrap();
    let o = run(&["equicut", "--graph", p(&g)], None);
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{s}");
    assert_eq!(value(&s, "upper_bound"), Some("4"));
    assert_eq!(value(&s, "upper_is_optimum"), Some("true"));
    let lo: f64 = value(&s, "lower_bound").unwrap().parse().unwrap();
    assert!(lo <= 4.0);
}

#[test]
fn usage_and_input_errors_exit_one() {
    assert_eq!(run(&["lower"], None).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(1));
    assert_eq!(run(&["--help"], None).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let prob = dir.path().join("bad.conic");
    fs::write(&prob, "conic v1\nlin 2\nm 1\nb x\n").unwrap();
    let o = run(&["lower", "--problem", p(&prob), "--dual-approx", p(&prob)], None);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.conic:4:3"), "{err}");
    let o = run(&["equicut", "--graph", p(&prob)], Some("0"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_does_not_depend_on_threads() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(&["gen", "--spec", "sdp 6 5 | soc 3 | lin 4", "--seed", "11", "--out", p(d)], None);
    assert_eq!(o.status.code(), Some(0));
    let prob = d.join("problem.conic");
    let sol = d.join("solution.sol");
    let caps = d.join("bounds.sol");
    let args = ["lower", "--problem", p(&prob), "--dual-approx", p(&sol), "--xbar", p(&caps)];
    let reference = run(&args, Some("1")).stdout;
    for t in [None, Some("2"), Some("8")] {
        assert_eq!(run(&args, t).stdout, reference);
    }
}
