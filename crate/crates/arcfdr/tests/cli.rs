use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn arcfdr(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_arcfdr"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

const EXAMPLE: [&str; 17] = [
    "simulate",
    "--procedures",
    "oe-bh,e-lond",
    "--mu-a",
    "3.5",
    "--pi-a",
    "0.1:0.9:0.1",
    "--n",
    "1000",
    "--m",
    "100",
    "--q",
    "0.99",
    "--alpha",
    "0.05",
    "--seed",
    "42",
];

#[test]
fn simulate_example_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let mut args: Vec<&str> = EXAMPLE.to_vec();
    args.extend(["--output", path_str(&a)]);
    assert!(arcfdr(&args, "").status.success());
    let mut args: Vec<&str> = EXAMPLE.to_vec();
    args.extend(["--output", path_str(&b), "--threads", "1"]);
    assert!(arcfdr(&args, "").status.success());
    let (a, b) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("procedure,pi_a,mu_a,q,alpha,metric,value,stderr,n,m,seed"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9 * 2 * 3);
    assert!(rows.iter().all(|r| r.ends_with(",1000,100,42")));
    assert_eq!(dir.path().read_dir().unwrap().count(), 2);
}

#[test]
fn all_procedures() {
    let o = arcfdr(&["simulate", "--procedures", "all", "--n", "40", "--m", "3", "--pi-a", "0.3,0.6"], "");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 1 + 15 * 2 * 3);
}

#[test]
fn simulate_errors() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.csv");
    let o = arcfdr(&["simulate", "--procedures", "oe-bh", "--n", "20", "--m", "3", "-o", path_str(&target)], "");
    assert!(!o.status.success());
    assert!(!target.exists());
    let o = arcfdr(&["simulate", "--procedures", "oe-bh", "--m", "1"], "");
    assert!(!o.status.success());
    assert!(!o.stderr.is_empty());
    let o = arcfdr(&["simulate", "--procedures", "nope"], "");
    assert!(!o.status.success());
    let o = arcfdr(&["simulate", "--procedures", "oe-bh", "--alpha", "1.5", "--n", "20", "--m", "3"], "");
    assert!(!o.status.success());
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# small run\nprocedures = oe-bh\nn = 30\nm = 4\npi-a = 0.5\nalpha = 0.1\nseed = 7\naudit = true\n")
        .unwrap();
    let o = arcfdr(&["simulate", "--config", path_str(&cfg), "--seed", "9"], "");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    for r in rows {
        let f: Vec<&str> = r.split(',').collect();
        assert_eq!((f[0], f[1], f[4], f[8], f[9], f[10]), ("oe-bh", "0.5", "0.1", "30", "4", "9"));
    }

    std::fs::write(&cfg, "stream-only = 3\n").unwrap();
    assert!(!arcfdr(&["simulate", "--config", path_str(&cfg)], "").status.success());
    std::fs::write(&cfg, "uniform = 2\nalpha = 0.1\nn = 5\n").unwrap();
    let o = arcfdr(&["stream", "--config", path_str(&cfg)], "40\n1\n");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("t=1 k*=1 rejected={1}"));
}

#[test]
fn stream_examples() {
    let o = arcfdr(&["stream", "--procedure", "oe-bh", "--alpha", "0.1", "--uniform", "2"], "40\n1\n");
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("t=1 k*=1 rejected={1}"));
    assert_eq!(lines[1], "t=2 k*=1 rejected={1}");

    let o = arcfdr(&["stream", "--uniform", "2"], "");
    assert!(o.status.success());
    assert!(o.stdout.is_empty());

    // Index 1 is accepted at t=1 and t=2 and joins at t=3.
    let o = arcfdr(&["stream", "--alpha", "0.1", "--uniform", "3"], "12\n40\n16\n");
    assert_eq!(stdout(&o), "t=1 k*=0 rejected={}\nt=2 k*=1 rejected={2} new={2}\nt=3 k*=3 rejected={1,2,3} new={1,3}\n");

    let o = arcfdr(&["stream", "--procedure", "obh", "--alpha", "0.1", "--uniform", "2"], "# p-values\n0.01\n0.5\n");
    assert_eq!(stdout(&o), "t=1 k*=1 rejected={1} new={1}\nt=2 k*=1 rejected={1}\n");
}

#[test]
fn stream_errors() {
    let o = arcfdr(&["stream", "--alpha", "0.1", "--uniform", "2"], "40\n4x\n1\n");
    assert!(!o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert!(!arcfdr(&["stream", "--procedure", "obh", "--uniform", "2"], "2\n").status.success());
    assert!(!arcfdr(&["stream", "--procedure", "boost-plus", "--uniform", "2"], "").status.success());
    assert!(!arcfdr(&["stream"], "").status.success());
}

#[test]
fn boost_factor_table() {
    let o = arcfdr(&["boost-factor"], "");
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<String>> =
        text.lines().skip(1).map(|l| l.split_whitespace().map(String::from).collect()).collect();
    assert_eq!(rows.len(), 12);
    for r in &rows {
        assert!(r[4].parse::<f64>().unwrap().abs() <= 1e-6);
    }
    let find = |v: &str, s: &str, lag: &str| -> f64 {
        rows.iter().find(|r| r[0] == v && r[1] == s && r[2] == lag).unwrap()[3].parse().unwrap()
    };
    let golden = [
        ("plus", "10", "-", 1.165, 0.005),
        ("plus", "100", "-", 1.174, 0.005),
        ("minus", "10", "-", 3.071, 0.01),
        ("minus", "100", "-", 1.73, 0.01),
        ("local-plus", "100", "2", 1.265, 0.01),
        ("local-plus", "100", "10", 1.541, 0.01),
        ("local-minus", "100", "2", 1.940, 0.01),
        ("local-minus", "100", "10", 2.639, 0.01),
    ];
    for (v, s, lag, want, tol) in golden {
        assert!((find(v, s, lag) - want).abs() <= tol, "{v} {s} {lag}");
    }

    let o = arcfdr(&["boost-factor", "--gamma", "0"], "");
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no boosting factor"));
}

#[test]
fn adversarial_table() {
    let o = arcfdr(&["adversarial", "--k0", "50", "--alpha", "0.1,0.01", "--m", "20"], "");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,k0,k,feasible,infeasible,mean_fdp,stderr,fdp_over_alpha");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.1,50,100,"));
}

#[test]
fn oracle_check_small() {
    let o = arcfdr(
        &["oracle-check", "--k", "5,20", "--instances", "50", "--simes-instances", "200", "--sup-instances", "20"],
        "",
    );
    assert!(o.status.success(), "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("offline K=20: 50 instances, mismatches e-BH 0 BH 0 Storey-BH 0"));
}
