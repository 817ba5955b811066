use std::process::{Command, Output};

use gcdsum_cli::run::{
    CONSTANTS_HEADER, ERROR_TERM_HEADER, IDENTITY_HEADER, MEAN_SQUARE_HEADER, TABULATE_HEADER,
};

fn gcdsum(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcdsum"))
        .args(args)
        .env("GCDSUM_THREADS", threads)
        .output()
        .expect("spawn gcdsum")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn every_command_prints_its_header() {
    let cases: [(&[&str], &str); 5] = [
        (&["verify-identity", "--f", "tau", "--x-max", "30"], IDENTITY_HEADER),
        (&["error-term", "--theorem", "K-id", "--x-max", "500"], ERROR_TERM_HEADER),
        (&["mean-square", "--theorem", "Lr", "--t-list", "100,1000", "--series-terms", "2000"], MEAN_SQUARE_HEADER),
        (&["constants", "--series-terms", "2000"], CONSTANTS_HEADER),
        (&["tabulate", "--f", "phi", "--table-limit", "12"], TABULATE_HEADER),
    ];
    for (args, header) in cases {
        let o = gcdsum(args, "2");
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        assert_eq!(text.lines().next(), Some(header), "{args:?}");
        let cols = header.split(',').count();
        assert!(text.lines().skip(1).all(|l| l.split(',').count() == cols));
    }
}

#[test]
fn tabulate_values() {
    let text = stdout(&gcdsum(&["tabulate", "--f", "phi", "--table-limit", "6"], "1"));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows, ["1,1/1,1/1", "2,1/1,2/1", "3,2/1,4/1", "4,2/1,6/1", "5,4/1,10/1", "6,2/1,12/1"]);
}

#[test]
fn binary_output_is_deterministic() {
    let args = ["error-term", "--theorem", "Th7(tau)", "--s", "2", "--a", "-0.4", "--x-max", "4000", "--samples", "80", "--seed", "5"];
    let a = gcdsum(&args, "1");
    let b = gcdsum(&args, "1");
    let c = gcdsum(&args, "8");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let other = gcdsum(&["error-term", "--theorem", "Th7(tau)", "--s", "2", "--a", "-0.4", "--x-max", "4000", "--samples", "80", "--seed", "6"], "1");
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("out.csv");
    std::fs::write(&cfg, format!("# identity run\nf = psi\nr = 3\nx_max = 40\noutput = {}\n", out.display())).unwrap();
    let o = gcdsum(&["verify-identity", "--config", cfg.to_str().unwrap(), "--x-max", "25"], "1");
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 26);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",0/1")));
}

#[test]
fn errors_exit_with_one() {
    let cases: [&[&str]; 6] = [
        &["error-term", "--theorem", "Th99"],
        &["error-term", "--theorem", "Th1", "--a", "0.4"],
        &["verify-identity"],
        &["mean-square", "--theorem", "Th3", "--a", "-0.5"],
        &["tabulate", "--f", "phi", "--bogus", "1"],
        &["constants", "--config", "/nonexistent/gcdsum.cfg"],
    ];
    for args in cases {
        let o = gcdsum(args, "1");
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(gcdsum(&["tabulate", "--f", "phi"], "zero").status.code(), Some(1));
    assert_eq!(gcdsum(&["--help"], "1").status.code(), Some(0));
}
