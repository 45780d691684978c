use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_corrconc"))
        .args(args)
        .env_remove("CORRCONC_SEED")
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn table1_matches_golden() {
    for workers in ["1", "4"] {
        assert_eq!(run(&["table1", "--workers", workers]), golden("table1.csv"));
    }
}

#[test]
fn coverage_matches_golden() {
    for workers in ["1", "3"] {
        assert_eq!(
            run(&["coverage", "--format", "markdown", "--workers", workers]),
            golden("coverage.md")
        );
    }
}

#[test]
fn analytic_commands_match_golden() {
    assert_eq!(
        run(&["moments", "--rho", "0.56", "--n", "10", "--precision", "12"]),
        golden("moments.csv")
    );
    assert_eq!(
        run(&["bounds", "--rho", "0.56", "--n", "10", "--alpha", "0.05", "--format", "jsonl"]),
        golden("bounds.jsonl")
    );
    assert_eq!(
        run(&[
            "density",
            "--rho",
            "0.56",
            "--n",
            "10",
            "--points",
            "11",
            "--precision",
            "8"
        ]),
        golden("density.csv")
    );
}
