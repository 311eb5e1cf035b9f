//! End-to-end checks of the binary: output shapes, exit codes, determinism,
//! and the golden table.

use std::process::{Command, Output};

use weyltau::exponents::{exponent_report, h2_quadratic, h2_tau2, ExponentReport, H2Report};
use weyltau::rootsys::{Family, RootSystem, RootSystemKind, DEFAULT_ORBIT_CAP};
use weyltau::verify::CheckResult;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_weyltau"));
    c.env_remove("WEYLTAU_CACHE_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "weyltau {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 stdout")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("terminated by exit")
}

#[test]
fn orbit_sizes_match_known_cases() {
    let a2 = run_ok(&["orbit", "A", "2", "1,0"]);
    assert_eq!(a2.lines().count(), 4);
    assert!(a2.ends_with("size 3\n"), "{a2}");

    let h2 = run_ok(&["orbit", "H2", "2", "1,0"]);
    assert!(h2.ends_with("size 5\n"), "{h2}");
    assert_eq!(h2.matches("tau").count(), 10, "two coordinates per weight");

    let spinor = run_ok(&["orbit", "B", "2", "0,1"]);
    assert!(spinor.ends_with("size 4\n"), "{spinor}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&["orbit", "Z", "2", "1,0"]), 2);
    assert_eq!(code(&["exponents", "--kind", "A", "--rank", "0"]), 2);
    assert_eq!(
        code(&["phi", "--kind", "A", "--rank", "2", "--weight", "1,0", "--max-degree", "7"]),
        2
    );
    assert_eq!(code(&["orbit", "A", "2"]), 2, "missing coords");
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["orbit", "A", "2", "1,0,0"]), 2, "wrong arity");
    assert_eq!(code(&["orbit", "A", "2", "1,x"]), 2, "bad literal");
}

#[test]
fn large_types_need_the_flag() {
    let out = run(&["exponents", "--kind", "A", "--rank", "20"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--allow-large"));
}

#[test]
fn verification_failures_exit_one() {
    let out = run(&["verify", "--inject-cartan-flip"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("check twlambda: FAIL"), "{stdout}");
    assert!(stdout.contains("check phi2: FAIL"), "{stdout}");
    assert!(stdout.contains("check rest4: pass"), "{stdout}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("checks failed"));

    // The golden ring stops at degree 2; asking past it is a failure, not a
    // usage error.
    assert_eq!(
        code(&["phi", "--kind", "H2", "--rank", "2", "--weight", "1,0", "--max-degree", "3"]),
        1
    );
}

#[test]
fn exponent_json_round_trips() {
    let line = run_ok(&["exponents", "--kind", "B", "--rank", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(line.trim()).expect("valid json");
    assert_eq!(v["schema"], 1);
    let parsed: ExponentReport = serde_json::from_str(line.trim()).expect("report shape");

    let rs = RootSystem::build(RootSystemKind::new(Family::B, 3).unwrap()).unwrap();
    let direct = exponent_report(&rs, DEFAULT_ORBIT_CAP, None, false).unwrap();
    assert_eq!(parsed, direct);

    let reserialized: ExponentReport =
        serde_json::from_str(&serde_json::to_string(&parsed).unwrap()).unwrap();
    assert_eq!(reserialized, parsed);
}

#[test]
fn h2_json_round_trips() {
    let line = run_ok(&["h2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["tau2"]["display"], "-1+2*tau");
    let parsed: H2Report = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(parsed, h2_tau2().unwrap());
    assert_eq!(v["quadratic"], h2_quadratic().unwrap().to_string());
}

#[test]
fn exponents_kind_h2_uses_the_golden_path() {
    let table = run_ok(&["exponents", "--kind", "H2"]);
    assert!(table.contains("H2: τ₂=-1+2*tau"), "{table}");
    let line = run_ok(&["exponents", "--kind", "H2", "--format", "json"]);
    let parsed: H2Report = serde_json::from_str(line.trim()).unwrap();
    assert!(parsed.is_sqrt5);
}

#[test]
fn verify_json_lines_parse_in_fixed_order() {
    let out = run_ok(&["verify", "--format", "json"]);
    let results: Vec<CheckResult> = out
        .lines()
        .map(|l| serde_json::from_str(l).expect("check line"))
        .collect();
    let names: Vec<&str> = results.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(
        names,
        ["twlambda", "rest4", "phi2", "phi3", "phi4", "canmap", "aneq", "ortheq"]
    );
    assert!(results.iter().all(|r| r.passed));
}

#[test]
fn worker_count_does_not_change_output_bytes() {
    let one = run_ok(&["exponents", "--format", "json", "--jobs", "1"]);
    let four = run_ok(&["exponents", "--format", "json", "--jobs", "4"]);
    assert_eq!(one, four);

    let t1 = run_ok(&["table", "--max-rank", "4", "--jobs", "1"]);
    let t3 = run_ok(&["table", "--max-rank", "4", "--jobs", "3"]);
    assert_eq!(t1, t3);
}

#[test]
fn golden_table_for_ranks_up_to_four() {
    let table = run_ok(&["table", "--max-rank", "4"]);
    assert_eq!(table, include_str!("golden/table_rank4.txt"));
}

#[test]
fn default_table_carries_the_headline_rows() {
    let table = run_ok(&["table"]);
    let lines: Vec<&str> = table.lines().collect();
    for expected in ["F4: τ₂=6", "B3: CH⁴ bounds 72/8", "A5: τ₂=τ₃=τ₄=1"] {
        assert!(lines.contains(&expected), "missing row {expected}");
    }
}

#[test]
fn seeded_verify_is_reproducible() {
    let a = run_ok(&["verify", "--seed", "11", "--format", "json"]);
    let b = run_ok(&["verify", "--seed", "11", "--format", "json"]);
    assert_eq!(a, b);
}

#[test]
fn cache_directory_is_written_and_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let args = ["phi", "--kind", "G", "--rank", "2", "--weight", "1,0", "--cache-dir", path];
    let cold = run_ok(&args);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let warm = run_ok(&args);
    assert_eq!(cold, warm);
    let uncached = run_ok(&args[..7]);
    assert_eq!(cold, uncached);
}

#[test]
fn max_degree_filters_the_report() {
    let line = run_ok(&[
        "exponents", "--kind", "B", "--rank", "3", "--max-degree", "2", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(v["tau"]["2"], "2");
    assert!(v["tau"].get("3").is_none());
    assert!(v.get("ch4_constants").is_none());
    assert_eq!(v["torsion_bounds"], serde_json::json!({}));
}

#[test]
fn csv_headers_are_stable() {
    let csv = run_ok(&["exponents", "--kind", "A", "--rank", "2", "--format", "csv"]);
    assert!(csv.starts_with(
        "kind,rank,tau2,tau3,tau4,dynkin_gcd,torsion3,torsion4,ch4_full,ch4_two_primary\n"
    ));
    assert!(csv.contains("\nA2,2,1,1,1,1,2,6,,"));

    let orbit = run_ok(&["orbit", "A", "2", "1,0", "--format", "csv"]);
    assert!(orbit.starts_with("c1,c2\n"));
    assert_eq!(orbit.lines().count(), 4);
}
