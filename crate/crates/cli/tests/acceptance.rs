//! Acceptance gate. One test per criterion; each prints a single
//! `ACCEPTANCE <n> <name>: PASS/FAIL` line. Every arithmetic comparison is
//! exact (integers and golden integers, zero tolerance); the only pinned
//! budgets are wall-clock ceilings, recorded as constants next to the
//! criteria that carry them.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weyltau::exponents::{
    dynkin_index_orbit, h2_quadratic, h2_tau2, torsion_bounds, verify_identities, ExponentReport,
};
use weyltau::lattice::{
    det, hnf, invariant_lattice, quotient_exponent, snf, IntLattice, IntMat,
};
use weyltau::phi::{
    phi_component, phi_component_of_exp, phi_rho, phi_rho_closed_form, GroupRingElement,
};
use weyltau::rootsys::{Family, RootSystem, RootSystemKind, DEFAULT_ORBIT_CAP};
use weyltau::scalar::{gcd_int, GoldenInt, Int};
use weyltau::verify::{run_checks, VerifyOptions};

/// Criterion 1: the full report scope must finish inside this ceiling.
const TABLE_BUDGET: Duration = Duration::from_secs(600);
/// Criterion 3: the golden-ratio case is a sub-second computation.
const H2_BUDGET: Duration = Duration::from_secs(1);
/// Criterion 4: all four image routes across every rank <= 4 type.
const ROUTE_BUDGET: Duration = Duration::from_secs(120);

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn criterion<F>(n: u32, name: &str, body: F)
where
    F: FnOnce() -> Result<String, String>,
{
    match body() {
        Ok(detail) => println!("ACCEPTANCE {n} {name}: PASS ({detail})"),
        Err(e) => {
            println!("ACCEPTANCE {n} {name}: FAIL ({e})");
            panic!("acceptance criterion {n} ({name}) failed: {e}");
        }
    }
}

fn bin_output(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_weyltau"))
        .env_remove("WEYLTAU_CACHE_DIR")
        .args(args)
        .output()
        .map_err(|e| format!("binary did not start: {e}"))?;
    if !out.status.success() {
        return Err(format!(
            "weyltau {args:?} exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    String::from_utf8(out.stdout).map_err(|e| format!("stdout not utf8: {e}"))
}

fn build(family: Family, rank: usize) -> RootSystem<Int> {
    RootSystem::build(RootSystemKind::new(family, rank).expect("admissible"))
        .expect("buildable")
}

fn rank_le4_kinds() -> Vec<(Family, usize)> {
    let mut v: Vec<(Family, usize)> = (1..=4).map(|n| (Family::A, n)).collect();
    v.extend((2..=4).map(|n| (Family::B, n)));
    v.extend((2..=4).map(|n| (Family::C, n)));
    v.push((Family::D, 4));
    v.push((Family::G, 2));
    v.push((Family::F, 4));
    v
}

fn expected_tau2(kind: &str) -> i64 {
    match kind {
        "B3" | "B4" | "D4" | "G2" => 2,
        "F4" | "E6" => 6,
        _ => 1,
    }
}

#[test]
fn c1_exponent_table_values() {
    criterion(1, "exponent table", || {
        let started = Instant::now();
        let out = bin_output(&["exponents", "--format", "json"])?;
        let elapsed = started.elapsed();
        ensure!(
            elapsed < TABLE_BUDGET,
            "scope took {elapsed:?}, budget {TABLE_BUDGET:?}"
        );

        let reports: Vec<ExponentReport> = out
            .lines()
            .map(|l| serde_json::from_str(l).map_err(|e| format!("bad report line: {e}")))
            .collect::<Result<_, _>>()?;
        let kinds: Vec<&str> = reports.iter().map(|r| r.kind.as_str()).collect();
        ensure!(
            kinds
                == [
                    "A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "C2", "C3", "C4", "D4",
                    "G2", "F4", "E6"
                ],
            "unexpected scope {kinds:?}"
        );

        for r in &reports {
            let t2 = &r.tau[&2];
            ensure!(
                t2 == &r.tau[&3] && t2 == &r.tau[&4],
                "{}: tau chain {:?} not constant from degree 2",
                r.kind,
                r.tau
            );
            let want = Int::from(expected_tau2(&r.kind));
            ensure!(t2 == &want, "{}: tau_2 = {t2}, expected {want}", r.kind);
            if r.kind.starts_with('A') {
                ensure!(t2 == &Int::from(1), "{}: A-family tau_2 must be 1", r.kind);
            }
            ensure!(
                r.dynkin_gcd == want,
                "{}: index gcd {} disagrees with tau_2 {want}",
                r.kind,
                r.dynkin_gcd
            );
            // Ground truth: the gcd recomputed from raw orbit pairings, with
            // no shortcut through the quadratic invariant.
            let (family, rank) = (
                r.kind[..1].parse::<Family>().map_err(|e| e.to_string())?,
                r.kind[1..].parse::<usize>().map_err(|e| e.to_string())?,
            );
            let rs = build(family, rank);
            let mut oracle = Int::from(0);
            for j in 0..rank {
                let idx = dynkin_index_orbit(&rs, j, DEFAULT_ORBIT_CAP)
                    .map_err(|e| e.to_string())?;
                oracle = gcd_int(&oracle, &idx);
            }
            ensure!(
                oracle == want,
                "{}: orbit-oracle gcd {oracle}, expected {want}",
                r.kind
            );
        }
        Ok(format!("{} reports in {elapsed:?}", reports.len()))
    });
}

#[test]
fn c2_orthogonal_torsion_bounds() {
    criterion(2, "degree-4 torsion bounds", || {
        for (family, rank) in [(Family::B, 3), (Family::B, 4), (Family::D, 4)] {
            let rs = build(family, rank);
            let bounds =
                torsion_bounds(&rs, DEFAULT_ORBIT_CAP, None).map_err(|e| e.to_string())?;
            ensure!(
                bounds[&4] == Int::from(12),
                "{}: degree-4 bound {} != 12",
                rs.kind(),
                bounds[&4]
            );
            let line = bin_output(&[
                "torsion-bounds",
                "--kind",
                &family.to_string(),
                "--rank",
                &rank.to_string(),
            ])?;
            ensure!(
                line.contains("12 (deg 4)") && line.contains("CH⁴ bounds 72/8"),
                "{}: report text lacks the pinned constants: {line}",
                rs.kind()
            );
        }
        Ok("B3, B4, D4 all bound degree 4 by 12 with CH⁴ constants 72/8".into())
    });
}

#[test]
fn c3_golden_ratio_case() {
    criterion(3, "H2 over Z[tau]", || {
        let started = Instant::now();
        let out = bin_output(&["h2"])?;
        let elapsed = started.elapsed();
        ensure!(elapsed < H2_BUDGET, "took {elapsed:?}, budget {H2_BUDGET:?}");
        ensure!(
            out.contains("τ₂=-1+2*tau") && out.contains("is_sqrt5=true"),
            "unexpected h2 output: {out}"
        );

        let report = h2_tau2().map_err(|e| e.to_string())?;
        let sqrt5 = GoldenInt::from_pair(-1, 2);
        ensure!(
            report.tau2 == sqrt5.canonical_associate(),
            "tau_2 {} is not the canonical associate of 2*tau - 1",
            report.tau2
        );
        ensure!(report.is_sqrt5, "is_sqrt5 flag not set");

        let quad = h2_quadratic().map_err(|e| e.to_string())?;
        let got: Vec<GoldenInt> = quad.terms().map(|(_, c)| c.clone()).collect();
        let tau = GoldenInt::tau();
        let one = GoldenInt::from_pair(1, 0);
        let two = GoldenInt::from_pair(2, 0);
        let diag = one + tau.clone() * tau.clone();
        let mid = -(two * tau.clone() + tau.clone() * tau);
        let want = vec![diag.clone(), mid, diag];
        ensure!(
            got == want,
            "quadratic coefficients {got:?}, expected {want:?}"
        );
        Ok(format!("tau_2 = {} in {elapsed:?}", report.tau2))
    });
}

#[test]
fn c4_image_map_route_agreement() {
    criterion(4, "four image routes", || {
        let started = Instant::now();
        let mut cases = 0usize;
        for (family, rank) in rank_le4_kinds() {
            let rs = build(family, rank);
            for j in 0..rank {
                let chi = rs.fundamental_weight(j);
                let sum = GroupRingElement::orbit_sum(&rs, &chi, DEFAULT_ORBIT_CAP)
                    .map_err(|e| e.to_string())?;
                let orbit = rs.orbit(&chi, DEFAULT_ORBIT_CAP).map_err(|e| e.to_string())?;
                for i in 2..=4 {
                    let series = phi_component(&sum, i);
                    let mut universal = weyltau::polyring::SparsePoly::zero(rank);
                    for w in &orbit {
                        let term = phi_component_of_exp(w.coords(), i)
                            .map_err(|e| e.to_string())?;
                        universal = universal.add(&term);
                    }
                    let closed = phi_rho_closed_form(&rs, &chi, i, DEFAULT_ORBIT_CAP)
                        .map_err(|e| e.to_string())?;
                    let streamed =
                        phi_rho(&rs, &chi, i, DEFAULT_ORBIT_CAP).map_err(|e| e.to_string())?;
                    ensure!(
                        series == universal && series == closed && series == streamed,
                        "{} omega_{} degree {i}: routes disagree",
                        rs.kind(),
                        j + 1
                    );
                    cases += 1;
                }
            }
        }
        let elapsed = started.elapsed();
        ensure!(
            elapsed < ROUTE_BUDGET,
            "suite took {elapsed:?}, budget {ROUTE_BUDGET:?}"
        );
        Ok(format!("{cases} degree components agree in {elapsed:?}"))
    });
}

#[test]
fn c5_orbit_identity_suite() {
    criterion(5, "orbit identities", || {
        for n in [3, 4, 5] {
            let r = verify_identities(&build(Family::A, n), DEFAULT_ORBIT_CAP)
                .map_err(|e| e.to_string())?;
            ensure!(r.holds, "A{n} quartic relation: diff {}", r.diff);
        }
        for (family, ranks) in [(Family::B, 2..=4), (Family::C, 2..=4), (Family::D, 4..=4)] {
            for n in ranks {
                let r = verify_identities(&build(family, n), DEFAULT_ORBIT_CAP)
                    .map_err(|e| e.to_string())?;
                ensure!(r.holds, "{}{n} quartic relation: diff {}", family, r.diff);
            }
        }
        let degeneration = verify_identities(&build(Family::A, 2), DEFAULT_ORBIT_CAP)
            .map_err(|e| e.to_string())?;
        ensure!(
            degeneration.holds,
            "A2 degeneration: diff {}",
            degeneration.diff
        );

        let checks = run_checks(&VerifyOptions::default()).map_err(|e| e.to_string())?;
        let find = |name: &str| {
            checks
                .iter()
                .find(|c| c.name == name)
                .ok_or_else(|| format!("check {name} missing"))
        };
        let rest4 = find("rest4")?;
        ensure!(
            rest4.passed && rest4.cases == 11 * 500 * 4,
            "rest4: passed={} cases={}",
            rest4.passed,
            rest4.cases
        );
        let twl = find("twlambda")?;
        ensure!(
            twl.passed && twl.cases == 152,
            "twlambda: passed={} cases={}",
            twl.passed,
            twl.cases
        );
        Ok(format!(
            "quartic identities on 10 types; {} multiset cases; {} vanishing sums",
            rest4.cases, twl.cases
        ))
    });
}

/// All k-subsets of 0..n in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for mut rest in subsets(n, k - 1) {
            if rest.iter().all(|&x| x > first) {
                let mut s = vec![first];
                s.append(&mut rest);
                out.push(s);
            }
        }
    }
    out
}

fn minor_gcd(m: &IntMat, k: usize) -> Int {
    let mut g = Int::from(0);
    for rows in subsets(m.nrows(), k) {
        for cols in subsets(m.ncols(), k) {
            let sub = IntMat::from_rows(
                rows.iter()
                    .map(|&r| cols.iter().map(|&c| m.at(r, c).clone()).collect())
                    .collect(),
            );
            g = gcd_int(&g, &det(&sub));
        }
    }
    g
}

fn random_mat(rng: &mut ChaCha8Rng) -> IntMat {
    IntMat::from_rows(
        (0..3)
            .map(|_| (0..3).map(|_| Int::from(rng.gen_range(-9..=9i64))).collect())
            .collect(),
    )
}

fn is_unit(d: &Int) -> bool {
    *d == Int::from(1) || *d == Int::from(-1)
}

#[test]
fn c6_integer_lattice_oracles() {
    criterion(6, "normal form and quotient oracles", || {
        let mut rng = ChaCha8Rng::seed_from_u64(901);
        for trial in 0..200 {
            let m = random_mat(&mut rng);

            let (d, u, v) = snf(&m);
            ensure!(
                u.mul(&m).mul(&v) == d,
                "trial {trial}: U*M*V is not the diagonal form"
            );
            ensure!(
                is_unit(&det(&u)) && is_unit(&det(&v)),
                "trial {trial}: transforms are not unimodular"
            );
            let mut prev = Int::from(1);
            for k in 1..=3usize {
                let dk = minor_gcd(&m, k);
                let diag = d.at(k - 1, k - 1).clone();
                let expected = if dk == Int::from(0) {
                    Int::from(0)
                } else {
                    &dk / &prev
                };
                ensure!(
                    diag == expected || diag == -expected.clone(),
                    "trial {trial}: diagonal {k} is {diag}, determinantal ratio {expected}"
                );
                if dk == Int::from(0) {
                    break;
                }
                prev = dk;
            }

            let (h, w) = hnf(&m);
            ensure!(w.mul(&m) == h, "trial {trial}: W*M != H");
            ensure!(is_unit(&det(&w)), "trial {trial}: H transform not unimodular");
            let mut last_pivot: Option<usize> = None;
            let mut seen_zero_row = false;
            for r in 0..3 {
                let pivot = (0..3).find(|&c| h.at(r, c) != &Int::from(0));
                match pivot {
                    None => seen_zero_row = true,
                    Some(c) => {
                        ensure!(!seen_zero_row, "trial {trial}: zero row above a nonzero row");
                        ensure!(
                            h.at(r, c) > &Int::from(0),
                            "trial {trial}: pivot not positive"
                        );
                        ensure!(
                            last_pivot.map_or(true, |p| c > p),
                            "trial {trial}: pivot columns not increasing"
                        );
                        for above in 0..r {
                            let e = h.at(above, c);
                            ensure!(
                                e >= &Int::from(0) && e < h.at(r, c),
                                "trial {trial}: entry above pivot not reduced"
                            );
                        }
                        last_pivot = Some(c);
                    }
                }
            }
        }

        let scales = [1i64, 2, 3, 5, 6, 10, 15, 30];
        let mut nontrivial = 0usize;
        for trial in 0..100 {
            let rows: Vec<Vec<Int>> = (0..rng.gen_range(1..=3usize))
                .map(|_| (0..3).map(|_| Int::from(rng.gen_range(-9..=9i64))).collect())
                .collect();
            let m = IntLattice::from_generators(3, rows.clone());
            let scaled: Vec<Vec<Int>> = rows
                .iter()
                .map(|r| {
                    let d = Int::from(scales[rng.gen_range(0..scales.len())]);
                    r.iter().map(|x| x * &d).collect()
                })
                .collect();
            let l = IntLattice::from_generators(3, scaled);

            let computed = quotient_exponent(&m, &l).map_err(|e| e.to_string())?;
            let brute = (1..=30i64).map(Int::from).find(|n| {
                m.basis()
                    .rows()
                    .all(|row| l.contains(&row.iter().map(|x| x * n).collect::<Vec<_>>()))
            });
            ensure!(
                brute.as_ref() == Some(&computed),
                "trial {trial}: quotient exponent {computed} but brute search found {brute:?}"
            );
            if computed > Int::from(1) {
                nontrivial += 1;
            }
        }
        ensure!(
            nontrivial > 20,
            "only {nontrivial} nontrivial quotients; the sample is too easy"
        );
        Ok(format!(
            "200 normal-form trials, 100 quotient trials ({nontrivial} nontrivial)"
        ))
    });
}

#[test]
fn c7_report_structural_invariants() {
    criterion(7, "structural invariants", || {
        let out = bin_output(&["exponents", "--format", "json"])?;
        let reports: Vec<ExponentReport> = out
            .lines()
            .map(|l| serde_json::from_str(l).map_err(|e| format!("bad report line: {e}")))
            .collect::<Result<_, _>>()?;
        ensure!(reports.len() == 15, "expected 15 reports, got {}", reports.len());
        for r in &reports {
            ensure!(
                r.tau[&0] == Int::from(1) && r.tau[&1] == Int::from(1),
                "{}: tau_0, tau_1 = {}, {}",
                r.kind,
                r.tau[&0],
                r.tau[&1]
            );
            for i in 0..=3u32 {
                let rem = r.tau[&(i + 1)].clone() % r.tau[&i].clone();
                ensure!(
                    rem == Int::from(0),
                    "{}: tau_{} does not divide tau_{}",
                    r.kind,
                    i,
                    i + 1
                );
            }
        }

        let mut scope = rank_le4_kinds();
        scope.push((Family::A, 5));
        scope.push((Family::E, 6));
        for (family, rank) in scope {
            let rs = build(family, rank);
            let quad = invariant_lattice(&rs, 2);
            ensure!(
                quad.rank() == 1,
                "{}: quadratic invariants have rank {}",
                rs.kind(),
                quad.rank()
            );
            if family != Family::A {
                let cubic = invariant_lattice(&rs, 3);
                ensure!(
                    cubic.rank() == 0,
                    "{}: cubic invariants have rank {}",
                    rs.kind(),
                    cubic.rank()
                );
            }
        }
        Ok("tau chain and invariant ranks hold on all 15 reports".into())
    });
}

/// Not part of the gate: the two large exceptional types, checked only
/// through the streaming index oracle. Run with `--ignored`.
#[test]
#[ignore = "enumerates orbits with hundreds of thousands of weights"]
fn extended_large_exceptional_indices() {
    for (rank, expected) in [(7usize, 12i64), (8, 60)] {
        let rs = build(Family::E, rank);
        let mut gcd = Int::from(0);
        for j in 0..rank {
            let idx = dynkin_index_orbit(&rs, j, DEFAULT_ORBIT_CAP).unwrap();
            gcd = gcd_int(&gcd, &idx);
        }
        assert_eq!(gcd, Int::from(expected), "E{rank} fundamental index gcd");
        println!("EXTENDED E{rank} index gcd: PASS ({gcd})");
    }
}
