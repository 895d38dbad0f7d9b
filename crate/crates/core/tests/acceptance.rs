//! Acceptance gate: one line per criterion, written straight to stderr so it
//! shows up in captured test output.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use theta_anomaly::algebra::GaussianRational;
use theta_anomaly::anomaly::{
    cross_check_report, divisibility_check, structural_report, verify_theorem, Corollary, DivisibilityStatus,
    Setting, SettingKind, Status, TheoremId, VerificationReport,
};
use theta_anomaly::modforms::{delta_eps, DeltaEps};
use theta_anomaly::qseries::{scalar_series, ScalarSeries};
use theta_anomaly::theta::jacobi_check;

const THETA_LAYER_LIMIT: Duration = Duration::from_secs(1);
const SPIN_CASE_LIMIT: Duration = Duration::from_secs(30);
const SPINC_CASE_LIMIT: Duration = Duration::from_secs(60);
const SUITE_LIMIT: Duration = Duration::from_secs(300);
/// Every identity is exact: residuals must be the zero polynomial or series.
const RESIDUAL_TOLERANCE: i64 = 0;

/// Criteria that fail as literally stated; the analysis is in the decisions
/// ledger. For these the gate checks that the failure is the documented one.
const KNOWN_UNATTAINABLE: [u32; 1] = [3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn report_line(n: u32, title: &str, o: &Outcome) {
    let line = format!(
        "criterion {n} [PRIMARY] {title}: {} ({})\n",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail
    );
    std::io::stderr().write_all(line.as_bytes()).unwrap();
}

fn check_named<'a>(r: &'a VerificationReport, name: &str) -> Option<&'a theta_anomaly::anomaly::Check> {
    r.checks.iter().find(|c| c.name == name)
}

fn all_integral(s: &ScalarSeries) -> bool {
    s.terms().all(|(_, c)| c.as_integer().is_some())
}

fn leading(s: &ScalarSeries, n: usize) -> Vec<(i64, GaussianRational)> {
    s.terms().take(n).map(|(k, c)| (k, c.clone())).collect()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let jacobi = jacobi_check(80);
    let d1 = delta_eps(DeltaEps::Delta1, 80);
    let e1 = delta_eps(DeltaEps::Eps1, 80);
    let d2 = delta_eps(DeltaEps::Delta2, 80);
    let e2 = delta_eps(DeltaEps::Eps2, 80);
    let q = |terms: &[(i64, i64, i64)]| {
        terms.iter().map(|&(k, n, d)| (k, GaussianRational::from_ratio(n, d))).collect::<Vec<_>>()
    };
    let leads = leading(&d1, 2) == q(&[(0, 1, 4), (8, 6, 1)])
        && leading(&e1, 2) == q(&[(0, 1, 16), (8, -1, 1)])
        && leading(&d2, 2) == q(&[(0, -1, 8), (4, -3, 1)])
        && leading(&e2, 1) == q(&[(4, 1, 1)]);
    let eight = GaussianRational::from_int(8);
    let sixteen = GaussianRational::from_int(16);
    let integral = all_integral(&d2.scale(&eight))
        && all_integral(&e2)
        && all_integral(&e1.scale(&sixteen))
        && all_integral(&(&d1 - &scalar_series(&[(0, 1)], 80).scale(&GaussianRational::from_ratio(1, 4))));
    let elapsed = t.elapsed();
    outcome(
        jacobi.is_zero() && leads && integral && elapsed < THETA_LAYER_LIMIT,
        format!(
            "jacobi zero through q^10: {}, leading terms: {leads}, integrality: {integral}, {:.3}s",
            jacobi.is_zero(),
            elapsed.as_secs_f64()
        ),
    )
}

/// Every check passes literally, except that an `h1_formula` check may pass
/// through its recorded sign variant.
fn spin_report_ok(r: &VerificationReport) -> bool {
    r.integral
        && r.checks.iter().all(|c| match c.status() {
            Status::Pass => true,
            Status::PassWithVariant => c.name == "h1_formula",
            _ => false,
        })
}

fn criterion_2() -> Outcome {
    let mut worst = Duration::ZERO;
    let mut failures = Vec::new();
    let mut cases = 0;
    for k in 1..=3 {
        for l in 1..=4 {
            let s = Setting::with_default_order(SettingKind::Spin4k, k, l).unwrap();
            let t = Instant::now();
            let r1 = verify_theorem(TheoremId::T3_1, &s).unwrap();
            let r2 = verify_theorem(TheoremId::T3_2, &s).unwrap();
            worst = worst.max(t.elapsed());
            cases += 1;
            let h1_ok = k < 2 || check_named(&r1, "h1_formula").is_some();
            if !(spin_report_ok(&r1) && spin_report_ok(&r2) && h1_ok) {
                failures.push(format!("k={k} l={l}"));
            }
        }
    }
    outcome(
        failures.is_empty() && worst < SPIN_CASE_LIMIT,
        format!("{cases} settings, failures: {failures:?}, slowest {:.3}s", worst.as_secs_f64()),
    )
}

/// Returns (literal statement holds everywhere, corrected form holds everywhere).
fn criterion_3() -> (Outcome, bool) {
    let mut literal = true;
    let mut variant = true;
    for (id, k) in [(TheoremId::C3_3, 2), (TheoremId::C3_4, 3)] {
        for l in 1..=4 {
            let s = Setting::with_default_order(SettingKind::Spin4k, k, l).unwrap();
            let r = verify_theorem(id, &s).unwrap();
            let c = check_named(&r, "corollary").expect("corollary check");
            literal &= c.residual.is_zero();
            variant &= c.variants.iter().any(|v| v.residual.is_zero());
        }
    }
    let detail = format!(
        "coefficients as printed hold: {literal}; with ch(T_C M) replaced by ch(Ṽ_C)+4k they hold: {variant}"
    );
    (outcome(literal, detail), variant)
}

fn grid() -> Vec<Setting> {
    let mut out = Vec::new();
    for k in 1..=3 {
        for l in 1..=4 {
            out.push(Setting::with_default_order(SettingKind::Spin4k, k, l).unwrap());
        }
    }
    for k in 1..=2 {
        for l in 1..=3 {
            out.push(Setting::with_default_order(SettingKind::Spinc4k, k, l).unwrap());
        }
    }
    for k in 1..=2 {
        for l in 1..=2 {
            out.push(Setting::with_default_order(SettingKind::Spinc4k2, k, l).unwrap());
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    let mut reduced_line = 0;
    for s in grid() {
        let r = cross_check_report(&s).unwrap();
        for c in &r.checks {
            match c.status() {
                Status::Pass => {}
                // Θ* in dimension 4k+2 agrees with the theta path when built
                // from the reduced line bundle, as in the 4k+2 statements.
                Status::PassWithVariant if s.kind == SettingKind::Spinc4k2 => reduced_line += 1,
                _ => failures.push(format!("{s} {}", c.name)),
            }
        }
    }
    let oracle = common::brute_force_agreement();
    outcome(
        failures.is_empty() && oracle.is_ok(),
        format!(
            "{} settings at q^0, q^(1/2), q^1, failures: {failures:?}; Θ* with reduced L̃ needed at {reduced_line} coefficients; explicit-root oracle: {}",
            grid().len(),
            oracle.err().unwrap_or_else(|| "agrees".into())
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut worst = Duration::ZERO;
    let mut failures = Vec::new();
    let mut run = |id: TheoremId, kind, k, l| {
        let s = Setting::with_default_order(kind, k, l).unwrap();
        let t = Instant::now();
        let r = verify_theorem(id, &s).unwrap();
        worst = worst.max(t.elapsed());
        let real = kind != SettingKind::Spinc4k2
            || ["p1_real", "p2_real"].iter().all(|n| check_named(&r, n).is_some_and(|c| c.residual.is_zero()));
        if r.status() != Status::Pass || !real {
            failures.push(format!("{id} k={k} l={l}"));
        }
    };
    for k in 1..=2 {
        for l in 1..=3 {
            run(TheoremId::T4_1, SettingKind::Spinc4k, k, l);
            run(TheoremId::T4_2, SettingKind::Spinc4k, k, l);
        }
        for l in 1..=2 {
            run(TheoremId::T4_6, SettingKind::Spinc4k2, k, l);
            run(TheoremId::T4_8, SettingKind::Spinc4k2, k, l);
        }
    }
    outcome(
        failures.is_empty() && worst < SPINC_CASE_LIMIT,
        format!("failures: {failures:?}, slowest {:.3}s", worst.as_secs_f64()),
    )
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    for s in grid() {
        let r = structural_report(&s).unwrap();
        if r.status() != Status::Pass {
            failures.push(s.to_string());
        }
        if s.kind == SettingKind::Spin4k && s.k == 1 {
            let both = ["k1_vanishing", "k1_p2_vanishing"].iter().all(|n| check_named(&r, n).is_some());
            if !both {
                failures.push(format!("{s} missing k=1 checks"));
            }
        }
    }
    outcome(failures.is_empty(), format!("{} settings, failures: {failures:?}", grid().len()))
}

fn criterion_7() -> Outcome {
    let audit = |c, m| divisibility_check(c, m, 4 * m + 2, 1).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for m in 0..=1 {
        let a = audit(Corollary::C3_6, m);
        ok &= a.status == DivisibilityStatus::Pass && a.implied_exponent.is_some_and(|e| e >= 4);
        let b = audit(Corollary::C3_8, m);
        ok &= b.status == DivisibilityStatus::Pass && b.implied_exponent.is_none_or(|e| e >= 9);
        let c = audit(Corollary::C4_10, m);
        ok &= c.status == DivisibilityStatus::Pass && c.implied_exponent.is_none_or(|e| e >= 10);
        ok &= a.solve_coeffs_integral && b.solve_coeffs_integral && c.solve_coeffs_integral;
    }
    let gap = audit(Corollary::C4_9, 0);
    ok &= gap.status == DivisibilityStatus::Gap && gap.implied_exponent == Some(4) && gap.claimed_exponent == 5;
    notes.push(format!("4.9 implied 2^{} vs claimed 2^{} flagged GAP", gap.implied_exponent.unwrap_or(0), gap.claimed_exponent));
    outcome(ok, format!("3.6 -> 16, 3.8 -> 2^9, 4.10 -> 2^10 for m in {{0,1}}; {}", notes.join("; ")))
}

fn criterion_8() -> Outcome {
    let run = |args: &[&str]| {
        let mut out = Vec::new();
        let code = theta_anomaly::cli::run(args.iter().copied(), &mut out);
        (code, out)
    };
    let t = Instant::now();
    let (code_a, serial) = run(&["theta-anomaly", "suite"]);
    let elapsed = t.elapsed();
    let (code_b, again) = run(&["theta-anomaly", "suite"]);
    let (code_c, parallel) = run(&["theta-anomaly", "suite", "--parallel", "4"]);
    let identical = serial == again && serial == parallel;
    outcome(
        code_a == 0 && code_b == 0 && code_c == 0 && identical && elapsed < SUITE_LIMIT,
        format!(
            "exit codes {code_a}/{code_b}/{code_c}, byte-identical across runs and --parallel 4: {identical}, {:.3}s",
            elapsed.as_secs_f64()
        ),
    )
}

#[test]
fn acceptance() {
    assert_eq!(RESIDUAL_TOLERANCE, 0);
    let c1 = criterion_1();
    let c2 = criterion_2();
    let (c3, c3_variant) = criterion_3();
    // before the cross-checks, so per-case timings include building the P-series
    let c5 = criterion_5();
    let results = [
        (1, "theta/modform layer", c1),
        (2, "spin theorems", c2),
        (3, "k = 2, 3 corollaries as printed", c3),
        (4, "oracle equivalence", criterion_4()),
        (5, "spin^c theorems", c5),
        (6, "structural and degenerate checks", criterion_6()),
        (7, "divisibility audits", criterion_7()),
        (8, "full suite runtime and determinism", criterion_8()),
    ];
    for (n, title, o) in &results {
        report_line(*n, title, o);
    }
    for (n, title, o) in &results {
        if KNOWN_UNATTAINABLE.contains(n) {
            assert!(!o.pass, "criterion {n} now passes; update the ledger and KNOWN_UNATTAINABLE");
            continue;
        }
        assert!(o.pass, "criterion {n} ({title}) failed: {}", o.detail);
    }
    // the documented failure of criterion 3 is exactly the T_C M / Ṽ_C mix-up
    assert!(c3_variant, "corrected k = 2, 3 corollaries no longer hold");
}
