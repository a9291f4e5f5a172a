//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criteria listed in `KNOWN_UNMET` are reported as FAIL but do not fail the
//! run unless `--ignored` or `--include-ignored` is passed.

use std::process::ExitCode;
use std::time::Instant;

use nlneumann::harness::{run_convergence, spacings, RunOptions, SweepResult};
use nlneumann::reference::{band_checks, finest_linf_order, Check};
use nlneumann::verify::{interior_truncation, run_verification_suite, VerifyDomain, TRUNCATION_SLOPE_MIN};
use nlneumann_core::manufactured::CaseName;

const SWEEP_BUDGET_S: f64 = 120.0;
const KNOWN_UNMET: &[u32] = &[3];

struct Outcome {
    criterion: u32,
    passed: bool,
    detail: String,
}

fn sweep(case: CaseName, ratio: f64, levels: &[u32]) -> SweepResult {
    run_convergence(case, ratio, &spacings(levels), &RunOptions::default())
        .unwrap_or_else(|e| panic!("{case} at ratio {ratio}: {e}"))
}

fn describe(case: CaseName, sweep: &SweepResult, checks: &[Check]) -> String {
    let linf: Vec<String> = sweep.report.rows.iter().map(|r| format!("{:.3e}", r.linf)).collect();
    let verdicts: Vec<String> = checks
        .iter()
        .map(|c| {
            let v = if c.value.abs() < 1e-3 { format!("{:.3e}", c.value) } else { format!("{:.3}", c.value) };
            format!("{}={v}{}", c.name, if c.passed { "" } else { "(out)" })
        })
        .collect();
    format!("{case} r{} linf [{}] {} {:.1}s", sweep.report.ratio, linf.join(", "), verdicts.join(" "), sweep.wall_s)
}

/// Order band and, where tabulated, the magnitude band for each ratio.
fn table_criterion(criterion: u32, case: CaseName, runs: &[(f64, &[u32])]) -> Outcome {
    let mut passed = true;
    let mut details = Vec::new();
    for &(ratio, levels) in runs {
        let s = sweep(case, ratio, levels);
        let checks = band_checks(case, &s.report);
        passed &= !checks.is_empty() && checks.iter().all(|c| c.passed) && s.wall_s <= SWEEP_BUDGET_S;
        details.push(describe(case, &s, &checks));
    }
    Outcome { criterion, passed, detail: details.join(" | ") }
}

const FULL: &[u32] = &[3, 4, 5, 6];
/// `δ = 4h` at `h = 2^-3` equals the ellipse reach.
const ELLIPSE_R4: &[u32] = &[4, 5, 6];

fn criterion_1() -> Outcome {
    table_criterion(1, CaseName::T1Square, &[(4.0, FULL), (3.5, FULL)])
}

fn criterion_2() -> Outcome {
    table_criterion(2, CaseName::T2Disk, &[(4.0, FULL), (3.5, FULL)])
}

fn criterion_3() -> Outcome {
    table_criterion(3, CaseName::T3Ellipse, &[(4.0, ELLIPSE_R4), (3.5, FULL)])
}

fn criterion_4() -> Outcome {
    let mut passed = true;
    let mut details = Vec::new();
    for (case, levels) in
        [(CaseName::PatchLinear, FULL), (CaseName::PatchLinearDisk, FULL), (CaseName::PatchLinearEllipse, ELLIPSE_R4)]
    {
        let s = sweep(case, 4.0, levels);
        let checks = band_checks(case, &s.report);
        passed &= !checks.is_empty() && checks.iter().all(|c| c.passed);
        details.push(describe(case, &s, &checks));
    }
    let s = sweep(CaseName::PatchLinearEllipse, 3.5, FULL);
    let order = finest_linf_order(&s.report).unwrap_or(f64::NAN);
    passed &= order >= 2.0;
    details.push(format!("PatchLinearEllipse r3.5 order_linf={order:.3}"));
    Outcome { criterion: 4, passed, detail: details.join(" | ") }
}

fn criterion_5() -> Outcome {
    table_criterion(5, CaseName::CornerSquare, &[(4.0, FULL), (3.5, FULL)])
}

fn criterion_6() -> Outcome {
    let ledger = run_verification_suite(&VerifyDomain::ALL, false).expect("verification suite runs");
    let failed: Vec<String> = ledger
        .domains
        .iter()
        .flat_map(|d| {
            d.checks.iter().filter(|c| !c.passed).map(move |c| format!("{}:{}={:.3e}", d.domain, c.name, c.value))
        })
        .collect();
    let total: usize = ledger.domains.iter().map(|d| d.checks.len()).sum();
    Outcome { criterion: 6, passed: ledger.passed(), detail: format!("{total} checks, failed [{}]", failed.join(", ")) }
}

fn criterion_7() -> Outcome {
    let (slope, points) = interior_truncation(1.0).expect("truncation sweep runs");
    let pts: Vec<String> = points.iter().map(|(d, e)| format!("δ={d}: {e:.3e}")).collect();
    Outcome {
        criterion: 7,
        passed: slope >= TRUNCATION_SLOPE_MIN,
        detail: format!("slope {slope:.3} (>= {TRUNCATION_SLOPE_MIN}) [{}]", pts.join(", ")),
    }
}

fn main() -> ExitCode {
    let strict = std::env::args().any(|a| a == "--ignored" || a == "--include-ignored");
    let start = Instant::now();
    let outcomes =
        [criterion_1(), criterion_2(), criterion_3(), criterion_4(), criterion_5(), criterion_6(), criterion_7()];
    let mut unexpected = Vec::new();
    for o in &outcomes {
        let known = KNOWN_UNMET.contains(&o.criterion) && !strict;
        let tag = match (o.passed, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known unmet)",
            (false, false) => "FAIL",
        };
        println!("{tag} criterion {}: {}", o.criterion, o.detail);
        if !o.passed && !known {
            unexpected.push(o.criterion);
        }
    }
    println!("acceptance wall time {:.1}s", start.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("criteria failed: {unexpected:?}");
        ExitCode::FAILURE
    }
}
