//! CSV and JSON outputs of convergence sweeps.

use std::fmt::Write as _;
use std::path::Path;

use nlneumann_core::convergence::ConvergenceReport;
use serde::Serialize;

use crate::harness::{LevelTiming, SweepResult};
use crate::reference::Check;
use crate::solver::SolveMethod;
use crate::Error;

pub const CSV_HEADER: &str = "h,delta,linf,order_linf,l2,order_l2";
pub const SUMMARY_FILE: &str = "summary.json";

/// Convergence table; the coarsest row leaves both order cells empty.
pub fn convergence_csv(report: &ConvergenceReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let cell = |o: Option<f64>| o.map(|v| format!("{v:.6e}")).unwrap_or_default();
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{:.6e},{:.6e},{:.6e},{},{:.6e},{}",
            r.h,
            r.delta,
            r.linf,
            cell(r.order_linf),
            r.l2,
            cell(r.order_l2)
        );
    }
    out
}

/// `<case>_r<ratio>.csv`, e.g. `T1_Square_r3.5.csv`.
pub fn csv_file_name(case: &str, ratio: f64) -> String {
    format!("{case}_r{ratio}.csv")
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelSummary {
    pub h: f64,
    pub delta: f64,
    pub nodes: usize,
    pub linf: f64,
    pub l2: f64,
    pub order_linf: Option<f64>,
    pub order_l2: Option<f64>,
    pub relative_residual: f64,
    pub iterations: usize,
    pub method: SolveMethod,
    pub timing: LevelTiming,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub case: String,
    pub ratio: f64,
    pub levels: Vec<LevelSummary>,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub wall_s: f64,
}

impl Summary {
    pub fn new(sweep: &SweepResult, checks: Vec<Check>) -> Self {
        let levels = sweep
            .report
            .rows
            .iter()
            .zip(&sweep.levels)
            .map(|(r, l)| LevelSummary {
                h: r.h,
                delta: r.delta,
                nodes: l.nodes,
                linf: r.linf,
                l2: r.l2,
                order_linf: r.order_linf,
                order_l2: r.order_l2,
                relative_residual: l.solve.relative_residual,
                iterations: l.solve.iterations,
                method: l.solve.method,
                timing: l.timing,
            })
            .collect();
        let passed = checks.iter().all(|c| c.passed);
        Self {
            case: sweep.report.case.clone(),
            ratio: sweep.report.ratio,
            levels,
            checks,
            passed,
            wall_s: sweep.wall_s,
        }
    }
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), Error> {
    let io = |source| Error::Io { path: path.to_path_buf(), source };
    let tmp = path.with_extension("partial");
    std::fs::write(&tmp, contents).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nlneumann_core::convergence::ErrorNorms;

    #[test]
    fn csv_layout() {
        let levels = [(0.25, 1.0, ErrorNorms { linf: 0.4, l2: 0.2 }), (0.125, 0.5, ErrorNorms { linf: 0.1, l2: 0.05 })];
        let report = ConvergenceReport::from_levels("T1_Square", 4.0, &levels);
        let csv = convergence_csv(&report);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "2.500000e-1,1.000000e0,4.000000e-1,,2.000000e-1,");
        assert_eq!(lines[2], "1.250000e-1,5.000000e-1,1.000000e-1,2.000000e0,5.000000e-2,2.000000e0");
        assert_eq!(csv_file_name("T1_Square", 3.5), "T1_Square_r3.5.csv");
        assert_eq!(csv_file_name("T1_Square", 4.0), "T1_Square_r4.csv");
    }
}
