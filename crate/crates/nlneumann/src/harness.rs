//! Manufactured-solution convergence sweeps.

use std::time::Instant;

use nlneumann_core::assembly::{Assembler, AssemblyConfig, NonlocalSystem, ProblemData};
use nlneumann_core::convergence::{error_norms, ConvergenceReport, ErrorNorms};
use nlneumann_core::geometry::RegionTag;
use nlneumann_core::gmls::PointCloud;
use nlneumann_core::kernels::KernelSet;
use nlneumann_core::manufactured::{CaseName, ManufacturedCase};
use nlneumann_core::Vec2;
use rayon::prelude::*;
use serde::Serialize;

use crate::solver::{solve, SolveMethod, SolveReport};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub assembly: AssemblyConfig,
    pub solver_tol: f64,
    pub method: SolveMethod,
    /// Multiplies `J_δ`; 1 except for fault injection.
    pub j_scale: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            assembly: AssemblyConfig::default(),
            solver_tol: crate::solver::DEFAULT_TOL,
            method: SolveMethod::Auto,
            j_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct LevelTiming {
    pub assembly_s: f64,
    pub solve_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelResult {
    pub h: f64,
    pub delta: f64,
    pub nodes: usize,
    pub norms: ErrorNorms,
    /// Node attaining the L∞ error.
    pub worst_node: Vec2,
    pub solve: SolveReport,
    pub timing: LevelTiming,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub report: ConvergenceReport,
    pub levels: Vec<LevelResult>,
    pub wall_s: f64,
}

/// Assembles all rows in parallel; failures are aggregated per node.
pub fn assemble_parallel<P: ProblemData + Sync + ?Sized>(
    assembler: &Assembler<'_, P>,
) -> Result<NonlocalSystem, Error> {
    let rows = (0..assembler.len()).into_par_iter().map(|i| assembler.row(i)).collect();
    Ok(NonlocalSystem::from_rows(rows, assembler.pin_node())?)
}

/// Grid spacings `2^-k` for each `k` in `levels`.
pub fn spacings(levels: &[u32]) -> Vec<f64> {
    levels.iter().map(|&k| 0.5f64.powi(k as i32)).collect()
}

/// Solves `case` at spacing `h` with `δ = ratio·h`.
pub fn run_level(case: &ManufacturedCase, h: f64, ratio: f64, opts: &RunOptions) -> Result<LevelResult, Error> {
    let delta = ratio * h;
    let t0 = Instant::now();
    let cloud = PointCloud::uniform(case.domain(), h, delta)?;
    let kernels = KernelSet::new(delta)?.with_j_scale(opts.j_scale);
    let assembler = Assembler::new(case.domain(), &cloud, kernels, case, &opts.assembly)?;
    let system = assemble_parallel(&assembler)?;
    let assembly_s = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let solve_report = solve(&system, opts.solver_tol, opts.method)?;
    let solve_s = t1.elapsed().as_secs_f64();
    let norms = error_norms(&solve_report.solution, |p| case.u0(p), &cloud);
    let worst = (0..cloud.len())
        .filter(|&i| cloud.tag(i) != RegionTag::DirichletLayer)
        .max_by(|&a, &b| {
            let e = |i: usize| (solve_report.solution[i] - case.u0(cloud.point(i))).abs();
            e(a).total_cmp(&e(b))
        })
        .map_or(Vec2::ZERO, |i| cloud.point(i));
    Ok(LevelResult {
        h,
        delta,
        nodes: cloud.len(),
        norms,
        worst_node: worst,
        solve: solve_report,
        timing: LevelTiming { assembly_s, solve_s },
    })
}

/// Runs `case` over `hs` (coarse to fine) at a fixed ratio `δ/h`.
pub fn run_convergence(name: CaseName, ratio: f64, hs: &[f64], opts: &RunOptions) -> Result<SweepResult, Error> {
    let start = Instant::now();
    let case = ManufacturedCase::new(name);
    let levels = hs.iter().map(|&h| run_level(&case, h, ratio, opts)).collect::<Result<Vec<_>, _>>()?;
    let triples: Vec<_> = levels.iter().map(|l| (l.h, l.delta, l.norms)).collect();
    Ok(SweepResult {
        report: ConvergenceReport::from_levels(name.as_str(), ratio, &triples),
        levels,
        wall_s: start.elapsed().as_secs_f64(),
    })
}
