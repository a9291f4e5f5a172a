//! Property checks that depend on no reference numbers.

use std::fmt;
use std::str::FromStr;

use nlneumann_core::assembly::{Assembler, AssemblyConfig, ProblemData, RowKind};
use nlneumann_core::geometry::{BoundarySegment, DomainSpec, RegionTag};
use nlneumann_core::gmls::{basis_eval, build_neighbors, LocalFit, NeighborGrid, PointCloud, BASIS_DIM};
use nlneumann_core::kernels::KernelSet;
use nlneumann_core::manufactured::{CaseName, ManufacturedCase, Solution};
use nlneumann_core::quadrature::{flat_m_delta, m_delta, GaussRule, Quadrature, QuadratureConfig};
use nlneumann_core::Vec2;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::harness::{assemble_parallel, run_convergence, RunOptions};
use crate::reference::{fitted_order, Check, PATCH_TOL};
use crate::solver::solve;
use crate::Error;

/// Spacing and `δ/h` of the per-domain checks.
pub const SUITE_SPACING: f64 = 0.0625;
pub const SUITE_RATIO: f64 = 4.0;
pub const SEED: u64 = 0x5eed_2024;
pub const REPRODUCTION_NODES: usize = 100;
pub const J_MOMENT_TOL: f64 = 1e-10;
pub const H_MOMENT_TOL: f64 = 1e-12;
pub const REPRODUCTION_TOL: f64 = 1e-9;
pub const FLAT_M_TOL: f64 = 1e-9;
/// Roundoff floor of `M_δ ≥ 0`; `M_δ` vanishes analytically on the boundary.
pub const M_ROUNDOFF: f64 = 1e-12;
pub const ANNIHILATION_TOL: f64 = 1e-9;
pub const CONSISTENCY_TOL: f64 = 1e-9;
pub const MAX_PRINCIPLE_TOL: f64 = 1e-9;
pub const MAX_PRINCIPLE_SPACINGS: [f64; 2] = [0.0625, 0.03125];
pub const TRUNCATION_HORIZONS: [f64; 3] = [0.1, 0.05, 0.025];
pub const TRUNCATION_SLOPE_MIN: f64 = 1.8;
/// `J_δ` multiplier of the seeded fault.
pub const FAULT_J_SCALE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyDomain {
    /// Unit square, Neumann on `x = 1`.
    Square,
    Disk,
    Ellipse,
    /// Unit square with Neumann edges meeting at `(1, 1)`.
    Corner,
}

impl VerifyDomain {
    pub const ALL: [VerifyDomain; 4] =
        [VerifyDomain::Square, VerifyDomain::Disk, VerifyDomain::Ellipse, VerifyDomain::Corner];

    pub fn as_str(self) -> &'static str {
        match self {
            VerifyDomain::Square => "square",
            VerifyDomain::Disk => "disk",
            VerifyDomain::Ellipse => "ellipse",
            VerifyDomain::Corner => "corner",
        }
    }

    fn case(self) -> CaseName {
        match self {
            VerifyDomain::Square => CaseName::T1Square,
            VerifyDomain::Disk => CaseName::T2Disk,
            VerifyDomain::Ellipse => CaseName::T3Ellipse,
            VerifyDomain::Corner => CaseName::CornerSquare,
        }
    }

    fn patch_case(self) -> Option<CaseName> {
        match self {
            VerifyDomain::Square => Some(CaseName::PatchLinear),
            VerifyDomain::Disk => Some(CaseName::PatchLinearDisk),
            VerifyDomain::Ellipse | VerifyDomain::Corner => None,
        }
    }
}

impl fmt::Display for VerifyDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for VerifyDomain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        VerifyDomain::ALL.into_iter().find(|d| d.as_str() == s.trim()).ok_or_else(|| {
            Error::Config(format!("unknown domain `{s}`; expected one of square, disk, ellipse, corner"))
        })
    }
}

/// Comma-separated domain list; the empty string gives no domains.
pub fn parse_domains(list: &str) -> Result<Vec<VerifyDomain>, Error> {
    list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainLedger {
    pub domain: VerifyDomain,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Ledger {
    pub domains: Vec<DomainLedger>,
}

impl Ledger {
    pub fn passed(&self) -> bool {
        self.domains.iter().all(|d| d.checks.iter().all(|c| c.passed))
    }

    pub fn check(&self, domain: VerifyDomain, name: &str) -> Option<&Check> {
        self.domains.iter().find(|d| d.domain == domain)?.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Ledger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.domains {
            for c in &d.checks {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                writeln!(f, "{verdict} {:<8} {:<28} {:>12.4e}  {}", d.domain, c.name, c.value, c.bound)?;
            }
        }
        Ok(())
    }
}

fn at_most(name: &str, value: f64, tol: f64) -> Check {
    Check { name: name.into(), value, bound: format!("<= {tol:e}"), passed: value <= tol }
}

fn at_least(name: &str, value: f64, min: f64) -> Check {
    Check { name: name.into(), value, bound: format!(">= {min}"), passed: value >= min }
}

/// Runs every check on each domain; the seeded fault scales `J_δ` by 2.
pub fn run_verification_suite(domains: &[VerifyDomain], seeded_fault: bool) -> Result<Ledger, Error> {
    let j_scale = if seeded_fault { FAULT_J_SCALE } else { 1.0 };
    let mut ledger = Ledger::default();
    for &domain in domains {
        let checks = domain_checks(domain, j_scale)?;
        ledger.domains.push(DomainLedger { domain, checks });
    }
    Ok(ledger)
}

fn domain_checks(domain: VerifyDomain, j_scale: f64) -> Result<Vec<Check>, Error> {
    let case = ManufacturedCase::new(domain.case());
    let spec = case.domain();
    let h = SUITE_SPACING;
    let delta = SUITE_RATIO * h;
    let kernels = KernelSet::new(delta)?.with_j_scale(j_scale);
    let cloud = PointCloud::uniform(spec, h, delta)?;

    let (j_moment, h_moment) = kernel_moments(&kernels);
    let mut checks = vec![
        at_most("j_second_moment_error", (j_moment - 2.0).abs(), J_MOMENT_TOL),
        at_most("h_second_moment_error", (h_moment - 1.0).abs(), H_MOMENT_TOL),
        at_most("gmls_reproduction", gmls_reproduction(&cloud, delta)?, REPRODUCTION_TOL),
    ];
    if matches!(domain, VerifyDomain::Square | VerifyDomain::Corner) {
        checks.push(at_most("flat_m_relative_error", flat_m_error(spec, &kernels)?, FLAT_M_TOL));
    }

    let config = AssemblyConfig { apply_pin: false, ..AssemblyConfig::default() };
    let assembler = Assembler::new(spec, &cloud, kernels, &case, &config)?;
    let collar: Vec<usize> = (0..cloud.len()).filter(|&i| cloud.tag(i) == RegionTag::NeumannCollar).collect();
    let m_values = collar.par_iter().map(|&i| assembler.collar_data(i).map(|d| d.m)).collect::<Result<Vec<_>, _>>()?;
    let m_min = m_values.iter().copied().fold(f64::INFINITY, f64::min);
    checks.push(Check {
        name: "collar_m_min".into(),
        value: m_min,
        bound: format!(">= -{M_ROUNDOFF:e}"),
        passed: !collar.is_empty() && m_min >= -M_ROUNDOFF,
    });

    let system = assemble_parallel(&assembler)?;
    let mut annihilation: f64 = 0.0;
    for i in 0..system.len() {
        if system.kinds()[i].is_constraint() {
            continue;
        }
        let (_, vals) = system.row(i);
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        annihilation = annihilation.max(vals.iter().sum::<f64>().abs() / scale);
    }
    checks.push(at_most("constant_annihilation", annihilation, ANNIHILATION_TOL));

    let quadratic = Quadratic([0.3, -0.7, 0.4, 1.1, -0.6, 0.9]);
    let q_asm = Assembler::new(spec, &cloud, kernels, &quadratic, &config)?;
    let u: Vec<f64> = cloud.points().iter().map(|&p| quadratic.value(p)).collect();
    let f = quadratic.source(Vec2::ZERO);
    let mut consistency: f64 = 0.0;
    for i in (0..cloud.len()).filter(|&i| cloud.tag(i) == RegionTag::Interior) {
        let row = q_asm.interior_row(i)?;
        debug_assert_eq!(row.kind, RowKind::Interior);
        consistency = consistency.max((row.dot(&u) - f).abs() / f.abs());
    }
    checks.push(at_most("interior_consistency", consistency, CONSISTENCY_TOL));

    if domain == VerifyDomain::Square {
        for &hm in &MAX_PRINCIPLE_SPACINGS {
            let max = max_principle_surrogate(spec, hm, j_scale)?;
            checks.push(at_most(&format!("max_principle_h{}", hm.recip()), max, MAX_PRINCIPLE_TOL));
        }
        let (slope, _) = interior_truncation(j_scale)?;
        checks.push(at_least("interior_truncation_slope", slope, TRUNCATION_SLOPE_MIN));
    }

    if let Some(patch) = domain.patch_case() {
        let opts = RunOptions { j_scale, ..RunOptions::default() };
        let sweep = run_convergence(patch, SUITE_RATIO, &[h], &opts)?;
        checks.push(at_most("patch_linf", sweep.report.rows[0].linf, PATCH_TOL));
    }
    Ok(checks)
}

/// `(∫_B J_δ |z|² dz, ∫ H_δ l² dl)` by Gauss quadrature in polar coordinates.
pub fn kernel_moments(kernels: &KernelSet) -> (f64, f64) {
    let delta = kernels.delta();
    let rule = GaussRule::new(8);
    let j = rule.integrate(0.0, delta, |r| kernels.j_delta(r) * r * r * std::f64::consts::TAU * r);
    let h = rule.integrate(-delta, delta, |l| kernels.h_delta(l) * l * l);
    (j, h)
}

/// Largest relative error of `Σ_j w_j q_m(x_j) = τ_m` over the scaled basis,
/// for random functionals at up to 100 random non-Dirichlet nodes.
pub fn gmls_reproduction(cloud: &PointCloud, delta: f64) -> Result<f64, Error> {
    let mut rng = StdRng::seed_from_u64(SEED);
    let candidates: Vec<usize> = (0..cloud.len()).filter(|&i| cloud.tag(i) != RegionTag::DirichletLayer).collect();
    let grid = NeighborGrid::new(cloud, delta);
    let picks: Vec<usize> = if candidates.len() <= REPRODUCTION_NODES {
        candidates
    } else {
        rand::seq::index::sample(&mut rng, candidates.len(), REPRODUCTION_NODES)
            .into_iter()
            .map(|k| candidates[k])
            .collect()
    };
    let mut worst: f64 = 0.0;
    for i in picks {
        let tau: [f64; BASIS_DIM] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let frame = cloud.frame(i);
        let fit = LocalFit::new(cloud, i, build_neighbors(cloud, &grid, i, delta)?, &frame, delta)?;
        let w = fit.weights(&tau);
        let mut applied = [0.0; BASIS_DIM];
        for (&j, wj) in fit.neighbors().iter().zip(&w) {
            let q = basis_eval(cloud.point(i), &frame, cloud.point(j), delta);
            for m in 0..BASIS_DIM {
                applied[m] += wj * q[m];
            }
        }
        let scale = tau.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        for m in 0..BASIS_DIM {
            worst = worst.max((applied[m] - tau[m]).abs() / scale);
        }
    }
    Ok(worst)
}

/// Largest relative gap between quadrature and the closed-form `M_δ` at
/// points facing the edge `x = 1` only.
pub fn flat_m_error(spec: &DomainSpec, kernels: &KernelSet) -> Result<f64, Error> {
    let quad = Quadrature::new(QuadratureConfig::default())?;
    let delta = kernels.delta();
    let region = spec.neumann_region();
    let mut worst: f64 = 0.0;
    for k in 1..10 {
        let s = delta * k as f64 / 10.0;
        let x = Vec2::new(1.0 - s, 0.5);
        let proj = spec.project_neumann(x)?;
        let m = m_delta(&quad, kernels, x, &proj, &region)?;
        let exact = flat_m_delta(s, delta) * kernels.j0() / KernelSet::new(delta)?.j0();
        worst = worst.max((m - exact).abs() / exact);
    }
    Ok(worst)
}

/// `-Δu = -1`, zero flux, zero Dirichlet data; the solution must stay `≤ 0`.
struct SubharmonicProblem;

impl ProblemData for SubharmonicProblem {
    fn source(&self, _x: Vec2) -> f64 {
        -1.0
    }
    fn flux(&self, _s: BoundarySegment, _xbar: Vec2, _n: Vec2) -> f64 {
        0.0
    }
    fn flux_tangential_derivative(&self, _s: BoundarySegment, _xbar: Vec2, _n: Vec2, _p: Vec2) -> f64 {
        0.0
    }
    fn dirichlet(&self, _x: Vec2) -> f64 {
        0.0
    }
}

/// Largest solution value of the subharmonic problem at spacing `h`.
pub fn max_principle_surrogate(spec: &DomainSpec, h: f64, j_scale: f64) -> Result<f64, Error> {
    let delta = SUITE_RATIO * h;
    let cloud = PointCloud::uniform(spec, h, delta)?;
    let kernels = KernelSet::new(delta)?.with_j_scale(j_scale);
    let opts = RunOptions::default();
    let assembler = Assembler::new(spec, &cloud, kernels, &SubharmonicProblem, &opts.assembly)?;
    let system = assemble_parallel(&assembler)?;
    let report = solve(&system, opts.solver_tol, opts.method)?;
    Ok(report.solution.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// Fitted slope in `δ` and per-horizon maxima of the interior-row residual
/// `|Σ w_j u₀(x_j) - f(x)|` for `u₀ = sin(πx)cos(πy)` at `δ/h = 4`.
pub fn interior_truncation(j_scale: f64) -> Result<(f64, Vec<(f64, f64)>), Error> {
    let case = ManufacturedCase::new(CaseName::T1Square);
    let spec = case.domain();
    let sol = Solution::SinCos;
    let mut points = Vec::new();
    for &delta in &TRUNCATION_HORIZONS {
        let h = delta / SUITE_RATIO;
        let cloud = PointCloud::uniform(spec, h, delta)?;
        let kernels = KernelSet::new(delta)?.with_j_scale(j_scale);
        let config = AssemblyConfig { apply_pin: false, ..AssemblyConfig::default() };
        let assembler = Assembler::new(spec, &cloud, kernels, &case, &config)?;
        let u: Vec<f64> = cloud.points().iter().map(|&p| sol.value(p)).collect();
        let interior: Vec<usize> = (0..cloud.len()).filter(|&i| cloud.tag(i) == RegionTag::Interior).collect();
        let residuals = interior
            .par_iter()
            .map(|&i| assembler.interior_row(i).map(|row| (row.dot(&u) - row.rhs).abs()))
            .collect::<Result<Vec<_>, _>>()?;
        points.push((delta, residuals.into_iter().fold(0.0, f64::max)));
    }
    let slope = fitted_order(&points).unwrap_or(f64::NAN);
    Ok((slope, points))
}

/// `c0 + c1 x + c2 y + c3 x² + c4 y² + c5 xy`.
struct Quadratic([f64; 6]);

impl Quadratic {
    fn value(&self, p: Vec2) -> f64 {
        let c = &self.0;
        c[0] + c[1] * p.x + c[2] * p.y + c[3] * p.x * p.x + c[4] * p.y * p.y + c[5] * p.x * p.y
    }

    fn grad(&self, p: Vec2) -> Vec2 {
        let c = &self.0;
        Vec2::new(c[1] + 2.0 * c[3] * p.x + c[5] * p.y, c[2] + 2.0 * c[4] * p.y + c[5] * p.x)
    }
}

impl ProblemData for Quadratic {
    fn source(&self, _x: Vec2) -> f64 {
        -2.0 * (self.0[3] + self.0[4])
    }
    fn flux(&self, _s: BoundarySegment, xbar: Vec2, n: Vec2) -> f64 {
        self.grad(xbar).dot(n)
    }
    fn flux_tangential_derivative(&self, _s: BoundarySegment, _xbar: Vec2, n: Vec2, p: Vec2) -> f64 {
        let c = &self.0;
        let (xx, yy, xy) = (2.0 * c[3], 2.0 * c[4], c[5]);
        p.x * (xx * n.x + xy * n.y) + p.y * (xy * n.x + yy * n.y)
    }
    fn dirichlet(&self, x: Vec2) -> f64 {
        self.value(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_lists() {
        assert_eq!(parse_domains("").unwrap(), vec![]);
        assert_eq!(parse_domains("disk, corner").unwrap(), vec![VerifyDomain::Disk, VerifyDomain::Corner]);
        assert!(parse_domains("torus").is_err());
        assert!(run_verification_suite(&[], false).unwrap().domains.is_empty());
    }

    #[test]
    fn kernel_moments_are_normalized() {
        let (j, h) = kernel_moments(&KernelSet::new(0.3).unwrap());
        assert!((j - 2.0).abs() < 1e-13 && (h - 1.0).abs() < 1e-13);
    }
}
