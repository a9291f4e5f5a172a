//! Error norms and observed convergence orders.

use alloc::string::String;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::geometry::RegionTag;
use crate::gmls::PointCloud;
use crate::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorNorms {
    pub linf: f64,
    /// `sqrt(h² Σ e_i²)` over the domain nodes.
    pub l2: f64,
}

/// Errors against `u0` over all nodes outside the Dirichlet layer.
pub fn error_norms(solution: &[f64], u0: impl Fn(Vec2) -> f64, cloud: &PointCloud) -> ErrorNorms {
    let mut linf: f64 = 0.0;
    let mut sum = 0.0;
    for (i, &u) in solution.iter().enumerate() {
        if cloud.tag(i) == RegionTag::DirichletLayer {
            continue;
        }
        let e = (u - u0(cloud.point(i))).abs();
        linf = linf.max(e);
        sum += e * e;
    }
    ErrorNorms { linf, l2: (cloud.h() * cloud.h() * sum).sqrt() }
}

/// `log₂(e_coarse / e_fine)` for a halving of `h`.
pub fn observed_order(e_coarse: f64, e_fine: f64) -> f64 {
    (e_coarse / e_fine).log2()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    pub delta: f64,
    pub linf: f64,
    /// Undefined on the coarsest level.
    pub order_linf: Option<f64>,
    pub l2: f64,
    pub order_l2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub case: String,
    pub ratio: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Builds rows from `(h, δ, norms)` ordered from coarse to fine.
    pub fn from_levels(case: impl Into<String>, ratio: f64, levels: &[(f64, f64, ErrorNorms)]) -> Self {
        let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels.len());
        for (k, &(h, delta, e)) in levels.iter().enumerate() {
            let prev = k.checked_sub(1).map(|j| levels[j].2);
            rows.push(ConvergenceRow {
                h,
                delta,
                linf: e.linf,
                order_linf: prev.map(|p| observed_order(p.linf, e.linf)),
                l2: e.l2,
                order_l2: prev.map(|p| observed_order(p.l2, e.l2)),
            });
        }
        Self { case: case.into(), ratio, rows }
    }

    /// `L∞` orders of the last `count` transitions.
    pub fn last_linf_orders(&self, count: usize) -> Vec<f64> {
        let orders: Vec<f64> = self.rows.iter().filter_map(|r| r.order_linf).collect();
        orders[orders.len().saturating_sub(count)..].to_vec()
    }

    pub fn last_l2_orders(&self, count: usize) -> Vec<f64> {
        let orders: Vec<f64> = self.rows.iter().filter_map(|r| r.order_l2).collect();
        orders[orders.len().saturating_sub(count)..].to_vec()
    }

    /// Row with mesh size `h` (relative match).
    pub fn row_at(&self, h: f64) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| (r.h - h).abs() <= 1e-12 * h)
    }
}
