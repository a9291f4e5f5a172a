//! Quadrature over ball–region intersections and along parallel contours.
//!
//! Ball integrals use polar coordinates about the ball center. The angular
//! range is split where the region boundary crosses the sphere of radius `δ`
//! or has a vertex; pieces cut by the boundary get Gauss rules graded
//! geometrically toward both ends, where the exit distance varies fastest.

mod gauss;

use core::f64::consts::{PI, TAU};

#[cfg(not(feature = "std"))]
use num_traits::Float;

pub use gauss::GaussRule;

use crate::geometry::{ConvexRegion, DomainSpec, ParallelContour, Projection};
use crate::kernels::KernelSet;
use crate::{Error, Result, Vec2};

/// Geometric grading ratio toward the ends of cut angular pieces.
const GRADING: f64 = 0.25;
/// Number of graded subintervals per end.
const GRADING_LEVELS: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Gauss points per direction and per angular subinterval.
    pub gauss_order: usize,
    /// Target relative accuracy for kernel-weighted polynomial integrands.
    pub rel_tol: f64,
    /// Gauss points along a parallel contour.
    pub contour_gauss_order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { gauss_order: 12, rel_tol: 1e-10, contour_gauss_order: 20 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gauss_order < 8 {
            return Err(Error::InvalidParameter(alloc::format!(
                "gauss_order must be at least 8, got {}",
                self.gauss_order
            )));
        }
        if self.contour_gauss_order < 16 {
            return Err(Error::InvalidParameter(alloc::format!(
                "contour_gauss_order must be at least 16, got {}",
                self.contour_gauss_order
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-6) {
            return Err(Error::InvalidParameter(alloc::format!("rel_tol must lie in (0, 1e-6], got {}", self.rel_tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    InsideOmega,
    OutsideOmega,
}

/// Integrals over `B(x,δ) ∩ K` and `B(x,δ) \ K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitIntegral<const K: usize> {
    pub inside: [f64; K],
    pub outside: [f64; K],
}

/// Quadrature rules built once from a [`QuadratureConfig`].
#[derive(Debug, Clone)]
pub struct Quadrature {
    config: QuadratureConfig,
    radial: GaussRule,
    angular: GaussRule,
    contour: GaussRule,
}

impl Quadrature {
    pub fn new(config: QuadratureConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            radial: GaussRule::new(config.gauss_order),
            angular: GaussRule::new(config.gauss_order),
            contour: GaussRule::new(config.contour_gauss_order),
        })
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.config
    }

    /// Integrates `f` over both parts of `B(x, δ)` split by `region`.
    pub fn integrate_split<const K: usize>(
        &self,
        x: Vec2,
        delta: f64,
        region: &ConvexRegion,
        mut f: impl FnMut(Vec2) -> [f64; K],
    ) -> Result<SplitIntegral<K>> {
        let mut inside = [0.0; K];
        let mut outside = [0.0; K];
        self.polar(x, delta, region, true, |y, w, is_inside| {
            let v = f(y);
            let acc = if is_inside { &mut inside } else { &mut outside };
            for (a, b) in acc.iter_mut().zip(v) {
                *a += w * b;
            }
        })?;
        Ok(SplitIntegral { inside, outside })
    }

    /// Integrates `f` over `B(x, δ) \ region` only.
    pub fn integrate_outside<const K: usize>(
        &self,
        x: Vec2,
        delta: f64,
        region: &ConvexRegion,
        mut f: impl FnMut(Vec2) -> [f64; K],
    ) -> Result<[f64; K]> {
        let mut outside = [0.0; K];
        self.polar(x, delta, region, false, |y, w, _| {
            let v = f(y);
            for (a, b) in outside.iter_mut().zip(v) {
                *a += w * b;
            }
        })?;
        Ok(outside)
    }

    /// `∫_{B(x,δ)∩Ω}` or `∫_{B(x,δ)\Ω}` of a scalar integrand.
    pub fn integrate_ball_region(
        &self,
        x: Vec2,
        delta: f64,
        domain: &DomainSpec,
        side: Side,
        mut f: impl FnMut(Vec2) -> f64,
    ) -> Result<f64> {
        let region = domain.region();
        let split = self.integrate_split(x, delta, &region, |y| [f(y)])?;
        Ok(match side {
            Side::InsideOmega => split.inside[0],
            Side::OutsideOmega => split.outside[0],
        })
    }

    fn polar(
        &self,
        x: Vec2,
        delta: f64,
        region: &ConvexRegion,
        want_inside: bool,
        mut sink: impl FnMut(Vec2, f64, bool),
    ) -> Result<()> {
        if !region.contains(x, 1e-12) {
            return Err(Error::RegionDecompositionFailure { x, delta });
        }
        let mut cuts = region.breakpoints(x, delta);
        if cuts.is_empty() {
            cuts.push(0.0);
        }
        let n = cuts.len();
        for k in 0..n {
            let a = cuts[k];
            let b = if k + 1 < n { cuts[k + 1] } else { cuts[0] + TAU };
            if b - a <= 1e-15 {
                continue;
            }
            let mid = 0.5 * (a + b);
            let cut = region.exit_distance(x, Vec2::from_angle(mid)) < delta;
            if !cut && !want_inside {
                continue;
            }
            let mut visit = |theta: f64, wt: f64| {
                let d = Vec2::from_angle(theta);
                let rho = region.exit_distance(x, d).min(delta);
                if want_inside && rho > 0.0 {
                    for (r, wr) in self.radial.mapped(0.0, rho) {
                        sink(x + d * r, wt * wr * r, true);
                    }
                }
                if rho < delta {
                    for (r, wr) in self.radial.mapped(rho, delta) {
                        sink(x + d * r, wt * wr * r, false);
                    }
                }
            };
            if cut {
                graded_nodes(&self.angular, a, b, &mut visit);
            } else {
                let chunks = ((b - a) / (0.5 * PI)).ceil().max(1.0) as usize;
                let h = (b - a) / chunks as f64;
                for c in 0..chunks {
                    let lo = a + h * c as f64;
                    for (t, w) in self.angular.mapped(lo, lo + h) {
                        visit(t, w);
                    }
                }
            }
        }
        Ok(())
    }

    /// `∫_{-w}^{w} H_w(|l|) f(x_l) dl` with `H_w` the constant contour kernel
    /// of half-width `w`, normalized to unit second moment.
    pub fn contour_integral<const K: usize>(
        &self,
        contour: &ParallelContour<'_>,
        half_width: f64,
        mut f: impl FnMut(Vec2) -> [f64; K],
    ) -> Result<[f64; K]> {
        let h = 1.5 / half_width.powi(3);
        let mut acc = [0.0; K];
        for (l, w) in self.contour.mapped(-half_width, half_width) {
            let v = f(contour.point(l)?);
            for (a, b) in acc.iter_mut().zip(v) {
                *a += h * w * b;
            }
        }
        Ok(acc)
    }
}

/// Gauss nodes on `[a, b]` graded geometrically toward both endpoints.
fn graded_nodes(rule: &GaussRule, a: f64, b: f64, visit: &mut impl FnMut(f64, f64)) {
    let half = 0.5 * (b - a);
    let mut run = |from: f64, sign: f64| {
        // Subintervals [σ^{k+1}, σ^k]·half measured from the endpoint `from`.
        let mut outer = half;
        for level in 0..=GRADING_LEVELS {
            let inner = if level == GRADING_LEVELS { 0.0 } else { outer * GRADING };
            let (lo, hi) = if sign > 0.0 { (from + inner, from + outer) } else { (from - outer, from - inner) };
            for (t, w) in rule.mapped(lo, hi) {
                visit(t, w);
            }
            outer = inner;
        }
    };
    run(a, 1.0);
    run(b, -1.0);
}

/// Collar coefficient `M_δ(x)` with the exterior taken as `B(x,δ) \ region`.
pub fn m_delta(
    quad: &Quadrature,
    kernels: &KernelSet,
    x: Vec2,
    proj: &Projection,
    region: &ConvexRegion,
) -> Result<f64> {
    let delta = kernels.delta();
    let (n, p, s) = (proj.normal, proj.tangent, proj.dist);
    let [m] = quad.integrate_outside(x, delta, region, |y| {
        let t = (y - x).dot(p);
        let u = (y - proj.xbar).dot(n);
        [t * t - u * u + s * s]
    })?;
    Ok(kernels.j0() * m)
}

/// `M_δ` next to a straight boundary at distance `s`.
pub fn flat_m_delta(s: f64, delta: f64) -> f64 {
    if s >= delta {
        return 0.0;
    }
    8.0 * s * (delta * delta - s * s).powf(1.5) / (3.0 * PI * delta.powi(4))
}

/// `∫_{B(x,δ)\Ω} J_δ (y - x)·n dy` next to a straight boundary at distance `s`.
pub fn flat_normal_moment(s: f64, delta: f64) -> f64 {
    if s >= delta {
        return 0.0;
    }
    8.0 * (delta * delta - s * s).powf(1.5) / (3.0 * PI * delta.powi(4))
}
