//! Rows at nodes within `δ` of a corner between two straight Neumann edges.
//!
//! With `(d₁, d₂)` the coordinates of `y - x` in the oblique basis `(n₁, n₂)`
//! and `s_i` the distances to the two edge lines, a second-order expansion of
//! `u(y) - u(x)` over `B(x,δ) \ K` gives, for `D₁ ≥ D₂`,
//!
//! ```text
//! -2∫_{B∩K} J (u(y)-u(x)) dy + (D₁ - D₂) · 2∫ H_{δ₁} (u(x_l)-u(x)) dl
//!     = f - D₁ f - D₂ cot θ (g₁' - g₂')
//!       + 2∫_{B\K} J [d₁ g₁ + d₂ g₂ + d₁ d₂ (g₁' - g₂' + f sin θ cos θ) / (2 sin θ)] dy
//! ```
//!
//! where `D_i = 2∫_{B\K} J (d_i²/2 - s_i d_i) dy`, `g_i' = ∂g_i/∂p_i`, and the
//! contour runs through `x` along `p₁` with half-width `δ₁ = min(δ, s₂/sin θ)`.
//! The roles of the two edges swap when `D₂ > D₁`.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::{Assembler, ProblemData};
use crate::geometry::{Corner, ParallelContour};
use crate::gmls::{basis_increment, Frame, BASIS_DIM};
use crate::{Error, Result, Vec2};

/// Half-widths below this fraction of `δ` use the exact second derivative.
const MIN_CONTOUR_FRACTION: f64 = 1e-8;

/// Geometric moments of a corner node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerData {
    pub x: Vec2,
    pub d1: f64,
    pub d2: f64,
    /// Whether the contour runs along the first edge.
    pub along_first: bool,
    pub contour_half_width: f64,
    /// `∫_{B\K} J d₁`, `∫_{B\K} J d₂`, `∫_{B\K} J d₁ d₂`.
    pub int_d1: f64,
    pub int_d2: f64,
    pub int_d1d2: f64,
    /// Functional on the δ-scaled basis in the `(n₁, p₁)` frame.
    pub tau: [f64; BASIS_DIM],
}

impl CornerData {
    pub fn rhs<P: ProblemData + ?Sized>(&self, problem: &P, corner: &Corner, f: f64) -> f64 {
        let x = self.x;
        let xbar1 = x + corner.n1 * (corner.point - x).dot(corner.n1);
        let xbar2 = x + corner.n2 * (corner.point - x).dot(corner.n2);
        let g1 = problem.flux(corner.segment1, xbar1, corner.n1);
        let g2 = problem.flux(corner.segment2, xbar2, corner.n2);
        let dg1 = problem.flux_tangential_derivative(corner.segment1, xbar1, corner.n1, corner.p1);
        let dg2 = problem.flux_tangential_derivative(corner.segment2, xbar2, corner.n2, corner.p2);
        let (sin, cos) = corner.angle.sin_cos();
        let jump = dg1 - dg2;
        let (d_main, d_other) = if self.along_first { (self.d1, self.d2) } else { (self.d2, self.d1) };
        f - d_main * f - d_other * (cos / sin) * jump
            + 2.0 * (self.int_d1 * g1 + self.int_d2 * g2 + self.int_d1d2 * (jump + f * sin * cos) / (2.0 * sin))
    }
}

/// Coordinates of `z` in the basis `(n1, n2)`.
#[inline]
fn oblique(z: Vec2, n1: Vec2, n2: Vec2) -> (f64, f64) {
    let det = n1.cross(n2);
    (z.cross(n2) / det, n1.cross(z) / det)
}

impl<P: ProblemData + ?Sized> Assembler<'_, P> {
    pub fn corner_data(&self, i: usize) -> Result<CornerData> {
        let corner = *self
            .domain
            .corner()
            .ok_or_else(|| Error::InvalidDomain("corner rows need a domain with a corner".into()))?;
        if !(corner.angle > 0.0 && corner.angle < core::f64::consts::PI) {
            return Err(Error::DegenerateCornerFrame(corner.angle));
        }
        let x = self.cloud.point(i);
        let delta = self.delta();
        let frame = Frame::new(corner.n1, corner.p1);
        let s1 = (corner.point - x).dot(corner.n1).max(0.0);
        let s2 = (corner.point - x).dot(corner.n2).max(0.0);
        let j0 = self.kernels.j0();
        let raw = self.quad.integrate_outside(x, delta, &self.neumann_region, |y| {
            let z = y - x;
            let (a, b) = frame.coords(z);
            let (a, b) = (a / delta, b / delta);
            let (d1, d2) = oblique(z, corner.n1, corner.n2);
            [a, b, a * a, b * b, a * b, d1, d2, d1 * d1, d2 * d2, d1 * d2]
        })?;
        let o = raw.map(|v| j0 * v);
        let d1 = 2.0 * (0.5 * o[7] - s1 * o[5]);
        let d2 = 2.0 * (0.5 * o[8] - s2 * o[6]);
        let along_first = d1 >= d2;
        let sin = corner.angle.sin();
        let (dir, half) =
            if along_first { (corner.p1, (s2 / sin).min(delta)) } else { (corner.p2, (s1 / sin).min(delta)) };
        let coefficient = if along_first { d1 - d2 } else { d2 - d1 };

        // Second difference along the contour on the scaled basis.
        let second = if half > MIN_CONTOUR_FRACTION * delta {
            let contour = ParallelContour::Line { origin: x, direction: dir };
            let c = self.quad.contour_integral(&contour, half, |y| {
                let q = basis_increment(x, &frame, y, delta);
                [q[1], q[2], q[3], q[4], q[5]]
            })?;
            [0.0, 2.0 * c[0], 2.0 * c[1], 2.0 * c[2], 2.0 * c[3], 2.0 * c[4]]
        } else {
            let (a, b) = frame.coords(dir);
            let d2 = delta * delta;
            [0.0, 0.0, 0.0, 2.0 * a * a / d2, 2.0 * b * b / d2, 2.0 * a * b / d2]
        };
        let full = self.full_ball_increments();
        let outside = [0.0, o[0], o[1], o[2], o[3], o[4]];
        let mut tau = [0.0; BASIS_DIM];
        for k in 1..BASIS_DIM {
            tau[k] = -2.0 * (full[k] - outside[k]) + coefficient * second[k];
        }
        Ok(CornerData {
            x,
            d1,
            d2,
            along_first,
            contour_half_width: half,
            int_d1: o[5],
            int_d2: o[6],
            int_d1d2: o[9],
            tau,
        })
    }
}
