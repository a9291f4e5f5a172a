//! Manufactured solutions for the shipped test problems.

use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::assembly::ProblemData;
use crate::geometry::{BoundarySegment, DomainSpec};
use crate::{Error, Result, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseName {
    /// Unit square, Neumann on `x = 1`, Dirichlet layer elsewhere.
    T1Square,
    /// Unit disk, pure Neumann, pinned at `(0, -1)`.
    T2Disk,
    /// Ellipse with semi-axes 2 and 1, pure Neumann, pinned at `(0, -1)`.
    T3Ellipse,
    /// `u = x + y` on the square geometry.
    PatchLinear,
    /// `u = x + y` on the disk.
    PatchLinearDisk,
    /// `u = x + y` on the ellipse.
    PatchLinearEllipse,
    /// `u = x²y²` on the unit square with Neumann edges meeting at `(1, 1)`.
    CornerSquare,
}

impl CaseName {
    pub const ALL: [CaseName; 7] = [
        CaseName::T1Square,
        CaseName::T2Disk,
        CaseName::T3Ellipse,
        CaseName::PatchLinear,
        CaseName::PatchLinearDisk,
        CaseName::PatchLinearEllipse,
        CaseName::CornerSquare,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseName::T1Square => "T1_Square",
            CaseName::T2Disk => "T2_Disk",
            CaseName::T3Ellipse => "T3_Ellipse",
            CaseName::PatchLinear => "PatchLinear",
            CaseName::PatchLinearDisk => "PatchLinearDisk",
            CaseName::PatchLinearEllipse => "PatchLinearEllipse",
            CaseName::CornerSquare => "CornerSquare",
        }
    }
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(alloc::format!("unknown case `{s}`")))
    }
}

/// Closed-form local solution with its derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Solution {
    /// `sin(πx) cos(πy)`.
    SinCos,
    /// `x + y`.
    Linear,
    /// `x² y²`.
    CornerQuartic,
}

impl Solution {
    pub fn value(self, p: Vec2) -> f64 {
        match self {
            Solution::SinCos => (PI * p.x).sin() * (PI * p.y).cos(),
            Solution::Linear => p.x + p.y,
            Solution::CornerQuartic => p.x * p.x * p.y * p.y,
        }
    }

    pub fn gradient(self, p: Vec2) -> Vec2 {
        match self {
            Solution::SinCos => {
                let (sx, cx) = (PI * p.x).sin_cos();
                let (sy, cy) = (PI * p.y).sin_cos();
                Vec2::new(PI * cx * cy, -PI * sx * sy)
            }
            Solution::Linear => Vec2::new(1.0, 1.0),
            Solution::CornerQuartic => Vec2::new(2.0 * p.x * p.y * p.y, 2.0 * p.x * p.x * p.y),
        }
    }

    /// `[u_xx, u_yy, u_xy]`.
    pub fn hessian(self, p: Vec2) -> [f64; 3] {
        match self {
            Solution::SinCos => {
                let (sx, cx) = (PI * p.x).sin_cos();
                let (sy, cy) = (PI * p.y).sin_cos();
                let pp = PI * PI;
                [-pp * sx * cy, -pp * sx * cy, -pp * cx * sy]
            }
            Solution::Linear => [0.0; 3],
            Solution::CornerQuartic => [2.0 * p.y * p.y, 2.0 * p.x * p.x, 4.0 * p.x * p.y],
        }
    }

    /// `-Δu`.
    pub fn source(self, p: Vec2) -> f64 {
        let [xx, yy, _] = self.hessian(p);
        -(xx + yy)
    }
}

/// A test problem: domain, local solution and the derived data.
#[derive(Debug, Clone, PartialEq)]
pub struct ManufacturedCase {
    name: CaseName,
    domain: DomainSpec,
    solution: Solution,
    pin: Option<Vec2>,
}

impl ManufacturedCase {
    pub fn new(name: CaseName) -> Self {
        let ellipse = || DomainSpec::ellipse(2.0, 1.0).expect("valid ellipse");
        let pin = Some(Vec2::new(0.0, -1.0));
        let (domain, solution, pin) = match name {
            CaseName::T1Square => (DomainSpec::square_right_neumann(), Solution::SinCos, None),
            CaseName::T2Disk => (DomainSpec::unit_disk(), Solution::SinCos, pin),
            CaseName::T3Ellipse => (ellipse(), Solution::SinCos, pin),
            CaseName::PatchLinear => (DomainSpec::square_right_neumann(), Solution::Linear, None),
            CaseName::PatchLinearDisk => (DomainSpec::unit_disk(), Solution::Linear, pin),
            CaseName::PatchLinearEllipse => (ellipse(), Solution::Linear, pin),
            CaseName::CornerSquare => (DomainSpec::square_corner(), Solution::CornerQuartic, None),
        };
        Self { name, domain, solution, pin }
    }

    pub fn name(&self) -> CaseName {
        self.name
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn solution(&self) -> Solution {
        self.solution
    }

    pub fn u0(&self, p: Vec2) -> f64 {
        self.solution.value(p)
    }
}

impl ProblemData for ManufacturedCase {
    fn source(&self, x: Vec2) -> f64 {
        self.solution.source(x)
    }

    fn flux(&self, _segment: BoundarySegment, xbar: Vec2, normal: Vec2) -> f64 {
        self.solution.gradient(xbar).dot(normal)
    }

    /// `pᵀ ∇²u n`, the tangential derivative of `∂u/∂n` along a straight edge.
    fn flux_tangential_derivative(&self, _segment: BoundarySegment, xbar: Vec2, normal: Vec2, tangent: Vec2) -> f64 {
        let [xx, yy, xy] = self.solution.hessian(xbar);
        tangent.x * (xx * normal.x + xy * normal.y) + tangent.y * (xy * normal.x + yy * normal.y)
    }

    fn dirichlet(&self, x: Vec2) -> f64 {
        self.solution.value(x)
    }

    fn pin(&self) -> Option<(Vec2, f64)> {
        self.pin.map(|p| (p, self.solution.value(p)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn names_round_trip() {
        for c in CaseName::ALL {
            assert_eq!(c.as_str().parse::<CaseName>().unwrap(), c);
        }
        assert!("T4".parse::<CaseName>().is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for sol in [Solution::SinCos, Solution::Linear, Solution::CornerQuartic] {
            for &p in &[Vec2::new(0.3, 0.7), Vec2::new(-0.4, 0.1), Vec2::new(1.2, -0.6)] {
                let ex = Vec2::new(h, 0.0);
                let ey = Vec2::new(0.0, h);
                let gx = (sol.value(p + ex) - sol.value(p - ex)) / (2.0 * h);
                let gy = (sol.value(p + ey) - sol.value(p - ey)) / (2.0 * h);
                let g = sol.gradient(p);
                assert_relative_eq!(g.x, gx, epsilon = 1e-6);
                assert_relative_eq!(g.y, gy, epsilon = 1e-6);
                let lap = (sol.value(p + ex) + sol.value(p - ex) + sol.value(p + ey) + sol.value(p - ey)
                    - 4.0 * sol.value(p))
                    / (h * h);
                assert_relative_eq!(-lap, sol.source(p), epsilon = 1e-4);
            }
        }
    }

    #[test]
    fn boundary_data() {
        let disk = ManufacturedCase::new(CaseName::T2Disk);
        // ∂u/∂n on the unit circle equals x u_x + y u_y.
        let x = Vec2::new(0.6, -0.8);
        let (sx, cx) = (PI * x.x).sin_cos();
        let (sy, cy) = (PI * x.y).sin_cos();
        let printed = PI * x.x * cx * cy - PI * x.y * sx * sy;
        assert_relative_eq!(disk.flux(BoundarySegment::Closed, x, x), printed, epsilon = 1e-14);
        assert_eq!(disk.pin().unwrap().1.abs(), 0.0);

        let corner = ManufacturedCase::new(CaseName::CornerSquare);
        let top = Vec2::new(0.3, 1.0);
        let n = Vec2::new(0.0, 1.0);
        assert_relative_eq!(corner.flux(BoundarySegment::Closed, top, n), 2.0 * 0.09, epsilon = 1e-15);
        let d = corner.flux_tangential_derivative(BoundarySegment::Closed, top, n, Vec2::new(1.0, 0.0));
        assert_relative_eq!(d, 4.0 * 0.3, epsilon = 1e-15);
        let right = Vec2::new(1.0, 0.4);
        let d = corner.flux_tangential_derivative(
            BoundarySegment::Closed,
            right,
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, -1.0),
        );
        assert_relative_eq!(d, -4.0 * 0.4, epsilon = 1e-15);
    }
}
