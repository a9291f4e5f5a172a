//! Collocation rows of the nonlocal system.
//!
//! Interior rows apply `L_δ u(x) = -2∫_{B(x,δ)} J_δ (u(y) - u(x)) dy` to the
//! GMLS reconstruction. Collar rows replace the part of the ball outside the
//! Neumann boundary by the second-order flux closure: with `x̄`, `n`, `p`, `s`
//! the projection data of `x` and `K` the Neumann-side region,
//!
//! ```text
//! -2∫_{B∩K} J (u(y)-u(x)) dy - M · 2∫ H (u(x_l)-u(x)) dl
//!     = f + (2∫_{B\K} J (y-x)·n dy + M κ) g(x̄) - ∫_{B\K} J [((y-x̄)·n)² - s²] dy f
//! ```
//!
//! with `M = ∫_{B\K} J [((y-x)·p)² - ((y-x̄)·n)² + s²] dy`.

mod corner;
mod system;

use alloc::boxed::Box;
use alloc::vec::Vec;

pub use corner::CornerData;
pub use system::{NonlocalSystem, RowKind, SparseRow};

use crate::geometry::{BoundarySegment, ConvexRegion, DomainSpec, Projection, RegionTag};
use crate::gmls::{basis_increment, build_neighbors, Frame, LocalFit, NeighborGrid, PointCloud, BASIS_DIM};
use crate::kernels::KernelSet;
use crate::quadrature::{Quadrature, QuadratureConfig};
use crate::{Error, Result, Vec2};

/// Data of a manufactured or physical problem.
pub trait ProblemData {
    /// Right-hand side `f` with `-Δu = f`.
    fn source(&self, x: Vec2) -> f64;

    /// Neumann datum `g = ∂u/∂n` at the boundary point `xbar` of `segment`.
    fn flux(&self, segment: BoundarySegment, xbar: Vec2, normal: Vec2) -> f64;

    /// Derivative of the Neumann datum of `segment` along `tangent` at `xbar`.
    ///
    /// Only corner rows use it.
    fn flux_tangential_derivative(&self, segment: BoundarySegment, xbar: Vec2, normal: Vec2, tangent: Vec2) -> f64;

    /// Value prescribed on the Dirichlet layer.
    fn dirichlet(&self, x: Vec2) -> f64;

    /// Point and value fixing the additive constant of a pure Neumann problem.
    fn pin(&self) -> Option<(Vec2, f64)> {
        None
    }
}

/// Which curvature multiplies `M_δ g` on the collar right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CurvatureTerm {
    /// `-2∫ H (x_l - x)·n dl` on the same contour as the row, which makes the
    /// closure exact on linear functions whenever the exterior is symmetric
    /// about the normal line.
    #[default]
    ContourMoment,
    /// Boundary curvature `κ(x̄)`, positive on convex domains.
    BoundaryCurvature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssemblyConfig {
    pub quadrature: QuadratureConfig,
    pub curvature: CurvatureTerm,
    /// Replace the row nearest the problem's pin point by an identity row.
    pub apply_pin: bool,
}

impl Default for AssemblyConfig {
    fn default() -> Self {
        Self { quadrature: QuadratureConfig::default(), curvature: CurvatureTerm::default(), apply_pin: true }
    }
}

/// Kernel moments of a collar node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollarData {
    pub projection: Projection,
    /// `M_δ(x)`.
    pub m: f64,
    /// `∫_{B\K} J (y - x)·n dy`.
    pub normal_moment: f64,
    /// `∫_{B\K} J [((y - x̄)·n)² - s²] dy`.
    pub source_correction: f64,
    /// Curvature multiplying `M_δ g`.
    pub curvature: f64,
    /// Target functional on the scaled basis in the `(n, p)` frame.
    pub tau: [f64; BASIS_DIM],
    /// Coefficient of `g(x̄)` on the right-hand side.
    pub flux_coefficient: f64,
}

/// Builds rows of the nonlocal system on a point cloud.
pub struct Assembler<'a, P: ?Sized> {
    domain: &'a DomainSpec,
    cloud: &'a PointCloud,
    kernels: KernelSet,
    problem: &'a P,
    quad: Quadrature,
    grid: NeighborGrid,
    neumann_region: ConvexRegion,
    curvature: CurvatureTerm,
    pin_node: Option<usize>,
}

impl<'a, P: ProblemData + ?Sized> Assembler<'a, P> {
    pub fn new(
        domain: &'a DomainSpec,
        cloud: &'a PointCloud,
        kernels: KernelSet,
        problem: &'a P,
        config: &AssemblyConfig,
    ) -> Result<Self> {
        let delta = kernels.delta();
        if delta >= domain.reach() {
            return Err(Error::InvalidParameter(alloc::format!(
                "horizon {delta} is not below the boundary reach {}",
                domain.reach()
            )));
        }
        let pin_node = if config.apply_pin { problem.pin().map(|(p, _)| cloud.nearest(p)) } else { None };
        Ok(Self {
            domain,
            cloud,
            kernels,
            problem,
            quad: Quadrature::new(config.quadrature)?,
            grid: NeighborGrid::new(cloud, delta),
            neumann_region: domain.neumann_region(),
            curvature: config.curvature,
            pin_node,
        })
    }

    pub fn len(&self) -> usize {
        self.cloud.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cloud.is_empty()
    }

    pub fn pin_node(&self) -> Option<usize> {
        self.pin_node
    }

    pub fn kernels(&self) -> &KernelSet {
        &self.kernels
    }

    fn delta(&self) -> f64 {
        self.kernels.delta()
    }

    /// Row `i`, with the kind dictated by the node's tag and the pin.
    pub fn row(&self, i: usize) -> Result<SparseRow> {
        if Some(i) == self.pin_node {
            return Ok(self.pin_row(i));
        }
        match self.cloud.tag(i) {
            RegionTag::Interior => self.interior_row(i),
            RegionTag::NeumannCollar => self.neumann_row(i),
            RegionTag::CornerDisk => self.corner_row(i),
            RegionTag::DirichletLayer => Ok(self.dirichlet_row(i)),
        }
    }

    /// All rows in node order; failures are collected per node.
    pub fn assemble(&self) -> Result<NonlocalSystem> {
        NonlocalSystem::from_rows((0..self.len()).map(|i| self.row(i)).collect(), self.pin_node)
    }

    fn fit(&self, i: usize, frame: &Frame) -> Result<LocalFit> {
        let nb = build_neighbors(self.cloud, &self.grid, i, self.delta())?;
        LocalFit::new(self.cloud, i, nb, frame, self.delta())
    }

    fn gmls_row(&self, i: usize, frame: &Frame, tau: &[f64; BASIS_DIM], rhs: f64, kind: RowKind) -> Result<SparseRow> {
        let fit = self.fit(i, frame)?;
        let vals = fit.weights(tau);
        Ok(SparseRow { cols: fit.neighbors().to_vec(), vals, rhs, kind })
    }

    /// `∫_{B(0,δ)} J_δ (q_k(z) - q_k(0)) dz` on the δ-scaled basis.
    fn full_ball_increments(&self) -> [f64; BASIS_DIM] {
        let d2 = self.delta() * self.delta();
        let k = &self.kernels;
        [0.0, 0.0, 0.0, k.j_ball_moment(2, 0) / d2, k.j_ball_moment(0, 2) / d2, 0.0]
    }

    /// Interior functional `-2∫_B J (q_k(y) - q_k(x)) dy` on the scaled basis.
    pub fn interior_tau(&self) -> [f64; BASIS_DIM] {
        self.full_ball_increments().map(|v| -2.0 * v)
    }

    pub fn interior_row(&self, i: usize) -> Result<SparseRow> {
        let x = self.cloud.point(i);
        self.gmls_row(i, &Frame::CARTESIAN, &self.interior_tau(), self.problem.source(x), RowKind::Interior)
    }

    /// `J_δ`-weighted moments of `[a, b, a², b², ab]` over `B(x,δ) \ K`, where
    /// `(a, b)` are the `frame` coordinates of `(y - x)/δ`.
    fn outside_basis_moments(&self, x: Vec2, frame: &Frame) -> Result<[f64; 5]> {
        let delta = self.delta();
        let raw = self.quad.integrate_outside(x, delta, &self.neumann_region, |y| {
            let (a, b) = frame.coords(y - x);
            let (a, b) = (a / delta, b / delta);
            [a, b, a * a, b * b, a * b]
        })?;
        Ok(raw.map(|v| self.kernels.j0() * v))
    }

    /// Collar moments and functional at node `i`.
    pub fn collar_data(&self, i: usize) -> Result<CollarData> {
        let x = self.cloud.point(i);
        let delta = self.delta();
        let proj = self.domain.project_neumann(x)?;
        let frame = Frame::new(proj.normal, proj.tangent);
        let s = proj.dist;
        let [oa, ob, oaa, obb, oab] = self.outside_basis_moments(x, &frame)?;
        let normal_moment = delta * oa;
        let m = delta * delta * (obb - oaa) + 2.0 * s * delta * oa;
        let source_correction = delta * delta * oaa - 2.0 * s * delta * oa;

        let contour = self.domain.contour_from_projection(x, &proj);
        let c = self.quad.contour_integral(&contour, delta, |y| {
            let q = basis_increment(x, &frame, y, delta);
            [q[1], q[2], q[3], q[4], q[5], (y - x).dot(proj.normal)]
        })?;
        let curvature = match self.curvature {
            CurvatureTerm::ContourMoment => -2.0 * c[5],
            CurvatureTerm::BoundaryCurvature => proj.curvature,
        };
        let full = self.full_ball_increments();
        let outside = [0.0, oa, ob, oaa, obb, oab];
        let mut tau = [0.0; BASIS_DIM];
        for k in 1..BASIS_DIM {
            tau[k] = -2.0 * (full[k] - outside[k]) - m * 2.0 * c[k - 1];
        }
        Ok(CollarData {
            projection: proj,
            m,
            normal_moment,
            source_correction,
            curvature,
            tau,
            flux_coefficient: 2.0 * normal_moment + m * curvature,
        })
    }

    pub fn neumann_row(&self, i: usize) -> Result<SparseRow> {
        let x = self.cloud.point(i);
        let data = self.collar_data(i)?;
        let p = &data.projection;
        let f = self.problem.source(x);
        let g = self.problem.flux(p.segment, p.xbar, p.normal);
        let rhs = f + data.flux_coefficient * g - data.source_correction * f;
        self.gmls_row(i, &Frame::new(p.normal, p.tangent), &data.tau, rhs, RowKind::Neumann)
    }

    pub fn corner_row(&self, i: usize) -> Result<SparseRow> {
        let x = self.cloud.point(i);
        let corner = self
            .domain
            .corner()
            .ok_or_else(|| Error::InvalidDomain("corner rows need a domain with a corner".into()))?;
        let data = self.corner_data(i)?;
        let frame = Frame::new(corner.n1, corner.p1);
        let f = self.problem.source(x);
        let rhs = data.rhs(self.problem, corner, f);
        self.gmls_row(i, &frame, &data.tau, rhs, RowKind::Corner)
    }

    pub fn dirichlet_row(&self, i: usize) -> SparseRow {
        SparseRow::identity(i, self.problem.dirichlet(self.cloud.point(i)), RowKind::Dirichlet)
    }

    pub fn pin_row(&self, i: usize) -> SparseRow {
        let value = self.problem.pin().map_or(0.0, |(_, v)| v);
        SparseRow::identity(i, value, RowKind::Pinned)
    }
}

/// Wraps per-node failures.
pub(crate) fn aggregate(failures: Vec<(usize, Error)>) -> Error {
    Error::Assembly(failures.into_iter().map(|(i, e)| (i, Box::new(e))).collect())
}
