//! Analytic domains, closest-point projections, node classification and
//! boundary-parallel contours.

mod ellipse;
mod region;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

#[cfg(not(feature = "std"))]
use num_traits::Float;

pub use ellipse::Ellipse;
pub use region::{ConvexRegion, HalfPlane};

use crate::{Error, Result, Vec2};

/// Absolute tolerance for on-boundary decisions on unit-scale domains.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    UnitSquare,
    UnitDisk,
    Ellipse { a: f64, b: f64 },
    UnitSquareCorner,
}

/// Edges of `[0, 1]²`. The derived order breaks projection ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Edge {
    Left,
    Right,
    Bottom,
    Top,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Left, Edge::Right, Edge::Bottom, Edge::Top];

    pub fn normal(self) -> Vec2 {
        match self {
            Edge::Left => Vec2::new(-1.0, 0.0),
            Edge::Right => Vec2::new(1.0, 0.0),
            Edge::Bottom => Vec2::new(0.0, -1.0),
            Edge::Top => Vec2::new(0.0, 1.0),
        }
    }

    pub fn half_plane(self) -> HalfPlane {
        let offset = match self {
            Edge::Left | Edge::Bottom => 0.0,
            Edge::Right | Edge::Top => 1.0,
        };
        HalfPlane::new(self.normal(), offset)
    }

    pub fn endpoints(self) -> (Vec2, Vec2) {
        match self {
            Edge::Left => (Vec2::new(0.0, 0.0), Vec2::new(0.0, 1.0)),
            Edge::Right => (Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0)),
            Edge::Bottom => (Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)),
            Edge::Top => (Vec2::new(0.0, 1.0), Vec2::new(1.0, 1.0)),
        }
    }

    fn adjacent(self, other: Edge) -> bool {
        let vertical = |e: Edge| matches!(e, Edge::Left | Edge::Right);
        vertical(self) != vertical(other)
    }

    /// Distance from `x` to the closed edge segment.
    pub fn distance(self, x: Vec2) -> f64 {
        let (a, b) = self.endpoints();
        let ab = b - a;
        let t = ((x - a).dot(ab) / ab.norm_sq()).clamp(0.0, 1.0);
        (x - (a + ab * t)).norm()
    }
}

/// A piece of the boundary carrying one type of condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundarySegment {
    Edge(Edge),
    /// The whole boundary of a smooth domain.
    Closed,
}

/// Corner between two straight Neumann pieces.
///
/// `n2` is `n1` rotated clockwise by `π - angle`; each tangent is its normal
/// rotated clockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corner {
    pub point: Vec2,
    pub angle: f64,
    pub n1: Vec2,
    pub p1: Vec2,
    pub n2: Vec2,
    pub p2: Vec2,
    pub segment1: BoundarySegment,
    pub segment2: BoundarySegment,
}

impl Corner {
    pub fn new(
        point: Vec2,
        angle: f64,
        n1: Vec2,
        segment1: BoundarySegment,
        segment2: BoundarySegment,
    ) -> Result<Self> {
        if !(angle > 0.0 && angle < PI) {
            return Err(Error::DegenerateCornerFrame(angle));
        }
        let rot = -(PI - angle);
        let n2 = Vec2::new(n1.x * rot.cos() - n1.y * rot.sin(), n1.x * rot.sin() + n1.y * rot.cos());
        Ok(Self { point, angle, n1, p1: n1.perp_cw(), n2, p2: n2.perp_cw(), segment1, segment2 })
    }

    /// Whether `B(x, δ)` crosses both Neumann lines through the corner.
    pub fn reaches_both(&self, x: Vec2, delta: f64) -> bool {
        let d = self.point - x;
        d.dot(self.n1) < delta && d.dot(self.n2) < delta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub xbar: Vec2,
    pub normal: Vec2,
    pub tangent: Vec2,
    pub dist: f64,
    pub curvature: f64,
    pub segment: BoundarySegment,
    /// Curve parameter of `xbar` on a smooth boundary; zero on edges.
    pub parameter: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionTag {
    Interior,
    /// Within δ of a Neumann piece, even when a Dirichlet piece is closer.
    NeumannCollar,
    /// Within δ of both Neumann lines through the corner.
    CornerDisk,
    DirichletLayer,
}

/// Curve through a collar point at constant distance from the boundary.
#[derive(Debug, Clone, Copy)]
pub enum ParallelContour<'a> {
    Line { origin: Vec2, direction: Vec2 },
    Circle { center: Vec2, radius: f64, angle0: f64 },
    Ellipse { ellipse: &'a Ellipse, offset: f64, t0: f64, origin: Vec2, base: Vec2 },
}

impl ParallelContour<'_> {
    /// Point at signed arc length `l`, clockwise for `l > 0`.
    ///
    /// Straight contours are extended without bound.
    pub fn point(&self, l: f64) -> Result<Vec2> {
        if l == 0.0 {
            return Ok(self.origin());
        }
        Ok(match *self {
            ParallelContour::Line { origin, direction } => origin + direction * l,
            ParallelContour::Circle { center, radius, angle0 } => {
                center + Vec2::from_angle(angle0 - l / radius) * radius
            }
            ParallelContour::Ellipse { ellipse, offset, t0, origin, base } => {
                origin + (ellipse.parallel_point(offset, t0, l)? - base)
            }
        })
    }

    pub fn origin(&self) -> Vec2 {
        match *self {
            ParallelContour::Line { origin, .. } => origin,
            ParallelContour::Circle { center, radius, angle0 } => center + Vec2::from_angle(angle0) * radius,
            ParallelContour::Ellipse { origin, .. } => origin,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    shape: Shape,
    neumann: Vec<BoundarySegment>,
    dirichlet: Vec<BoundarySegment>,
    corner: Option<Corner>,
    ellipse: Option<Ellipse>,
}

impl DomainSpec {
    pub fn new(shape: Shape, neumann: Vec<BoundarySegment>, dirichlet: Vec<BoundarySegment>) -> Result<Self> {
        let invalid = |msg: &str| Err(Error::InvalidDomain(msg.into()));
        let ellipse = match shape {
            Shape::UnitDisk => Some(Ellipse::new(1.0, 1.0)?),
            Shape::Ellipse { a, b } => Some(Ellipse::new(a, b)?),
            _ => None,
        };
        let mut corner = None;
        match shape {
            Shape::UnitDisk | Shape::Ellipse { .. } => {
                if neumann != [BoundarySegment::Closed] || !dirichlet.is_empty() {
                    return invalid("smooth domains carry a single Neumann condition on the whole boundary");
                }
            }
            Shape::UnitSquare | Shape::UnitSquareCorner => {
                let mut seen = [0u8; 4];
                for seg in neumann.iter().chain(&dirichlet) {
                    match seg {
                        BoundarySegment::Edge(e) => seen[*e as usize] += 1,
                        BoundarySegment::Closed => return invalid("square boundaries are described edge by edge"),
                    }
                }
                if seen.iter().any(|&c| c != 1) {
                    return invalid("every square edge needs exactly one boundary condition");
                }
                if neumann.is_empty() {
                    return invalid("at least one Neumann edge is required");
                }
                if shape == Shape::UnitSquareCorner {
                    let mut n = neumann.clone();
                    n.sort_by_key(|s| match s {
                        BoundarySegment::Edge(e) => *e as usize,
                        BoundarySegment::Closed => 4,
                    });
                    if n != [BoundarySegment::Edge(Edge::Right), BoundarySegment::Edge(Edge::Top)] {
                        return invalid("the corner domain has Neumann conditions on the top and right edges");
                    }
                    corner = Some(Corner::new(
                        Vec2::new(1.0, 1.0),
                        FRAC_PI_2,
                        Edge::Top.normal(),
                        BoundarySegment::Edge(Edge::Top),
                        BoundarySegment::Edge(Edge::Right),
                    )?);
                }
            }
        }
        Ok(Self { shape, neumann, dirichlet, corner, ellipse })
    }

    /// Unit square with a Neumann condition on `x = 1` and Dirichlet elsewhere.
    pub fn square_right_neumann() -> Self {
        Self::new(
            Shape::UnitSquare,
            vec![BoundarySegment::Edge(Edge::Right)],
            vec![
                BoundarySegment::Edge(Edge::Left),
                BoundarySegment::Edge(Edge::Bottom),
                BoundarySegment::Edge(Edge::Top),
            ],
        )
        .expect("valid square domain")
    }

    pub fn unit_disk() -> Self {
        Self::new(Shape::UnitDisk, vec![BoundarySegment::Closed], vec![]).expect("valid disk")
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Self::new(Shape::Ellipse { a, b }, vec![BoundarySegment::Closed], vec![])
    }

    /// Unit square with Neumann conditions meeting at the corner `(1, 1)`.
    pub fn square_corner() -> Self {
        Self::new(
            Shape::UnitSquareCorner,
            vec![BoundarySegment::Edge(Edge::Top), BoundarySegment::Edge(Edge::Right)],
            vec![BoundarySegment::Edge(Edge::Left), BoundarySegment::Edge(Edge::Bottom)],
        )
        .expect("valid corner domain")
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn neumann_segments(&self) -> &[BoundarySegment] {
        &self.neumann
    }

    pub fn dirichlet_segments(&self) -> &[BoundarySegment] {
        &self.dirichlet
    }

    pub fn corner(&self) -> Option<&Corner> {
        self.corner.as_ref()
    }

    pub fn has_dirichlet(&self) -> bool {
        !self.dirichlet.is_empty()
    }

    pub fn is_neumann(&self, seg: BoundarySegment) -> bool {
        self.neumann.contains(&seg)
    }

    /// Horizons must stay below this. On the ellipse it is the smallest
    /// radius of curvature; on the square, the side length.
    pub fn reach(&self) -> f64 {
        match &self.ellipse {
            Some(e) => e.reach(),
            None => 1.0,
        }
    }

    /// `[xmin, xmax] × [ymin, ymax]` containing `Ω`.
    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        match self.shape {
            Shape::UnitSquare | Shape::UnitSquareCorner => (Vec2::ZERO, Vec2::new(1.0, 1.0)),
            Shape::UnitDisk => (Vec2::new(-1.0, -1.0), Vec2::new(1.0, 1.0)),
            Shape::Ellipse { a, b } => (Vec2::new(-a, -b), Vec2::new(a, b)),
        }
    }

    /// Membership in the open domain.
    pub fn inside(&self, x: Vec2) -> bool {
        match &self.ellipse {
            Some(e) => e.level(x) < 0.0,
            None => x.x > 0.0 && x.x < 1.0 && x.y > 0.0 && x.y < 1.0,
        }
    }

    /// Membership in the closed domain, up to `tol`.
    pub fn contains_closed(&self, x: Vec2, tol: f64) -> bool {
        match &self.ellipse {
            Some(e) => e.level(x) <= 2.0 * tol / e.b(),
            None => x.x >= -tol && x.x <= 1.0 + tol && x.y >= -tol && x.y <= 1.0 + tol,
        }
    }

    /// `Ω` as a convex region.
    pub fn region(&self) -> ConvexRegion {
        match &self.ellipse {
            Some(e) => ConvexRegion::Ellipse(e.clone()),
            None => ConvexRegion::Polygon(Edge::ALL.iter().map(|e| e.half_plane()).collect()),
        }
    }

    /// Region bounded only by the Neumann boundary.
    ///
    /// Collar and corner rows split their balls against this region, so the
    /// Dirichlet layer counts as inside.
    pub fn neumann_region(&self) -> ConvexRegion {
        match &self.ellipse {
            Some(e) => ConvexRegion::Ellipse(e.clone()),
            None => ConvexRegion::Polygon(
                self.neumann
                    .iter()
                    .filter_map(|s| match s {
                        BoundarySegment::Edge(e) => Some(e.half_plane()),
                        BoundarySegment::Closed => None,
                    })
                    .collect(),
            ),
        }
    }

    fn segment_distance(&self, seg: BoundarySegment, x: Vec2) -> Result<f64> {
        match seg {
            BoundarySegment::Edge(e) => Ok(e.distance(x)),
            BoundarySegment::Closed => {
                let e = self.ellipse.as_ref().expect("closed segments belong to smooth domains");
                if e.a() == e.b() {
                    return Ok((x.norm() - e.a()).abs());
                }
                e.distance(x)
            }
        }
    }

    fn distance_to(&self, segs: &[BoundarySegment], x: Vec2) -> Result<f64> {
        segs.iter().map(|&s| self.segment_distance(s, x)).try_fold(f64::INFINITY, |acc, d| Ok(acc.min(d?)))
    }

    pub fn distance_to_neumann(&self, x: Vec2) -> Result<f64> {
        self.distance_to(&self.neumann, x)
    }

    pub fn distance_to_dirichlet(&self, x: Vec2) -> Result<f64> {
        self.distance_to(&self.dirichlet, x)
    }

    /// Closest point of `x` on the Neumann boundary.
    ///
    /// On squares the nearest Neumann edge is used even when a Dirichlet
    /// edge is closer; ties go to the first edge in [`Edge::ALL`] order.
    pub fn project_neumann(&self, x: Vec2) -> Result<Projection> {
        if self.ellipse.is_some() {
            return self.project(x);
        }
        if !self.contains_closed(x, BOUNDARY_TOL) {
            return Err(Error::OutsideComputationalDomain(x));
        }
        let edge = self
            .neumann
            .iter()
            .filter_map(|s| match s {
                BoundarySegment::Edge(e) => Some(*e),
                BoundarySegment::Closed => None,
            })
            .min_by(|a, b| a.distance(x).total_cmp(&b.distance(x)))
            .ok_or_else(|| Error::InvalidDomain("no Neumann edge".into()))?;
        let n = edge.normal();
        let dist = edge.half_plane().slack(x).max(0.0);
        Ok(Projection {
            xbar: x + n * dist,
            normal: n,
            tangent: n.perp_cw(),
            dist,
            curvature: 0.0,
            segment: BoundarySegment::Edge(edge),
            parameter: 0.0,
        })
    }

    /// Closest boundary point of a point in the closed domain.
    pub fn project(&self, x: Vec2) -> Result<Projection> {
        if !self.contains_closed(x, BOUNDARY_TOL) {
            return Err(Error::OutsideComputationalDomain(x));
        }
        match (&self.ellipse, self.shape) {
            (Some(_), Shape::UnitDisk) => {
                let r = x.norm();
                if r < 1e-14 {
                    return Err(Error::NonUniqueProjection(x));
                }
                let n = x * (1.0 / r);
                Ok(Projection {
                    xbar: n,
                    normal: n,
                    tangent: n.perp_cw(),
                    dist: 1.0 - r,
                    curvature: 1.0,
                    segment: BoundarySegment::Closed,
                    parameter: n.angle(),
                })
            }
            (Some(e), _) => {
                let t = e.closest_parameter(x)?;
                let xbar = e.point(t);
                let n = e.normal(t);
                Ok(Projection {
                    xbar,
                    normal: n,
                    tangent: n.perp_cw(),
                    dist: (xbar - x).dot(n),
                    curvature: e.curvature(t),
                    segment: BoundarySegment::Closed,
                    parameter: t,
                })
            }
            (None, _) => {
                let slack = |e: Edge| e.half_plane().slack(x).max(0.0);
                let best = Edge::ALL.iter().map(|&e| slack(e)).fold(f64::INFINITY, f64::min);
                let tied: Vec<Edge> = Edge::ALL.iter().copied().filter(|&e| slack(e) <= best + BOUNDARY_TOL).collect();
                let edge = match tied.as_slice() {
                    [e] => *e,
                    [e1, e2] if e1.adjacent(*e2) => {
                        let n1 = self.is_neumann(BoundarySegment::Edge(*e1));
                        let n2 = self.is_neumann(BoundarySegment::Edge(*e2));
                        if n2 && !n1 {
                            *e2
                        } else {
                            *e1
                        }
                    }
                    _ => return Err(Error::NonUniqueProjection(x)),
                };
                let n = edge.normal();
                let dist = slack(edge);
                Ok(Projection {
                    xbar: x + n * dist,
                    normal: n,
                    tangent: n.perp_cw(),
                    dist,
                    curvature: 0.0,
                    segment: BoundarySegment::Edge(edge),
                    parameter: 0.0,
                })
            }
        }
    }

    /// Region tag of `x` for horizon `delta`.
    pub fn classify(&self, x: Vec2, delta: f64) -> Result<RegionTag> {
        let closed = self.contains_closed(x, BOUNDARY_TOL);
        if closed {
            if let Some(c) = &self.corner {
                if c.reaches_both(x, delta) {
                    return Ok(RegionTag::CornerDisk);
                }
            }
            let d_n = self.distance_to_neumann(x)?;
            let d_d = self.distance_to_dirichlet(x)?;
            if d_d <= BOUNDARY_TOL {
                return Ok(RegionTag::DirichletLayer);
            }
            if d_n < delta {
                return Ok(RegionTag::NeumannCollar);
            }
            return Ok(RegionTag::Interior);
        }
        if self.has_dirichlet()
            && self.neumann_region().contains(x, BOUNDARY_TOL)
            && self.distance_to_dirichlet(x)? <= delta * (1.0 + 1e-12)
        {
            return Ok(RegionTag::DirichletLayer);
        }
        Err(Error::OutsideComputationalDomain(x))
    }

    /// Contour through `x` parallel to the boundary piece closest to `x`.
    pub fn parallel_contour(&self, x: Vec2) -> Result<ParallelContour<'_>> {
        let proj = self.project(x)?;
        Ok(self.contour_from_projection(x, &proj))
    }

    pub fn contour_from_projection(&self, x: Vec2, proj: &Projection) -> ParallelContour<'_> {
        match (&self.ellipse, self.shape) {
            (Some(_), Shape::UnitDisk) => {
                ParallelContour::Circle { center: Vec2::ZERO, radius: 1.0 - proj.dist, angle0: proj.parameter }
            }
            (Some(e), _) => ParallelContour::Ellipse {
                ellipse: e,
                offset: proj.dist,
                t0: proj.parameter,
                origin: x,
                base: e.point(proj.parameter) - e.normal(proj.parameter) * proj.dist,
            },
            (None, _) => ParallelContour::Line { origin: x, direction: proj.tangent },
        }
    }

    /// `x_l` on the parallel contour through a collar point `x`.
    ///
    /// Fails when `x_l` leaves the closed domain or is closer to the Dirichlet
    /// boundary than to the Neumann boundary.
    pub fn contour_point(&self, x: Vec2, l: f64) -> Result<Vec2> {
        let y = self.parallel_contour(x)?.point(l)?;
        let leaves = !self.contains_closed(y, BOUNDARY_TOL)
            || (self.has_dirichlet() && self.distance_to_dirichlet(y)? < self.distance_to_neumann(y)?);
        if leaves {
            return Err(Error::ContourLeavesNeumannRegion { point: x, arc_length: l });
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn close(a: Vec2, b: Vec2, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn inside_is_open() {
        let d = DomainSpec::unit_disk();
        assert!(d.inside(Vec2::ZERO));
        assert!(!d.inside(Vec2::new(1.0, 0.0)));
        let e = DomainSpec::ellipse(2.0, 1.0).unwrap();
        assert!(e.inside(Vec2::new(1.5, 0.5)));
        assert!(!DomainSpec::square_right_neumann().inside(Vec2::new(1.0, 0.5)));
    }

    #[test]
    fn projections() {
        let p = DomainSpec::unit_disk().project(Vec2::new(0.9, 0.0)).unwrap();
        assert!(close(p.xbar, Vec2::new(1.0, 0.0), 1e-15));
        assert!(close(p.normal, Vec2::new(1.0, 0.0), 1e-15));
        assert_relative_eq!(p.dist, 0.1, epsilon = 1e-15);
        assert_eq!(p.curvature, 1.0);

        let sq = DomainSpec::square_right_neumann();
        let p = sq.project(Vec2::new(0.97, 0.5)).unwrap();
        assert!(close(p.xbar, Vec2::new(1.0, 0.5), 1e-15));
        assert_relative_eq!(p.dist, 0.03, epsilon = 1e-15);
        assert_eq!(p.segment, BoundarySegment::Edge(Edge::Right));
        assert_eq!(p.tangent, Vec2::new(0.0, -1.0));

        let el = DomainSpec::ellipse(2.0, 1.0).unwrap();
        let p = el.project(Vec2::new(1.9, 0.0)).unwrap();
        assert!(close(p.xbar, Vec2::new(2.0, 0.0), 1e-12));
        assert_relative_eq!(p.dist, 0.1, epsilon = 1e-12);
        assert_relative_eq!(p.curvature, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn square_ties() {
        let sq = DomainSpec::square_right_neumann();
        // Adjacent tie between Neumann (right) and Dirichlet (bottom) prefers Neumann.
        let p = sq.project(Vec2::new(0.9, 0.1)).unwrap();
        assert_eq!(p.segment, BoundarySegment::Edge(Edge::Right));
        // Two Dirichlet edges: lower edge order wins.
        let p = sq.project(Vec2::new(0.1, 0.1)).unwrap();
        assert_eq!(p.segment, BoundarySegment::Edge(Edge::Left));
        assert!(matches!(sq.project(Vec2::new(0.5, 0.5)), Err(Error::NonUniqueProjection(_))));
    }

    #[test]
    fn classification() {
        let sq = DomainSpec::square_right_neumann();
        assert_eq!(sq.classify(Vec2::new(0.5, 0.5), 0.05).unwrap(), RegionTag::Interior);
        assert_eq!(sq.classify(Vec2::new(0.97, 0.5), 0.05).unwrap(), RegionTag::NeumannCollar);
        assert_eq!(sq.classify(Vec2::new(1.0, 0.5), 0.05).unwrap(), RegionTag::NeumannCollar);
        assert_eq!(sq.classify(Vec2::new(-0.01, 0.3), 0.05).unwrap(), RegionTag::DirichletLayer);
        assert_eq!(sq.classify(Vec2::new(0.0, 0.3), 0.05).unwrap(), RegionTag::DirichletLayer);
        assert_eq!(sq.classify(Vec2::new(0.5, 1.04), 0.05).unwrap(), RegionTag::DirichletLayer);
        assert!(sq.classify(Vec2::new(1.01, 0.5), 0.05).is_err());
        assert!(sq.classify(Vec2::new(-0.06, 0.3), 0.05).is_err());
        // The collar is the full strip along the Neumann edge.
        assert_eq!(sq.classify(Vec2::new(0.98, 0.01), 0.05).unwrap(), RegionTag::NeumannCollar);
        let p = sq.project_neumann(Vec2::new(0.98, 0.01)).unwrap();
        assert_eq!(p.segment, BoundarySegment::Edge(Edge::Right));
        assert!((p.dist - 0.02).abs() < 1e-15);

        let c = DomainSpec::square_corner();
        assert_eq!(c.classify(Vec2::new(0.98, 0.98), 0.05).unwrap(), RegionTag::CornerDisk);
        // Outside the disk |x - c| < δ but within δ of both Neumann lines.
        assert_eq!(c.classify(Vec2::new(0.96, 0.96), 0.05).unwrap(), RegionTag::CornerDisk);
        assert_eq!(c.classify(Vec2::new(0.98, 0.5), 0.05).unwrap(), RegionTag::NeumannCollar);
        assert_eq!(c.classify(Vec2::new(0.5, 0.98), 0.05).unwrap(), RegionTag::NeumannCollar);
        assert!(c.classify(Vec2::new(0.5, 1.01), 0.05).is_err());
        assert_eq!(c.classify(Vec2::new(0.5, -0.02), 0.05).unwrap(), RegionTag::DirichletLayer);

        let d = DomainSpec::unit_disk();
        assert_eq!(d.classify(Vec2::new(0.0, -1.0), 0.1).unwrap(), RegionTag::NeumannCollar);
        assert_eq!(d.classify(Vec2::new(0.0, -0.5), 0.1).unwrap(), RegionTag::Interior);
        assert!(d.classify(Vec2::new(0.0, -1.01), 0.1).is_err());
    }

    #[test]
    fn contour_points() {
        let d = DomainSpec::unit_disk();
        let y = d.contour_point(Vec2::new(0.9, 0.0), 0.45 * PI).unwrap();
        assert!(close(y, Vec2::new(0.0, -0.9), 1e-15));
        assert_eq!(d.contour_point(Vec2::new(0.9, 0.0), 0.0).unwrap(), Vec2::new(0.9, 0.0));

        let sq = DomainSpec::square_right_neumann();
        let y = sq.contour_point(Vec2::new(0.97, 0.5), 0.02).unwrap();
        assert!(close(y, Vec2::new(0.97, 0.48), 1e-15));
        assert!(matches!(sq.contour_point(Vec2::new(0.97, 0.03), 0.02), Err(Error::ContourLeavesNeumannRegion { .. })));

        let el = DomainSpec::ellipse(2.0, 1.0).unwrap();
        let x = Vec2::new(1.9, 0.0);
        let y = el.contour_point(x, 0.05).unwrap();
        assert!(y.y < 0.0);
        assert_relative_eq!(el.project(y).unwrap().dist, 0.1, epsilon = 1e-12);
    }

    #[test]
    fn corner_frame() {
        let c = *DomainSpec::square_corner().corner().unwrap();
        assert!(close(c.n1, Vec2::new(0.0, 1.0), 1e-15));
        assert!(close(c.p1, Vec2::new(1.0, 0.0), 1e-15));
        assert!(close(c.n2, Vec2::new(1.0, 0.0), 1e-15));
        assert!(close(c.p2, Vec2::new(0.0, -1.0), 1e-15));
        assert!(matches!(
            Corner::new(Vec2::ZERO, PI, Vec2::new(0.0, 1.0), BoundarySegment::Closed, BoundarySegment::Closed),
            Err(Error::DegenerateCornerFrame(_))
        ));
    }

    #[test]
    fn invalid_domains_rejected() {
        assert!(DomainSpec::ellipse(1.0, 2.0).is_err());
        assert!(DomainSpec::new(Shape::UnitSquare, vec![BoundarySegment::Edge(Edge::Right)], vec![]).is_err());
        assert!(DomainSpec::new(Shape::UnitDisk, vec![], vec![BoundarySegment::Closed]).is_err());
    }
}
