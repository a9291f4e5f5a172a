//! Closed convex regions used to split a ball into an inside and an outside
//! part for quadrature.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::Ellipse;
use crate::Vec2;

/// `{y : y·normal ≤ offset}` with a unit `normal`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub normal: Vec2,
    pub offset: f64,
}

impl HalfPlane {
    pub fn new(normal: Vec2, offset: f64) -> Self {
        Self { normal, offset }
    }

    /// Signed distance from `x` to the boundary line, positive inside.
    #[inline]
    pub fn slack(&self, x: Vec2) -> f64 {
        self.offset - x.dot(self.normal)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConvexRegion {
    /// Intersection of finitely many half-planes.
    Polygon(Vec<HalfPlane>),
    Ellipse(Ellipse),
}

/// Number of samples used to bracket circle–ellipse crossings.
const CROSSING_SAMPLES: usize = 1024;

impl ConvexRegion {
    pub fn contains(&self, x: Vec2, tol: f64) -> bool {
        match self {
            ConvexRegion::Polygon(planes) => planes.iter().all(|h| h.slack(x) >= -tol),
            ConvexRegion::Ellipse(e) => e.level(x) <= tol,
        }
    }

    /// Distance from `x` (inside) to the boundary along the unit direction `d`.
    pub fn exit_distance(&self, x: Vec2, d: Vec2) -> f64 {
        match self {
            ConvexRegion::Polygon(planes) => planes
                .iter()
                .filter_map(|h| {
                    let dn = d.dot(h.normal);
                    (dn > 0.0).then(|| (h.slack(x).max(0.0)) / dn)
                })
                .fold(f64::INFINITY, f64::min),
            ConvexRegion::Ellipse(e) => {
                let (a2, b2) = (e.a() * e.a(), e.b() * e.b());
                let qa = d.x * d.x / a2 + d.y * d.y / b2;
                let qb = 2.0 * (x.x * d.x / a2 + x.y * d.y / b2);
                let qc = e.level(x).min(0.0);
                let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
                if qb >= 0.0 {
                    let q = -0.5 * (qb + disc);
                    if q == 0.0 {
                        0.0
                    } else {
                        qc / q
                    }
                } else {
                    -0.5 * (qb - disc) / qa
                }
            }
        }
    }

    /// Polar angles about `x` at which the exit distance may cross `radius`
    /// or fail to be smooth. Sorted, in `[0, 2π)`.
    pub fn breakpoints(&self, x: Vec2, radius: f64) -> Vec<f64> {
        let mut out = Vec::new();
        match self {
            ConvexRegion::Polygon(planes) => {
                for h in planes {
                    let s = h.slack(x);
                    if s < radius {
                        let phi = h.normal.angle();
                        let half = (s.max(0.0) / radius).min(1.0).acos();
                        out.push(phi - half);
                        out.push(phi + half);
                    }
                }
                for (i, h1) in planes.iter().enumerate() {
                    for h2 in &planes[i + 1..] {
                        let det = h1.normal.cross(h2.normal);
                        if det.abs() < 1e-14 {
                            continue;
                        }
                        let v = Vec2::new(
                            (h1.offset * h2.normal.y - h2.offset * h1.normal.y) / det,
                            (h1.normal.x * h2.offset - h2.normal.x * h1.offset) / det,
                        );
                        let dv = v - x;
                        let r = dv.norm();
                        if r < radius && r > 0.0 && self.contains(v, 1e-12) {
                            out.push(dv.angle());
                        }
                    }
                }
            }
            ConvexRegion::Ellipse(e) => {
                let f = |t: f64| (e.point(t) - x).norm_sq() - radius * radius;
                let step = TAU / CROSSING_SAMPLES as f64;
                let mut t_prev = 0.0;
                let mut f_prev = f(0.0);
                for k in 1..=CROSSING_SAMPLES {
                    let t = step * k as f64;
                    let ft = f(t);
                    if (f_prev < 0.0) != (ft < 0.0) {
                        let (mut lo, mut hi) = (t_prev, t);
                        let neg_lo = f_prev < 0.0;
                        for _ in 0..60 {
                            let mid = 0.5 * (lo + hi);
                            if (f(mid) < 0.0) == neg_lo {
                                lo = mid;
                            } else {
                                hi = mid;
                            }
                        }
                        out.push((e.point(0.5 * (lo + hi)) - x).angle());
                    }
                    t_prev = t;
                    f_prev = ft;
                }
                // On or next to the boundary the exit distance has kinks along
                // the tangent line.
                if -e.level(x) < 1e-10 {
                    if let Ok(t) = e.closest_parameter(x) {
                        let phi = e.normal(t).angle();
                        out.push(phi - PI / 2.0);
                        out.push(phi + PI / 2.0);
                    }
                }
            }
        }
        for t in out.iter_mut() {
            *t = crate::vec2::wrap_angle(*t);
        }
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_square() -> ConvexRegion {
        ConvexRegion::Polygon(alloc::vec![
            HalfPlane::new(Vec2::new(1.0, 0.0), 1.0),
            HalfPlane::new(Vec2::new(-1.0, 0.0), 0.0),
            HalfPlane::new(Vec2::new(0.0, 1.0), 1.0),
            HalfPlane::new(Vec2::new(0.0, -1.0), 0.0),
        ])
    }

    #[test]
    fn exit_distances() {
        let sq = unit_square();
        let x = Vec2::new(0.25, 0.5);
        assert_relative_eq!(sq.exit_distance(x, Vec2::new(1.0, 0.0)), 0.75);
        assert_relative_eq!(sq.exit_distance(x, Vec2::new(-1.0, 0.0)), 0.25);
        let d = Vec2::new(1.0, 1.0).normalized();
        assert_relative_eq!(sq.exit_distance(x, d), 0.5 * 2f64.sqrt(), epsilon = 1e-15);
        let el = ConvexRegion::Ellipse(Ellipse::new(2.0, 1.0).unwrap());
        assert_relative_eq!(el.exit_distance(Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0)), 1.0);
        assert_relative_eq!(
            el.exit_distance(Vec2::new(1.0, 0.0), Vec2::new(0.0, -1.0)),
            0.75f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn corner_breakpoints_include_vertex_direction() {
        let sq = unit_square();
        let x = Vec2::new(0.95, 0.95);
        let bp = sq.breakpoints(x, 0.1);
        assert!(bp.iter().any(|&t| (t - PI / 4.0).abs() < 1e-12));
        // Two crossings per nearby edge plus the vertex.
        assert_eq!(bp.len(), 5);
    }

    #[test]
    fn ellipse_crossings_lie_on_both_curves() {
        let e = Ellipse::new(2.0, 1.0).unwrap();
        let el = ConvexRegion::Ellipse(e.clone());
        let x = Vec2::new(1.8, 0.1);
        let bp = el.breakpoints(x, 0.3);
        assert_eq!(bp.len(), 2);
        for t in bp {
            let y = x + Vec2::from_angle(t) * 0.3;
            assert!(e.level(y).abs() < 1e-12);
        }
    }
}
