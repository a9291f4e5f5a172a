//! Ellipse `x²/a² + y²/b² = 1` parametrized by `E(t) = (a cos t, b sin t)`.

use core::f64::consts::{PI, TAU};

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::quadrature::GaussRule;
use crate::{Error, Result, Vec2};

const MAX_NEWTON: usize = 50;
const STATIONARITY_TOL: f64 = 1e-13;
const ARC_TOL: f64 = 1e-12;
const PANEL: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct Ellipse {
    a: f64,
    b: f64,
    rule: GaussRule,
}

impl Ellipse {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(b > 0.0 && a >= b && a.is_finite()) {
            return Err(Error::InvalidDomain(alloc::format!(
                "ellipse semi-axes must satisfy a >= b > 0, got a = {a}, b = {b}"
            )));
        }
        Ok(Self { a, b, rule: GaussRule::new(16) })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Smallest radius of curvature, `b²/a`.
    pub fn reach(&self) -> f64 {
        self.b * self.b / self.a
    }

    pub fn level(&self, x: Vec2) -> f64 {
        (x.x / self.a).powi(2) + (x.y / self.b).powi(2) - 1.0
    }

    #[inline]
    pub fn point(&self, t: f64) -> Vec2 {
        Vec2::new(self.a * t.cos(), self.b * t.sin())
    }

    #[inline]
    pub fn derivative(&self, t: f64) -> Vec2 {
        Vec2::new(-self.a * t.sin(), self.b * t.cos())
    }

    /// Outward unit normal at `E(t)`.
    pub fn normal(&self, t: f64) -> Vec2 {
        Vec2::new(self.b * t.cos(), self.a * t.sin()).normalized()
    }

    pub fn curvature(&self, t: f64) -> f64 {
        let (s, c) = t.sin_cos();
        self.a * self.b / (self.a * self.a * s * s + self.b * self.b * c * c).powf(1.5)
    }

    /// Parameter of the closest boundary point.
    ///
    /// Fails on the segment of the major axis where two boundary points are
    /// equally close.
    pub fn closest_parameter(&self, x: Vec2) -> Result<f64> {
        let (a, b) = (self.a, self.b);
        let medial = a - b * b / a;
        let scale = a;
        if x.y.abs() <= 1e-14 * scale && x.x.abs() < medial - 1e-14 * scale {
            return Err(Error::NonUniqueProjection(x));
        }
        if a == b && x.norm() <= 1e-14 * scale {
            return Err(Error::NonUniqueProjection(x));
        }
        let newton = |t0: f64| -> Option<f64> {
            let mut t = t0;
            for _ in 0..MAX_NEWTON {
                let e = self.point(t);
                let de = self.derivative(t);
                let g = (e - x).dot(de);
                let dg = de.norm_sq() - (e - x).dot(e);
                if g.abs() <= STATIONARITY_TOL * scale * scale {
                    return Some(t);
                }
                if dg <= 0.0 {
                    return None;
                }
                let step = (g / dg).clamp(-0.5, 0.5);
                t -= step;
            }
            let de = self.derivative(t);
            let g = (self.point(t) - x).dot(de);
            (g.abs() <= 1e3 * STATIONARITY_TOL * scale * scale).then_some(t)
        };
        let t0 = (a * x.y).atan2(b * x.x);
        let dist = |t: f64| (self.point(t) - x).norm_sq();
        let candidate = newton(t0).or_else(|| {
            let n = 256;
            let best =
                (0..n).map(|k| TAU * k as f64 / n as f64).min_by(|&p, &q| dist(p).total_cmp(&dist(q))).unwrap_or(0.0);
            newton(best)
        });
        let t = candidate.ok_or(Error::ProjectionFailed(x))?;
        Ok(wrap(t))
    }

    /// Distance from `x` to the ellipse, defined also where the closest point
    /// is not unique.
    pub fn distance(&self, x: Vec2) -> Result<f64> {
        match self.closest_parameter(x) {
            Ok(t) => Ok((self.point(t) - x).norm()),
            Err(Error::NonUniqueProjection(_)) if self.a == self.b => Ok(self.a - x.norm()),
            Err(Error::NonUniqueProjection(_)) => {
                // On the major axis the stationary points satisfy cos t = a x / (a² - b²).
                let c = (self.a * x.x / (self.a * self.a - self.b * self.b)).clamp(-1.0, 1.0);
                Ok((self.point(c.acos()) - x).norm())
            }
            Err(e) => Err(e),
        }
    }

    /// `∫_{t0}^{t1} |E'(t)| dt` (signed).
    pub fn arc_length(&self, t0: f64, t1: f64) -> f64 {
        let span = t1 - t0;
        if span == 0.0 {
            return 0.0;
        }
        let panels = ((span.abs() / PANEL).ceil() as usize).max(1);
        let dt = span / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = t0 + dt * k as f64;
                self.rule.integrate(lo, lo + dt, |t| self.derivative(t).norm())
            })
            .sum()
    }

    /// Signed arc length along the inner parallel curve at offset `s`.
    fn parallel_arc_length(&self, s: f64, t0: f64, t: f64) -> f64 {
        let n0 = self.normal(t0);
        let n1 = self.normal(t);
        let turn = n0.cross(n1).atan2(n0.dot(n1));
        self.arc_length(t0, t) - s * turn
    }

    /// Point of the inner parallel curve at offset `s` reached after arc
    /// length `l` from parameter `t0`, moving clockwise for `l > 0`.
    pub fn parallel_point(&self, s: f64, t0: f64, l: f64) -> Result<Vec2> {
        let t = self.parallel_parameter(s, t0, l)?;
        Ok(self.point(t) - self.normal(t) * s)
    }

    /// Parameter `t` with parallel arc length from `t0` equal to `-l`.
    pub fn parallel_parameter(&self, s: f64, t0: f64, l: f64) -> Result<f64> {
        if l == 0.0 {
            return Ok(t0);
        }
        let kmax = self.a / (self.b * self.b);
        let vmin = self.b * (1.0 - s * kmax);
        if vmin <= 0.0 {
            return Err(Error::InvalidParameter(alloc::format!(
                "offset {s} exceeds the ellipse reach {}",
                self.reach()
            )));
        }
        let target = -l;
        // S is increasing in t, so the root lies between t0 and t0 + target/vmin.
        // The turning angle stays unambiguous on spans below π.
        let span = (target / vmin).abs().min(PI - 1e-9);
        let (mut lo, mut hi) = if target < 0.0 { (t0 - span, t0) } else { (t0, t0 + span) };
        let reach = self.parallel_arc_length(s, t0, if target < 0.0 { lo } else { hi });
        if target.abs() > reach.abs() {
            return Err(Error::InvalidParameter(alloc::format!("arc length {l} too long for a contour at offset {s}")));
        }
        let speed = |t: f64| self.derivative(t).norm() * (1.0 - s * self.curvature(t));
        let mut t = t0 + target / speed(t0);
        if !(lo..=hi).contains(&t) {
            t = 0.5 * (lo + hi);
        }
        for _ in 0..200 {
            let r = self.parallel_arc_length(s, t0, t) - target;
            if r.abs() <= ARC_TOL {
                return Ok(t);
            }
            if r > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let next = t - r / speed(t);
            t = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
            if hi - lo <= 1e-16 * t.abs().max(1.0) {
                return Ok(t);
            }
        }
        Err(Error::InvalidParameter(alloc::format!("parallel arc-length solve did not converge for l = {l}")))
    }
}

fn wrap(t: f64) -> f64 {
    let r = crate::vec2::wrap_angle(t);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vertex_projection_and_curvature() {
        let e = Ellipse::new(2.0, 1.0).unwrap();
        let t = e.closest_parameter(Vec2::new(1.9, 0.0)).unwrap();
        assert!(t.abs() < 1e-12);
        assert_relative_eq!(e.curvature(t), 2.0, epsilon = 1e-14);
        assert_relative_eq!(e.curvature(PI / 2.0), 0.25, epsilon = 1e-14);
        assert!(matches!(e.closest_parameter(Vec2::new(0.5, 0.0)), Err(Error::NonUniqueProjection(_))));
        // cos t = 1/3 on the medial axis; compare with a dense scan.
        let x = Vec2::new(0.5, 0.0);
        let scan = (0..200_000).map(|k| (e.point(TAU * k as f64 / 200_000.0) - x).norm()).fold(f64::INFINITY, f64::min);
        assert_relative_eq!(e.distance(x).unwrap(), scan, epsilon = 1e-9);
    }

    #[test]
    fn projection_is_orthogonal() {
        let e = Ellipse::new(2.0, 1.0).unwrap();
        for k in 0..40 {
            let t = -3.0 + 0.15 * k as f64;
            let x = e.point(t) - e.normal(t) * 0.3;
            let tp = e.closest_parameter(x).unwrap();
            let xb = e.point(tp);
            let n = e.normal(tp);
            let s = (xb - x).norm();
            assert_relative_eq!(s, 0.3, epsilon = 1e-11);
            assert!((xb - x - n * s).norm() < 1e-12);
        }
    }

    #[test]
    fn quarter_arc_length_matches_series() {
        let c = Ellipse::new(1.0, 1.0).unwrap();
        assert_relative_eq!(c.arc_length(0.0, PI / 2.0), PI / 2.0, epsilon = 1e-14);
        // Complete elliptic integral: perimeter of (2,1) is 9.688448220547675.
        let e = Ellipse::new(2.0, 1.0).unwrap();
        assert_relative_eq!(e.arc_length(0.0, TAU), 9.688448220547675, epsilon = 1e-12);
    }

    #[test]
    fn parallel_point_has_requested_arc_length() {
        let e = Ellipse::new(2.0, 1.0).unwrap();
        let s = 0.1;
        let t0 = e.closest_parameter(Vec2::new(1.9, 0.0)).unwrap();
        let t = e.parallel_parameter(s, t0, 0.05).unwrap();
        assert!(t < t0);
        // Independent check: integrate the parallel-curve speed directly.
        let g = GaussRule::new(30);
        let len = g.integrate(t, t0, |u| {
            let d = e.derivative(u);
            d.norm() * (1.0 - s * e.curvature(u))
        });
        assert_relative_eq!(len, 0.05, epsilon = 1e-12);
        let p = e.parallel_point(s, t0, 0.05).unwrap();
        assert!(p.y < 0.0);
    }
}
