//! Rescaled interaction kernels.
//!
//! `J_δ` is normalized so that `∫_{B(0,δ)} J_δ(|z|)|z|² dz = 2`, which makes
//! the nonlocal operator reproduce `-Δ` on quadratics. `H_δ` is the 1D
//! contour kernel with `∫ H_δ(|l|) l² dl = 1`.

use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{Error, Result};

/// Integral of the unscaled contour profile over the real line.
pub const C_H: f64 = 3.0;

/// Radial profile of the 2D operator kernel on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JProfile {
    #[default]
    Constant,
}

/// Radial profile of the 1D contour kernel on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HProfile {
    #[default]
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSet {
    delta: f64,
    j_profile: JProfile,
    h_profile: HProfile,
    j_scale: f64,
}

impl KernelSet {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidParameter(alloc::format!("horizon must be positive and finite, got {delta}")));
        }
        Ok(Self { delta, j_profile: JProfile::Constant, h_profile: HProfile::Constant, j_scale: 1.0 })
    }

    /// Multiplies `J_δ` by `scale`, breaking its moment normalization.
    ///
    /// Exists so verification code can confirm its checks detect a wrong kernel.
    pub fn with_j_scale(mut self, scale: f64) -> Self {
        self.j_scale = scale;
        self
    }

    #[inline]
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn j_profile(&self) -> JProfile {
        self.j_profile
    }

    pub fn h_profile(&self) -> HProfile {
        self.h_profile
    }

    /// Value of `J_δ` inside its support.
    #[inline]
    pub fn j0(&self) -> f64 {
        match self.j_profile {
            JProfile::Constant => self.j_scale * 4.0 / (PI * self.delta.powi(4)),
        }
    }

    /// Value of `H_δ` inside its support.
    #[inline]
    pub fn h0(&self) -> f64 {
        match self.h_profile {
            HProfile::Constant => 1.5 / self.delta.powi(3),
        }
    }

    #[inline]
    pub fn j_delta(&self, r: f64) -> f64 {
        if r <= self.delta {
            self.j0()
        } else {
            0.0
        }
    }

    #[inline]
    pub fn h_delta(&self, l: f64) -> f64 {
        if l.abs() <= self.delta {
            self.h0()
        } else {
            0.0
        }
    }

    /// `∫_{B(0,δ)} J_δ z₁^a z₂^b dz`.
    pub fn j_ball_moment(&self, a: u32, b: u32) -> f64 {
        self.j0() * ball_moment(a, b, self.delta)
    }
}

/// GMLS weight `(1 - r/δ)⁴` on `[0, δ]`, zero outside.
#[inline]
pub fn gmls_weight(delta: f64, r: f64) -> f64 {
    if r <= delta {
        (1.0 - r / delta).powi(4)
    } else {
        0.0
    }
}

/// `∫_{B(0,radius)} z₁^a z₂^b dz`.
pub fn ball_moment(a: u32, b: u32, radius: f64) -> f64 {
    if a % 2 == 1 || b % 2 == 1 {
        return 0.0;
    }
    // ∫₀^{2π} cos^a sin^b = 2π (a-1)!! (b-1)!! / (a+b)!! for even a, b.
    let angular =
        2.0 * PI * double_factorial(a as i64 - 1) * double_factorial(b as i64 - 1) / double_factorial((a + b) as i64);
    let p = (a + b + 2) as i32;
    angular * radius.powi(p) / p as f64
}

fn double_factorial(n: i64) -> f64 {
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kernel_values() {
        let k = KernelSet::new(0.1).unwrap();
        assert_relative_eq!(k.j_delta(0.05), 4.0 / (PI * 1e-4), max_relative = 1e-14);
        assert_relative_eq!(k.j_delta(0.05), 1.27324e4, max_relative = 1e-5);
        assert_eq!(k.j_delta(0.2), 0.0);
        assert_relative_eq!(k.h_delta(0.0), 1500.0, max_relative = 1e-13);
        assert_eq!(k.h_delta(0.15), 0.0);
        assert_eq!(gmls_weight(0.1, 0.0), 1.0);
        assert_relative_eq!(gmls_weight(0.1, 0.05), 0.0625, max_relative = 1e-14);
        assert_eq!(gmls_weight(0.1, 0.1), 0.0);
        assert_eq!(gmls_weight(0.1, 0.2), 0.0);
    }

    #[test]
    fn rejects_bad_horizon() {
        assert!(KernelSet::new(0.0).is_err());
        assert!(KernelSet::new(f64::NAN).is_err());
    }

    #[test]
    fn ball_moments_match_polar_formulas() {
        let r: f64 = 0.3;
        assert_relative_eq!(ball_moment(0, 0, r), PI * r * r, max_relative = 1e-15);
        assert_relative_eq!(ball_moment(2, 0, r), PI * r.powi(4) / 4.0, max_relative = 1e-15);
        assert_relative_eq!(ball_moment(0, 4, r), PI * r.powi(6) / 8.0, max_relative = 1e-15);
        assert_relative_eq!(ball_moment(2, 2, r), PI * r.powi(6) / 24.0, max_relative = 1e-15);
        assert_eq!(ball_moment(1, 2, r), 0.0);
    }

    #[test]
    fn second_moments_are_normalized() {
        for &d in &[0.01, 0.1, 0.7] {
            let k = KernelSet::new(d).unwrap();
            let second = k.j_ball_moment(2, 0) + k.j_ball_moment(0, 2);
            assert_relative_eq!(second, 2.0, max_relative = 1e-14);
            // ∫ H l² dl with constant profile.
            assert_relative_eq!(k.h0() * 2.0 * d.powi(3) / 3.0, 1.0, max_relative = 1e-14);
            assert_relative_eq!(k.h0() * 2.0 * d, C_H / (d * d), max_relative = 1e-14);
        }
    }
}
