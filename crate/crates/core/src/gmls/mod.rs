//! Generalized moving least squares on quadratic polynomials.
//!
//! For a node `x_i` with neighbors `x_j`, `|x_i - x_j| < δ`, a linear
//! functional `τ` is approximated by `Σ_j w_j u(x_j)` with
//! `w = D P (PᵀDP)⁻¹ τ(P)`, where `P` holds the quadratic basis at the
//! neighbors and `D` the weights `(1 - r/δ)⁴`. The weights are exact on
//! quadratics.

mod cloud;

use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix6, Vector6};

#[cfg(not(feature = "std"))]
use num_traits::Float;

pub use cloud::{NeighborGrid, PointCloud};

use crate::kernels::gmls_weight;
use crate::{Error, Result, Vec2};

/// Dimension of the quadratic basis.
pub const BASIS_DIM: usize = 6;

/// Largest accepted condition number of the normal equations.
pub const MAX_CONDITION: f64 = 1e12;

/// Orthonormal basis pair for the local polynomial coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub e1: Vec2,
    pub e2: Vec2,
}

impl Frame {
    pub const CARTESIAN: Frame = Frame { e1: Vec2::new(1.0, 0.0), e2: Vec2::new(0.0, 1.0) };

    pub fn new(e1: Vec2, e2: Vec2) -> Self {
        Self { e1, e2 }
    }

    /// Local coordinates of `d`.
    #[inline]
    pub fn coords(&self, d: Vec2) -> (f64, f64) {
        (d.dot(self.e1), d.dot(self.e2))
    }
}

impl Default for Frame {
    fn default() -> Self {
        Self::CARTESIAN
    }
}

/// `[1, a, b, a², b², ab]` with `(a, b)` the frame coordinates of `(y - center)/scale`.
#[inline]
pub fn basis_eval(center: Vec2, frame: &Frame, y: Vec2, scale: f64) -> [f64; BASIS_DIM] {
    let (a, b) = frame.coords(y - center);
    let (a, b) = (a / scale, b / scale);
    [1.0, a, b, a * a, b * b, a * b]
}

/// Basis differences `p_k(y) - p_k(center)`.
#[inline]
pub fn basis_increment(center: Vec2, frame: &Frame, y: Vec2, scale: f64) -> [f64; BASIS_DIM] {
    let mut v = basis_eval(center, frame, y, scale);
    v[0] = 0.0;
    v
}

/// Weighted least-squares factorization at one node, reusable for any
/// number of target functionals.
#[derive(Debug, Clone)]
pub struct LocalFit {
    center: usize,
    neighbors: Vec<usize>,
    /// `√D P`, one row per neighbor.
    a: DMatrix<f64>,
    sqrt_w: Vec<f64>,
    /// `(PᵀDP)⁻¹`.
    gram_inv: Matrix6<f64>,
    cond: f64,
}

impl LocalFit {
    /// Factors the normal equations for node `i` in `frame` with basis scale `delta`.
    pub fn new(cloud: &PointCloud, i: usize, neighbors: Vec<usize>, frame: &Frame, delta: f64) -> Result<Self> {
        if neighbors.len() < BASIS_DIM {
            return Err(Error::InsufficientNeighbors { node: i, found: neighbors.len(), required: BASIS_DIM });
        }
        let x = cloud.point(i);
        let n = neighbors.len();
        let mut a = DMatrix::<f64>::zeros(n, BASIS_DIM);
        let mut sqrt_w = Vec::with_capacity(n);
        for (row, &j) in neighbors.iter().enumerate() {
            let y = cloud.point(j);
            let sw = gmls_weight(delta, (y - x).norm()).sqrt();
            sqrt_w.push(sw);
            for (k, v) in basis_eval(x, frame, y, delta).into_iter().enumerate() {
                a[(row, k)] = sw * v;
            }
        }
        let qr = a.clone().col_piv_qr();
        let r = qr.r();
        let diag_max = r[(0, 0)].abs();
        let diag_min = (0..BASIS_DIM).map(|k| r[(k, k)].abs()).fold(f64::INFINITY, f64::min);
        let cond = if diag_min > 0.0 { (diag_max / diag_min).powi(2) } else { f64::INFINITY };
        if cond.is_nan() || cond > MAX_CONDITION {
            return Err(Error::SingularNormalEquations { node: i, cond });
        }
        // AΠ = QR, so (AᵀA)⁻¹ = Π R⁻¹ R⁻ᵀ Πᵀ.
        let r6 = Matrix6::from_fn(|p, q| r[(p, q)]);
        let r_inv = r6.try_inverse().ok_or(Error::SingularNormalEquations { node: i, cond })?;
        let core = r_inv * r_inv.transpose();
        let mut perm = DMatrix::<f64>::identity(BASIS_DIM, BASIS_DIM);
        qr.p().permute_columns(&mut perm);
        let pm = Matrix6::from_fn(|p, q| perm[(p, q)]);
        let gram_inv = pm * core * pm.transpose();
        Ok(Self { center: i, neighbors, a, sqrt_w, gram_inv, cond })
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn neighbors(&self) -> &[usize] {
        &self.neighbors
    }

    pub fn cond_estimate(&self) -> f64 {
        self.cond
    }

    /// Weights `w_j` with `Σ_j w_j q(x_j) = τ(q)` for every quadratic `q`.
    pub fn weights(&self, tau: &[f64; BASIS_DIM]) -> Vec<f64> {
        let c = self.gram_inv * Vector6::from_column_slice(tau);
        let ac = &self.a * c;
        self.sqrt_w.iter().zip(ac.iter()).map(|(sw, v)| sw * v).collect()
    }

    pub fn stencil(&self, tau: &[f64; BASIS_DIM]) -> Stencil {
        Stencil {
            center: self.center,
            neighbors: self.neighbors.clone(),
            row_weights: self.weights(tau),
            cond_estimate: self.cond,
        }
    }
}

/// Row weights for one functional at one node.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    pub center: usize,
    pub neighbors: Vec<usize>,
    pub row_weights: Vec<f64>,
    pub cond_estimate: f64,
}

impl Stencil {
    /// `Σ_j w_j u(x_j)`.
    pub fn apply(&self, u: &[f64]) -> f64 {
        self.neighbors.iter().zip(&self.row_weights).map(|(&j, w)| w * u[j]).sum()
    }
}

/// Neighbor indices of node `i`, including `i`, sorted ascending.
pub fn build_neighbors(cloud: &PointCloud, grid: &NeighborGrid, i: usize, delta: f64) -> Result<Vec<usize>> {
    let nb = grid.within(cloud, cloud.point(i), membership_radius(delta, cloud.h()));
    if nb.len() < BASIS_DIM {
        return Err(Error::InsufficientNeighbors { node: i, found: nb.len(), required: BASIS_DIM });
    }
    Ok(nb)
}

/// Strict-membership radius: lattice points at exactly `δ` are excluded.
pub fn membership_radius(delta: f64, h: f64) -> f64 {
    delta - 1e-9 * h
}

/// GMLS stencil of the functional with basis values `tau` at node `i`.
pub fn functional_row(
    cloud: &PointCloud,
    grid: &NeighborGrid,
    i: usize,
    delta: f64,
    tau: &[f64; BASIS_DIM],
) -> Result<Stencil> {
    let nb = build_neighbors(cloud, grid, i, delta)?;
    let fit = LocalFit::new(cloud, i, nb, &cloud.frame(i), delta)?;
    Ok(fit.stencil(tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;
    use approx::assert_relative_eq;

    #[test]
    fn basis_values() {
        let c = Vec2::new(0.5, 0.5);
        assert_eq!(basis_eval(c, &Frame::CARTESIAN, c, 1.0), [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let y = c + Vec2::new(1.0, 2.0);
        assert_eq!(basis_eval(c, &Frame::CARTESIAN, y, 1.0), [1.0, 1.0, 2.0, 1.0, 4.0, 2.0]);
        let f = Frame::new(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0));
        assert_eq!(basis_eval(c, &f, y, 1.0), basis_eval(c, &Frame::CARTESIAN, y, 1.0));
    }

    fn square_cloud(h: f64, delta: f64) -> PointCloud {
        PointCloud::uniform(&DomainSpec::square_right_neumann(), h, delta).unwrap()
    }

    #[test]
    fn neighbor_counts_on_lattice() {
        let h = 1.0 / 32.0;
        for (ratio, expected) in [(4.0, 45), (3.5, 37)] {
            let delta = ratio * h;
            let cloud = square_cloud(h, delta);
            let grid = NeighborGrid::new(&cloud, delta);
            let i = cloud.nearest(Vec2::new(0.5, 0.5));
            assert_eq!(build_neighbors(&cloud, &grid, i, delta).unwrap().len(), expected);
        }
    }

    #[test]
    fn isolated_point_has_too_few_neighbors() {
        let cloud = PointCloud::from_points(alloc::vec![Vec2::ZERO, Vec2::new(1.0, 0.0)], 1.0);
        let grid = NeighborGrid::new(&cloud, 0.5);
        assert!(matches!(build_neighbors(&cloud, &grid, 0, 0.5), Err(Error::InsufficientNeighbors { found: 1, .. })));
    }

    #[test]
    fn second_derivative_functional_on_lattice() {
        let h = 1.0 / 16.0;
        let delta = 4.0 * h;
        let cloud = square_cloud(h, delta);
        let grid = NeighborGrid::new(&cloud, delta);
        let i = cloud.nearest(Vec2::new(0.5, 0.5));
        // [u]_xx at the center in the δ-scaled basis: d²/dx² of (x/δ)² is 2/δ².
        let tau = [0.0, 0.0, 0.0, 2.0 / (delta * delta), 0.0, 0.0];
        let st = functional_row(&cloud, &grid, i, delta, &tau).unwrap();
        let u: Vec<f64> = cloud.points().iter().map(|p| p.x * p.x).collect();
        assert_relative_eq!(st.apply(&u), 2.0, epsilon = 1e-10);
        let ev = functional_row(&cloud, &grid, i, delta, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(ev.row_weights.iter().sum::<f64>(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn rotated_frame_reproduces_quadratics() {
        let h = 1.0 / 16.0;
        let delta = 3.5 * h;
        let cloud = square_cloud(h, delta);
        let grid = NeighborGrid::new(&cloud, delta);
        let q = |p: Vec2| 3.0 + p.x - 2.0 * p.y + p.x * p.x + p.x * p.y - p.y * p.y;
        let u: Vec<f64> = cloud.points().iter().map(|&p| q(p)).collect();
        let i = cloud.nearest(Vec2::new(0.25, 0.75));
        let x = cloud.point(i);
        let n = Vec2::new(0.6, 0.8);
        let frame = Frame::new(n, n.perp_cw());
        let nb = build_neighbors(&cloud, &grid, i, delta).unwrap();
        let rot = LocalFit::new(&cloud, i, nb.clone(), &frame, delta).unwrap();
        let cart = LocalFit::new(&cloud, i, nb, &Frame::CARTESIAN, delta).unwrap();
        let eval = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let a = Stencil { row_weights: rot.weights(&eval), ..rot.stencil(&eval) }.apply(&u);
        let b = cart.stencil(&eval).apply(&u);
        assert_relative_eq!(a, q(x), epsilon = 1e-10);
        assert_relative_eq!(a, b, epsilon = 1e-10);
        // Directional derivative along n: ∂q/∂n = ∇q·n, basis slot 1 scaled by 1/δ.
        let grad = Vec2::new(1.0 + 2.0 * x.x + x.y, -2.0 + x.x - 2.0 * x.y);
        let dn = rot.stencil(&[0.0, 1.0 / delta, 0.0, 0.0, 0.0, 0.0]).apply(&u);
        assert_relative_eq!(dn, grad.dot(n), epsilon = 1e-9);
    }
}
