//! Sparse solves with post-solve residual verification.
//!
//! Systems up to [`DIRECT_LIMIT`] unknowns are factored by sparse LU. Larger
//! ones use restarted GMRES with an ILU(0) preconditioner and fall back to LU
//! if the iteration stalls.

use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};
use nlneumann_core::assembly::NonlocalSystem;
use rayon::prelude::*;
use serde::Serialize;

/// Largest system size solved directly by default.
pub const DIRECT_LIMIT: usize = 20_000;
/// Default bound on `|Au - b| / |b|`.
pub const DEFAULT_TOL: f64 = 1e-11;
/// Condition estimates above this flag a singular matrix.
pub const SINGULAR_CONDITION: f64 = 1e13;

const RESTART: usize = 50;
const MAX_ITERATIONS: usize = 3000;
const REFINEMENT_STEPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum SolveMethod {
    /// Direct up to [`DIRECT_LIMIT`] unknowns, Krylov above.
    #[default]
    Auto,
    SparseDirect,
    IterativeKrylov,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    pub relative_residual: f64,
    /// Zero for direct solves.
    pub iterations: usize,
    pub method: SolveMethod,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("matrix is numerically singular (condition estimate {cond_estimate:e})")]
    SingularMatrix { cond_estimate: f64 },
    #[error("no convergence after {iterations} iterations (relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("sparse factorization failed: {0}")]
    Factorization(String),
}

/// Solves `system` to relative residual `tol`.
pub fn solve(system: &NonlocalSystem, tol: f64, method: SolveMethod) -> Result<SolveReport, SolverError> {
    let n = system.len();
    let method = match method {
        SolveMethod::Auto if n <= DIRECT_LIMIT => SolveMethod::SparseDirect,
        SolveMethod::Auto => SolveMethod::IterativeKrylov,
        m => m,
    };
    match method {
        SolveMethod::IterativeKrylov => match gmres(system, tol) {
            Ok(r) => Ok(r),
            Err(SolverError::NoConvergence { .. }) => direct(system, tol),
            Err(e) => Err(e),
        },
        _ => direct(system, tol),
    }
}

fn csc(system: &NonlocalSystem) -> Result<SparseColMat<usize, f64>, SolverError> {
    let n = system.len();
    let triplets: Vec<Triplet<usize, usize, f64>> = system.triplets().map(|(i, j, v)| Triplet::new(i, j, v)).collect();
    SparseColMat::try_new_from_triplets(n, n, &triplets).map_err(|e| SolverError::Factorization(format!("{e:?}")))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Max absolute column sum.
fn norm1(system: &NonlocalSystem) -> f64 {
    let mut col = vec![0.0; system.len()];
    for (_, j, v) in system.triplets() {
        col[j] += v.abs();
    }
    col.into_iter().fold(0.0, f64::max)
}

/// Deterministic vector with entries in `[-1, 1]`.
fn probe_vector(n: usize) -> Vec<f64> {
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        })
        .collect()
}

fn direct(system: &NonlocalSystem, tol: f64) -> Result<SolveReport, SolverError> {
    let n = system.len();
    if n == 0 {
        return Ok(SolveReport {
            solution: vec![],
            relative_residual: 0.0,
            iterations: 0,
            method: SolveMethod::SparseDirect,
        });
    }
    let a = csc(system)?;
    let lu = a.sp_lu().map_err(|e| SolverError::Factorization(format!("{e:?}")))?;
    let apply = |b: &[f64]| -> Vec<f64> {
        let col = Col::<f64>::from_fn(n, |i| b[i]);
        let x = lu.solve(&col);
        (0..n).map(|i| x[i]).collect()
    };

    // ‖A‖₁ ‖A⁻¹b‖ / ‖b‖ bounds the condition number from below.
    let probe = probe_vector(n);
    let z = apply(&probe);
    let cond = norm1(system) * norm(&z) / norm(&probe);
    if !cond.is_finite() || cond > SINGULAR_CONDITION {
        return Err(SolverError::SingularMatrix { cond_estimate: cond });
    }

    let b = system.rhs();
    let mut x = apply(b);
    let mut res = system.relative_residual(&x);
    for _ in 0..REFINEMENT_STEPS {
        if res <= tol {
            break;
        }
        let ax = system.matvec(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let dx = apply(&r);
        for (xi, d) in x.iter_mut().zip(dx) {
            *xi += d;
        }
        res = system.relative_residual(&x);
    }
    if !res.is_finite() {
        return Err(SolverError::SingularMatrix { cond_estimate: f64::INFINITY });
    }
    if res > tol {
        return Err(SolverError::NoConvergence { iterations: 0, residual: res });
    }
    Ok(SolveReport { solution: x, relative_residual: res, iterations: 0, method: SolveMethod::SparseDirect })
}

/// Incomplete LU with the sparsity of `A`.
struct Ilu0 {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    diag: Vec<usize>,
}

impl Ilu0 {
    fn new(system: &NonlocalSystem) -> Result<Self, SolverError> {
        let n = system.len();
        let mut row_ptr = vec![0];
        let mut cols = Vec::with_capacity(system.nnz());
        let mut vals = Vec::with_capacity(system.nnz());
        for i in 0..n {
            let (c, v) = system.row(i);
            cols.extend_from_slice(c);
            vals.extend_from_slice(v);
            row_ptr.push(cols.len());
        }
        let mut diag = vec![usize::MAX; n];
        for i in 0..n {
            if let Some(k) = (row_ptr[i]..row_ptr[i + 1]).find(|&k| cols[k] == i) {
                diag[i] = k;
            }
            if diag[i] == usize::MAX {
                return Err(SolverError::Factorization(format!("row {i} has no diagonal entry")));
            }
        }
        let mut pos = vec![usize::MAX; n];
        for i in 0..n {
            for k in row_ptr[i]..row_ptr[i + 1] {
                pos[cols[k]] = k;
            }
            for k in row_ptr[i]..row_ptr[i + 1] {
                let j = cols[k];
                if j >= i {
                    break;
                }
                let pivot = vals[diag[j]];
                if pivot == 0.0 {
                    return Err(SolverError::Factorization(format!("zero pivot in row {j}")));
                }
                let l = vals[k] / pivot;
                vals[k] = l;
                for m in diag[j] + 1..row_ptr[j + 1] {
                    let p = pos[cols[m]];
                    if p != usize::MAX {
                        vals[p] -= l * vals[m];
                    }
                }
            }
            for k in row_ptr[i]..row_ptr[i + 1] {
                pos[cols[k]] = usize::MAX;
            }
        }
        Ok(Self { row_ptr, cols, vals, diag })
    }

    fn apply(&self, r: &[f64]) -> Vec<f64> {
        let n = r.len();
        let mut y = r.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in self.row_ptr[i]..self.diag[i] {
                s -= self.vals[k] * y[self.cols[k]];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in self.diag[i] + 1..self.row_ptr[i + 1] {
                s -= self.vals[k] * y[self.cols[k]];
            }
            y[i] = s / self.vals[self.diag[i]];
        }
        y
    }
}

fn par_matvec(system: &NonlocalSystem, u: &[f64]) -> Vec<f64> {
    (0..system.len())
        .into_par_iter()
        .map(|i| {
            let (c, v) = system.row(i);
            c.iter().zip(v).map(|(&j, a)| a * u[j]).sum()
        })
        .collect()
}

/// Right-preconditioned GMRES(`RESTART`).
fn gmres(system: &NonlocalSystem, tol: f64) -> Result<SolveReport, SolverError> {
    let n = system.len();
    let b = system.rhs();
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok(SolveReport {
            solution: vec![0.0; n],
            relative_residual: 0.0,
            iterations: 0,
            method: SolveMethod::IterativeKrylov,
        });
    }
    let ilu = Ilu0::new(system)?;
    let mut x = vec![0.0; n];
    let mut iterations = 0;
    // The recurrence residual drifts from the true one; aim a little lower.
    let target = 0.1 * tol * bnorm;
    while iterations < MAX_ITERATIONS {
        let ax = par_matvec(system, &x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let beta = norm(&r);
        if beta <= tol * bnorm {
            break;
        }
        let mut v: Vec<Vec<f64>> = vec![r.iter().map(|x| x / beta).collect()];
        let mut h = vec![vec![0.0; RESTART]; RESTART + 1];
        let (mut cs, mut sn) = (vec![0.0; RESTART], vec![0.0; RESTART]);
        let mut g = vec![0.0; RESTART + 1];
        g[0] = beta;
        let mut k_used = 0;
        for k in 0..RESTART {
            iterations += 1;
            let z = ilu.apply(&v[k]);
            let mut w = par_matvec(system, &z);
            for j in 0..=k {
                let hjk: f64 = w.iter().zip(&v[j]).map(|(a, b)| a * b).sum();
                h[j][k] = hjk;
                for (wi, vi) in w.iter_mut().zip(&v[j]) {
                    *wi -= hjk * vi;
                }
            }
            let wn = norm(&w);
            h[k + 1][k] = wn;
            for j in 0..k {
                let t = cs[j] * h[j][k] + sn[j] * h[j + 1][k];
                h[j + 1][k] = -sn[j] * h[j][k] + cs[j] * h[j + 1][k];
                h[j][k] = t;
            }
            let d = h[k][k].hypot(h[k + 1][k]);
            cs[k] = h[k][k] / d;
            sn[k] = h[k + 1][k] / d;
            h[k][k] = d;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            k_used = k + 1;
            if g[k + 1].abs() <= target || wn == 0.0 || iterations >= MAX_ITERATIONS {
                break;
            }
            v.push(w.iter().map(|x| x / wn).collect());
        }
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for j in i + 1..k_used {
                s -= h[i][j] * y[j];
            }
            y[i] = s / h[i][i];
        }
        let mut update = vec![0.0; n];
        for (j, yj) in y.iter().enumerate() {
            for (u, vj) in update.iter_mut().zip(&v[j]) {
                *u += yj * vj;
            }
        }
        for (xi, d) in x.iter_mut().zip(ilu.apply(&update)) {
            *xi += d;
        }
    }
    let res = system.relative_residual(&x);
    if res.is_nan() || res > tol {
        return Err(SolverError::NoConvergence { iterations, residual: res });
    }
    Ok(SolveReport { solution: x, relative_residual: res, iterations, method: SolveMethod::IterativeKrylov })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nlneumann_core::assembly::{RowKind, SparseRow};

    fn system(rows: Vec<(Vec<usize>, Vec<f64>, f64)>) -> NonlocalSystem {
        let rows = rows
            .into_iter()
            .map(|(cols, vals, rhs)| Ok(SparseRow { cols, vals, rhs, kind: RowKind::Interior }))
            .collect();
        NonlocalSystem::from_rows(rows, None).unwrap()
    }

    fn tridiagonal(n: usize) -> NonlocalSystem {
        system(
            (0..n)
                .map(|i| {
                    let mut c = vec![];
                    let mut v = vec![];
                    if i > 0 {
                        c.push(i - 1);
                        v.push(-1.0);
                    }
                    c.push(i);
                    v.push(2.5);
                    if i + 1 < n {
                        c.push(i + 1);
                        v.push(-0.7);
                    }
                    (c, v, (i as f64).sin())
                })
                .collect(),
        )
    }

    #[test]
    fn identity_system() {
        let s = system((0..4).map(|i| (vec![i], vec![1.0], i as f64 + 0.5)).collect());
        let r = solve(&s, DEFAULT_TOL, SolveMethod::Auto).unwrap();
        assert_eq!(r.solution, vec![0.5, 1.5, 2.5, 3.5]);
        assert_eq!(r.relative_residual, 0.0);
        assert_eq!(r.method, SolveMethod::SparseDirect);
    }

    #[test]
    fn direct_and_krylov_agree() {
        let s = tridiagonal(300);
        let d = solve(&s, DEFAULT_TOL, SolveMethod::SparseDirect).unwrap();
        let k = solve(&s, DEFAULT_TOL, SolveMethod::IterativeKrylov).unwrap();
        assert_eq!(k.method, SolveMethod::IterativeKrylov);
        assert!(k.iterations > 0);
        for (a, b) in d.solution.iter().zip(&k.solution) {
            assert!((a - b).abs() < 1e-9);
        }
        let again = solve(&s, DEFAULT_TOL, SolveMethod::SparseDirect).unwrap();
        assert_eq!(d.solution, again.solution);
    }

    #[test]
    fn singular_matrix_is_detected() {
        // Rows annihilate constants, so the all-ones vector spans the kernel.
        let n = 6;
        let s = system(
            (0..n)
                .map(|i| (vec![i, (i + 1) % n], vec![1.0, -1.0], 0.0))
                .map(|(mut c, mut v, r)| {
                    if c[1] < c[0] {
                        c.swap(0, 1);
                        v.swap(0, 1);
                    }
                    (c, v, r + 1.0)
                })
                .collect(),
        );
        assert!(matches!(
            solve(&s, DEFAULT_TOL, SolveMethod::SparseDirect),
            Err(SolverError::SingularMatrix { .. } | SolverError::Factorization(_) | SolverError::NoConvergence { .. })
        ));
    }
}
