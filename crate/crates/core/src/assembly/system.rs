use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::aggregate;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowKind {
    Interior,
    Neumann,
    Corner,
    Dirichlet,
    Pinned,
}

impl RowKind {
    /// Identity rows carrying prescribed values.
    pub fn is_constraint(self) -> bool {
        matches!(self, RowKind::Dirichlet | RowKind::Pinned)
    }
}

/// One assembled row with its right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRow {
    /// Ascending column indices.
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
    pub rhs: f64,
    pub kind: RowKind,
}

impl SparseRow {
    pub fn identity(i: usize, value: f64, kind: RowKind) -> Self {
        Self { cols: alloc::vec![i], vals: alloc::vec![1.0], rhs: value, kind }
    }

    pub fn dot(&self, u: &[f64]) -> f64 {
        self.cols.iter().zip(&self.vals).map(|(&j, v)| v * u[j]).sum()
    }
}

/// Square sparse system in compressed-row form.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlocalSystem {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    rhs: Vec<f64>,
    kinds: Vec<RowKind>,
    pinned_node: Option<usize>,
}

impl NonlocalSystem {
    /// Merges rows in index order; any failed rows are reported together.
    pub fn from_rows(rows: Vec<Result<SparseRow>>, pinned_node: Option<usize>) -> Result<Self> {
        let n = rows.len();
        let mut failures = Vec::new();
        let mut sys = Self {
            row_ptr: Vec::with_capacity(n + 1),
            cols: Vec::new(),
            vals: Vec::new(),
            rhs: Vec::with_capacity(n),
            kinds: Vec::with_capacity(n),
            pinned_node,
        };
        sys.row_ptr.push(0);
        for (i, row) in rows.into_iter().enumerate() {
            match row {
                Ok(r) => {
                    sys.cols.extend_from_slice(&r.cols);
                    sys.vals.extend_from_slice(&r.vals);
                    sys.rhs.push(r.rhs);
                    sys.kinds.push(r.kind);
                }
                Err(e) => {
                    failures.push((i, e));
                    sys.rhs.push(0.0);
                    sys.kinds.push(RowKind::Interior);
                }
            }
            sys.row_ptr.push(sys.cols.len());
        }
        if failures.is_empty() {
            Ok(sys)
        } else {
            Err(aggregate(failures))
        }
    }

    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn kinds(&self) -> &[RowKind] {
        &self.kinds
    }

    pub fn pinned_node(&self) -> Option<usize> {
        self.pinned_node
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    /// `(row, col, value)` entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.len()).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(&j, &a)| (i, j, a))
        })
    }

    pub fn matvec(&self, u: &[f64]) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter().zip(v).map(|(&j, a)| a * u[j]).sum()
            })
            .collect()
    }

    /// `|A u - b|₂ / |b|₂`, or the absolute residual when `b = 0`.
    pub fn relative_residual(&self, u: &[f64]) -> f64 {
        let au = self.matvec(u);
        let mut num = 0.0;
        let mut den = 0.0;
        for (a, b) in au.iter().zip(&self.rhs) {
            num += (a - b) * (a - b);
            den += b * b;
        }
        if den > 0.0 {
            (num / den).sqrt()
        } else {
            num.sqrt()
        }
    }

    /// Replaces the right-hand side, keeping the matrix.
    pub fn with_rhs(mut self, rhs: Vec<f64>) -> Self {
        assert_eq!(rhs.len(), self.len(), "right-hand side length must match the system");
        self.rhs = rhs;
        self
    }
}
