use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::Frame;
use crate::geometry::{DomainSpec, RegionTag};
use crate::{Error, Result, Vec2};

/// Nodes with their region tags and local polynomial frames.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Vec2>,
    h: f64,
    tags: Vec<RegionTag>,
    frames: Vec<Frame>,
}

impl PointCloud {
    /// Lattice `hℤ²` restricted to the computational domain for horizon `delta`.
    ///
    /// Nodes are ordered row by row, bottom to top.
    pub fn uniform(domain: &DomainSpec, h: f64, delta: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite() && delta > h) {
            return Err(Error::InvalidParameter(alloc::format!("need 0 < h < delta, got h = {h}, delta = {delta}")));
        }
        let (lo, hi) = domain.bounding_box();
        let i0 = ((lo.x - delta) / h).floor() as i64;
        let i1 = ((hi.x + delta) / h).ceil() as i64;
        let j0 = ((lo.y - delta) / h).floor() as i64;
        let j1 = ((hi.y + delta) / h).ceil() as i64;
        let mut points = Vec::new();
        let mut tags = Vec::new();
        let mut frames = Vec::new();
        for j in j0..=j1 {
            for i in i0..=i1 {
                let x = Vec2::new(i as f64 * h, j as f64 * h);
                let tag = match domain.classify(x, delta) {
                    Ok(t) => t,
                    Err(Error::OutsideComputationalDomain(_)) => continue,
                    Err(e) => return Err(e),
                };
                let frame = match tag {
                    RegionTag::NeumannCollar => {
                        let p = domain.project_neumann(x)?;
                        Frame::new(p.normal, p.tangent)
                    }
                    RegionTag::CornerDisk => {
                        let c = domain.corner().expect("corner tags need a corner");
                        Frame::new(c.n1, c.p1)
                    }
                    RegionTag::Interior | RegionTag::DirichletLayer => Frame::CARTESIAN,
                };
                points.push(x);
                tags.push(tag);
                frames.push(frame);
            }
        }
        Ok(Self { points, h, tags, frames })
    }

    /// Untagged cloud; every node is `Interior` with a Cartesian frame.
    pub fn from_points(points: Vec<Vec2>, h: f64) -> Self {
        let n = points.len();
        Self { points, h, tags: vec![RegionTag::Interior; n], frames: vec![Frame::CARTESIAN; n] }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    #[inline]
    pub fn point(&self, i: usize) -> Vec2 {
        self.points[i]
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn tag(&self, i: usize) -> RegionTag {
        self.tags[i]
    }

    pub fn tags(&self) -> &[RegionTag] {
        &self.tags
    }

    pub fn frame(&self, i: usize) -> Frame {
        self.frames[i]
    }

    /// Index of the node closest to `x`, lowest index on ties.
    pub fn nearest(&self, x: Vec2) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            let d = (*p - x).norm_sq();
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }
}

/// Uniform bucket grid for fixed-radius neighbor queries.
#[derive(Debug, Clone)]
pub struct NeighborGrid {
    origin: Vec2,
    cell: f64,
    nx: usize,
    ny: usize,
    starts: Vec<usize>,
    items: Vec<usize>,
}

impl NeighborGrid {
    pub fn new(cloud: &PointCloud, cell: f64) -> Self {
        let pts = cloud.points();
        let (mut lo, mut hi) =
            (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in pts {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if pts.is_empty() {
            lo = Vec2::ZERO;
            hi = Vec2::ZERO;
        }
        let nx = ((hi.x - lo.x) / cell).floor() as usize + 1;
        let ny = ((hi.y - lo.y) / cell).floor() as usize + 1;
        let mut grid = Self { origin: lo, cell, nx, ny, starts: vec![0; nx * ny + 1], items: vec![0; pts.len()] };
        let cells: Vec<usize> = pts.iter().map(|&p| grid.cell_of(p)).collect();
        for &c in &cells {
            grid.starts[c + 1] += 1;
        }
        for c in 0..nx * ny {
            grid.starts[c + 1] += grid.starts[c];
        }
        let mut fill = grid.starts.clone();
        for (i, &c) in cells.iter().enumerate() {
            grid.items[fill[c]] = i;
            fill[c] += 1;
        }
        grid
    }

    fn clamp_index(&self, v: f64, n: usize) -> usize {
        if v <= 0.0 {
            0
        } else {
            (v.floor() as usize).min(n - 1)
        }
    }

    fn cell_of(&self, p: Vec2) -> usize {
        let i = self.clamp_index((p.x - self.origin.x) / self.cell, self.nx);
        let j = self.clamp_index((p.y - self.origin.y) / self.cell, self.ny);
        j * self.nx + i
    }

    /// Indices `j` with `|x_j - x| < radius`, ascending.
    pub fn within(&self, cloud: &PointCloud, x: Vec2, radius: f64) -> Vec<usize> {
        let i0 = self.clamp_index((x.x - radius - self.origin.x) / self.cell, self.nx);
        let i1 = self.clamp_index((x.x + radius - self.origin.x) / self.cell, self.nx);
        let j0 = self.clamp_index((x.y - radius - self.origin.y) / self.cell, self.ny);
        let j1 = self.clamp_index((x.y + radius - self.origin.y) / self.cell, self.ny);
        let r2 = radius * radius;
        let mut out = Vec::new();
        for j in j0..=j1 {
            for i in i0..=i1 {
                let c = j * self.nx + i;
                for &k in &self.items[self.starts[c]..self.starts[c + 1]] {
                    if (cloud.point(k) - x).norm_sq() < r2 {
                        out.push(k);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}
