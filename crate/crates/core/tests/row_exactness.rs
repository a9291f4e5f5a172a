//! Rows reproduce the right-hand side exactly on polynomials for which every
//! expansion step is exact.

use nlneumann_core::assembly::{Assembler, AssemblyConfig, ProblemData};
use nlneumann_core::geometry::{BoundarySegment, DomainSpec, RegionTag};
use nlneumann_core::gmls::PointCloud;
use nlneumann_core::kernels::KernelSet;
use nlneumann_core::Vec2;

/// `c0 + c1 x + c2 y + c3 x² + c4 y² + c5 xy`.
struct Quadratic([f64; 6]);

impl Quadratic {
    fn value(&self, p: Vec2) -> f64 {
        let c = &self.0;
        c[0] + c[1] * p.x + c[2] * p.y + c[3] * p.x * p.x + c[4] * p.y * p.y + c[5] * p.x * p.y
    }
    fn grad(&self, p: Vec2) -> Vec2 {
        let c = &self.0;
        Vec2::new(c[1] + 2.0 * c[3] * p.x + c[5] * p.y, c[2] + 2.0 * c[4] * p.y + c[5] * p.x)
    }
}

impl ProblemData for Quadratic {
    fn source(&self, _x: Vec2) -> f64 {
        -2.0 * (self.0[3] + self.0[4])
    }
    fn flux(&self, _s: BoundarySegment, xbar: Vec2, n: Vec2) -> f64 {
        self.grad(xbar).dot(n)
    }
    fn flux_tangential_derivative(&self, _s: BoundarySegment, _xbar: Vec2, n: Vec2, p: Vec2) -> f64 {
        let c = &self.0;
        let (xx, yy, xy) = (2.0 * c[3], 2.0 * c[4], c[5]);
        p.x * (xx * n.x + xy * n.y) + p.y * (xy * n.x + yy * n.y)
    }
    fn dirichlet(&self, x: Vec2) -> f64 {
        self.value(x)
    }
}

fn max_residual(domain: &DomainSpec, h: f64, ratio: f64, q: &Quadratic, tags: &[RegionTag]) -> (f64, usize) {
    let delta = ratio * h;
    let cloud = PointCloud::uniform(domain, h, delta).unwrap();
    let asm = Assembler::new(domain, &cloud, KernelSet::new(delta).unwrap(), q, &AssemblyConfig::default()).unwrap();
    let u: Vec<f64> = cloud.points().iter().map(|&p| q.value(p)).collect();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for i in 0..cloud.len() {
        if !tags.contains(&cloud.tag(i)) {
            continue;
        }
        let row = asm.row(i).unwrap();
        worst = worst.max((row.dot(&u) - row.rhs).abs());
        count += 1;
    }
    (worst, count)
}

const QUADRATICS: [[f64; 6]; 3] =
    [[0.3, 1.0, -2.0, 1.0, -1.0, 1.0], [0.0, 0.0, 0.0, 1.0, 0.0, 0.0], [1.0, -0.5, 0.25, 0.0, 2.0, -3.0]];

#[test]
fn interior_and_flat_collar_rows_are_exact_on_quadratics() {
    let d = DomainSpec::square_right_neumann();
    for c in QUADRATICS {
        for ratio in [4.0, 3.5] {
            let (r, n) =
                max_residual(&d, 1.0 / 16.0, ratio, &Quadratic(c), &[RegionTag::Interior, RegionTag::NeumannCollar]);
            assert!(n > 0);
            assert!(r < 1e-8, "residual {r} for {c:?} at ratio {ratio}");
        }
    }
}

#[test]
fn corner_rows_are_exact_on_quadratics() {
    let d = DomainSpec::square_corner();
    for c in QUADRATICS {
        for ratio in [4.0, 3.5] {
            let (r, n) = max_residual(&d, 1.0 / 16.0, ratio, &Quadratic(c), &[RegionTag::CornerDisk]);
            assert!(n > 0);
            assert!(r < 1e-8, "residual {r} for {c:?} at ratio {ratio}");
        }
    }
}

#[test]
fn curved_collar_rows_are_exact_on_linears() {
    for d in [DomainSpec::unit_disk(), DomainSpec::ellipse(2.0, 1.0).unwrap()] {
        let (r, _) =
            max_residual(&d, 1.0 / 16.0, 4.0, &Quadratic([0.2, 1.0, 1.0, 0.0, 0.0, 0.0]), &[RegionTag::NeumannCollar]);
        println!("{:?}: {r:e}", d.shape());
        if matches!(d.shape(), nlneumann_core::geometry::Shape::UnitDisk) {
            assert!(r < 1e-9, "disk linear residual {r}");
        }
    }
}
