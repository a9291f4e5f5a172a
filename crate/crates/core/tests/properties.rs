use nlneumann_core::geometry::{DomainSpec, RegionTag};
use nlneumann_core::gmls::{basis_eval, build_neighbors, Frame, LocalFit, NeighborGrid, PointCloud};
use nlneumann_core::kernels::KernelSet;
use nlneumann_core::quadrature::flat_m_delta;
use nlneumann_core::Vec2;
use proptest::prelude::*;

proptest! {
    #[test]
    fn kernels_are_nonnegative_with_compact_support(delta in 0.01f64..1.0, r in 0.0f64..2.0) {
        let k = KernelSet::new(delta).unwrap();
        prop_assert!(k.j_delta(r) >= 0.0 && k.h_delta(r) >= 0.0 && k.h_delta(-r) == k.h_delta(r));
        if r > delta {
            prop_assert_eq!(k.j_delta(r), 0.0);
            prop_assert_eq!(k.h_delta(r), 0.0);
        }
        let second = k.j_ball_moment(2, 0) + k.j_ball_moment(0, 2);
        prop_assert!((second - 2.0).abs() < 1e-12);
    }

    #[test]
    fn flat_m_is_nonnegative_and_vanishes_at_the_ends(delta in 0.01f64..1.0, t in 0.0f64..1.5) {
        let s = t * delta;
        let m = flat_m_delta(s, delta);
        prop_assert!(m >= 0.0);
        // Largest at s = δ/2, where it equals √3/(2π).
        prop_assert!(m <= 3f64.sqrt() / (2.0 * std::f64::consts::PI) + 1e-14);
        if t >= 1.0 {
            prop_assert_eq!(m, 0.0);
        }
        prop_assert_eq!(flat_m_delta(0.0, delta), 0.0);
    }

    #[test]
    fn disk_projection_identity(r in 0.05f64..1.0, theta in 0.0f64..std::f64::consts::TAU) {
        let d = DomainSpec::unit_disk();
        let x = Vec2::from_angle(theta) * r;
        let p = d.project(x).unwrap();
        prop_assert!((p.xbar - x - p.normal * p.dist).norm() < 1e-13);
        prop_assert!((p.xbar.norm() - 1.0).abs() < 1e-13);
        prop_assert!((p.dist - (1.0 - r)).abs() < 1e-13);
    }

    #[test]
    fn ellipse_projection_identity(t in 0.0f64..std::f64::consts::TAU, s in 0.0f64..0.45) {
        let d = DomainSpec::ellipse(2.0, 1.0).unwrap();
        let (c, sn) = (t.cos(), t.sin());
        let n = Vec2::new(c, 2.0 * sn).normalized();
        let x = Vec2::new(2.0 * c, sn) - n * s;
        let p = d.project(x).unwrap();
        prop_assert!((p.xbar - x - p.normal * p.dist).norm() < 1e-11);
        prop_assert!((p.dist - s).abs() < 1e-11);
        let level = (p.xbar.x / 2.0).powi(2) + p.xbar.y.powi(2) - 1.0;
        prop_assert!(level.abs() < 1e-12);
    }

    #[test]
    fn square_classification_partitions(x in -0.3f64..1.0, y in -0.3f64..1.3, delta in 0.05f64..0.3) {
        let d = DomainSpec::square_right_neumann();
        let p = Vec2::new(x, y);
        match d.classify(p, delta) {
            Ok(RegionTag::Interior) => {
                prop_assert!(d.inside(p));
                prop_assert!(d.distance_to_neumann(p).unwrap() >= delta);
            }
            Ok(RegionTag::NeumannCollar) => {
                prop_assert!(d.distance_to_neumann(p).unwrap() < delta);
                let q = d.project_neumann(p).unwrap();
                prop_assert!((q.xbar.x - 1.0).abs() < 1e-15);
            }
            Ok(RegionTag::DirichletLayer) => prop_assert!(!d.inside(p)),
            Ok(RegionTag::CornerDisk) => prop_assert!(false, "no corner on this domain"),
            Err(_) => prop_assert!(d.distance_to_dirichlet(p).unwrap() > delta),
        }
    }

    #[test]
    fn gmls_reproduces_quadratics_on_jittered_clouds(
        jitter in prop::collection::vec((-0.3f64..0.3, -0.3f64..0.3), 81),
        tau in prop::array::uniform6(-1.0f64..1.0),
        ratio in 3.0f64..4.5,
    ) {
        let h = 0.1;
        let points: Vec<Vec2> = (0..81)
            .map(|k| Vec2::new((k % 9) as f64 * h + jitter[k].0 * h, (k / 9) as f64 * h + jitter[k].1 * h))
            .collect();
        let cloud = PointCloud::from_points(points, h);
        let delta = ratio * h;
        let grid = NeighborGrid::new(&cloud, delta);
        let center = 40;
        let frame = Frame::new(Vec2::new(0.6, 0.8), Vec2::new(0.8, -0.6));
        let fit = LocalFit::new(&cloud, center, build_neighbors(&cloud, &grid, center, delta).unwrap(), &frame, delta).unwrap();
        let w = fit.weights(&tau);
        for (m, &t) in tau.iter().enumerate() {
            let applied: f64 = fit
                .neighbors()
                .iter()
                .zip(&w)
                .map(|(&j, wj)| wj * basis_eval(cloud.point(center), &frame, cloud.point(j), delta)[m])
                .sum();
            prop_assert!((applied - t).abs() < 1e-9, "basis {}: {} vs {}", m, applied, t);
        }
    }
}
