use proptest::prelude::*;
use widths_core::{Containment, Direction, Domain};

fn domains() -> impl Strategy<Value = Domain> {
    prop_oneof![
        (0.2f64..5.0).prop_map(|r| Domain::disk(r).unwrap()),
        (0.2f64..5.0, 0.3f64..1.0).prop_map(|(a, s)| Domain::ellipse(a, a * s).unwrap()),
    ]
}

proptest! {
    #[test]
    fn boundary_points_are_on_the_boundary(dom in domains(), t in 0.0f64..std::f64::consts::TAU) {
        prop_assert_eq!(dom.contains(dom.boundary_point(t), 1e-12), Containment::Boundary);
    }

    #[test]
    fn normal_is_orthogonal_to_tangent(dom in domains(), t in -10.0f64..10.0) {
        let n = dom.outward_normal(t).as_point();
        let h = 1e-6;
        let fd = dom.boundary_point(t + h) - dom.boundary_point(t - h);
        prop_assert!(n.dot(dom.tangent(t).as_point()).abs() < 1e-10);
        prop_assert!((n.dot(fd) / fd.norm()).abs() < 1e-6);
    }

    #[test]
    fn disk_diameters_reshoot_to_themselves(r in 0.2f64..5.0, t in 0.0f64..std::f64::consts::TAU) {
        let dom = Domain::disk(r).unwrap();
        let inward = dom.outward_normal(t).reversed();
        let c = dom.chord_from(t, inward).unwrap();
        let back = dom.chord_from(c.t1, c.direction().reversed()).unwrap();
        prop_assert!(back.p1.dist(c.p0) < 1e-10 * r.max(1.0));
        prop_assert!((c.length() - 2.0 * r).abs() < 1e-10 * r.max(1.0));
    }

    #[test]
    fn chord_interiors_are_interior(dom in domains(), t0 in 0.0f64..6.28, dt in 0.05f64..6.2, s in 0.001f64..0.999) {
        let c = dom.chord_between(t0, t0 + dt).unwrap();
        prop_assert_eq!(dom.contains(c.point_at(s), 0.0), Containment::Interior);
    }

    #[test]
    fn chord_from_hits_the_boundary(dom in domains(), t in 0.0f64..6.28, phi in -1.5f64..1.5) {
        let inward = dom.outward_normal(t).reversed();
        let dir = Direction::from_angle(inward.angle() + phi);
        let c = dom.chord_from(t, dir).unwrap();
        prop_assert_eq!(dom.contains(c.p1, 1e-9), Containment::Boundary);
        prop_assert!((dom.param_of(c.p1) - c.t1).abs() < 1e-12);
    }
}
