use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use widths_core::billiards::{caustic_of, find_closed_orbit, focal_chord_test, orbit};
use widths_core::domain::forward_advance;
use widths_core::{BilliardState, Direction, Domain};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn caustic_is_constant_along_orbits(b in 0.5f64..0.99, t in 0.0f64..TAU, t1 in 0.3f64..3.0) {
        let dom = Domain::ellipse(1.0, b).unwrap();
        let s = BilliardState::aimed(&dom, t, t + t1).unwrap();
        let o = orbit(&dom, s, 40).unwrap();
        let l0 = caustic_of(&dom, &o.chords[0]).unwrap().lambda;
        for c in &o.chords {
            prop_assert!((caustic_of(&dom, c).unwrap().lambda - l0).abs() <= 1e-9);
        }
    }

    #[test]
    fn disk_orbits_keep_their_angular_width(t in 0.0f64..TAU, t1 in 0.1f64..6.1) {
        let dom = Domain::unit_disk();
        let s = BilliardState::aimed(&dom, t, t + t1).unwrap();
        let o = orbit(&dom, s, 30).unwrap();
        let w0 = forward_advance(o.chords[0].t0, o.chords[0].t1);
        for c in &o.chords {
            prop_assert!((forward_advance(c.t0, c.t1) - w0).abs() <= 1e-9);
        }
    }
}

#[test]
fn focal_chords_stay_focal() {
    let dom = Domain::ellipse(1.0, 0.8).unwrap();
    let (f1, f2) = dom.foci();
    let mut count = 0;
    for j in 0..120 {
        let t = TAU * j as f64 / 120.0 + 0.01;
        let p = dom.boundary_point(t);
        let target = if j % 2 == 0 { f1 } else { f2 };
        let Some(dir) = Direction::between(p, target) else { continue };
        let Ok(s) = BilliardState::new(&dom, t, dir) else { continue };
        let o = orbit(&dom, s, 12).unwrap();
        assert!(focal_chord_test(&dom, &o.chords[0], 1e-9));
        for c in &o.chords {
            assert!(focal_chord_test(&dom, c, 1e-7), "start {t}");
        }
        count += 1;
    }
    assert!(count >= 100);
}

#[test]
fn regular_polygon_perimeters() {
    let dom = Domain::unit_disk();
    for k in 2..=12 {
        let o = find_closed_orbit(&dom, k, 0.7).unwrap();
        let want = 2.0 * k as f64 * (PI / k as f64).sin();
        assert!((o.perimeter() - want).abs() <= 1e-10);
    }
}

#[test]
fn side_length_from_caustic_radius() {
    for j in 1..100 {
        let r = j as f64 / 100.0;
        let side = 2.0 * (1.0 - r * r).sqrt();
        if r <= 0.7 {
            assert!(side > 1.4);
        } else {
            assert!(TAU * r > 3.0 * 2f64.sqrt());
        }
    }
}

#[test]
fn ellipse_orbits_close() {
    let dom = Domain::ellipse(1.1, 0.9).unwrap();
    for k in 3..=7 {
        for t in [0.0, 0.4, 2.0] {
            let o = find_closed_orbit(&dom, k, t).unwrap();
            assert!(o.closed);
            assert_eq!(o.period, Some(k));
            let c = caustic_of(&dom, &o.chords[0]).unwrap();
            assert!(c.is_convex(&dom));
        }
    }
}
