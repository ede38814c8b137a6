#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use widths_core::billiards::find_closed_orbit;
use widths_core::{Domain, GeodesicNetwork, Point};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Diameters, radial stars, and billiard polygons in disks and near-round
/// ellipses, all stationary with free boundary.
pub fn stationary_network(rng: &mut ChaCha8Rng) -> (GeodesicNetwork, Domain) {
    let r = rng.gen_range(0.5..2.0);
    let disk = Domain::disk(r).unwrap();
    match rng.gen_range(0..5) {
        0 => {
            let n = rng.gen_range(1..=3);
            let pieces: Vec<_> = (0..n)
                .map(|_| {
                    let phi = rng.gen_range(0.0..PI);
                    let u = Point::new(phi.cos(), phi.sin()) * r;
                    (-u, u, rng.gen_range(1..=2) as f64)
                })
                .collect();
            (GeodesicNetwork::from_pieces(&disk, &pieces).unwrap(), disk)
        }
        1 => {
            let arms = rng.gen_range(3..=6);
            let phi0 = rng.gen_range(0.0..TAU);
            let theta = rng.gen_range(1..=2) as f64;
            let pieces: Vec<_> = (0..arms)
                .map(|j| (Point::ORIGIN, disk.boundary_point(phi0 + TAU * j as f64 / arms as f64), theta))
                .collect();
            (GeodesicNetwork::from_pieces(&disk, &pieces).unwrap(), disk)
        }
        2 => {
            let k = rng.gen_range(3..=8);
            let o = find_closed_orbit(&disk, k, rng.gen_range(0.0..TAU)).unwrap();
            let chords: Vec<_> = o.chords.iter().map(|c| (*c, 1.0)).collect();
            (GeodesicNetwork::from_chords(&disk, &chords).unwrap(), disk)
        }
        3 => {
            let a = rng.gen_range(0.8..1.5);
            let dom = Domain::ellipse(a, a * rng.gen_range(0.9..1.0)).unwrap();
            let (a, b) = dom.semi_axes();
            let pieces = [
                (Point::new(-a, 0.0), Point::new(a, 0.0), rng.gen_range(1..=2) as f64),
                (Point::new(0.0, -b), Point::new(0.0, b), rng.gen_range(1..=2) as f64),
            ];
            (GeodesicNetwork::from_pieces(&dom, &pieces).unwrap(), dom)
        }
        _ => {
            let dom = Domain::ellipse(1.0, rng.gen_range(0.9..0.99)).unwrap();
            let k = rng.gen_range(3..=5);
            let o = find_closed_orbit(&dom, k, rng.gen_range(0.0..TAU)).unwrap();
            let chords: Vec<_> = o.chords.iter().map(|c| (*c, 1.0)).collect();
            (GeodesicNetwork::from_chords(&dom, &chords).unwrap(), dom)
        }
    }
}

pub fn random_point_in(rng: &mut ChaCha8Rng, dom: &Domain) -> Point {
    let (a, b) = dom.semi_axes();
    loop {
        let p = Point::new(rng.gen_range(-a..a), rng.gen_range(-b..b));
        if dom.implicit(p) < 0.0 {
            return p;
        }
    }
}
