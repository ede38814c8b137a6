//! Acceptance suite; prints one PASS/FAIL line per criterion.

mod common;

use std::f64::consts::{PI, SQRT_2};
use std::time::{Duration, Instant};

use rand::Rng;
use widths_core::billiards::{caustic_of, find_closed_orbit};
use widths_core::certify::{enumerate_candidates, CandidateKind, Evidence, RejectionReason};
use widths_core::conic::{disk_length, maximize_parabola, parabola_crossing, parabola_l, ParabolaParam};
use widths_core::crofton::{crofton_length, no_concentration_scan, CircleOracle, ConicOracle, SegmentsOracle};
use widths_core::numeric::integrate;
use widths_core::sweepout::{sample_classes, sup_length_chain};
use widths_core::{
    Certifier, CertifyConfig, Domain, Point, ProjectiveClass, QuadConfig, QuadratureGrid, Region, SamplingConfig,
};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: String) -> Outcome {
    if cond {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn close(x: f64, want: f64, tol: f64) -> bool {
    (x - want).abs() <= tol
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let out = f();
    let el = t.elapsed();
    let tag = format!(" [{:.2?} / limit {:?}]", el, limit);
    match out {
        Ok(m) if el <= limit => Ok(m + &tag),
        Ok(m) => Err(m + &tag + " too slow"),
        Err(m) => Err(m + &tag),
    }
}

fn parabola_maximizer() -> Outcome {
    timed(Duration::from_secs(1), || {
        let (a0, l0) = maximize_parabola().map_err(|e| e.to_string())?;
        check(
            close(a0, 94.091282, 1e-4) && close(l0, 4.00267, 1e-4),
            format!("a0 = {a0:.9}, L0 = {l0:.9}"),
        )
    })
}

fn parabola_oracle() -> Outcome {
    timed(Duration::from_secs(10), || {
        let mut rng = common::rng(2);
        let quad = QuadConfig { abs_tol: 1e-11, depth_cap: 60 };
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let a = 500.0 - rng.gen_range(0.0..499.0);
            let x = parabola_crossing(a);
            let direct = integrate(|t| (1.0 + 4.0 * a * a * t * t).sqrt(), -x, x, quad).map_err(|e| e.to_string())?;
            let general = disk_length(&ParabolaParam::new(a).unwrap().coeffs(), &Domain::unit_disk(), QuadConfig::default())
                .map_err(|e| e.to_string())?;
            let closed = parabola_l(ParabolaParam::new(a).unwrap());
            worst = worst.max((closed - direct).abs()).max((closed - general).abs());
        }
        check(worst <= 1e-7, format!("max |L(a) - quadrature| = {worst:.2e} over 200 draws"))
    })
}

fn disk_certificates(certifier: &Certifier) -> Outcome {
    timed(Duration::from_secs(120), || {
        let dom = Domain::unit_disk();
        let mut values = Vec::new();
        let mut ls = None;
        for p in 1..=4 {
            let c = certifier.certify(p, &dom).map_err(|e| format!("p = {p}: {e}"))?;
            if p == 3 {
                ls = c.lower.evidence.iter().find_map(|e| match e {
                    Evidence::LusternikSchnirelmann { value, .. } => Some(*value),
                    _ => None,
                });
            }
            values.push(c.conclusion);
        }
        let want = [vec![2.0], vec![2.0], vec![4.0], vec![4.0]];
        let ls_ok = ls.is_some_and(|v| close(v, 2.4, 1e-12));
        check(values == want && ls_ok, format!("conclusions {values:?}, p=3 LS evidence {ls:?}"))
    })
}

fn ellipse_certificates(certifier: &Certifier) -> Outcome {
    let dom = Domain::ellipse(1.02, 0.98).unwrap();
    let mut values = Vec::new();
    for p in 1..=4 {
        values.push(certifier.certify(p, &dom).map_err(|e| format!("p = {p}: {e}"))?.conclusion);
    }
    let want: [&[f64]; 4] = [&[1.96], &[2.04], &[3.92, 4.0, 4.08], &[3.92, 4.0, 4.08]];
    let ok = values
        .iter()
        .zip(want)
        .all(|(v, w)| v.len() == w.len() && v.iter().zip(w).all(|(x, y)| close(*x, *y, 1e-12)));
    check(ok, format!("conclusions {values:?}"))
}

fn classification() -> Outcome {
    let e = enumerate_candidates(&Domain::unit_disk(), 3.0 * SQRT_2, 8).map_err(|e| e.to_string())?;
    let spectrum = e.spectrum();
    let mut polygons = Vec::new();
    for k in 3..=8 {
        let r = e.rejected.iter().find(|r| r.description == CandidateKind::ClosedOrbit { k, multiplicity: 1 });
        match r.map(|r| &r.reason) {
            Some(RejectionReason::Polygon { reason, .. }) => polygons.push(format!("k={k}: {reason}")),
            _ => return Err(format!("{k}-gon not excluded by a polygon branch")),
        }
    }
    let branch_ok = polygons[0].contains("3*sqrt(3)") && polygons[1..].iter().all(|s| s.contains("2*pi*r") || s.contains("4*1.4"));
    check(
        e.accepted.len() == 2 && spectrum == vec![2.0, 4.0] && branch_ok,
        format!("{} candidates, masses {spectrum:?}; {}", e.accepted.len(), polygons.join("; ")),
    )
}

/// Distance to the class of `a0·x² − y − 1` after the reflections `x ↦ −x`, `y ↦ −y`.
fn a0_class_distance(w: &ProjectiveClass, a0: f64) -> f64 {
    let reference = ProjectiveClass::new(4, [-1.0, 0.0, -1.0, a0, 0.0]).unwrap().coeffs();
    let mut best = f64::INFINITY;
    for (sx, sy) in [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
        let c = w.coeffs();
        let image = ProjectiveClass::new(4, [c[0], sx * c[1], sy * c[2], c[3], sx * sy * c[4]]).unwrap().coeffs();
        let d = image.iter().zip(reference).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        best = best.min(d);
    }
    best
}

fn sweepout_bounds() -> Outcome {
    timed(Duration::from_secs(120), || {
        let cfg = SamplingConfig { samples: 10_000, ..SamplingConfig::default() };
        let chain = sup_length_chain(4, &cfg).map_err(|e| e.to_string())?;
        let (a0, l0) = maximize_parabola().map_err(|e| e.to_string())?;
        let s: Vec<f64> = chain.iter().map(|c| c.sup).collect();
        let low_ok = s[..2].iter().all(|v| (2.0 - 1e-6..=2.0 + 1e-9).contains(v));
        let high_ok = s[2..].iter().all(|v| (4.0..=4.00267 + 1e-6).contains(v));
        let dist = a0_class_distance(&chain[2].witness.embed(4).unwrap(), a0);
        check(
            low_ok && high_ok && dist <= 1e-2,
            format!("sups {s:?} (L0 = {l0:.9}), p=3 witness {:?} at distance {dist:.2e} from the a0-parabola", chain[2].witness.coeffs()),
        )
    })
}

fn mass_identity() -> Outcome {
    let mut rng = common::rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (net, dom) = common::stationary_network(&mut rng);
        let mass = net.mass();
        for _ in 0..10 {
            let x = common::random_point_in(&mut rng, &dom);
            let via = net.mass_via_forces(x).map_err(|e| e.to_string())?;
            worst = worst.max((via - mass).abs() / (1.0 + mass));
        }
    }
    check(worst <= 1e-8, format!("max |mass_via_forces - mass| / (1 + mass) = {worst:.2e} over 100 networks x 10 basepoints"))
}

fn poncelet() -> Outcome {
    let dom = Domain::ellipse(1.02, 0.98).unwrap();
    let mut lines = Vec::new();
    let mut ok = true;
    for k in 3..=5 {
        let mut perims = Vec::new();
        let mut lambda_spread: f64 = 0.0;
        for j in 0..8 {
            let o = find_closed_orbit(&dom, k, 2.0 * PI * j as f64 / 8.0 + 0.1).map_err(|e| e.to_string())?;
            perims.push(o.perimeter());
            let ls: Vec<f64> = o.chords.iter().map(|c| caustic_of(&dom, c).map(|c| c.lambda)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
            let spread = ls.iter().cloned().fold(f64::MIN, f64::max) - ls.iter().cloned().fold(f64::MAX, f64::min);
            lambda_spread = lambda_spread.max(spread);
        }
        let ps = perims.iter().cloned().fold(f64::MIN, f64::max) - perims.iter().cloned().fold(f64::MAX, f64::min);
        ok &= ps <= 1e-6 && lambda_spread <= 1e-8;
        lines.push(format!("k={k}: perimeter spread {ps:.1e}, lambda spread {lambda_spread:.1e}"));
    }
    check(ok, lines.join("; "))
}

fn crofton_accuracy() -> Outcome {
    let dom = Domain::unit_disk();
    let region = Region::domain(&dom);
    let g = QuadratureGrid::default();
    let quad = QuadConfig::default();
    let rel = |est: f64, exact: f64| (est - exact).abs() / exact;
    let diam = crofton_length(&SegmentsOracle(vec![(Point::new(-1.0, 0.0), Point::new(1.0, 0.0), 1.0)]), &region, g)
        .map_err(|e| e.to_string())?
        .length;
    let circ = crofton_length(&CircleOracle { center: Point::ORIGIN, radius: 0.5 }, &region, g).map_err(|e| e.to_string())?.length;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for cls in sample_classes(4, 40, 21).map_err(|e| e.to_string())? {
        let Some(q) = cls.conic() else { continue };
        let exact = disk_length(&q, &dom, quad).map_err(|e| e.to_string())?;
        if exact < 0.1 || count == 20 {
            continue;
        }
        count += 1;
        let est = crofton_length(&ConicOracle::new(q), &region, g).map_err(|e| e.to_string())?.length;
        worst = worst.max(rel(est, exact));
    }
    let mut scan_ok = true;
    let mut sups = Vec::new();
    for p in 1..=4 {
        let t = no_concentration_scan(p, 1000, &[0.2, 0.1, 0.05], 0).map_err(|e| e.to_string())?;
        scan_ok &= t.sup_strictly_decreasing() && t.rows.iter().all(|r| r.violations == 0);
        sups.push(t.rows.iter().map(|r| format!("{:.4}", r.sup)).collect::<Vec<_>>().join(">"));
    }
    check(
        rel(diam, 2.0) <= 0.01 && rel(circ, PI) <= 0.01 && count == 20 && worst <= 0.01 && scan_ok,
        format!(
            "diameter {diam:.5}, circle {circ:.5}, worst conic error {:.3}% over {count}, scan sups {}",
            100.0 * worst,
            sups.join(" | ")
        ),
    )
}

fn convergence() -> Outcome {
    let target = 3.0 * 3f64.sqrt();
    let mut devs = Vec::new();
    for eps in [1e-2, 1e-3, 1e-4] {
        let dom = Domain::ellipse(1.0 + eps, 1.0 - eps).unwrap();
        let o = find_closed_orbit(&dom, 3, 0.0).map_err(|e| e.to_string())?;
        devs.push((o.perimeter() - target).abs());
    }
    let shown: Vec<String> = devs.iter().map(|d| format!("{d:.3e}")).collect();
    check(devs.windows(2).all(|w| w[1] < w[0]), format!("|P - 3*sqrt(3)| = {}", shown.join(", ")))
}

fn main() {
    let certifier = Certifier::new(CertifyConfig::default());
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("parabola maximizer", Box::new(parabola_maximizer)),
        ("parabola oracle equivalence", Box::new(parabola_oracle)),
        ("disk width certificates", Box::new(|| disk_certificates(&certifier))),
        ("ellipse width certificates", Box::new(|| ellipse_certificates(&certifier))),
        ("classification enumeration", Box::new(classification)),
        ("sweepout bounds", Box::new(sweepout_bounds)),
        ("mass identity", Box::new(mass_identity)),
        ("Poncelet invariance", Box::new(poncelet)),
        ("Crofton accuracy", Box::new(crofton_accuracy)),
        ("convergence to the regular triangle", Box::new(convergence)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(m) => println!("PASS criterion {:>2} ({name}): {m}", i + 1),
            Err(m) => {
                failed += 1;
                println!("FAIL criterion {:>2} ({name}): {m}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
