//! Billiards in disks and ellipses.
//!
//! Closed convex orbits in an ellipse are found by bisection on the confocal
//! caustic parameter λ: for a fixed start point, the chord tangent to the
//! caustic `x²/(a²−λ) + y²/(b²−λ) = 1` is launched counter-clockwise and the
//! total forward parameter advance after `k` bounces is driven to `2π`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{forward_advance, Chord, Direction, Domain, Point};
use crate::error::{Error, Result};
use crate::numeric;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BilliardState {
    pub t: f64,
    pub dir: Direction,
}

impl BilliardState {
    pub fn new(dom: &Domain, t: f64, dir: Direction) -> Result<Self> {
        let inward = -dom.outward_normal(t).dot(dir.as_point());
        if inward <= tol::ENTRY_ANGLE {
            return Err(Error::TangentialDirection(inward));
        }
        Ok(Self { t, dir })
    }

    /// State at `t0` aimed at the boundary point `t1`.
    pub fn aimed(dom: &Domain, t0: f64, t1: f64) -> Result<Self> {
        let dir = Direction::between(dom.boundary_point(t0), dom.boundary_point(t1))
            .ok_or(Error::TangentialDirection(0.0))?;
        Self::new(dom, t0, dir)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BilliardOrbit {
    pub chords: Vec<Chord>,
    pub closed: bool,
    /// Smallest return time when closed.
    pub period: Option<usize>,
}

impl BilliardOrbit {
    pub fn perimeter(&self) -> f64 {
        self.chords.iter().map(Chord::length).sum()
    }

    /// Boundary vertices `(t, x, y)` in visiting order, starting point first.
    pub fn vertices(&self) -> Vec<(f64, Point)> {
        let mut v: Vec<_> = self.chords.iter().map(|c| (c.t0, c.p0)).collect();
        if let Some(last) = self.chords.last() {
            v.push((last.t1, last.p1));
        }
        v
    }
}

/// Confocal caustic `x²/(a²−λ) + y²/(b²−λ) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Caustic {
    pub lambda: f64,
    /// Semi-axes when the caustic is a (possibly degenerate) ellipse.
    pub semi_axes: Option<(f64, f64)>,
}

impl Caustic {
    pub fn new(dom: &Domain, lambda: f64) -> Self {
        let (a, b) = dom.semi_axes();
        let semi_axes = if lambda <= b * b {
            Some(((a * a - lambda).max(0.0).sqrt(), (b * b - lambda).max(0.0).sqrt()))
        } else {
            None
        };
        Self { lambda, semi_axes }
    }

    /// `0 < λ < b²`, with a relative margin of the geometric tolerance so
    /// that focal chords (λ = b² up to rounding) are not reported convex.
    pub fn is_convex(&self, dom: &Domain) -> bool {
        let (_, b) = dom.semi_axes();
        let margin = tol::geometric() * b * b;
        self.lambda > margin && self.lambda < b * b - margin
    }
}

pub fn reflect(dom: &Domain, c: &Chord) -> Result<Chord> {
    let d = c.direction().as_point();
    let n = dom.outward_normal(c.t1).as_point();
    let r = d - n * (2.0 * d.dot(n));
    let dir = Direction::new(r.x, r.y).ok_or(Error::TangentialDirection(0.0))?;
    dom.chord_from(c.t1, dir)
}

fn returns_to(dom: &Domain, start: &BilliardState, c: &Chord) -> Result<bool> {
    let p = dom.boundary_point(start.t);
    if c.p1.dist(p) > tol::ORBIT_CLOSURE {
        return Ok(false);
    }
    let next = reflect(dom, c)?;
    Ok(next.direction().as_point().dist(start.dir.as_point()) <= tol::ORBIT_CLOSURE)
}

pub fn orbit(dom: &Domain, s0: BilliardState, steps: usize) -> Result<BilliardOrbit> {
    let mut chords = Vec::with_capacity(steps);
    let mut period = None;
    let mut c = dom.chord_from(s0.t, s0.dir)?;
    for j in 1..=steps {
        chords.push(c);
        if period.is_none() && returns_to(dom, &s0, &c)? {
            period = Some(j);
        }
        if j < steps {
            c = reflect(dom, &c)?;
        }
    }
    let closed = match period {
        Some(k) => steps % k == 0,
        None => false,
    };
    Ok(BilliardOrbit { chords, closed, period })
}

/// Caustic parameter of the chord's line `n·X = c` (unit `n`):
/// `λ = a²n₁² + b²n₂² − c²`.
///
/// A diameter of a disk of radius `R` gives `λ = R²` (caustic shrunk to the
/// centre); a chord through a focus gives `λ = b²` (caustic collapsed onto
/// the focal segment).
pub fn caustic_of(dom: &Domain, c: &Chord) -> Result<Caustic> {
    let (n, off) = c.line();
    if !(n.x.is_finite() && n.y.is_finite() && off.is_finite()) {
        return Err(Error::LineThroughCenterDegenerate(format!("{c:?}")));
    }
    let (a, b) = dom.semi_axes();
    let lambda = a * a * n.x * n.x + b * b * n.y * n.y - off * off;
    Ok(Caustic::new(dom, lambda))
}

/// Whether the chord meets the closed focal segment (a point for a disk),
/// with distance tolerance `tol`.
pub fn focal_chord_test(dom: &Domain, c: &Chord, tol: f64) -> bool {
    let (f1, f2) = dom.foci();
    segment_distance(c.p0, c.p1, f1, f2) <= tol
}

fn segment_distance(a: Point, b: Point, c: Point, d: Point) -> f64 {
    let r = b - a;
    let q = d - c;
    let den = r.cross(q);
    if den != 0.0 {
        let s = (c - a).cross(q) / den;
        let u = (c - a).cross(r) / den;
        if (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&u) {
            return 0.0;
        }
    }
    use crate::network::dist_to_segment as ds;
    ds(a, c, d).min(ds(b, c, d)).min(ds(c, a, b)).min(ds(d, a, b))
}

/// First chord from `t0` tangent to the caustic of parameter `lambda`,
/// travelling counter-clockwise around it.
fn launch(dom: &Domain, t0: f64, lambda: f64) -> Result<Chord> {
    let (a, b) = dom.semi_axes();
    let ca = (a * a - lambda).sqrt();
    let cb = (b * b - lambda).sqrt();
    let p = dom.boundary_point(t0);
    let (al, be) = (p.x / ca, p.y / cb);
    let r = al.hypot(be);
    let psi = be.atan2(al);
    let w = (1.0 / r).clamp(-1.0, 1.0).acos();
    for u in [psi + w, psi - w] {
        let q = Point::new(ca * u.cos(), cb * u.sin());
        let tangent = Point::new(-ca * u.sin(), cb * u.cos());
        if (q - p).dot(tangent) > 0.0 {
            let dir = Direction::new(tangent.x, tangent.y).ok_or(Error::TangentialDirection(0.0))?;
            return dom.chord_from(t0, dir);
        }
    }
    Err(Error::TangentialDirection(0.0))
}

/// Total forward advance after `k` chords minus `2π`.
fn winding_defect(dom: &Domain, t0: f64, k: usize, lambda: f64) -> Result<f64> {
    let mut c = launch(dom, t0, lambda)?;
    let mut total = forward_advance(c.t0, c.t1);
    for _ in 1..k {
        c = reflect(dom, &c)?;
        total += forward_advance(c.t0, c.t1);
    }
    Ok(total - TAU)
}

fn closure_error(dom: &Domain, orbit: &BilliardOrbit) -> Result<f64> {
    let first = orbit.chords[0];
    let last = orbit.chords[orbit.chords.len() - 1];
    let next = reflect(dom, &last)?;
    Ok(last.p1.dist(first.p0).max(next.direction().as_point().dist(first.direction().as_point())))
}

/// Convex closed `k`-orbit through `boundary_point(start_t)`.
pub fn find_closed_orbit(dom: &Domain, k: usize, start_t: f64) -> Result<BilliardOrbit> {
    if k < 2 {
        return Err(Error::DomainError(format!("closed orbits need k >= 2, got {k}")));
    }
    if dom.is_round() {
        let step = TAU / k as f64;
        let chords = (0..k)
            .map(|j| dom.chord_between(start_t + step * j as f64, start_t + step * (j + 1) as f64))
            .collect::<Result<Vec<_>>>()?;
        return Ok(BilliardOrbit { chords, closed: true, period: Some(k) });
    }
    if k == 2 {
        let (s, c) = start_t.sin_cos();
        if s.abs() > 1e-12 && c.abs() > 1e-12 {
            return Err(Error::NoConvergence(format!(
                "only the axes are 2-periodic; t = {start_t} is not an axis vertex"
            )));
        }
        let d = dom.chord_between(start_t, start_t + PI)?;
        return Ok(BilliardOrbit { chords: vec![d, d.reversed()], closed: true, period: Some(2) });
    }

    let (_, b) = dom.semi_axes();
    let hi_lambda = b * b;
    let grid = 64;
    let lambdas: Vec<f64> = (1..grid).map(|j| hi_lambda * j as f64 / grid as f64).collect();
    let values = lambdas
        .iter()
        .map(|&l| winding_defect(dom, start_t, k, l))
        .collect::<Result<Vec<_>>>()?;
    for w in values.windows(2) {
        if w[1] < w[0] - 1e-9 {
            return Err(Error::NoConvergence(format!(
                "rotation is not monotone in the caustic parameter for k = {k}"
            )));
        }
    }
    let idx = values.windows(2).position(|w| w[0] <= 0.0 && w[1] >= 0.0).ok_or_else(|| {
        Error::NoConvergence(format!("no sign change of the winding defect for k = {k}"))
    })?;
    let lambda = numeric::bisect(
        |l| winding_defect(dom, start_t, k, l).unwrap_or(f64::NAN),
        lambdas[idx],
        lambdas[idx + 1],
        0.0,
    )?;
    let first = launch(dom, start_t, lambda)?;
    let s0 = BilliardState { t: start_t, dir: first.direction() };
    let mut result = orbit(dom, s0, k)?;
    let err = closure_error(dom, &result)?;
    if err > tol::ORBIT_CLOSURE {
        return Err(Error::NoConvergence(format!("closure error {err:e} after bisection for k = {k}")));
    }
    result.closed = true;
    result.period = Some(k);
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PonceletSpread {
    pub perimeter_spread: f64,
    pub lambda_spread: f64,
    pub perimeters: Vec<f64>,
    pub lambdas: Vec<f64>,
}

/// Closed `k`-orbits from `samples` equally spaced start parameters; reports
/// the spread of perimeters and caustic parameters.
pub fn poncelet_invariance(dom: &Domain, k: usize, samples: usize) -> Result<PonceletSpread> {
    if k < 3 {
        return Err(Error::DomainError(format!("Poncelet check needs k >= 3, got {k}")));
    }
    if samples == 0 {
        return Err(Error::DomainError("need at least one sample".into()));
    }
    let results = (0..samples)
        .into_par_iter()
        .map(|j| {
            let t = TAU * j as f64 / samples as f64 + 0.1;
            let o = find_closed_orbit(dom, k, t)?;
            let l = caustic_of(dom, &o.chords[0])?.lambda;
            Ok((o.perimeter(), l))
        })
        .collect::<Result<Vec<_>>>()?;
    let (perimeters, lambdas): (Vec<f64>, Vec<f64>) = results.into_iter().unzip();
    let spread = |v: &[f64]| {
        v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    Ok(PonceletSpread {
        perimeter_spread: spread(&perimeters),
        lambda_spread: spread(&lambdas),
        perimeters,
        lambdas,
    })
}
