//! Width certificates: candidate enumeration, Lusternik–Schnirelmann lower
//! bounds and sweepout upper bounds combined into `ω_p` values.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};
use std::fmt;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::billiards;
use crate::domain::{AxisEllipse, Direction, Domain, Point};
use crate::error::{Error, Result};
use crate::network::GeodesicNetwork;
use crate::sweepout::{self, SamplingConfig, SupLength};
use crate::tol;

/// Which diameter of the domain; the disk has a single class up to rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Minor,
    Major,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CandidateKind {
    /// Diameters with multiplicities; on the disk only `Major` is used.
    Diameters { axes: Vec<(Axis, u32)> },
    ClosedOrbit { k: usize, multiplicity: u32 },
    TripleJunction,
}

impl CandidateKind {
    /// Mass in terms of `d` and `D`, e.g. `d+D`.
    pub fn symbol(&self, round: bool) -> Option<String> {
        let CandidateKind::Diameters { axes } = self else { return None };
        let count = |ax: Axis| axes.iter().filter(|(a, _)| *a == ax).map(|(_, m)| m).sum::<u32>();
        let term = |n: u32, s: &str| match n {
            0 => None,
            1 => Some(s.to_string()),
            n => Some(format!("{n}{s}")),
        };
        if round {
            return term(count(Axis::Minor) + count(Axis::Major), "d");
        }
        let parts: Vec<String> = [term(count(Axis::Minor), "d"), term(count(Axis::Major), "D")].into_iter().flatten().collect();
        Some(parts.join("+"))
    }
}

impl fmt::Display for CandidateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CandidateKind::Diameters { axes } => {
                let parts: Vec<String> = axes.iter().map(|(a, m)| format!("{m}x{a:?}")).collect();
                write!(f, "diameters[{}]", parts.join(", "))
            }
            CandidateKind::ClosedOrbit { k, multiplicity } => write!(f, "closed {k}-orbit (x{multiplicity})"),
            CandidateKind::TripleJunction => write!(f, "triple junction"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateNetwork {
    pub description: CandidateKind,
    #[serde(skip)]
    pub network: GeodesicNetwork,
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExclusionBranch {
    /// Caustic radius above 0.7: the perimeter exceeds `2π·r`.
    LargeCaustic,
    /// Caustic radius at most 0.7 and at least four sides, each longer than 1.4.
    ManySides,
    /// Regular triangle of perimeter `3√3`.
    Triangle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolygonExclusion {
    pub k: usize,
    pub r: f64,
    pub bound: f64,
    pub branch: ExclusionBranch,
    /// Lower bound on the perimeter established by the branch.
    pub perimeter_lower: f64,
}

impl fmt::Display for PolygonExclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.branch {
            ExclusionBranch::LargeCaustic => {
                write!(f, "r = {:.4} > 0.7: perimeter >= 2*pi*r = {:.4} > {:.4}", self.r, self.perimeter_lower, self.bound)
            }
            ExclusionBranch::ManySides => {
                write!(f, "r <= 0.7, k = {} >= 4: perimeter > 4*1.4 = {:.4} > {:.4}", self.k, self.perimeter_lower, self.bound)
            }
            ExclusionBranch::Triangle => {
                write!(f, "k = 3: perimeter = 3*sqrt(3) = {:.4} > {:.4}", self.perimeter_lower, self.bound)
            }
        }
    }
}

/// Excludes a convex billiard `k`-gon of the unit disk with caustic radius `r`
/// from having mass below `bound`.
pub fn polygon_exclusion(k: usize, r: f64, bound: f64) -> Result<PolygonExclusion> {
    if k < 3 || !(r > 0.0 && r < 1.0) {
        return Err(Error::DomainError(format!("polygon exclusion needs k >= 3 and 0 < r < 1, got k = {k}, r = {r}")));
    }
    let make = |branch, perimeter_lower| PolygonExclusion { k, r, bound, branch, perimeter_lower };
    if r > 0.7 && TAU * r > bound {
        return Ok(make(ExclusionBranch::LargeCaustic, TAU * r));
    }
    if r <= 0.7 && k >= 4 && 4.0 * 1.4 > bound {
        return Ok(make(ExclusionBranch::ManySides, 4.0 * 1.4));
    }
    if k == 3 && 3.0 * 3f64.sqrt() > bound {
        return Ok(make(ExclusionBranch::Triangle, 3.0 * 3f64.sqrt()));
    }
    Err(Error::NotExcludable { k, r, bound })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "filter", rename_all = "kebab-case")]
pub enum RejectionReason {
    Residual { interior: f64, free_boundary: f64 },
    Integrality { witnesses: Vec<(usize, f64)> },
    Density { violations: usize },
    MassBound { mass: f64, bound: f64 },
    Polygon { exclusion: PolygonExclusion, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rejection {
    pub description: CandidateKind,
    pub mass: f64,
    pub reason: RejectionReason,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Enumeration {
    pub accepted: Vec<CandidateNetwork>,
    pub rejected: Vec<Rejection>,
}

impl Enumeration {
    /// Distinct accepted masses in increasing order.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut m: Vec<f64> = self.accepted.iter().map(|c| c.mass).collect();
        m.sort_by(f64::total_cmp);
        m.dedup_by(|x, y| (*x - *y).abs() <= 1e-12);
        m
    }
}

fn diameter(dom: &Domain, axis: Axis) -> (Point, Point) {
    let (a, b) = dom.semi_axes();
    match axis {
        Axis::Major => (Point::new(-a, 0.0), Point::new(a, 0.0)),
        Axis::Minor => (Point::new(0.0, -b), Point::new(0.0, b)),
    }
}

fn screen(dom: &Domain, net: &GeodesicNetwork, mass_bound: f64) -> Result<Option<RejectionReason>> {
    let interior = net.interior_residual();
    let free_boundary = net.free_boundary_residual(dom)?;
    if interior > tol::STATIONARY || free_boundary > tol::STATIONARY {
        return Ok(Some(RejectionReason::Residual { interior, free_boundary }));
    }
    let integral = net.integrality_filter()?;
    if !integral.pass {
        return Ok(Some(RejectionReason::Integrality { witnesses: integral.witnesses }));
    }
    let density = net.check_density_bounds(dom, mass_bound);
    if !density.passes() {
        return Ok(Some(RejectionReason::Density { violations: density.violations().count() }));
    }
    let mass = net.mass();
    if mass >= mass_bound {
        return Ok(Some(RejectionReason::MassBound { mass, bound: mass_bound }));
    }
    Ok(None)
}

/// Stationary integral networks of mass below `mass_bound`: diameters, pairs
/// of diameters, convex closed billiard orbits with `3 ≤ k ≤ k_max` (the
/// 2-orbits are the diameters) and the symmetric triple junction. Every
/// generated network is either accepted or rejected with a reason.
pub fn enumerate_candidates(dom: &Domain, mass_bound: f64, k_max: usize) -> Result<Enumeration> {
    if !(mass_bound > 0.0 && mass_bound.is_finite()) || k_max < 5 {
        return Err(Error::DomainError(format!("need mass_bound > 0 and k_max >= 5, got {mass_bound}, {k_max}")));
    }
    let round = dom.is_round();
    let axes: &[Axis] = if round { &[Axis::Major] } else { &[Axis::Minor, Axis::Major] };
    let mut generated: Vec<(CandidateKind, GeodesicNetwork)> = Vec::new();

    for &ax in axes {
        let (p, q) = diameter(dom, ax);
        generated.push((CandidateKind::Diameters { axes: vec![(ax, 1)] }, GeodesicNetwork::from_pieces(dom, &[(p, q, 1.0)])?));
    }
    for (i, &a1) in axes.iter().enumerate() {
        for &a2 in &axes[i..] {
            let (kind, pieces) = if a1 == a2 {
                let (p, q) = diameter(dom, a1);
                (vec![(a1, 2)], vec![(p, q, 2.0)])
            } else {
                let (p, q) = diameter(dom, a1);
                let (r, s) = diameter(dom, a2);
                (vec![(a1, 1), (a2, 1)], vec![(p, q, 1.0), (r, s, 1.0)])
            };
            generated.push((CandidateKind::Diameters { axes: kind }, GeodesicNetwork::from_pieces(dom, &pieces)?));
        }
    }
    let y_pieces: Vec<_> = (0..3)
        .map(|j| {
            let t = FRAC_PI_2 + TAU * j as f64 / 3.0;
            (Point::ORIGIN, dom.boundary_point(t), 1.0)
        })
        .collect();
    generated.push((CandidateKind::TripleJunction, GeodesicNetwork::from_pieces(dom, &y_pieces)?));

    let mut out = Enumeration { accepted: Vec::new(), rejected: Vec::new() };
    for (kind, net) in generated {
        let mass = net.mass();
        match screen(dom, &net, mass_bound)? {
            None => out.accepted.push(CandidateNetwork { description: kind, network: net, mass }),
            Some(reason) => out.rejected.push(Rejection { description: kind, mass, reason }),
        }
    }

    let (radius, _) = dom.semi_axes();
    for k in 3..=k_max {
        let orbit = billiards::find_closed_orbit(dom, k, 0.0)?;
        let chords: Vec<_> = orbit.chords.iter().map(|c| (*c, 1.0)).collect();
        let net = GeodesicNetwork::from_chords(dom, &chords)?;
        let mass = net.mass();
        let kind = CandidateKind::ClosedOrbit { k, multiplicity: 1 };
        if round {
            let r = (PI / k as f64).cos();
            if let Ok(exclusion) = polygon_exclusion(k, r, mass_bound / radius) {
                let reason = exclusion.to_string();
                out.rejected.push(Rejection { description: kind, mass, reason: RejectionReason::Polygon { exclusion, reason } });
                continue;
            }
        }
        match screen(dom, &net, mass_bound)? {
            None => out.accepted.push(CandidateNetwork { description: kind, network: net, mass }),
            Some(reason) => out.rejected.push(Rejection { description: kind, mass, reason }),
        }
    }
    out.accepted.sort_by(|x, y| x.mass.total_cmp(&y.mass));
    Ok(out)
}

/// Convex subdomain with a known first width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LsSubdomain {
    pub shape: AxisEllipse,
    pub first_width: f64,
}

impl LsSubdomain {
    /// Ball, whose first width is its diameter.
    pub fn ball(center: Point, radius: f64) -> Self {
        Self { shape: AxisEllipse::circle(center, radius), first_width: 2.0 * radius }
    }

    /// The balls of radius `0.4R` centred on the circle of radius `0.55R`.
    pub fn three_balls(radius: f64) -> Vec<Self> {
        (0..3)
            .map(|j| {
                let phi = FRAC_PI_2 + TAU * j as f64 / 3.0;
                Self::ball(Point::new(0.55 * radius * phi.cos(), 0.55 * radius * phi.sin()), 0.4 * radius)
            })
            .collect()
    }

    /// Half-scale copies of the ellipse `(a, b)` rotated by `π/2` and centred at
    /// `x = ±b/2`, each with first width `half_width`.
    pub fn half_copies(dom: &Domain, half_width: f64) -> Vec<Self> {
        let (a, b) = dom.semi_axes();
        [-0.5 * b, 0.5 * b]
            .into_iter()
            .map(|x| Self { shape: AxisEllipse { center: Point::new(x, 0.0), rx: 0.5 * b, ry: 0.5 * a }, first_width: half_width })
            .collect()
    }
}

const SCAN: usize = 4096;

fn refine_max(f: impl Fn(f64) -> f64) -> f64 {
    let step = TAU / SCAN as f64;
    let (i, _) = (0..SCAN).map(|i| (i, f(i as f64 * step))).fold((0, f64::NEG_INFINITY), |m, (i, v)| if v > m.1 { (i, v) } else { m });
    let c = i as f64 * step;
    crate::numeric::golden_section_max(&f, c - step, c + step, 1e-14, 100).1.max(f(c))
}

/// Largest gap `u·(c₂ − c₁) − h₁(u) − h₂(−u)` over directions; non-negative
/// iff the interiors are disjoint.
fn separation(s1: &AxisEllipse, s2: &AxisEllipse) -> f64 {
    refine_max(|phi| {
        let u = Direction::from_angle(phi);
        u.dot(s2.center - s1.center) - s1.support(u) - s2.support(u.reversed())
    })
}

fn containment_margin(dom: &Domain, s: &AxisEllipse) -> f64 {
    -refine_max(|t| dom.implicit(s.boundary_point(t)))
}

/// Sum of first widths of subdomains with pairwise disjoint interiors lying
/// in the open domain.
pub fn ls_lower_bound(dom: &Domain, subdomains: &[LsSubdomain]) -> Result<f64> {
    for (i, s) in subdomains.iter().enumerate() {
        let margin = containment_margin(dom, &s.shape);
        if margin <= 1e-9 {
            return Err(Error::ContainmentViolated { index: i, margin });
        }
        for (j, t) in subdomains.iter().enumerate().skip(i + 1) {
            if separation(&s.shape, &t.shape) < -1e-12 {
                return Err(Error::DisjointnessViolated(i, j));
            }
        }
    }
    Ok(subdomains.iter().map(|s| s.first_width).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// Smallest mass in the candidate spectrum.
    Classification { value: f64 },
    LusternikSchnirelmann { value: f64, subdomains: usize },
    /// Two half-scale copies force `ω₂ > ω₁`, so the two diameter values are
    /// taken in increasing order.
    StrictOrdering { copies: usize, containment_margin: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: f64,
    pub evidence: Vec<Evidence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    pub value: f64,
    /// Sweepout class `(c0..c4)` attaining the unit-disk supremum.
    pub witness: [f64; 5],
    pub disk_sup: f64,
    /// Radius of the disk containing the domain.
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthCertificate {
    pub p: usize,
    pub domain: Domain,
    pub lower: LowerBound,
    pub upper: UpperBound,
    pub spectrum: Vec<f64>,
    pub conclusion: Vec<f64>,
    pub symbols: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyConfig {
    pub sampling: SamplingConfig,
    pub k_max: usize,
    pub margin: f64,
    /// Largest admissible `max(a/b, b/a)`.
    pub window: f64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self { sampling: SamplingConfig::default(), k_max: 8, margin: 1e-6, window: 1.05 }
    }
}

/// Certifier that reuses the unit-disk sweepout suprema across calls.
pub struct Certifier {
    cfg: CertifyConfig,
    sups: Mutex<Vec<SupLength>>,
}

impl Certifier {
    pub fn new(cfg: CertifyConfig) -> Self {
        Self { cfg, sups: Mutex::new(Vec::new()) }
    }

    pub fn config(&self) -> &CertifyConfig {
        &self.cfg
    }

    fn disk_sup(&self, p: usize) -> Result<SupLength> {
        let mut cache = self.sups.lock().unwrap_or_else(|e| e.into_inner());
        if cache.len() < p {
            *cache = sweepout::sup_length_chain(p, &self.cfg.sampling)?;
        }
        Ok(cache[p - 1])
    }

    pub fn certify(&self, p: usize, dom: &Domain) -> Result<WidthCertificate> {
        if !(1..=4).contains(&p) {
            return Err(Error::DomainError(format!("widths are certified for p in 1..=4, got {p}")));
        }
        let (a, b) = dom.semi_axes();
        let round = dom.is_round();
        if !round && (a.max(b) / a.min(b) > self.cfg.window || a * a > 2.0 * b * b) {
            return Err(Error::InconclusiveCertificate(format!(
                "{} is outside the near-circle window (ratio <= {})",
                dom.label(),
                self.cfg.window
            )));
        }

        let sup = self.disk_sup(p)?;
        let scale = a.max(b);
        let upper = UpperBound { value: scale * sup.sup, witness: sup.witness.coeffs(), disk_sup: sup.sup, scale };
        let bound = upper.value + self.cfg.margin;
        let enumeration = enumerate_candidates(dom, bound, self.cfg.k_max)?;
        let spectrum = enumeration.spectrum();
        let smallest = *spectrum
            .first()
            .ok_or_else(|| Error::InconclusiveCertificate("no candidate below the upper bound".into()))?;

        let mut evidence = vec![Evidence::Classification { value: smallest }];
        let mut lower = smallest;
        if p >= 3 {
            let balls = LsSubdomain::three_balls(a.min(b));
            let ls = ls_lower_bound(dom, &balls)?;
            evidence.push(Evidence::LusternikSchnirelmann { value: ls, subdomains: balls.len() });
            lower = *spectrum.iter().find(|&&m| m >= ls).ok_or_else(|| {
                Error::InconclusiveCertificate(format!("no candidate mass at or above the LS bound {ls}"))
            })?;
        }

        let mut chosen: Vec<&CandidateNetwork> = enumeration
            .accepted
            .iter()
            .filter(|c| c.mass >= lower && c.mass <= bound)
            .collect();
        if !round && p <= 2 && a > b {
            let (d, dd) = dom.diameters();
            let copies = LsSubdomain::half_copies(dom, 0.5 * d);
            ls_lower_bound(dom, &copies)?;
            let margin = copies.iter().map(|c| containment_margin(dom, &c.shape)).fold(f64::INFINITY, f64::min);
            evidence.push(Evidence::StrictOrdering { copies: copies.len(), containment_margin: margin });
            let target = if p == 1 { d } else { dd };
            chosen.retain(|c| (c.mass - target).abs() <= 1e-12);
        }

        let mut conclusion: Vec<f64> = chosen.iter().map(|c| c.mass).collect();
        let mut symbols: Vec<String> = chosen.iter().filter_map(|c| c.description.symbol(round)).collect();
        conclusion.dedup_by(|x, y| (*x - *y).abs() <= 1e-12);
        symbols.dedup();
        if conclusion.is_empty() {
            return Err(Error::InconclusiveCertificate(format!(
                "spectrum {spectrum:?} has no value in [{lower}, {}]",
                upper.value
            )));
        }
        if (round || p <= 2) && conclusion.len() != 1 {
            return Err(Error::InconclusiveCertificate(format!("several values remain: {conclusion:?}")));
        }
        Ok(WidthCertificate {
            p,
            domain: *dom,
            lower: LowerBound { value: lower, evidence },
            upper,
            spectrum,
            conclusion,
            symbols,
        })
    }
}

pub fn certify(p: usize, dom: &Domain, cfg: CertifyConfig) -> Result<WidthCertificate> {
    Certifier::new(cfg).certify(p, dom)
}

/// `3√2`, the mass bound of the disk classification.
pub const DISK_CLASSIFICATION_BOUND: f64 = 3.0 * SQRT_2;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exclusion_branches() {
        let b = DISK_CLASSIFICATION_BOUND;
        assert_eq!(polygon_exclusion(5, 0.8, b).unwrap().branch, ExclusionBranch::LargeCaustic);
        assert_eq!(polygon_exclusion(4, 0.5, b).unwrap().branch, ExclusionBranch::ManySides);
        assert_eq!(polygon_exclusion(3, 0.5, b).unwrap().branch, ExclusionBranch::Triangle);
        assert!(matches!(polygon_exclusion(3, 0.5, 6.0), Err(Error::NotExcludable { .. })));
        assert!(polygon_exclusion(2, 0.5, b).is_err());
    }

    #[test]
    fn disk_enumeration() {
        let e = enumerate_candidates(&Domain::unit_disk(), DISK_CLASSIFICATION_BOUND, 8).unwrap();
        assert_eq!(e.spectrum(), vec![2.0, 4.0]);
        assert_eq!(e.accepted.len(), 2);
        let y = e.rejected.iter().find(|r| r.description == CandidateKind::TripleJunction).unwrap();
        match &y.reason {
            RejectionReason::Integrality { witnesses } => assert!((witnesses[0].1 - 1.5).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let polygons = e.rejected.iter().filter(|r| matches!(r.reason, RejectionReason::Polygon { .. })).count();
        assert_eq!(polygons, 6);
    }

    #[test]
    fn ellipse_enumeration() {
        let dom = Domain::ellipse(1.02, 0.98).unwrap();
        let e = enumerate_candidates(&dom, 4.2, 8).unwrap();
        let s = e.spectrum();
        let want = [1.96, 2.04, 3.92, 4.0, 4.08];
        assert_eq!(s.len(), 5);
        for (x, y) in s.iter().zip(want) {
            assert!((x - y).abs() < 1e-12, "{s:?}");
        }
    }

    #[test]
    fn ls_examples() {
        let d = Domain::unit_disk();
        assert!((ls_lower_bound(&d, &LsSubdomain::three_balls(1.0)).unwrap() - 2.4).abs() < 1e-12);
        assert_eq!(ls_lower_bound(&d, &[LsSubdomain::ball(Point::ORIGIN, 0.4)]).unwrap(), 0.8);
        let overlap = [LsSubdomain::ball(Point::new(0.1, 0.0), 0.4), LsSubdomain::ball(Point::new(-0.1, 0.0), 0.4)];
        assert_eq!(ls_lower_bound(&d, &overlap), Err(Error::DisjointnessViolated(0, 1)));
        let outside = [LsSubdomain::ball(Point::new(0.7, 0.0), 0.4)];
        assert!(matches!(ls_lower_bound(&d, &outside), Err(Error::ContainmentViolated { index: 0, .. })));
        let e = Domain::ellipse(1.02, 0.98).unwrap();
        assert!((ls_lower_bound(&e, &LsSubdomain::half_copies(&e, 0.98)).unwrap() - 1.96).abs() < 1e-12);
    }

    #[test]
    fn window_is_enforced() {
        let c = Certifier::new(CertifyConfig::default());
        let far = Domain::ellipse(1.5, 1.0).unwrap();
        assert!(matches!(c.certify(1, &far), Err(Error::InconclusiveCertificate(_))));
        assert!(matches!(c.certify(5, &Domain::unit_disk()), Err(Error::DomainError(_))));
    }
}
