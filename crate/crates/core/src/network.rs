//! Finite (generalized) geodesic networks in a planar domain.
//!
//! A network is a list of junctions and straight segments between them, each
//! with a positive multiplicity θ. Integer multiplicities give genuine
//! networks; positive reals give generalized ones, which every operation here
//! accepts except [`GeodesicNetwork::integrality_filter`].
//!
//! Stationarity is reported as residuals, never as booleans:
//!
//! * interior junctions: `|Σ θ_k u_k|`, where `u_k` are the unit tangents
//!   leaving the junction;
//! * boundary junctions: the tangential component of the same sum;
//! * radial condition about a basepoint `x`: `|Σ_i θ_ij ⟨(J_j − J_i)/|J_j − J_i|, J_j − x⟩|`.
//!
//! The boundary force at `J_l` is `F_l = Σ_i θ_il (J_l − J_i)/|J_l − J_i|`,
//! the resultant of directions pointing *towards* `J_l`. With this orientation
//! the mass identity `mass = Σ_l ⟨F_l, J_l − x⟩` holds whenever the radial
//! condition does.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::domain::{Chord, Containment, Domain, Point};
use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum JunctionLocation {
    Interior,
    Boundary { t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Junction {
    pub position: Point,
    pub location: JunctionLocation,
}

impl Junction {
    pub fn interior(position: Point) -> Self {
        Self { position, location: JunctionLocation::Interior }
    }

    pub fn boundary(dom: &Domain, t: f64) -> Self {
        Self { position: dom.boundary_point(t), location: JunctionLocation::Boundary { t } }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self.location, JunctionLocation::Boundary { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkSegment {
    pub i: usize,
    pub j: usize,
    pub multiplicity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicNetwork {
    junctions: Vec<Junction>,
    segments: Vec<NetworkSegment>,
}

/// Force at a boundary junction relative to a basepoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryForce {
    pub junction: usize,
    pub force: Point,
    /// `⟨F, (J_l − x)/|J_l − x|⟩`
    pub radial: f64,
    /// Angle between `F` and `J_l − x`.
    pub angle: f64,
    /// `|J_l − x|`
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEntry {
    pub point: Point,
    pub location: Containment,
    pub density: f64,
    pub bound: f64,
    /// Boundary bounds are strict inequalities.
    pub strict: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub mu: f64,
    pub mass: f64,
    pub mass_within_mu: bool,
    /// True off the round disk, where the bounds only hold for domains close
    /// enough to a disk.
    pub approximate: bool,
    pub entries: Vec<DensityEntry>,
}

impl DensityReport {
    pub fn violations(&self) -> impl Iterator<Item = &DensityEntry> {
        self.entries.iter().filter(|e| !e.ok)
    }

    pub fn passes(&self) -> bool {
        self.entries.iter().all(|e| e.ok)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralityReport {
    pub pass: bool,
    /// Interior junctions whose density is not a positive integer: (index, Θ).
    pub witnesses: Vec<(usize, f64)>,
}

impl GeodesicNetwork {
    pub fn new(junctions: Vec<Junction>, segments: Vec<NetworkSegment>) -> Result<Self> {
        for (k, j) in junctions.iter().enumerate() {
            if !j.position.is_finite() {
                return Err(Error::InvalidNetwork(format!("junction {k} has a non-finite position")));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for (k, s) in segments.iter().enumerate() {
            if s.i >= junctions.len() || s.j >= junctions.len() {
                return Err(Error::InvalidNetwork(format!("segment {k} references a missing junction")));
            }
            if s.i == s.j {
                return Err(Error::InvalidNetwork(format!("segment {k} is a loop at junction {}", s.i)));
            }
            if !(s.multiplicity.is_finite() && s.multiplicity > 0.0) {
                return Err(Error::InvalidNetwork(format!(
                    "segment {k} has non-positive multiplicity {}",
                    s.multiplicity
                )));
            }
            if junctions[s.i].position.dist(junctions[s.j].position) <= tol::geometric() {
                return Err(Error::InvalidNetwork(format!("segment {k} has zero length")));
            }
            if !seen.insert((s.i.min(s.j), s.i.max(s.j))) {
                return Err(Error::InvalidNetwork(format!("segment {k} duplicates an earlier segment")));
            }
        }
        Ok(Self { junctions, segments })
    }

    /// Builds a network from weighted chords or interior segments, splitting
    /// them at mutual crossings and merging coincident pieces (their
    /// multiplicities add). Endpoints on `dom`'s boundary become boundary
    /// junctions.
    pub fn from_pieces(dom: &Domain, pieces: &[(Point, Point, f64)]) -> Result<Self> {
        let merge_tol = 1e-9;
        let mut junctions: Vec<Junction> = Vec::new();
        let index_of = |p: Point, junctions: &mut Vec<Junction>| -> usize {
            if let Some(k) = junctions.iter().position(|j| j.position.dist(p) <= merge_tol) {
                return k;
            }
            let loc = if dom.contains(p, 1e-9) == Containment::Boundary {
                JunctionLocation::Boundary { t: dom.param_of(p) }
            } else {
                JunctionLocation::Interior
            };
            junctions.push(Junction { position: p, location: loc });
            junctions.len() - 1
        };

        let mut merged: Vec<NetworkSegment> = Vec::new();
        for (k, &(a, b, theta)) in pieces.iter().enumerate() {
            let mut cuts = vec![0.0, 1.0];
            for (m, &(c, d, _)) in pieces.iter().enumerate() {
                if m == k {
                    continue;
                }
                for s in crossing_params(a, b, c, d) {
                    cuts.push(s);
                }
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|x, y| (*x - *y).abs() * a.dist(b) <= merge_tol);
            for w in cuts.windows(2) {
                let p = a + (b - a) * w[0];
                let q = a + (b - a) * w[1];
                let i = index_of(p, &mut junctions);
                let j = index_of(q, &mut junctions);
                if i == j {
                    continue;
                }
                let key = (i.min(j), i.max(j));
                match merged.iter_mut().find(|s| (s.i.min(s.j), s.i.max(s.j)) == key) {
                    Some(s) => s.multiplicity += theta,
                    None => merged.push(NetworkSegment { i, j, multiplicity: theta }),
                }
            }
        }
        Self::new(junctions, merged)
    }

    /// Network made of weighted chords of `dom`.
    pub fn from_chords(dom: &Domain, chords: &[(Chord, f64)]) -> Result<Self> {
        let pieces: Vec<_> = chords.iter().map(|(c, th)| (c.p0, c.p1, *th)).collect();
        Self::from_pieces(dom, &pieces)
    }

    pub fn junctions(&self) -> &[Junction] {
        &self.junctions
    }

    pub fn segments(&self) -> &[NetworkSegment] {
        &self.segments
    }

    /// All multiplicities are integers.
    pub fn is_integral(&self) -> bool {
        self.segments.iter().all(|s| s.multiplicity.fract() == 0.0)
    }

    /// Disjoint union; indices of `other` are shifted.
    pub fn union(&self, other: &GeodesicNetwork) -> Result<Self> {
        let off = self.junctions.len();
        let mut junctions = self.junctions.clone();
        junctions.extend_from_slice(&other.junctions);
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().map(|s| NetworkSegment { i: s.i + off, j: s.j + off, ..*s }));
        Self::new(junctions, segments)
    }

    /// Network scaled by `lambda` about the origin.
    pub fn scaled(&self, lambda: f64) -> Self {
        let junctions = self
            .junctions
            .iter()
            .map(|j| Junction { position: j.position * lambda, location: j.location })
            .collect();
        Self { junctions, segments: self.segments.clone() }
    }

    /// Checks junction locations and that segment interiors lie inside `dom`.
    pub fn validate_in(&self, dom: &Domain) -> Result<()> {
        let gt = tol::geometric().max(1e-9);
        for (k, j) in self.junctions.iter().enumerate() {
            let c = dom.contains(j.position, gt);
            match (j.location, c) {
                (JunctionLocation::Boundary { .. }, Containment::Boundary) => {}
                (JunctionLocation::Boundary { .. }, _) => {
                    return Err(Error::JunctionOffBoundary { index: k, value: dom.implicit(j.position) })
                }
                (JunctionLocation::Interior, Containment::Interior) => {}
                (JunctionLocation::Interior, _) => {
                    return Err(Error::InvalidNetwork(format!("junction {k} is flagged interior but is not")))
                }
            }
        }
        for (k, s) in self.segments.iter().enumerate() {
            let mid = (self.junctions[s.i].position + self.junctions[s.j].position) * 0.5;
            if dom.contains(mid, gt) != Containment::Interior {
                return Err(Error::InvalidNetwork(format!("segment {k} leaves the domain interior")));
            }
        }
        Ok(())
    }

    /// Unit tangents leaving junction `k`, with multiplicities.
    pub fn arms(&self, k: usize) -> impl Iterator<Item = (Point, f64)> + '_ {
        let here = self.junctions[k].position;
        self.segments.iter().filter_map(move |s| {
            let other = if s.i == k {
                s.j
            } else if s.j == k {
                s.i
            } else {
                return None;
            };
            let d = self.junctions[other].position - here;
            Some((d * (1.0 / d.norm()), s.multiplicity))
        })
    }

    fn resultant(&self, k: usize) -> Point {
        self.arms(k).fold(Point::ORIGIN, |acc, (u, th)| acc + u * th)
    }

    /// Total multiplicity-weighted length, each segment counted once.
    pub fn mass(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.multiplicity * self.junctions[s.i].position.dist(self.junctions[s.j].position))
            .sum()
    }

    pub fn interior_residual(&self) -> f64 {
        (0..self.junctions.len())
            .filter(|&k| !self.junctions[k].is_boundary())
            .map(|k| self.resultant(k).norm())
            .fold(0.0, f64::max)
    }

    /// Interior junctions with fewer than three incident segments.
    pub fn low_valence_junctions(&self) -> Vec<usize> {
        (0..self.junctions.len())
            .filter(|&k| !self.junctions[k].is_boundary() && self.arms(k).count() < 3)
            .collect()
    }

    pub fn free_boundary_residual(&self, dom: &Domain) -> Result<f64> {
        let gt = tol::geometric().max(1e-9);
        let mut worst: f64 = 0.0;
        for (k, j) in self.junctions.iter().enumerate() {
            if !j.is_boundary() {
                continue;
            }
            if dom.contains(j.position, gt) != Containment::Boundary {
                return Err(Error::JunctionOffBoundary { index: k, value: dom.implicit(j.position) });
            }
            let tangent = dom.tangent(dom.param_of(j.position));
            worst = worst.max(tangent.dot(self.resultant(k)).abs());
        }
        Ok(worst)
    }

    pub fn radial_residual(&self, x: Point) -> f64 {
        (0..self.junctions.len())
            .filter(|&k| !self.junctions[k].is_boundary())
            .map(|k| {
                let jk = self.junctions[k].position;
                // arms point away from J_k; the incoming tangents are their negatives
                -self.resultant(k).dot(jk - x)
            })
            .fold(0.0, |m, v: f64| m.max(v.abs()))
    }

    /// Θ¹ at `p`: half the total multiplicity of half-lines emanating from `p`.
    pub fn density_at(&self, p: Point) -> Result<f64> {
        let eps = tol::geometric().max(1e-9);
        let mut halflines = 0.0;
        let mut on_support = false;
        for s in &self.segments {
            let a = self.junctions[s.i].position;
            let b = self.junctions[s.j].position;
            if p.dist(a) <= eps || p.dist(b) <= eps {
                halflines += s.multiplicity;
                on_support = true;
            } else if dist_to_segment(p, a, b) <= eps {
                halflines += 2.0 * s.multiplicity;
                on_support = true;
            }
        }
        if !on_support {
            return Err(Error::PointNotOnSupport { x: p.x, y: p.y });
        }
        Ok(halflines / 2.0)
    }

    pub fn boundary_forces(&self, x: Point) -> Vec<BoundaryForce> {
        let eps = tol::geometric();
        (0..self.junctions.len())
            .filter(|&k| self.junctions[k].is_boundary())
            .filter_map(|k| {
                let jl = self.junctions[k].position;
                let r = jl - x;
                let distance = r.norm();
                if distance <= eps {
                    return None;
                }
                let force = -self.resultant(k);
                let radial = force.dot(r) / distance;
                let fnorm = force.norm();
                let angle = if fnorm == 0.0 { 0.0 } else { (radial / fnorm).clamp(-1.0, 1.0).acos() };
                Some(BoundaryForce { junction: k, force, radial, angle, distance })
            })
            .collect()
    }

    /// `Σ_l F_radial(l)·|J_l − x|`, which equals [`mass`](Self::mass) when the
    /// radial condition holds at `x`.
    pub fn mass_via_forces(&self, x: Point) -> Result<f64> {
        let res = self.radial_residual(x);
        if res > 1e-8 * (1.0 + self.mass()) {
            return Err(Error::RadialConditionViolated(res));
        }
        Ok(self.boundary_forces(x).iter().map(|f| f.radial * f.distance).sum())
    }

    /// Points where the density is evaluated: junctions, segment midpoints and
    /// pairwise crossings of segment interiors.
    fn probe_points(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self.junctions.iter().map(|j| j.position).collect();
        for s in &self.segments {
            pts.push((self.junctions[s.i].position + self.junctions[s.j].position) * 0.5);
        }
        for (k, s) in self.segments.iter().enumerate() {
            for t in &self.segments[k + 1..] {
                let (a, b) = (self.junctions[s.i].position, self.junctions[s.j].position);
                let (c, d) = (self.junctions[t.i].position, self.junctions[t.j].position);
                for u in crossing_params(a, b, c, d) {
                    pts.push(a + (b - a) * u);
                }
            }
        }
        let mut out: Vec<Point> = Vec::new();
        for p in pts {
            if !out.iter().any(|q| q.dist(p) <= 1e-9) {
                out.push(p);
            }
        }
        out
    }

    /// Evaluates `Θ¹ ≤ μ/2` at interior points and `Θ¹ < μ/(2√2)` at boundary
    /// points of the support.
    pub fn check_density_bounds(&self, dom: &Domain, mu: f64) -> DensityReport {
        let gt = tol::geometric().max(1e-9);
        let entries = self
            .probe_points()
            .into_iter()
            .filter_map(|p| {
                let density = self.density_at(p).ok()?;
                let location = dom.contains(p, gt);
                let (bound, strict) = match location {
                    Containment::Boundary => (mu / (2.0 * SQRT_2), true),
                    _ => (mu / 2.0, false),
                };
                let ok = if strict { density < bound } else { density <= bound + 1e-12 };
                Some(DensityEntry { point: p, location, density, bound, strict, ok })
            })
            .collect();
        let mass = self.mass();
        DensityReport {
            mu,
            mass,
            mass_within_mu: mass <= mu,
            approximate: !dom.is_round(),
            entries,
        }
    }

    /// Passes iff Θ¹ is a positive integer (within 1e−9) at every interior junction.
    pub fn integrality_filter(&self) -> Result<IntegralityReport> {
        if !self.is_integral() {
            return Err(Error::GeneralizedNetwork);
        }
        let mut witnesses = Vec::new();
        for (k, j) in self.junctions.iter().enumerate() {
            if j.is_boundary() {
                continue;
            }
            let theta = self.density_at(j.position)?;
            let r = theta.round();
            if (theta - r).abs() > 1e-9 || r < 1.0 {
                witnesses.push((k, theta));
            }
        }
        Ok(IntegralityReport { pass: witnesses.is_empty(), witnesses })
    }

    pub fn to_file(&self, domain: Option<Domain>) -> NetworkFile {
        NetworkFile {
            domain,
            junctions: self
                .junctions
                .iter()
                .map(|j| match j.location {
                    JunctionLocation::Interior => JunctionRecord {
                        x: j.position.x,
                        y: j.position.y,
                        location: LocationTag::Interior,
                        t: None,
                    },
                    JunctionLocation::Boundary { t } => JunctionRecord {
                        x: j.position.x,
                        y: j.position.y,
                        location: LocationTag::Boundary,
                        t: Some(t),
                    },
                })
                .collect(),
            segments: self
                .segments
                .iter()
                .map(|s| SegmentRecord { i: s.i, j: s.j, theta: s.multiplicity })
                .collect(),
        }
    }
}

/// Parameters `s ∈ (0, 1)` along `a→b` where the open segments `ab` and `cd`
/// cross transversally.
fn crossing_params(a: Point, b: Point, c: Point, d: Point) -> Vec<f64> {
    let r = b - a;
    let q = d - c;
    let den = r.cross(q);
    if den.abs() <= 1e-14 * r.norm() * q.norm() {
        return Vec::new();
    }
    let s = (c - a).cross(q) / den;
    let u = (c - a).cross(r) / den;
    let eps = 1e-12;
    if s > eps && s < 1.0 - eps && u > eps && u < 1.0 - eps {
        vec![s]
    } else {
        Vec::new()
    }
}

pub(crate) fn dist_to_segment(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let s = if len2 == 0.0 { 0.0 } else { ((p - a).dot(ab) / len2).clamp(0.0, 1.0) };
    p.dist(a + ab * s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocationTag {
    Interior,
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JunctionRecord {
    pub x: f64,
    pub y: f64,
    pub location: LocationTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentRecord {
    pub i: usize,
    pub j: usize,
    pub theta: f64,
}

/// On-disk network description. The domain defaults to the unit disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Domain>,
    pub junctions: Vec<JunctionRecord>,
    pub segments: Vec<SegmentRecord>,
}

impl NetworkFile {
    pub fn domain(&self) -> Domain {
        self.domain.unwrap_or_else(Domain::unit_disk)
    }

    pub fn into_network(self) -> Result<(GeodesicNetwork, Domain)> {
        let dom = self.domain();
        if let Some(Domain::Ellipse { a, b }) = self.domain {
            Domain::ellipse(a, b)?;
        }
        if let Some(Domain::Disk { radius }) = self.domain {
            Domain::disk(radius)?;
        }
        let junctions = self
            .junctions
            .iter()
            .map(|r| {
                let position = Point::new(r.x, r.y);
                let location = match r.location {
                    LocationTag::Interior => JunctionLocation::Interior,
                    LocationTag::Boundary => JunctionLocation::Boundary { t: r.t.unwrap_or_else(|| dom.param_of(position)) },
                };
                Junction { position, location }
            })
            .collect();
        let segments = self
            .segments
            .iter()
            .map(|s| NetworkSegment { i: s.i, j: s.j, multiplicity: s.theta })
            .collect();
        Ok((GeodesicNetwork::new(junctions, segments)?, dom))
    }
}
