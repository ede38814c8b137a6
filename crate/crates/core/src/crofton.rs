//! Cauchy–Crofton length estimates: `length = ½ ∫₀^{2π} ∫₀^∞ n(ρ, θ) dρ dθ`,
//! where `n` counts crossings of the line `x cos θ + y sin θ = ρ` strictly
//! inside a measurement region.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conic::{self, ConicCoeffs};
use crate::domain::{normalize_angle, AxisEllipse, Domain, Point};
use crate::error::{Error, Result};
use crate::network::GeodesicNetwork;
use crate::numeric::QuadConfig;
use crate::sweepout;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineParam {
    pub rho: f64,
    pub theta: f64,
}

impl LineParam {
    /// Normalizes to `ρ ≥ 0`, `θ ∈ [0, 2π)`.
    pub fn new(rho: f64, theta: f64) -> Self {
        if rho < 0.0 {
            Self { rho: -rho, theta: normalize_angle(theta + PI) }
        } else {
            Self { rho, theta: normalize_angle(theta) }
        }
    }

    pub fn normal(&self) -> Point {
        Point::new(self.theta.cos(), self.theta.sin())
    }

    pub fn foot(&self) -> Point {
        self.normal() * self.rho
    }

    pub fn direction(&self) -> Point {
        Point::new(-self.theta.sin(), self.theta.cos())
    }
}

/// Weighted crossings of one line with a curve.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Crossings {
    pub points: Vec<(Point, f64)>,
    /// The line runs inside the curve; such lines are skipped.
    pub coincident: bool,
}

pub trait LineOracle: Sync {
    fn hits(&self, line: LineParam) -> Crossings;
}

/// Zero set of a conic; a double line counts once, tangencies not at all.
pub struct ConicOracle(ConicCoeffs);

impl ConicOracle {
    pub fn new(q: ConicCoeffs) -> Self {
        Self(conic::reduced(&q))
    }
}

impl LineOracle for ConicOracle {
    fn hits(&self, line: LineParam) -> Crossings {
        let h = conic::line_hits(&self.0, line.rho, line.theta);
        Crossings { points: h.crossings.into_iter().map(|p| (p, 1.0)).collect(), coincident: h.coincident }
    }
}

pub struct CircleOracle {
    pub center: Point,
    pub radius: f64,
}

impl LineOracle for CircleOracle {
    fn hits(&self, line: LineParam) -> Crossings {
        let d = line.rho - line.normal().dot(self.center);
        let mut out = Crossings::default();
        if d.abs() < self.radius {
            let h = (self.radius * self.radius - d * d).sqrt();
            let foot = self.center + line.normal() * d;
            out.points.push((foot + line.direction() * h, 1.0));
            out.points.push((foot - line.direction() * h, 1.0));
        }
        out
    }
}

/// Weighted straight segments, e.g. the edges of a network.
pub struct SegmentsOracle(pub Vec<(Point, Point, f64)>);

impl SegmentsOracle {
    pub fn from_network(net: &GeodesicNetwork) -> Self {
        let js = net.junctions();
        Self(net.segments().iter().map(|s| (js[s.i].position, js[s.j].position, s.multiplicity)).collect())
    }
}

impl LineOracle for SegmentsOracle {
    fn hits(&self, line: LineParam) -> Crossings {
        let n = line.normal();
        let mut out = Crossings::default();
        for &(a, b, w) in &self.0 {
            let (fa, fb) = (n.dot(a) - line.rho, n.dot(b) - line.rho);
            if fa == 0.0 && fb == 0.0 {
                out.coincident = true;
            } else if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
                let s = fa / (fa - fb);
                out.points.push((a + (b - a) * s, w));
            }
        }
        out
    }
}

/// Intersection of axis-aligned ellipses; membership is strict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub shapes: Vec<AxisEllipse>,
}

impl Region {
    pub fn domain(dom: &Domain) -> Self {
        Self { shapes: vec![dom.as_shape()] }
    }

    pub fn ball(center: Point, radius: f64) -> Self {
        Self { shapes: vec![AxisEllipse::circle(center, radius)] }
    }

    pub fn intersect(mut self, other: &Region) -> Self {
        self.shapes.extend_from_slice(&other.shapes);
        self
    }

    pub fn contains(&self, p: Point) -> bool {
        self.shapes.iter().all(|s| s.strictly_contains(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub n_theta: usize,
    pub n_rho: usize,
    /// Radius of the ρ-range around the first region shape's centre;
    /// defaults to that shape's bounding radius.
    pub rho_max: Option<f64>,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self { n_theta: 256, n_rho: 512, rho_max: None }
    }
}

impl QuadratureGrid {
    pub fn new(n_theta: usize, n_rho: usize) -> Result<Self> {
        let g = Self { n_theta, n_rho, rho_max: None };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_theta < 8 || self.n_rho < 8 {
            return Err(Error::DomainError(format!(
                "quadrature grid {}x{} is below the 8x8 minimum",
                self.n_theta, self.n_rho
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CroftonEstimate {
    pub length: f64,
    /// Difference to the estimate on the grid with half the points per axis.
    pub error_estimate: f64,
    pub coincident_fraction: f64,
}

fn midpoint_sum(
    oracle: &dyn LineOracle,
    region: &Region,
    n_theta: usize,
    n_rho: usize,
    center: Point,
    rho_max: f64,
) -> (f64, usize) {
    let dth = TAU / n_theta as f64;
    let drho = rho_max / n_rho as f64;
    let stripes: Vec<(f64, usize)> = (0..n_theta)
        .into_par_iter()
        .map(|i| {
            let theta = (i as f64 + 0.5) * dth;
            let u = Point::new(theta.cos(), theta.sin());
            let shift = center.dot(u);
            let mut count = 0.0;
            let mut coincident = 0;
            for j in 0..n_rho {
                let rho = (j as f64 + 0.5) * drho;
                let h = oracle.hits(LineParam::new(rho + shift, theta));
                if h.coincident {
                    coincident += 1;
                    continue;
                }
                count += h.points.iter().filter(|(p, _)| region.contains(*p)).map(|(_, w)| w).sum::<f64>();
            }
            (count, coincident)
        })
        .collect();
    let total: f64 = stripes.iter().map(|s| s.0).sum();
    let coincident = stripes.iter().map(|s| s.1).sum();
    (0.5 * total * drho * dth, coincident)
}

pub fn crofton_length(oracle: &dyn LineOracle, region: &Region, grid: QuadratureGrid) -> Result<CroftonEstimate> {
    grid.validate()?;
    let first = region
        .shapes
        .first()
        .ok_or_else(|| Error::DomainError("measurement region has no shapes".into()))?;
    let center = first.center;
    let rho_max = grid.rho_max.unwrap_or_else(|| first.bounding_radius());
    let (full, coincident) = midpoint_sum(oracle, region, grid.n_theta, grid.n_rho, center, rho_max);
    let fraction = coincident as f64 / (grid.n_theta * grid.n_rho) as f64;
    if fraction > 1e-3 {
        return Err(Error::OracleDegenerate { fraction });
    }
    let (half, _) = midpoint_sum(oracle, region, grid.n_theta / 2, grid.n_rho / 2, center, rho_max);
    Ok(CroftonEstimate { length: full, error_estimate: (full - half).abs(), coincident_fraction: fraction })
}

/// Mass bound for a curve of degree ≤ `degree_cap` inside the ball of radius
/// `s` about a point at distance `p0` from the centre of the unit disk:
/// `(cap/2)·4s(π/2 + asin(s/p0))`, or `(cap/2)·4sπ` when `p0 = 0`.
pub fn local_mass_bound(p0: f64, s: f64, degree_cap: u32) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) || !(p0 >= 0.0 && p0.is_finite()) {
        return Err(Error::DomainError(format!("need s > 0 and p0 >= 0, got s = {s}, p0 = {p0}")));
    }
    let factor = degree_cap as f64 / 2.0;
    if p0 == 0.0 {
        return Ok(factor * 4.0 * s * PI);
    }
    if s >= p0 {
        return Err(Error::DomainError(format!("ball radius {s} must be below its distance {p0} from the centre")));
    }
    Ok(factor * 4.0 * s * (FRAC_PI_2 + (s / p0).asin()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub radius: f64,
    /// Largest measured mass over all classes and centres.
    pub sup: f64,
    /// Bound at the centre attaining `sup`.
    pub bound: f64,
    pub sup_center: Point,
    pub checked: usize,
    /// Measurements above their own bound plus tolerance.
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanTable {
    pub p: usize,
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,sup,bound\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.radius, r.sup, r.bound));
        }
        out
    }

    pub fn sup_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].sup < w[0].sup)
    }
}

/// Centres of the scan: the origin and six directions at distances 0.3, 0.6, 0.9.
pub fn scan_centers() -> Vec<Point> {
    let mut out = vec![Point::ORIGIN];
    for p0 in [0.3, 0.6, 0.9] {
        for k in 0..6 {
            let phi = TAU * k as f64 / 6.0 + 0.1;
            out.push(Point::new(p0 * phi.cos(), p0 * phi.sin()));
        }
    }
    out
}

/// Measures the mass of sampled sweepout members inside small balls of the
/// unit disk and compares with [`local_mass_bound`].
pub fn no_concentration_scan(p: usize, samples: usize, radii: &[f64], seed: u32) -> Result<ScanTable> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) || radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::DomainError("radii must be positive and strictly decreasing".into()));
    }
    let classes = sweepout::sample_classes(p, samples, seed)?;
    let conics: Vec<ConicCoeffs> = classes.iter().filter_map(|c| c.conic()).collect();
    let disk = AxisEllipse::circle(Point::ORIGIN, 1.0);
    let quad = QuadConfig::default();
    let tol = 1e-8;
    let mut rows = Vec::with_capacity(radii.len());
    for &s in radii {
        let mut row = ScanRow { radius: s, sup: 0.0, bound: f64::NAN, sup_center: Point::ORIGIN, checked: 0, violations: 0 };
        for c in scan_centers() {
            let p0 = c.norm();
            if p0 > 0.0 && s >= p0 {
                continue;
            }
            let bound = local_mass_bound(p0, s, 2)?;
            let ball = AxisEllipse::circle(c, s);
            let masses: Vec<f64> = conics
                .par_iter()
                .map(|q| conic::clipped_length(q, &[disk, ball], quad))
                .collect::<Result<Vec<_>>>()?;
            for m in masses {
                row.checked += 1;
                if m > bound + tol {
                    row.violations += 1;
                }
                if m > row.sup {
                    row.sup = m;
                    row.bound = bound;
                    row.sup_center = c;
                }
            }
        }
        if row.bound.is_nan() {
            row.bound = local_mass_bound(0.0, s, 2)?;
        }
        rows.push(row);
    }
    Ok(ScanTable { p, rows })
}
