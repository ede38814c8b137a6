//! Planar substrate: points, unit directions, origin-centred disks and
//! axis-aligned ellipses, and boundary chords.
//!
//! Boundary points are addressed by the angle parameter `t`, with
//! `(a cos t, b sin t)` on an ellipse of semi-axes `a` (x) and `b` (y).
//! Chords keep the parameters of both endpoints so reflection maps never have
//! to invert the parametrization.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the planar cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Rotation by `angle` about the origin.
    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Unit vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    ux: f64,
    uy: f64,
}

impl Direction {
    /// Normalizes `(x, y)`; `None` for the zero or a non-finite vector.
    pub fn new(x: f64, y: f64) -> Option<Self> {
        let n = x.hypot(y);
        (n > 0.0 && n.is_finite()).then(|| Self { ux: x / n, uy: y / n })
    }

    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { ux: c, uy: s }
    }

    /// Unit vector from `from` towards `to`.
    pub fn between(from: Point, to: Point) -> Option<Self> {
        let d = to - from;
        Self::new(d.x, d.y)
    }

    pub fn ux(self) -> f64 {
        self.ux
    }

    pub fn uy(self) -> f64 {
        self.uy
    }

    pub fn as_point(self) -> Point {
        Point::new(self.ux, self.uy)
    }

    pub fn dot(self, v: Point) -> f64 {
        self.ux * v.x + self.uy * v.y
    }

    pub fn reversed(self) -> Self {
        Self { ux: -self.ux, uy: -self.uy }
    }

    pub fn angle(self) -> f64 {
        self.uy.atan2(self.ux)
    }
}

/// Where a point sits relative to a closed region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Containment {
    Interior,
    Boundary,
    Exterior,
}

/// Origin-centred, axis-aligned strictly convex domain.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Domain {
    Disk { radius: f64 },
    Ellipse { a: f64, b: f64 },
}

impl PartialEq for Domain {
    /// Geometric equality: `disk(R)` equals `ellipse(R, R)`.
    fn eq(&self, other: &Self) -> bool {
        self.semi_axes() == other.semi_axes()
    }
}

impl Domain {
    pub fn disk(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidDomain(format!("disk radius must be positive, got {radius}")));
        }
        Ok(Domain::Disk { radius })
    }

    pub fn unit_disk() -> Self {
        Domain::Disk { radius: 1.0 }
    }

    /// Ellipse `x²/a² + y²/b² = 1` with `a ≥ b > 0`.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > 0.0 && a >= b) {
            return Err(Error::InvalidDomain(format!(
                "ellipse needs a >= b > 0 (semi-axis a along x), got a={a}, b={b}"
            )));
        }
        Ok(Domain::Ellipse { a, b })
    }

    /// Semi-axes `(a, b)` along x and y.
    pub fn semi_axes(&self) -> (f64, f64) {
        match *self {
            Domain::Disk { radius } => (radius, radius),
            Domain::Ellipse { a, b } => (a, b),
        }
    }

    pub fn is_round(&self) -> bool {
        let (a, b) = self.semi_axes();
        a == b
    }

    /// Foci `(±√(a² − b²), 0)`; the disk has both at the centre.
    pub fn foci(&self) -> (Point, Point) {
        let (a, b) = self.semi_axes();
        let f = (a * a - b * b).max(0.0).sqrt();
        (Point::new(-f, 0.0), Point::new(f, 0.0))
    }

    /// Implicit function `x²/a² + y²/b² − 1`, negative inside.
    pub fn implicit(&self, p: Point) -> f64 {
        let (a, b) = self.semi_axes();
        (p.x / a).powi(2) + (p.y / b).powi(2) - 1.0
    }

    pub fn contains(&self, p: Point, tol: f64) -> Containment {
        let v = self.implicit(p);
        if v.abs() <= tol {
            Containment::Boundary
        } else if v < 0.0 {
            Containment::Interior
        } else {
            Containment::Exterior
        }
    }

    pub fn boundary_point(&self, t: f64) -> Point {
        let (a, b) = self.semi_axes();
        let (s, c) = t.sin_cos();
        Point::new(a * c, b * s)
    }

    /// Unit tangent in the direction of increasing `t`.
    pub fn tangent(&self, t: f64) -> Direction {
        let (a, b) = self.semi_axes();
        let (s, c) = t.sin_cos();
        Direction::new(-a * s, b * c).expect("ellipse tangent is never zero")
    }

    pub fn outward_normal(&self, t: f64) -> Direction {
        let (a, b) = self.semi_axes();
        let (s, c) = t.sin_cos();
        Direction::new(c / a, s / b).expect("ellipse normal is never zero")
    }

    /// Boundary parameter of a point, in `[0, 2π)`. Exact for boundary points.
    pub fn param_of(&self, p: Point) -> f64 {
        let (a, b) = self.semi_axes();
        normalize_angle((p.y / b).atan2(p.x / a))
    }

    /// Chord leaving `boundary_point(t0)` in direction `dir`.
    pub fn chord_from(&self, t0: f64, dir: Direction) -> Result<Chord> {
        let inward = self.outward_normal(t0).reversed().dot(dir.as_point());
        if inward <= tol::ENTRY_ANGLE {
            return Err(Error::TangentialDirection(inward));
        }
        let (a, b) = self.semi_axes();
        let p0 = self.boundary_point(t0);
        let (dx, dy) = (dir.ux(), dir.uy());
        // p0 lies on the boundary, so the quadratic in s has the root s = 0.
        let qa = (dx / a).powi(2) + (dy / b).powi(2);
        let qb = 2.0 * (p0.x * dx / (a * a) + p0.y * dy / (b * b));
        let s = -qb / qa;
        let p1 = p0 + dir.as_point() * s;
        let t1 = self.param_of(p1);
        Ok(Chord { p0, p1, t0: normalize_angle(t0), t1 })
    }

    /// Chord joining two boundary parameters.
    pub fn chord_between(&self, t0: f64, t1: f64) -> Result<Chord> {
        let p0 = self.boundary_point(t0);
        let p1 = self.boundary_point(t1);
        if p0.dist(p1) <= tol::geometric() {
            return Err(Error::LineThroughCenterDegenerate("chord endpoints coincide".into()));
        }
        Ok(Chord { p0, p1, t0: normalize_angle(t0), t1: normalize_angle(t1) })
    }

    /// Smallest and largest diameter `(d, D) = (2b, 2a)`.
    pub fn diameters(&self) -> (f64, f64) {
        let (a, b) = self.semi_axes();
        (2.0 * b.min(a), 2.0 * a.max(b))
    }

    /// The domain as a clipping shape.
    pub fn as_shape(&self) -> AxisEllipse {
        let (a, b) = self.semi_axes();
        AxisEllipse { center: Point::ORIGIN, rx: a, ry: b }
    }

    pub fn label(&self) -> String {
        match *self {
            Domain::Disk { radius } if radius == 1.0 => "disk".into(),
            Domain::Disk { radius } => format!("disk({radius})"),
            Domain::Ellipse { a, b } => format!("ellipse({a}, {b})"),
        }
    }
}

/// Chord of a domain with both endpoints on the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Chord {
    pub p0: Point,
    pub p1: Point,
    pub t0: f64,
    pub t1: f64,
}

impl Chord {
    pub fn length(&self) -> f64 {
        self.p0.dist(self.p1)
    }

    pub fn direction(&self) -> Direction {
        Direction::between(self.p0, self.p1).expect("chord endpoints are distinct")
    }

    pub fn reversed(&self) -> Chord {
        Chord { p0: self.p1, p1: self.p0, t0: self.t1, t1: self.t0 }
    }

    pub fn point_at(&self, s: f64) -> Point {
        self.p0 + (self.p1 - self.p0) * s
    }

    /// Unit normal `n` and offset `c ≥ 0` with the chord's line `n·X = c`.
    pub fn line(&self) -> (Point, f64) {
        let d = self.direction();
        let mut n = Point::new(-d.uy(), d.ux());
        let mut c = n.dot(self.p0);
        if c < 0.0 {
            n = -n;
            c = -c;
        }
        (n, c)
    }
}

/// Axis-aligned ellipse with arbitrary centre; used as a clipping region and
/// for subdomains. A circle has `rx == ry`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisEllipse {
    pub center: Point,
    pub rx: f64,
    pub ry: f64,
}

impl AxisEllipse {
    pub fn circle(center: Point, r: f64) -> Self {
        Self { center, rx: r, ry: r }
    }

    pub fn implicit(&self, p: Point) -> f64 {
        ((p.x - self.center.x) / self.rx).powi(2) + ((p.y - self.center.y) / self.ry).powi(2) - 1.0
    }

    /// Strict interior test.
    pub fn strictly_contains(&self, p: Point) -> bool {
        self.implicit(p) < 0.0
    }

    pub fn boundary_point(&self, t: f64) -> Point {
        let (s, c) = t.sin_cos();
        Point::new(self.center.x + self.rx * c, self.center.y + self.ry * s)
    }

    /// Support extent in direction `u` (half-width of the projection).
    pub fn support(&self, u: Direction) -> f64 {
        (self.rx * u.ux()).hypot(self.ry * u.uy())
    }

    pub fn bounding_radius(&self) -> f64 {
        self.rx.max(self.ry)
    }
}

/// Maps an angle into `[0, 2π)`.
pub fn normalize_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Forward angular advance from `t0` to `t1`, in `[0, 2π)`.
pub fn forward_advance(t0: f64, t1: f64) -> f64 {
    normalize_angle(t1 - t0)
}

/// Shortest signed angular difference, in `(−π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn close(a: f64, b: f64, eps: f64) -> bool {
        (a - b).abs() <= eps
    }

    #[test]
    fn contains_examples() {
        let d = Domain::unit_disk();
        assert_eq!(d.contains(Point::ORIGIN, 1e-10), Containment::Interior);
        assert_eq!(d.contains(Point::new(1.0, 0.0), 1e-10), Containment::Boundary);
        let e = Domain::ellipse(1.05, 0.95).unwrap();
        // 0.96²/0.95² > 1
        assert_eq!(e.contains(Point::new(0.0, 0.96), 1e-10), Containment::Exterior);
    }

    #[test]
    fn boundary_point_examples() {
        let e = Domain::ellipse(1.05, 0.95).unwrap();
        assert_eq!(e.boundary_point(0.0), Point::new(1.05, 0.0));
        let p = e.boundary_point(FRAC_PI_2);
        assert!(close(p.x, 0.0, 1e-15) && p.y == 0.95);
        let p = Domain::unit_disk().boundary_point(PI);
        assert!(close(p.x, -1.0, 1e-15) && close(p.y, 0.0, 1e-15));
    }

    #[test]
    fn outward_normal_examples() {
        let n = Domain::unit_disk().outward_normal(0.0);
        assert_eq!((n.ux(), n.uy()), (1.0, 0.0));
        let e = Domain::ellipse(1.05, 0.95).unwrap();
        let n = e.outward_normal(0.0);
        assert_eq!((n.ux(), n.uy()), (1.0, 0.0));
        let n = e.outward_normal(FRAC_PI_4);
        let (gx, gy) = (FRAC_PI_4.cos() / 1.05, FRAC_PI_4.sin() / 0.95);
        let g = gx.hypot(gy);
        assert!(close(n.ux(), gx / g, 1e-15) && close(n.uy(), gy / g, 1e-15));
    }

    #[test]
    fn chord_from_examples() {
        let d = Domain::unit_disk();
        let c = d.chord_from(0.0, Direction::new(-1.0, 0.0).unwrap()).unwrap();
        assert!(close(c.p1.x, -1.0, 1e-15) && close(c.length(), 2.0, 1e-15));

        let target = d.boundary_point(2.0 * PI / 3.0);
        let c = d.chord_from(0.0, Direction::between(d.boundary_point(0.0), target).unwrap()).unwrap();
        // 2 sin(Δt/2) with Δt = 2π/3
        assert!(close(c.length(), 3f64.sqrt(), 1e-14));
        assert!(close(c.t1, 2.0 * PI / 3.0, 1e-14));

        let e = Domain::ellipse(1.05, 0.95).unwrap();
        let c = e.chord_from(FRAC_PI_2, Direction::new(0.0, -1.0).unwrap()).unwrap();
        assert!(close(c.length(), 1.9, 1e-14));
    }

    #[test]
    fn chord_from_rejects_tangential_and_outward() {
        let d = Domain::unit_disk();
        let e = d.chord_from(0.0, Direction::new(0.0, 1.0).unwrap()).unwrap_err();
        assert!(matches!(e, Error::TangentialDirection(_)));
        assert!(d.chord_from(0.0, Direction::new(1.0, 0.2).unwrap()).is_err());
    }

    #[test]
    fn diameters_examples() {
        assert_eq!(Domain::unit_disk().diameters(), (2.0, 2.0));
        let (d, big) = Domain::ellipse(1.05, 0.95).unwrap().diameters();
        assert!(close(d, 1.9, 1e-15) && close(big, 2.1, 1e-15));
        assert_eq!(Domain::ellipse(1.0, 1.0).unwrap().diameters(), (2.0, 2.0));
        assert_eq!(Domain::ellipse(1.0, 1.0).unwrap(), Domain::unit_disk());
    }

    #[test]
    fn invalid_domains_rejected() {
        assert!(Domain::disk(0.0).is_err());
        assert!(Domain::ellipse(0.9, 1.0).is_err());
        assert!(Domain::ellipse(1.0, -1.0).is_err());
    }

    #[test]
    fn chord_line_form() {
        let d = Domain::unit_disk();
        let c = d.chord_between(FRAC_PI_4, -FRAC_PI_4).unwrap();
        let (n, off) = c.line();
        assert!(close(n.x, 1.0, 1e-15) && close(off, FRAC_PI_4.cos(), 1e-15));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn domains() -> impl Strategy<Value = Domain> {
            prop_oneof![
                (0.2f64..3.0).prop_map(|r| Domain::disk(r).unwrap()),
                (0.3f64..2.0, 1.0f64..1.6).prop_map(|(b, k)| Domain::ellipse(b * k, b).unwrap()),
            ]
        }

        proptest! {
            #[test]
            fn boundary_points_classify_as_boundary(dom in domains(), t in -10.0f64..10.0) {
                prop_assert_eq!(dom.contains(dom.boundary_point(t), 1e-10), Containment::Boundary);
            }

            #[test]
            fn normal_is_orthogonal_to_tangent(dom in domains(), t in 0.0f64..TAU) {
                let n = dom.outward_normal(t);
                let tg = dom.tangent(t);
                prop_assert!(n.dot(tg.as_point()).abs() <= 1e-10);
                prop_assert!((n.ux().hypot(n.uy()) - 1.0).abs() <= 1e-12);
            }

            #[test]
            fn disk_diameters_are_involutive(t in 0.0f64..TAU) {
                let d = Domain::unit_disk();
                let c = d.chord_from(t, d.outward_normal(t).reversed()).unwrap();
                let back = d.chord_from(c.t1, c.direction().reversed()).unwrap();
                prop_assert!(back.p1.dist(c.p0) <= 1e-10);
                prop_assert!(back.p0.dist(c.p1) <= 1e-10);
            }

            #[test]
            fn chord_interiors_are_interior(dom in domains(), t in 0.0f64..TAU, ang in 0.05f64..(PI - 0.05), s in 0.01f64..0.99) {
                // rotate the inward normal by up to ±(π/2 − 0.05)
                let inward = dom.outward_normal(t).reversed().angle();
                let dir = Direction::from_angle(inward + ang - FRAC_PI_2);
                let c = dom.chord_from(t, dir).unwrap();
                prop_assert_eq!(dom.contains(c.p1, 1e-10), Containment::Boundary);
                prop_assert_eq!(dom.contains(c.point_at(s), 1e-10), Containment::Interior);
            }
        }
    }
}
