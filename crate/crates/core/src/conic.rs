//! Quadratic curves `c0 + c1·x + c2·y + c3·x² + c4·xy = 0`.
//!
//! Without a `y²` term the curve is linear in `y`: writing
//! `Q = α(x) + β(x)·y` with `α = c3x² + c1x + c0` and `β = c4x + c2`, the zero
//! set is the graph `y = −α/β` plus vertical lines where `β` and `α` vanish
//! together. Clipping the graph against an axis-aligned ellipse reduces to the
//! sign of a quartic in `x`.

use serde::{Deserialize, Serialize};

use crate::domain::{AxisEllipse, Domain, Point};
use crate::error::{Error, Result};
use crate::numeric::{self, poly_eval, QuadConfig};

/// Relative threshold below which a normalized coefficient combination is
/// treated as zero.
const ZERO: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 5]", into = "[f64; 5]")]
pub struct ConicCoeffs([f64; 5]);

impl TryFrom<[f64; 5]> for ConicCoeffs {
    type Error = Error;
    fn try_from(c: [f64; 5]) -> Result<Self> {
        Self::new(c)
    }
}

impl From<ConicCoeffs> for [f64; 5] {
    fn from(c: ConicCoeffs) -> Self {
        c.0
    }
}

impl ConicCoeffs {
    pub fn new(c: [f64; 5]) -> Result<Self> {
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::DomainError(format!("non-finite conic coefficients {c:?}")));
        }
        if c.iter().all(|&v| v == 0.0) {
            return Err(Error::DomainError("conic coefficients are all zero".into()));
        }
        Ok(Self(c))
    }

    pub fn coeffs(&self) -> [f64; 5] {
        self.0
    }

    pub fn eval(&self, p: Point) -> f64 {
        let [c0, c1, c2, c3, c4] = self.0;
        c0 + c1 * p.x + c2 * p.y + c3 * p.x * p.x + c4 * p.x * p.y
    }

    /// Same zero set, unit Euclidean norm, first nonzero coefficient positive.
    pub fn normalized(&self) -> Self {
        let n = self.0.iter().map(|c| c * c).sum::<f64>().sqrt();
        let lead = self.0.iter().copied().find(|c| *c != 0.0).unwrap_or(1.0);
        let s = lead.signum() / n;
        Self(self.0.map(|c| c * s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConicClass {
    Empty,
    Point,
    Line,
    ParallelTwoLines,
    CrossingTwoLines,
    DoubleLine,
    Parabola,
    Hyperbola,
}

/// Connected piece of a zero set before clipping.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Piece {
    Vertical(f64),
    /// `y = −α(x)/β(x)`, `α` ascending coefficients, `β = b0 + b1·x`.
    Graph { alpha: [f64; 3], beta: [f64; 2] },
}

fn decompose(q: &ConicCoeffs) -> (ConicClass, Vec<Piece>) {
    let [c0, c1, c2, c3, c4] = q.normalized().0;
    let alpha = [c0, c1, c3];
    if c4.abs() <= ZERO {
        if c2.abs() > ZERO {
            let class = if c3.abs() > ZERO { ConicClass::Parabola } else { ConicClass::Line };
            return (class, vec![Piece::Graph { alpha, beta: [c2, 0.0] }]);
        }
        if c3.abs() <= ZERO {
            if c1.abs() <= ZERO {
                return (ConicClass::Empty, Vec::new());
            }
            return (ConicClass::Line, vec![Piece::Vertical(-c0 / c1)]);
        }
        let disc = c1 * c1 - 4.0 * c3 * c0;
        if disc.abs() <= ZERO {
            return (ConicClass::DoubleLine, vec![Piece::Vertical(-c1 / (2.0 * c3))]);
        }
        if disc < 0.0 {
            return (ConicClass::Empty, Vec::new());
        }
        let roots = numeric::quadratic_roots(c3, c1, c0);
        return (ConicClass::ParallelTwoLines, roots.into_iter().map(Piece::Vertical).collect());
    }
    let xs = -c2 / c4;
    let at_pole = poly_eval(&alpha, xs);
    if at_pole.abs() <= ZERO {
        // α = (x − xs)(c3·x + c1 + c3·xs) + α(xs)
        let line = Piece::Graph { alpha: [c1 + c3 * xs, c3, 0.0], beta: [c4, 0.0] };
        return (ConicClass::CrossingTwoLines, vec![Piece::Vertical(xs), line]);
    }
    (ConicClass::Hyperbola, vec![Piece::Graph { alpha, beta: [c2, c4] }])
}

pub fn classify(q: &ConicCoeffs) -> ConicClass {
    decompose(q).0
}

/// For a double line, the conic of the underlying single line; otherwise `q`.
pub fn reduced(q: &ConicCoeffs) -> ConicCoeffs {
    match decompose(q) {
        (ConicClass::DoubleLine, pieces) => match pieces[0] {
            Piece::Vertical(x0) => ConicCoeffs([-x0, 1.0, 0.0, 0.0, 0.0]),
            Piece::Graph { .. } => *q,
        },
        _ => *q,
    }
}

/// Clipped arc of a zero set, ready for length evaluation or sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Arc {
    Vertical { x: f64, y0: f64, y1: f64 },
    Graph { x0: f64, x1: f64, alpha: [f64; 3], beta: [f64; 2] },
}

impl Arc {
    pub fn length(&self, quad: QuadConfig) -> Result<f64> {
        match *self {
            Arc::Vertical { y0, y1, .. } => Ok((y1 - y0).abs()),
            Arc::Graph { x0, x1, alpha, beta } => {
                if alpha[2] == 0.0 && beta[1] == 0.0 {
                    let slope = alpha[1] / beta[0];
                    return Ok((x1 - x0) * (1.0 + slope * slope).sqrt());
                }
                graph_length(alpha, beta, x0, x1, quad)
            }
        }
    }

    pub fn point_at(&self, s: f64) -> Point {
        match *self {
            Arc::Vertical { x, y0, y1 } => Point::new(x, y0 + (y1 - y0) * s),
            Arc::Graph { x0, x1, alpha, beta } => {
                let x = x0 + (x1 - x0) * s;
                Point::new(x, graph_y(alpha, beta, x))
            }
        }
    }

    /// `n + 1` points along the arc.
    pub fn sample(&self, n: usize) -> Vec<Point> {
        let n = n.max(1);
        (0..=n).map(|i| self.point_at(i as f64 / n as f64)).collect()
    }
}

/// Arc length of `y = −α/β` over `[x0, x1]`. The interval is split where
/// `|y′| = 1`; flat parts are integrated in `x`, steep parts in `y` through
/// the inverse branch, so both integrands stay within `[1, √2]`.
fn graph_length(alpha: [f64; 3], beta: [f64; 2], x0: f64, x1: f64, quad: QuadConfig) -> Result<f64> {
    let [a0, a1, a2] = alpha;
    let [b0, b1] = beta;
    // y′ = −N/β², N = α′β − αβ′
    let n = [a1 * b0 - a0 * b1, 2.0 * a2 * b0, a2 * b1];
    let b2 = [b0 * b0, 2.0 * b0 * b1, b1 * b1];
    let mut cuts = vec![x0, x1];
    for sign in [1.0, -1.0] {
        let p = [n[0] + sign * b2[0], n[1] + sign * b2[1], n[2] + sign * b2[2]];
        cuts.extend(numeric::real_roots(&p).into_iter().filter(|r| *r > x0 && *r < x1));
    }
    cuts.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (xa, xb) = (w[0], w[1]);
        if xb <= xa {
            continue;
        }
        let mid = 0.5 * (xa + xb);
        if graph_slope(alpha, beta, mid).abs() <= 1.0 {
            total += numeric::integrate(|x| (1.0 + graph_slope(alpha, beta, x).powi(2)).sqrt(), xa, xb, quad)?;
        } else {
            let (ya, yb) = (graph_y(alpha, beta, xa), graph_y(alpha, beta, xb));
            let x_of = |y: f64| -> f64 {
                // a2·x² + (a1 + b1·y)·x + (a0 + b0·y) = 0, branch inside [xa, xb]
                let roots = numeric::quadratic_roots(a2, a1 + b1 * y, a0 + b0 * y);
                let dist = |x: f64| (xa - x).max(x - xb).max(0.0);
                roots.into_iter().min_by(|u, v| dist(*u).total_cmp(&dist(*v))).unwrap_or(mid)
            };
            let seg = numeric::integrate(
                |y| {
                    let m = graph_slope(alpha, beta, x_of(y));
                    (1.0 + 1.0 / (m * m)).sqrt()
                },
                ya.min(yb),
                ya.max(yb),
                quad,
            )?;
            total += seg;
        }
    }
    Ok(total)
}

fn graph_y(alpha: [f64; 3], beta: [f64; 2], x: f64) -> f64 {
    -poly_eval(&alpha, x) / poly_eval(&beta, x)
}

fn graph_slope(alpha: [f64; 3], beta: [f64; 2], x: f64) -> f64 {
    let a = poly_eval(&alpha, x);
    let da = alpha[1] + 2.0 * alpha[2] * x;
    let b = poly_eval(&beta, x);
    -(da * b - a * beta[1]) / (b * b)
}

/// Parameters `t` where `{q = 0}` meets the boundary `center + (rx cos t, ry sin t)`.
fn boundary_crossings(c: [f64; 5], shape: &AxisEllipse) -> Vec<f64> {
    let [c0, c1, c2, c3, c4] = c;
    let (cx, cy, rx, ry) = (shape.center.x, shape.center.y, shape.rx, shape.ry);
    numeric::trig2_roots([
        c0 + c1 * cx + c2 * cy + c3 * (cx * cx + 0.5 * rx * rx) + c4 * cx * cy,
        c1 * rx + 2.0 * c3 * cx * rx + c4 * cy * rx,
        c2 * ry + c4 * cx * ry,
        0.5 * c3 * rx * rx,
        0.5 * c4 * rx * ry,
    ])
}

/// Newton steps on `shape.implicit(x, y(x))`; the angle-based estimate loses
/// relative accuracy when the crossing sits close to a pole of the graph.
fn polish_crossing(x: f64, alpha: [f64; 3], beta: [f64; 2], shape: &AxisEllipse) -> f64 {
    let h = |x: f64| shape.implicit(Point::new(x, graph_y(alpha, beta, x)));
    let mut x = x;
    let mut hx = h(x);
    for _ in 0..8 {
        let y = graph_y(alpha, beta, x);
        let d = 2.0 * (x - shape.center.x) / (shape.rx * shape.rx)
            + 2.0 * (y - shape.center.y) / (shape.ry * shape.ry) * graph_slope(alpha, beta, x);
        let step = hx / d;
        if !step.is_finite() || step.abs() > 1e-3 * (1.0 + x.abs()) {
            break;
        }
        let next = x - step;
        let hn = h(next);
        if !(hn.abs() < hx.abs()) {
            break;
        }
        x = next;
        hx = hn;
    }
    x
}

fn clip_piece(c: [f64; 5], piece: Piece, shapes: &[AxisEllipse], out: &mut Vec<Arc>) {
    match piece {
        Piece::Vertical(x) => {
            let (mut y0, mut y1) = (f64::NEG_INFINITY, f64::INFINITY);
            for s in shapes {
                let u = (x - s.center.x) / s.rx;
                if u.abs() >= 1.0 {
                    return;
                }
                let h = s.ry * (1.0 - u * u).sqrt();
                y0 = y0.max(s.center.y - h);
                y1 = y1.min(s.center.y + h);
            }
            if y1 > y0 {
                out.push(Arc::Vertical { x, y0, y1 });
            }
        }
        Piece::Graph { alpha, beta } => {
            let lo = shapes.iter().map(|s| s.center.x - s.rx).fold(f64::NEG_INFINITY, f64::max);
            let hi = shapes.iter().map(|s| s.center.x + s.rx).fold(f64::INFINITY, f64::min);
            if hi <= lo {
                return;
            }
            let mut cuts = vec![lo, hi];
            for s in shapes {
                for t in boundary_crossings(c, s) {
                    let x = polish_crossing(s.center.x + s.rx * t.cos(), alpha, beta, s);
                    if x > lo && x < hi {
                        cuts.push(x);
                    }
                }
            }
            if beta[1] != 0.0 {
                let pole = -beta[0] / beta[1];
                if pole > lo && pole < hi {
                    cuts.push(pole);
                }
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            for w in cuts.windows(2) {
                let (x0, x1) = (w[0], w[1]);
                if x1 <= x0 {
                    continue;
                }
                let inside = shapes.iter().all(|s| {
                    let probe = [0.2, 0.35, 0.5, 0.65, 0.8]
                        .iter()
                        .map(|f| {
                            let x = x0 + (x1 - x0) * f;
                            s.implicit(Point::new(x, graph_y(alpha, beta, x)))
                        })
                        .fold(0.0_f64, |m, v| if v.abs() > m.abs() || !v.is_finite() { v } else { m });
                    probe < 0.0
                });
                if inside {
                    out.push(Arc::Graph { x0, x1, alpha, beta });
                }
            }
        }
    }
}

/// Arcs of `{q = 0}` strictly inside every shape of `shapes`.
pub fn clipped_arcs(q: &ConicCoeffs, shapes: &[AxisEllipse]) -> Vec<Arc> {
    let mut out = Vec::new();
    if shapes.is_empty() {
        return out;
    }
    let c = q.normalized().coeffs();
    for piece in decompose(q).1 {
        clip_piece(c, piece, shapes, &mut out);
    }
    out
}

pub fn clipped_length(q: &ConicCoeffs, shapes: &[AxisEllipse], quad: QuadConfig) -> Result<f64> {
    clipped_arcs(q, shapes).iter().map(|a| a.length(quad)).sum()
}

/// Length of `{q = 0}` inside `dom`.
pub fn disk_length(q: &ConicCoeffs, dom: &Domain, quad: QuadConfig) -> Result<f64> {
    clipped_length(q, &[dom.as_shape()], quad)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct LineHits {
    pub crossings: Vec<Point>,
    pub tangencies: Vec<Point>,
    /// The line lies inside the zero set.
    pub coincident: bool,
}

/// Intersections of `{q = 0}` with the line `x·cos θ + y·sin θ = ρ`.
pub fn line_hits(q: &ConicCoeffs, rho: f64, theta: f64) -> LineHits {
    let [c0, c1, c2, c3, c4] = q.normalized().0;
    let (s, c) = theta.sin_cos();
    let (x0, y0) = (rho * c, rho * s);
    let (dx, dy) = (-s, c);
    let qa = c3 * dx * dx + c4 * dx * dy;
    let qb = c1 * dx + c2 * dy + 2.0 * c3 * x0 * dx + c4 * (x0 * dy + y0 * dx);
    let qc = c0 + c1 * x0 + c2 * y0 + c3 * x0 * x0 + c4 * x0 * y0;
    let at = |t: f64| Point::new(x0 + t * dx, y0 + t * dy);
    let mut hits = LineHits::default();
    let scale = 1.0 + rho * rho;
    if qa.abs() <= ZERO * scale {
        if qb.abs() <= ZERO * scale {
            hits.coincident = qc.abs() <= ZERO * scale;
        } else {
            hits.crossings.push(at(-qc / qb));
        }
        return hits;
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc.abs() <= ZERO * (qb * qb + (4.0 * qa * qc).abs()).max(ZERO) {
        hits.tangencies.push(at(-qb / (2.0 * qa)));
    } else if disc > 0.0 {
        hits.crossings.extend(numeric::quadratic_roots(qa, qb, qc).into_iter().map(at));
    }
    hits
}

/// Closed-form length of `y = a·x² − 1` inside the unit disk (`a > 1/2`).
pub fn parabola_length(a: f64) -> f64 {
    let u = (8.0 * a - 3.0).sqrt();
    let v = (2.0 * a - 1.0).sqrt();
    ((u + 2.0 * v).ln() + 2.0 * v * u) / (2.0 * a)
}

/// Abscissa where `y = a·x² − 1` meets the unit circle.
pub fn parabola_crossing(a: f64) -> f64 {
    (2.0 * a - 1.0).sqrt() / a
}

/// Member of the normalized parabola family `y = a·x² − 1`, `a > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParabolaParam(f64);

impl ParabolaParam {
    pub fn new(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 1.0) {
            return Err(Error::DomainError(format!("parabola parameter must exceed 1, got {a}")));
        }
        Ok(Self(a))
    }

    pub fn a(&self) -> f64 {
        self.0
    }

    pub fn coeffs(&self) -> ConicCoeffs {
        ConicCoeffs([-1.0, 0.0, -1.0, self.0, 0.0])
    }
}

pub fn parabola_l(a: ParabolaParam) -> f64 {
    parabola_length(a.0)
}

/// Sign of `L′` at `a = (z+1)/2`.
pub fn sign_expr(z: f64) -> f64 {
    let w = (4.0 * z + 1.0).sqrt();
    2.0 * w / z.sqrt() - (w + 2.0 * z.sqrt()).ln()
}

/// Parabola of maximal length in the unit disk: `(a₀, L(a₀))`.
pub fn maximize_parabola() -> Result<(f64, f64)> {
    let z = numeric::bisect(sign_expr, 99.0, 299.0, 0.0)?;
    let a0 = (z + 1.0) / 2.0;
    let l0 = parabola_length(a0);
    if l0 <= 4.0 {
        return Err(Error::InvariantViolated(format!("maximal parabola length {l0} is not above 4")));
    }
    Ok((a0, l0))
}

/// Branch `H(x) = (c/d)·√(d² + x²) − (1 + c)` through `(0, −1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolaBranchParam {
    c: f64,
    d: f64,
}

impl HyperbolaBranchParam {
    pub fn new(c: f64, d: f64) -> Result<Self> {
        if !(c > 0.0 && d > 0.0 && c.is_finite() && d.is_finite()) {
            return Err(Error::DomainError(format!("hyperbola parameters must be positive, got ({c}, {d})")));
        }
        let p = Self { c, d };
        if p.eval(1.0) <= 0.0 {
            return Err(Error::DomainError(format!("H(1) must be positive for ({c}, {d})")));
        }
        Ok(p)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.c / self.d) * self.d.hypot(x) - (1.0 + self.c)
    }

    fn slope(&self, x: f64) -> f64 {
        (self.c / self.d) * x / self.d.hypot(x)
    }

    /// Length of the branch inside the unit disk.
    pub fn disk_length(&self, quad: QuadConfig) -> Result<f64> {
        let g = |x: f64| x * x + self.eval(x).powi(2) - 1.0;
        let n = 2000;
        let mut cuts = vec![0.0];
        let mut prev = (1e-9, g(1e-9));
        for i in 1..=n {
            let x = i as f64 / n as f64;
            let gx = g(x);
            if gx.signum() != prev.1.signum() {
                cuts.push(numeric::bisect(g, prev.0, x, 0.0)?);
            }
            prev = (x, gx);
        }
        cuts.push(1.0);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            if g(mid) < 0.0 {
                total += numeric::integrate(|x| (1.0 + self.slope(x).powi(2)).sqrt(), w[0], w[1], quad)?;
            }
        }
        Ok(2.0 * total)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolaSearch {
    pub starts: usize,
    pub iterations: usize,
    /// Search box for `ln c` and `ln d`.
    pub log_lo: f64,
    pub log_hi: f64,
}

impl Default for HyperbolaSearch {
    fn default() -> Self {
        Self { starts: 6, iterations: 60, log_lo: -4.0, log_hi: 10.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperbolaMax {
    pub length: f64,
    pub c: f64,
    pub d: f64,
}

/// Multi-start pattern search for the longest admissible branch.
pub fn hyperbola_branch_max(cfg: HyperbolaSearch, quad: QuadConfig) -> Result<HyperbolaMax> {
    let score = |lc: f64, ld: f64| -> f64 {
        match HyperbolaBranchParam::new(lc.exp(), ld.exp()) {
            Ok(h) => h.disk_length(quad).unwrap_or(f64::NEG_INFINITY),
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let mut best = HyperbolaMax { length: f64::NEG_INFINITY, c: f64::NAN, d: f64::NAN };
    let span = cfg.log_hi - cfg.log_lo;
    for i in 0..cfg.starts {
        // starts along c = d·e^κ so that the vertex curvature exceeds the circle's
        let lc = cfg.log_lo + span * (i as f64 + 0.5) / cfg.starts as f64;
        let mut x = [lc, 0.5 * lc - 1.0];
        let mut fx = score(x[0], x[1]);
        let mut step = 1.0;
        for _ in 0..cfg.iterations {
            let mut moved = false;
            for (dx, dy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 0.5), (-1.0, -0.5)] {
                let y = [
                    (x[0] + step * dx).clamp(cfg.log_lo, cfg.log_hi),
                    (x[1] + step * dy).clamp(cfg.log_lo, cfg.log_hi),
                ];
                let fy = score(y[0], y[1]);
                if fy > fx {
                    x = y;
                    fx = fy;
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
                if step < 1e-6 {
                    break;
                }
            }
        }
        if fx > best.length {
            best = HyperbolaMax { length: fx, c: x[0].exp(), d: x[1].exp() };
        }
    }
    if !best.length.is_finite() {
        return Err(Error::NoConvergence("no admissible hyperbola branch found".into()));
    }
    Ok(best)
}
