//! Small numerical kernels shared by the geometric modules: bracketed
//! bisection, golden-section search, globally adaptive Gauss–Kronrod
//! quadrature and real roots of low-degree polynomials.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tol;

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Endpoint signs are checked before iterating. Stops when the bracket is
/// narrower than `xtol` or after [`tol::BISECTION_DEPTH`] halvings.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::BracketInvalid { lo, hi, flo: fa, fhi: fb });
    }
    let neg_at_a = fa < 0.0;
    for _ in 0..tol::BISECTION_DEPTH {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol || m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == neg_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
/// Returns the abscissa and value of the best point evaluated.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() <= xtol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Quadrature settings: absolute tolerance per integral and the deepest
/// allowed interval halving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub depth_cap: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-9, depth_cap: 60 }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod 7/15 panel: (Kronrod estimate, |Kronrod − Gauss|).
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    depth: u32,
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// The panel with the largest error estimate is halved until the summed
/// estimate drops below `cfg.abs_tol`. Fails when the worst panel would need
/// to go deeper than `cfg.depth_cap`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, cfg: QuadConfig) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (value, err) = gk15(&mut f, a, b);
    let mut panels = vec![Panel { a, b, value, err, depth: 0 }];
    loop {
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        if total_err <= cfg.abs_tol {
            break;
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("non-empty");
        let p = panels.swap_remove(worst);
        if p.depth >= cfg.depth_cap || !p.err.is_finite() {
            return Err(Error::QuadratureFailure { a, b, tol: cfg.abs_tol });
        }
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(&mut f, p.a, m);
        let (v2, e2) = gk15(&mut f, m, p.b);
        panels.push(Panel { a: p.a, b: m, value: v1, err: e1, depth: p.depth + 1 });
        panels.push(Panel { a: m, b: p.b, value: v2, err: e2, depth: p.depth + 1 });
    }
    // Fixed summation order keeps results reproducible.
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(panels.iter().map(|p| p.value).sum())
}

/// Evaluates a polynomial given by ascending coefficients.
pub fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn poly_deriv_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (i, &c)| acc * x + i as f64 * c)
}

/// Real roots of a polynomial with ascending coefficients, sorted and
/// de-duplicated. Near-real eigenvalue pairs (double roots split by rounding)
/// are kept, so callers must not assume every returned value is a sign change.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let mut p: Vec<f64> = coeffs.iter().map(|c| c / scale).collect();
    while p.len() > 1 && p.last().is_some_and(|c| c.abs() <= 1e-14) {
        p.pop();
    }
    let n = p.len() - 1;
    let mut roots = match n {
        0 => Vec::new(),
        1 => vec![-p[0] / p[1]],
        2 => quadratic_roots(p[2], p[1], p[0]),
        _ => {
            let lead = p[n];
            let mut m = DMatrix::<f64>::zeros(n, n);
            for i in 1..n {
                m[(i, i - 1)] = 1.0;
            }
            for i in 0..n {
                m[(i, n - 1)] = -p[i] / lead;
            }
            m.complex_eigenvalues()
                .iter()
                .filter(|z| z.im.abs() <= 1e-6 * (1.0 + z.re.abs()))
                .map(|z| z.re)
                .collect()
        }
    };
    for r in roots.iter_mut() {
        for _ in 0..8 {
            let d = poly_deriv_eval(&p, *r);
            if d == 0.0 {
                break;
            }
            let step = poly_eval(&p, *r) / d;
            if !step.is_finite() || step.abs() > 1e-3 * (1.0 + r.abs()) {
                break;
            }
            *r -= step;
            if step.abs() <= 1e-16 * (1.0 + r.abs()) {
                break;
            }
        }
    }
    roots.retain(|r| r.is_finite());
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    roots
}

/// Zeros of the real trigonometric polynomial
/// `k[0] + k[1]·cos t + k[2]·sin t + k[3]·cos 2t + k[4]·sin 2t`, as angles in
/// `[0, 2π)`. The angle is first rotated so that the half-angle substitution
/// `t = o + 2·atan τ` puts `τ = ∞` far from any zero; the resulting quartic
/// is solved by [`real_roots`] and each zero is polished by Newton steps in
/// `t`. Near-double zeros may come back as a close pair or a single angle.
pub fn trig2_roots(k: [f64; 5]) -> Vec<f64> {
    let g = |t: f64| k[0] + k[1] * t.cos() + k[2] * t.sin() + k[3] * (2.0 * t).cos() + k[4] * (2.0 * t).sin();
    let dg = |t: f64| -k[1] * t.sin() + k[2] * t.cos() - 2.0 * k[3] * (2.0 * t).sin() + 2.0 * k[4] * (2.0 * t).cos();
    if k.iter().all(|c| *c == 0.0) {
        return Vec::new();
    }
    let o = (0..8)
        .map(|j| j as f64 * std::f64::consts::FRAC_PI_4)
        .max_by(|a, b| g(a + PI).abs().total_cmp(&g(b + PI).abs()))
        .unwrap_or(0.0);
    let (so, co) = o.sin_cos();
    let (s2, c2) = (2.0 * o).sin_cos();
    let k1 = k[1] * co + k[2] * so;
    let k2 = -k[1] * so + k[2] * co;
    let k3 = k[3] * c2 + k[4] * s2;
    let k4 = -k[3] * s2 + k[4] * c2;
    // g·(1+τ²)² with cos, sin, cos 2, sin 2 written in τ
    let basis = [
        (k[0], [1.0, 0.0, 2.0, 0.0, 1.0]),
        (k1, [1.0, 0.0, 0.0, 0.0, -1.0]),
        (k2, [0.0, 2.0, 0.0, 2.0, 0.0]),
        (k3, [1.0, 0.0, -6.0, 0.0, 1.0]),
        (k4, [0.0, 4.0, 0.0, -4.0, 0.0]),
    ];
    let mut poly = [0.0; 5];
    for (w, b) in basis {
        for (p, c) in poly.iter_mut().zip(b) {
            *p += w * c;
        }
    }
    let mut roots: Vec<f64> = real_roots(&poly)
        .into_iter()
        .map(|tau| {
            let mut t = o + 2.0 * tau.atan();
            for _ in 0..8 {
                let d = dg(t);
                if d == 0.0 {
                    break;
                }
                let step = g(t) / d;
                if !step.is_finite() || step.abs() > 1e-3 {
                    break;
                }
                t -= step;
                if step.abs() <= 1e-16 {
                    break;
                }
            }
            t.rem_euclid(TAU)
        })
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-14);
    roots
}

/// Real roots of `a x² + b x + c` using the cancellation-free form.
/// A non-negative discriminant that is zero up to rounding yields a double root.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { Vec::new() } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    let scale = b * b + (4.0 * a * c).abs();
    if disc < -1e-14 * scale {
        return Vec::new();
    }
    if disc <= 1e-14 * scale {
        return vec![-b / (2.0 * a)];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (r1, r2) = (q / a, c / q);
    if r1 <= r2 {
        vec![r1, r2]
    } else {
        vec![r2, r1]
    }
}
