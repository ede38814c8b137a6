//! The algebraic sweepouts `F_p`: a projective class `[Q]` with
//! `Q ∈ span{1, x, y, x², xy}` truncated after `p` monomials is sent to
//! `{Q = 0} ∩ B²`, and the largest length over the family bounds `ω_p`.

use std::f64::consts::FRAC_1_SQRT_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::conic::{self, ConicCoeffs};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::numeric::{self, QuadConfig};

pub const MIN_SAMPLES: usize = 1000;

/// Unit representative of a class in `ℝP^p`, first nonzero entry positive,
/// entries past index `p` zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveClass {
    p: usize,
    coeffs: [f64; 5],
}

impl ProjectiveClass {
    pub fn new(p: usize, coeffs: [f64; 5]) -> Result<Self> {
        if !(1..=4).contains(&p) {
            return Err(Error::DomainError(format!("sweepout index must be in 1..=4, got {p}")));
        }
        if coeffs[p + 1..].iter().any(|c| *c != 0.0) {
            return Err(Error::DomainError(format!("class {coeffs:?} uses monomials beyond index {p}")));
        }
        let n = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::DomainError(format!("class {coeffs:?} has no unit representative")));
        }
        let lead = coeffs.iter().copied().find(|c| *c != 0.0).unwrap_or(1.0);
        let s = lead.signum() / n;
        Ok(Self { p, coeffs: coeffs.map(|c| c * s) })
    }

    /// Builds a class from its first `p + 1` coordinates.
    pub fn from_slice(p: usize, v: &[f64]) -> Result<Self> {
        let mut c = [0.0; 5];
        c[..v.len().min(5)].copy_from_slice(&v[..v.len().min(5)]);
        Self::new(p, c)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn coeffs(&self) -> [f64; 5] {
        self.coeffs
    }

    /// The same class viewed in `ℝP^q`, `q ≥ p`.
    pub fn embed(&self, q: usize) -> Result<Self> {
        if q < self.p {
            return Err(Error::DomainError(format!("cannot embed index {} into {q}", self.p)));
        }
        Self::new(q, self.coeffs)
    }

    pub fn conic(&self) -> Option<ConicCoeffs> {
        ConicCoeffs::new(self.coeffs).ok()
    }
}

/// `n` classes from a scrambled Sobol sequence pushed through the Gaussian
/// quantile and normalized, which spreads them evenly on the sphere.
pub fn sample_classes(p: usize, n: usize, seed: u32) -> Result<Vec<ProjectiveClass>> {
    if !(1..=4).contains(&p) {
        return Err(Error::DomainError(format!("sweepout index must be in 1..=4, got {p}")));
    }
    let normal = Normal::standard();
    (0..n)
        .map(|i| {
            let mut v = [0.0; 5];
            for (d, slot) in v.iter_mut().enumerate().take(p + 1) {
                let u = sobol_burley::sample(i as u32, d as u32, seed) as f64;
                let u = (u + 0.5 / (1u64 << 24) as f64).clamp(1e-12, 1.0 - 1e-12);
                *slot = normal.inverse_cdf(u);
            }
            ProjectiveClass::new(p, v)
        })
        .collect()
}

/// The conic of `cls` and its length in the unit disk.
pub fn evaluate(p: usize, cls: &ProjectiveClass, quad: QuadConfig) -> Result<(Option<ConicCoeffs>, f64)> {
    evaluate_in(&Domain::unit_disk(), p, cls, quad)
}

pub fn evaluate_in(dom: &Domain, p: usize, cls: &ProjectiveClass, quad: QuadConfig) -> Result<(Option<ConicCoeffs>, f64)> {
    if cls.p != p {
        return Err(Error::DomainError(format!("class has index {}, expected {p}", cls.p)));
    }
    match cls.conic() {
        Some(q) => {
            let l = conic::disk_length(&q, dom, quad)?;
            Ok((Some(q), l))
        }
        None => Ok((None, 0.0)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub samples: usize,
    pub seed: u32,
    /// Number of best samples refined locally.
    pub top: usize,
    pub restarts: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self { samples: 4096, seed: 0, top: 10, restarts: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupLength {
    pub p: usize,
    pub sup: f64,
    pub witness: ProjectiveClass,
    /// Largest length among the raw samples, before refinement.
    pub sampled_max: f64,
    /// The bound the estimate is checked against.
    pub bound: f64,
}

/// Length bound of the family: 2 for lines, the maximal parabola for `p ≥ 3`.
pub fn sup_bound(p: usize) -> Result<f64> {
    if p <= 2 {
        Ok(2.0)
    } else {
        Ok(conic::maximize_parabola()?.1)
    }
}

fn score(p: usize, v: &[f64], quad: QuadConfig) -> f64 {
    match ProjectiveClass::from_slice(p, v) {
        Ok(cls) => evaluate(p, &cls, quad).map(|(_, l)| l).unwrap_or(f64::NEG_INFINITY),
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Golden-section line searches along the coordinate axes (and, with
/// `diagonals`, along `e_i ± e_j`) in the chart `c ↦ (c + t·d)/|·|`, each
/// sweep followed by a pattern move along its net displacement.
fn refine(p: usize, start: ProjectiveClass, restarts: usize, diagonals: bool, quad: QuadConfig) -> (ProjectiveClass, f64) {
    let n = p + 1;
    let mut dirs: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect()).collect();
    for i in 0..n {
        for j in i + 1..n {
            if !diagonals {
                continue;
            }
            for s in [1.0, -1.0] {
                let mut d = vec![0.0; n];
                d[i] = FRAC_1_SQRT_2;
                d[j] = s * FRAC_1_SQRT_2;
                dirs.push(d);
            }
        }
    }
    let line_search = |v: &mut Vec<f64>, fv: &mut f64, d: &[f64], lo: f64, hi: f64| {
        let base = v.clone();
        let f = |t: f64| {
            let w: Vec<f64> = base.iter().zip(d).map(|(x, y)| x + t * y).collect();
            score(p, &w, quad)
        };
        let (t, ft) = numeric::golden_section_max(f, lo, hi, 1e-12, 80);
        if ft > *fv {
            v.iter_mut().zip(d).for_each(|(x, y)| *x += t * y);
            let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            v.iter_mut().for_each(|c| *c /= norm);
            *fv = ft;
        }
    };
    let mut v: Vec<f64> = start.coeffs()[..n].to_vec();
    let mut fv = score(p, &v, quad);
    for _ in 0..restarts {
        let mut h = 0.25;
        for _ in 0..40 {
            let before = fv;
            let start_v = v.clone();
            for d in &dirs {
                line_search(&mut v, &mut fv, d, -h, h);
            }
            if fv > before {
                let d: Vec<f64> = v.iter().zip(&start_v).map(|(x, y)| x - y).collect();
                line_search(&mut v, &mut fv, &d, 0.0, 4.0);
            }
            if fv - before <= 1e-13 {
                h *= 0.5;
                if h < 1e-7 {
                    break;
                }
            }
        }
    }
    let cls = ProjectiveClass::from_slice(p, &v).unwrap_or(start);
    (cls, fv)
}

fn sup_level(p: usize, cfg: &SamplingConfig, seed_class: Option<ProjectiveClass>, quad: QuadConfig) -> Result<SupLength> {
    let classes = sample_classes(p, cfg.samples, cfg.seed)?;
    let lengths: Vec<f64> = classes
        .par_iter()
        .map(|c| evaluate(p, c, quad).map(|(_, l)| l))
        .collect::<Result<Vec<_>>>()?;
    let sampled_max = lengths.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by(|&i, &j| lengths[j].total_cmp(&lengths[i]).then(i.cmp(&j)));
    let mut starts: Vec<ProjectiveClass> = order.iter().take(cfg.top).map(|&i| classes[i]).collect();
    if let Some(s) = seed_class {
        starts.insert(0, s);
    }
    let refined: Vec<(ProjectiveClass, f64)> =
        starts.par_iter().map(|s| refine(p, *s, cfg.restarts, false, quad)).collect();

    let mut best = (starts[0], f64::NEG_INFINITY);
    for (cls, l) in &refined {
        if *l > best.1 {
            best = (*cls, *l);
        }
    }
    if let Some(s) = seed_class {
        // the seed itself must never be lost to a failed refinement
        let l0 = evaluate(p, &s, quad)?.1;
        if l0 > best.1 {
            best = (s, l0);
        }
    }
    if sampled_max > best.1 {
        best = (classes[order[0]], sampled_max);
    }
    let polished = refine(p, best.0, 1, true, quad);
    if polished.1 > best.1 {
        best = polished;
    }
    let bound = sup_bound(p)?;
    if best.1 > bound + 1e-6 {
        return Err(Error::InvariantViolated(format!(
            "sweepout length {} exceeds the family bound {bound} for p = {p}",
            best.1
        )));
    }
    Ok(SupLength { p, sup: best.1, witness: best.0, sampled_max, bound })
}

/// Largest lengths for `p = 1..=p_max`, each level seeded with the previous
/// witness so that the sequence is non-decreasing.
pub fn sup_length_chain(p_max: usize, cfg: &SamplingConfig) -> Result<Vec<SupLength>> {
    if !(1..=4).contains(&p_max) {
        return Err(Error::DomainError(format!("sweepout index must be in 1..=4, got {p_max}")));
    }
    if cfg.samples < MIN_SAMPLES {
        return Err(Error::DomainError(format!(
            "sampling budget {} is below the minimum {MIN_SAMPLES}",
            cfg.samples
        )));
    }
    let quad = QuadConfig::default();
    let mut out: Vec<SupLength> = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        let seed = match out.last() {
            Some(prev) => Some(prev.witness.embed(p)?),
            None => None,
        };
        out.push(sup_level(p, cfg, seed, quad)?);
    }
    Ok(out)
}

pub fn sup_length(p: usize, cfg: &SamplingConfig) -> Result<SupLength> {
    Ok(*sup_length_chain(p, cfg)?.last().expect("chain is non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_normalization() {
        let c = ProjectiveClass::new(2, [0.0, -2.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(c.coeffs(), [0.0, 1.0, 0.0, 0.0, 0.0]);
        assert!(ProjectiveClass::new(1, [0.0, 1.0, 1.0, 0.0, 0.0]).is_err());
        assert!(ProjectiveClass::new(5, [1.0, 0.0, 0.0, 0.0, 0.0]).is_err());
        assert!(ProjectiveClass::new(3, [0.0; 5]).is_err());
        let a = ProjectiveClass::new(4, [0.3, -0.1, 0.2, 0.5, -0.7]).unwrap();
        let b = ProjectiveClass::new(4, [-0.6, 0.2, -0.4, -1.0, 1.4]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn evaluate_examples() {
        let q = QuadConfig::default();
        let x = ProjectiveClass::new(1, [0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((evaluate(1, &x, q).unwrap().1 - 2.0).abs() < 1e-12);
        for k in 0..12 {
            let phi = k as f64 * 0.5;
            let c = ProjectiveClass::new(2, [0.0, phi.cos(), phi.sin(), 0.0, 0.0]).unwrap();
            assert!((evaluate(2, &c, q).unwrap().1 - 2.0).abs() < 1e-12);
        }
        let a0 = 94.091282;
        let c = ProjectiveClass::new(3, [-1.0, 0.0, -1.0, a0, 0.0]).unwrap();
        assert!((evaluate(3, &c, q).unwrap().1 - 4.00267).abs() < 1e-5);
    }

    #[test]
    fn samples_are_deterministic_and_distinct() {
        let a = sample_classes(3, 64, 7).unwrap();
        let b = sample_classes(3, 64, 7).unwrap();
        assert_eq!(a, b);
        let c = sample_classes(3, 64, 8).unwrap();
        assert_ne!(a, c);
        for s in &a {
            let n: f64 = s.coeffs().iter().map(|c| c * c).sum();
            assert!((n - 1.0).abs() < 1e-12);
            assert_eq!(s.coeffs()[4], 0.0);
        }
    }

    #[test]
    fn budget_below_minimum_is_rejected() {
        let cfg = SamplingConfig { samples: 10, ..Default::default() };
        assert!(sup_length(1, &cfg).is_err());
    }

    #[test]
    fn sup_p1_is_a_diameter() {
        let s = sup_length(1, &SamplingConfig::default()).unwrap();
        assert!((s.sup - 2.0).abs() < 1e-9);
        assert!(s.witness.coeffs()[0].abs() < 1e-6);
    }
}
