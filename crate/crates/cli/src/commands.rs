use std::f64::consts::{PI, SQRT_2};
use std::path::Path;

use serde::Serialize;
use widths_core::billiards::{caustic_of, find_closed_orbit, Caustic};
use widths_core::certify::{Certifier, CertifyConfig, WidthCertificate};
use widths_core::conic::{self, classify, ConicClass};
use widths_core::crofton::{self, ConicOracle, Region};
use widths_core::network::{DensityReport, IntegralityReport};
use widths_core::sweepout::{self, SamplingConfig, SupLength};
use widths_core::{ConicCoeffs, Domain, NetworkFile, Point, QuadConfig};

use crate::config::Settings;
use crate::error::CliError;
use crate::output::{emit, to_json, write_atomic};
use crate::svg::Svg;

/// Parses `disk` or `ellipse A B` from the front of `tokens`; returns the
/// domain and the number of tokens consumed.
pub fn parse_domain(tokens: &[String]) -> Result<(Domain, usize), CliError> {
    match tokens.first().map(String::as_str) {
        Some("disk") => Ok((Domain::unit_disk(), 1)),
        Some("ellipse") => {
            let num = |i: usize| -> Result<f64, CliError> {
                let t = tokens.get(i).ok_or_else(|| CliError::usage("ellipse needs two semi-axes: ellipse A B"))?;
                t.parse::<f64>().map_err(|_| CliError::usage(format!("bad semi-axis {t:?}")))
            };
            let dom = Domain::ellipse(num(1)?, num(2)?).map_err(CliError::from_core_usage)?;
            Ok((dom, 3))
        }
        Some(other) => Err(CliError::usage(format!("unknown domain {other:?}; use \"disk\" or \"ellipse A B\""))),
        None => Err(CliError::usage("missing domain; use \"disk\" or \"ellipse A B\"")),
    }
}

fn write_svg(path: Option<&Path>, svg: Svg) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, svg.finish().as_bytes()),
        None => Ok(()),
    }
}

pub fn certify(p: usize, domain: &[String], s: &Settings) -> Result<(), CliError> {
    let (dom, used) = parse_domain(domain)?;
    if used != domain.len() {
        return Err(CliError::usage(format!("unexpected arguments after the domain: {:?}", &domain[used..])));
    }
    let cfg = CertifyConfig {
        sampling: SamplingConfig { samples: s.samples, seed: s.seed, ..SamplingConfig::default() },
        margin: s.margin,
        ..CertifyConfig::default()
    };
    let cert: WidthCertificate = Certifier::new(cfg).certify(p, &dom)?;
    emit(s.out.as_deref(), &to_json(&cert)?)?;
    eprintln!(
        "omega_{p}({}) in {:?} [{}]; lower {}, upper {:.9}",
        dom.label(),
        cert.conclusion,
        cert.symbols.join(", "),
        cert.lower.value,
        cert.upper.value
    );
    Ok(())
}

#[derive(Serialize)]
struct MaxlenReport {
    a0: f64,
    l0: f64,
    crossing_x: f64,
    coeffs: [f64; 5],
}

pub fn maxlen(s: &Settings) -> Result<(), CliError> {
    let (a0, l0) = conic::maximize_parabola()?;
    let q = conic::ParabolaParam::new(a0)?.coeffs();
    let report = MaxlenReport { a0, l0, crossing_x: conic::parabola_crossing(a0), coeffs: q.coeffs() };
    emit(s.out.as_deref(), &to_json(&report)?)?;
    eprintln!("a0 = {a0:.9}\nL0 = {l0:.9}");

    let dom = Domain::unit_disk();
    let mut svg = Svg::for_domain(&dom);
    svg.boundary(&dom);
    let arcs = conic::clipped_arcs(&q, &[dom.as_shape()]);
    let pts: Vec<Point> = arcs.iter().flat_map(|a| a.sample(2000)).collect();
    svg.polyline(&pts, "crimson");
    let path = s.svg.clone().unwrap_or_else(|| "parabola.svg".into());
    write_svg(Some(&path), svg)
}

#[derive(Serialize)]
struct BilliardReport {
    domain: Domain,
    k: usize,
    start_t: f64,
    closed: bool,
    period: Option<usize>,
    perimeter: f64,
    /// `2k·sin(π/k)·R` on a disk of radius `R`.
    regular_perimeter: Option<f64>,
    caustic: Caustic,
    vertices: Vec<Point>,
}

pub fn billiard(args: &[String], s: &Settings) -> Result<(), CliError> {
    let (dom, used) = parse_domain(args)?;
    let rest = &args[used..];
    let k: usize = rest
        .first()
        .ok_or_else(|| CliError::usage("missing k"))?
        .parse()
        .map_err(|_| CliError::usage(format!("bad k {:?}", rest[0])))?;
    let start_t: f64 = match rest.get(1) {
        Some(t) => t.parse().map_err(|_| CliError::usage(format!("bad start parameter {t:?}")))?,
        None => 0.0,
    };
    if rest.len() > 2 {
        return Err(CliError::usage(format!("unexpected arguments {:?}", &rest[2..])));
    }
    if k < 2 {
        return Err(CliError::usage(format!("k must be at least 2, got {k}")));
    }
    let orbit = find_closed_orbit(&dom, k, start_t)?;
    let caustic = caustic_of(&dom, &orbit.chords[0])?;
    let vertices: Vec<Point> = orbit.chords.iter().map(|c| c.p0).collect();
    let (r, _) = dom.semi_axes();
    let report = BilliardReport {
        domain: dom,
        k,
        start_t,
        closed: orbit.closed,
        period: orbit.period,
        perimeter: orbit.perimeter(),
        regular_perimeter: dom.is_round().then(|| 2.0 * k as f64 * (PI / k as f64).sin() * r),
        caustic,
        vertices: vertices.clone(),
    };
    emit(s.out.as_deref(), &to_json(&report)?)?;
    eprintln!("closed {k}-orbit in {}: perimeter {:.12}, caustic lambda {:.12}", dom.label(), report.perimeter, caustic.lambda);
    let mut svg = Svg::for_domain(&dom);
    svg.boundary(&dom);
    svg.polygon(&vertices, "navy");
    write_svg(s.svg.as_deref(), svg)
}

pub fn parse_coeffs(text: &str) -> Result<ConicCoeffs, CliError> {
    let vals: Vec<f64> = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| CliError::usage(format!("bad coefficient {t:?}"))))
        .collect::<Result<_, _>>()?;
    let arr: [f64; 5] = vals
        .try_into()
        .map_err(|v: Vec<f64>| CliError::usage(format!("expected 5 coefficients c0..c4, got {}", v.len())))?;
    ConicCoeffs::new(arr).map_err(CliError::from_core_usage)
}

#[derive(Serialize)]
struct GridReport {
    n_theta: usize,
    n_rho: usize,
}

#[derive(Serialize)]
struct CroftonReport {
    domain: Domain,
    coeffs: [f64; 5],
    class: ConicClass,
    grid: GridReport,
    length: f64,
    error_estimate: f64,
    coincident_fraction: f64,
    exact_length: f64,
    relative_error: Option<f64>,
}

pub fn crofton_conic(coeffs: &str, domain: &[String], s: &Settings) -> Result<(), CliError> {
    let q = parse_coeffs(coeffs)?;
    let dom = if domain.is_empty() { Domain::unit_disk() } else { parse_domain(domain)?.0 };
    let est = crofton::crofton_length(&ConicOracle::new(q), &Region::domain(&dom), s.grid)?;
    let exact = conic::disk_length(&q, &dom, QuadConfig::default())?;
    let report = CroftonReport {
        domain: dom,
        coeffs: q.coeffs(),
        class: classify(&q),
        grid: GridReport { n_theta: s.grid.n_theta, n_rho: s.grid.n_rho },
        length: est.length,
        error_estimate: est.error_estimate,
        coincident_fraction: est.coincident_fraction,
        exact_length: exact,
        relative_error: (exact > 0.0).then(|| (est.length - exact).abs() / exact),
    };
    emit(s.out.as_deref(), &to_json(&report)?)?;
    eprintln!("Crofton length {:.6} (exact {exact:.6})", est.length);
    Ok(())
}

pub fn crofton_scan(p: usize, radii: &[f64], json: bool, s: &Settings) -> Result<(), CliError> {
    if !(1..=4).contains(&p) {
        return Err(CliError::usage(format!("p must be in 1..=4, got {p}")));
    }
    let table = crofton::no_concentration_scan(p, s.samples, radii, s.seed).map_err(CliError::from_core_usage)?;
    let text = if json { to_json(&table)? } else { table.to_csv() };
    emit(s.out.as_deref(), &text)?;
    let violations: usize = table.rows.iter().map(|r| r.violations).sum();
    if violations > 0 {
        return Err(widths_core::Error::InvariantViolated(format!("{violations} local masses exceed their bound")).into());
    }
    Ok(())
}

#[derive(Serialize)]
struct NetworkReport {
    domain: Domain,
    junctions: usize,
    segments: usize,
    mass: f64,
    interior_residual: f64,
    free_boundary_residual: f64,
    low_valence_junctions: Vec<usize>,
    /// Absent for non-integer multiplicities.
    integrality: Option<IntegralityReport>,
    density: DensityReport,
    /// Mass recovered from boundary forces about the centre.
    mass_via_forces: Option<f64>,
    stationary: bool,
}

pub fn network_check(file: &Path, mu: Option<f64>, s: &Settings) -> Result<(), CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::no_input(format!("cannot read {}: {e}", file.display())))?;
    let parsed: NetworkFile =
        serde_json::from_str(&text).map_err(|e| CliError::data(format!("{}: {e}", file.display())))?;
    let (net, dom) = parsed.into_network().map_err(CliError::from_core_data)?;
    net.validate_in(&dom).map_err(CliError::from_core_data)?;
    let interior = net.interior_residual();
    let free = net.free_boundary_residual(&dom).map_err(CliError::from_core_data)?;
    let mu = mu.unwrap_or(3.0 * SQRT_2);
    let report = NetworkReport {
        domain: dom,
        junctions: net.junctions().len(),
        segments: net.segments().len(),
        mass: net.mass(),
        interior_residual: interior,
        free_boundary_residual: free,
        low_valence_junctions: net.low_valence_junctions(),
        integrality: net.integrality_filter().ok(),
        density: net.check_density_bounds(&dom, mu),
        mass_via_forces: net.mass_via_forces(Point::ORIGIN).ok(),
        stationary: interior <= widths_core::tol::STATIONARY && free <= widths_core::tol::STATIONARY,
    };
    emit(s.out.as_deref(), &to_json(&report)?)?;
    eprintln!("mass {:.12}, interior residual {interior:.3e}, free-boundary residual {free:.3e}", report.mass);

    let mut svg = Svg::for_domain(&dom);
    svg.boundary(&dom);
    let js = net.junctions();
    for seg in net.segments() {
        svg.segment(js[seg.i].position, js[seg.j].position, seg.multiplicity, "darkgreen");
    }
    for j in js {
        svg.dot(j.position, "black");
    }
    write_svg(s.svg.as_deref(), svg)
}

#[derive(Serialize)]
struct SweepoutReport {
    seed: u32,
    samples: usize,
    levels: Vec<SupLength>,
}

pub fn sweepout(p: usize, s: &Settings) -> Result<(), CliError> {
    if !(1..=4).contains(&p) {
        return Err(CliError::usage(format!("p must be in 1..=4, got {p}")));
    }
    let cfg = SamplingConfig { samples: s.samples, seed: s.seed, ..SamplingConfig::default() };
    let levels = sweepout::sup_length_chain(p, &cfg)?;
    for l in &levels {
        eprintln!("p = {}: sup {:.9} (bound {:.9})", l.p, l.sup, l.bound);
    }
    emit(s.out.as_deref(), &to_json(&SweepoutReport { seed: s.seed, samples: s.samples, levels })?)
}
