use thiserror::Error;

/// Errors raised by the geometric and numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("direction is not strictly inward (inner product with inward normal {0:.3e})")]
    TangentialDirection(f64),

    #[error("junction {index} is flagged as boundary but lies off the boundary (implicit value {value:.3e})")]
    JunctionOffBoundary { index: usize, value: f64 },

    #[error("radial stationarity fails at basepoint (residual {0:.3e})")]
    RadialConditionViolated(f64),

    #[error("point ({x}, {y}) is not on the support of the network")]
    PointNotOnSupport { x: f64, y: f64 },

    #[error("network has non-integer multiplicities; integrality is undefined")]
    GeneralizedNetwork,

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("degenerate chord: {0}")]
    LineThroughCenterDegenerate(String),

    #[error("quadrature failed to reach tolerance {tol:.1e} on [{a}, {b}]")]
    QuadratureFailure { a: f64, b: f64, tol: f64 },

    #[error("bracket [{lo}, {hi}] is invalid: f(lo) = {flo:.3e}, f(hi) = {fhi:.3e}")]
    BracketInvalid { lo: f64, hi: f64, flo: f64, fhi: f64 },

    #[error("oracle returned coincident lines on {fraction:.3} of the sampled lines")]
    OracleDegenerate { fraction: f64 },

    #[error("argument outside the formula's domain: {0}")]
    DomainError(String),

    #[error("subdomains {0} and {1} overlap")]
    DisjointnessViolated(usize, usize),

    #[error("subdomain {index} is not inside the open domain (margin {margin:.3e})")]
    ContainmentViolated { index: usize, margin: f64 },

    #[error("polygon with k = {k}, caustic radius {r} is not excluded by bound {bound}")]
    NotExcludable { k: usize, r: f64, bound: f64 },

    #[error("inconclusive certificate: {0}")]
    InconclusiveCertificate(String),

    #[error("numerical invariant violated: {0}")]
    InvariantViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
