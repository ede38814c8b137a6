//! Numerical toolkit for min-max widths of planar domains.

pub mod billiards;
pub mod certify;
pub mod conic;
pub mod crofton;
pub mod domain;
pub mod error;
pub mod network;
pub mod numeric;
pub mod sweepout;
pub mod tol;

pub use billiards::{BilliardOrbit, BilliardState, Caustic};
pub use certify::{CandidateNetwork, Certifier, CertifyConfig, WidthCertificate};
pub use conic::{ConicClass, ConicCoeffs};
pub use crofton::{CroftonEstimate, LineParam, QuadratureGrid, Region};
pub use domain::{AxisEllipse, Chord, Containment, Direction, Domain, Point};
pub use error::{Error, Result};
pub use network::{GeodesicNetwork, Junction, JunctionLocation, NetworkFile, NetworkSegment};
pub use numeric::QuadConfig;
pub use sweepout::{ProjectiveClass, SamplingConfig, SupLength};
