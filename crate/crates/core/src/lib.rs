//! Degree-distribution design, density evolution and erasure-decoding
//! simulation for accumulate-repeat-accumulate (ARA), non-systematic IRA,
//! accumulate-LDPC and LDPC ensembles on the binary erasure channel.
//!
//! - [`series`]: truncated power series and the Lambert W function.
//! - [`dd`]: degree distributions, tilting, matching and symmetry.
//! - [`construct`]: the capacity-achieving ensembles, validity and complexity.
//! - [`de`]: density evolution, fixed-point residuals and thresholds.
//! - [`sim`]: Tanner-graph sampling, encoding, peeling and Monte Carlo.

pub mod construct;
pub mod dd;
pub mod de;
pub mod error;
pub mod series;
pub mod sim;

pub use construct::{build, BParam, ComplexityReport, Construction, EnsembleSpec, ValidityReport};
pub use dd::{DegreeDist, DegreeDistPair, Family, Perspective, Side};
pub use error::{Error, Result};
pub use series::PowerSeries;
