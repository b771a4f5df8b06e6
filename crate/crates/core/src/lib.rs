//! Boundary laws of the SOS model on a Cayley tree and the planar
//! McMillan-type map induced by its second-order difference equation.
//!
//! The crate has five parts:
//!
//! * [`map`]: the difference equation as a planar dynamical system:
//!   forward/backward stepping, trajectories, positivity and escape
//!   annotations.
//! * [`spectral`]: fixed points of the constant-field map, their
//!   Jacobian spectra, regime classification and resonance detection.
//! * [`geometry`]: the candidate invariant region, grid verification,
//!   and the swap conjugacy between the map and its inverse.
//! * [`law`]: explicit boundary-law families, tail-series convergence
//!   verdicts, the ρ-consistency equation, truncated-ratio solution
//!   verification, the transfer operator and cylinder measures on
//!   finite subtrees.
//! * [`lab`]: figure presets, parameter sweeps, JSON/CSV reports and
//!   plot-ready export used by the `sosdyn` binary.
//!
//! All computations are pure `f64`; shared values are immutable after
//! construction and safe to use from multiple threads.

pub mod error;
pub mod field;
pub mod geometry;
pub mod lab;
pub mod law;
pub mod map;
pub mod spectral;
pub mod tree;

pub use error::Error;
pub use field::{Field, FieldKind, Normalization};
pub use geometry::InvariantSetSpec;
pub use law::{BoundaryLaw, LawCoordinates, LawKind, SeriesMethod, SeriesStatus, SeriesVerdict};
pub use map::{ModelParams, State, Trajectory};
pub use spectral::{FixedPoint, FixedPointLabel, Regime, Resonance, SpectralReport, StabilityType};
pub use tree::CayleySubtree;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
