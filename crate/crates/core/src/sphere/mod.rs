//! Spectral calculus on a 2-sphere parameter domain.

pub mod grid;

pub use grid::{Parity, SurfaceGrid};
pub mod harmonics;

pub use harmonics::{real_sh, AngularJet, HarmonicSeries, HarmonicTerm, LegendreTerm};
pub mod fields;

pub use fields::{OneFormField, ScalarField, SymTwoTensorField};
pub mod calculus;

pub use calculus::{Gradient, InducedMetric};
pub mod transform;

pub use transform::BandLimiter;
