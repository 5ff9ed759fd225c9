//! Spacetime Hawking mass, connection forms of the normal bundle and the
//! uniformly area expanding flow for spacelike 2-spheres in 4-dimensional
//! Lorentzian backends.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix `f64`.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod connection;
pub mod curve;
pub mod error;
pub mod extrinsic;
pub mod flow;
pub mod linalg;
pub mod oracles;
pub mod scalar;
pub mod scenario;
pub mod spacetime;
pub mod slice;
pub mod sphere;

pub use error::{GeomError, Result};
pub use scalar::Real;

pub type Backend = spacetime::MetricBackend<f64>;
pub type Grid = sphere::SurfaceGrid<f64>;
pub type Metric = sphere::InducedMetric<f64>;
pub type Surface = extrinsic::EmbeddedSurface<f64>;
pub type Normal = extrinsic::NormalVector<f64>;
pub type Scalar = sphere::ScalarField<f64>;
pub type OneForm = sphere::OneFormField<f64>;
pub type Connection = connection::ConnectionForm<f64>;
pub type Flow = flow::FlowState<f64>;
pub type Slice = slice::SliceBackend<f64>;
pub type SliceSurface = slice::SliceSurface<f64>;
pub type Frenet = curve::FrenetData<f64>;
