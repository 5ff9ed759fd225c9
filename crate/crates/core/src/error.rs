use thiserror::Error;

/// Errors raised by the geometry pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("inadmissible event: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("degenerate metric at node {node}: {detail}")]
    DegenerateMetric { node: usize, detail: String },
    #[error("induced metric not spacelike at node {node} (min eigenvalue {value:e})")]
    NotSpacelike { node: usize, value: f64 },
    #[error("mean curvature vector not spacelike at node {node}: <H,H> = {value:e}")]
    MeanCurvatureNotSpacelike { node: usize, value: f64 },
    #[error("invalid normal field at node {node}: {detail}")]
    InvalidNormal { node: usize, detail: String },
    #[error("beta out of range at node {node}: |beta| = {value}")]
    BetaOutOfRange { node: usize, value: f64 },
    #[error("poisson right-hand side not mean-zero: integral {integral:e}")]
    Solvability { integral: f64 },
    #[error("iterative solver did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },
    #[error("curve frame undefined at sample {sample}: {detail}")]
    FrameUndefined { sample: usize, detail: String },
    #[error("flow halted at lambda = {last_good_lambda}: {source}")]
    FlowHalt {
        last_good_lambda: f64,
        #[source]
        source: Box<GeomError>,
    },
}

pub type Result<T> = std::result::Result<T, GeomError>;
