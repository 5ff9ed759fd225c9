//! Scenario files: TOML documents with dotted sections describing the
//! backend, surface, grid, `beta` policy and flow parameters of a run.
//!
//! ```toml
//! name = "schwarzschild_sphere"
//! seed = 7
//!
//! [backend]
//! kind = "schwarzschild"
//! mass = 1.0
//!
//! [embedding]
//! family = "round_sphere"
//! radius = 4.0
//!
//! [grid]
//! n_theta = 32
//! n_phi = 64
//!
//! [beta]
//! kind = "constant"
//! value = 0.0
//!
//! [flow]
//! dlambda = 0.01
//! steps = 100
//! fd_step = 0.001
//! ```

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::extrinsic::{EmbeddedSurface, EmbeddingSpec, SurfaceOptions, TangentSource};
use crate::flow::BetaPolicy;
use crate::spacetime::{MetricBackend, SCHWARZSCHILD_MARGIN, FLRW_MIN_TIME};
use crate::sphere::SurfaceGrid;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[derive(Default)]
pub enum BackendSpec {
    #[default]
    Minkowski,
    Schwarzschild { mass: f64 },
    Flrw { exponent: f64 },
}


impl BackendSpec {
    pub fn build(&self) -> MetricBackend<f64> {
        match *self {
            BackendSpec::Minkowski => MetricBackend::minkowski(),
            BackendSpec::Schwarzschild { mass } => MetricBackend::schwarzschild(mass),
            BackendSpec::Flrw { exponent } => MetricBackend::flrw(exponent),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { n_theta: 32, n_phi: 64 }
    }
}

impl std::str::FromStr for GridSpec {
    type Err = GeomError;

    /// `"32x64"`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| GeomError::Config(format!("grid `{s}` is not of the form NTHETAxNPHI")))?;
        let parse = |v: &str| {
            v.trim().parse::<usize>().map_err(|_| GeomError::Config(format!("grid `{s}`: `{v}` is not an integer")))
        };
        Ok(Self { n_theta: parse(a)?, n_phi: parse(b)? })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSpec {
    #[serde(default = "default_dlambda")]
    pub dlambda: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// Step of the finite-difference variation along the flow.
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
}

fn default_dlambda() -> f64 {
    0.01
}
fn default_steps() -> usize {
    10
}
fn default_fd_step() -> f64 {
    1e-3
}
fn default_seed() -> u64 {
    7
}

impl Default for FlowSpec {
    fn default() -> Self {
        Self { dlambda: default_dlambda(), steps: default_steps(), fd_step: default_fd_step() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Directory for CSV side files; nothing is written when absent.
    #[serde(default)]
    pub csv_dir: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub backend: BackendSpec,
    pub embedding: EmbeddingSpec,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub beta: BetaPolicy,
    #[serde(default)]
    pub flow: FlowSpec,
    #[serde(default)]
    pub spectral_tangents: bool,
    #[serde(default)]
    pub outputs: OutputSpec,
}

impl Scenario {
    pub fn new(backend: BackendSpec, embedding: EmbeddingSpec) -> Self {
        Self {
            name: String::new(),
            seed: default_seed(),
            backend,
            embedding,
            grid: GridSpec::default(),
            beta: BetaPolicy::default(),
            flow: FlowSpec::default(),
            spectral_tangents: false,
            outputs: OutputSpec::default(),
        }
    }

    /// Parses and validates; TOML errors carry line and column.
    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| GeomError::Config(format!("scenario parse error: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GeomError::Config(format!("cannot read scenario {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Checks every field before any computation starts.
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, why: String| Err(GeomError::Config(format!("{field}: {why}")));
        match self.backend {
            BackendSpec::Schwarzschild { mass } if !(mass > 0.0) => {
                return bad("backend.mass", format!("must be positive, got {mass}"))
            }
            BackendSpec::Flrw { exponent } if !(exponent > 0.0 && exponent < 1.0) => {
                return bad("backend.exponent", format!("must lie in (0, 1), got {exponent}"))
            }
            _ => {}
        }
        if let Err(e) = SurfaceGrid::<f64>::new(self.grid.n_theta, self.grid.n_phi) {
            return bad("grid", e.to_string());
        }
        let (time, radius) = self.embedding.time_and_radius();
        let (t0, r0) = (time.constant, radius.constant);
        if !(r0 > 0.0) {
            return bad("embedding.radius", format!("must be positive, got {r0}"));
        }
        match self.backend {
            BackendSpec::Schwarzschild { mass } if r0 <= 2.0 * mass * (1.0 + SCHWARZSCHILD_MARGIN) => {
                return bad("embedding.radius", format!("{r0} is not outside the horizon r = {}", 2.0 * mass))
            }
            BackendSpec::Flrw { .. } if t0 < FLRW_MIN_TIME => {
                return bad("embedding.time", format!("{t0} is earlier than {FLRW_MIN_TIME}"))
            }
            _ => {}
        }
        match &self.beta {
            BetaPolicy::Constant { value } if !(value.abs() < 1.0) => {
                return bad("beta.value", format!("|beta| must be below 1, got {value}"))
            }
            BetaPolicy::RandomSmooth { max_abs, .. } if !(*max_abs >= 0.0 && *max_abs < 1.0) => {
                return bad("beta.max_abs", format!("must lie in [0, 1), got {max_abs}"))
            }
            _ => {}
        }
        if !(self.flow.dlambda > 0.0) {
            return bad("flow.dlambda", format!("must be positive, got {}", self.flow.dlambda));
        }
        if !(self.flow.fd_step > 0.0) {
            return bad("flow.fd_step", format!("must be positive, got {}", self.flow.fd_step));
        }
        Ok(())
    }

    pub fn grid_arc(&self) -> Result<Arc<SurfaceGrid<f64>>> {
        Ok(Arc::new(SurfaceGrid::new(self.grid.n_theta, self.grid.n_phi)?))
    }

    pub fn surface(&self) -> Result<EmbeddedSurface<f64>> {
        let opts = SurfaceOptions {
            tangents: if self.spectral_tangents { TangentSource::Spectral } else { TangentSource::ClosedForm },
            ..SurfaceOptions::default()
        };
        EmbeddedSurface::from_spec(&self.embedding, self.grid_arc()?, self.backend.build(), opts)
    }
}

/// Parses `zero`, `const:<v>` or `random:<seed>:<l_max>:<max_abs>`.
pub fn parse_beta(s: &str) -> Result<BetaPolicy> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |v: &str| v.parse::<f64>().map_err(|_| GeomError::Config(format!("beta `{s}`: `{v}` is not a number")));
    let int = |v: &str| v.parse::<u64>().map_err(|_| GeomError::Config(format!("beta `{s}`: `{v}` is not an integer")));
    match parts.as_slice() {
        ["zero"] => Ok(BetaPolicy::zero()),
        ["const", v] => Ok(BetaPolicy::Constant { value: num(v)? }),
        ["random", seed, l, m] => Ok(BetaPolicy::RandomSmooth { seed: int(seed)?, l_max: int(l)? as usize, max_abs: num(m)? }),
        _ => Err(GeomError::Config(format!("beta `{s}`: expected zero, const:V or random:SEED:LMAX:MAXABS"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"
name = "s"
[backend]
kind = "schwarzschild"
mass = 1.0
[embedding]
family = "round_sphere"
radius = 4.0
[grid]
n_theta = 16
n_phi = 32
"#;

    #[test]
    fn parse_and_roundtrip() {
        let s = Scenario::from_toml(DOC).unwrap();
        assert_eq!(s.backend, BackendSpec::Schwarzschild { mass: 1.0 });
        assert_eq!(s.seed, 7);
        assert_eq!(Scenario::from_toml(&s.to_toml()).unwrap(), s);
    }

    #[test]
    fn validation_names_field() {
        let e = Scenario::from_toml(&DOC.replace("radius = 4.0", "radius = 1.5")).unwrap_err();
        assert!(e.to_string().contains("embedding.radius"), "{e}");
        let e = Scenario::from_toml(&DOC.replace("n_phi = 32", "n_phi = 31")).unwrap_err();
        assert!(e.to_string().contains("grid"), "{e}");
    }

    #[test]
    fn parse_error_has_position() {
        let e = Scenario::from_toml("[backend\nkind = 1").unwrap_err();
        assert!(e.to_string().contains("line"), "{e}");
    }

    #[test]
    fn beta_flags() {
        assert_eq!(parse_beta("const:0.5").unwrap(), BetaPolicy::Constant { value: 0.5 });
        assert!(matches!(parse_beta("random:3:4:0.9").unwrap(), BetaPolicy::RandomSmooth { seed: 3, l_max: 4, .. }));
        assert!(parse_beta("const").is_err());
        assert_eq!("24x48".parse::<GridSpec>().unwrap(), GridSpec { n_theta: 24, n_phi: 48 });
    }
}
