//! Frenet frames and torsion of closed curves in Euclidean `R^3` and in
//! Minkowski `R^{2,1}` (coordinate 0 timelike).
//!
//! In `R^{2,1}` the curve is spacelike with spacelike curvature vector, so
//! `T` and `N` are spacelike and `B` is the future unit timelike normal. The
//! torsion is the normal connection form `<dN/ds, B>` in both signatures.

use std::f64::consts::TAU;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::scalar::Real;

type V3<T> = [T; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Signature {
    Euclidean,
    Minkowski,
}

impl Signature {
    fn eta<T: Real>(self, i: usize) -> T {
        match (self, i) {
            (Signature::Minkowski, 0) => -T::one(),
            _ => T::one(),
        }
    }

    pub fn dot<T: Real>(self, u: &V3<T>, w: &V3<T>) -> T {
        (0..3).fold(T::zero(), |s, i| s + self.eta::<T>(i) * u[i] * w[i])
    }
}

/// Named closed-form curves on `[0, 2 pi)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveSpec {
    Circle { radius: f64 },
    Ellipse { a: f64, b: f64 },
    /// `(a cos t, a sin t, b t)`; not closed.
    Helix { a: f64, b: f64 },
    /// `(cos t, sin t, amp sin(freq t))`.
    Wobble { amp: f64, freq: f64 },
    /// `(0, r cos t, r sin t)` in the `t = 0` plane of `R^{2,1}`.
    SpacelikeCircle { radius: f64 },
    /// `(amp sin(freq t), cos t, sin t)` in `R^{2,1}`.
    TiltedCircle { amp: f64, freq: f64 },
    /// The base curve composed with `t = s + amp sin s`, `|amp| < 1`.
    Reparametrized { base: Box<CurveSpec>, amp: f64 },
}

/// Position and first three parameter derivatives.
pub type CurveJet<T> = [V3<T>; 4];

impl CurveSpec {
    pub fn signature(&self) -> Signature {
        match self {
            CurveSpec::SpacelikeCircle { .. } | CurveSpec::TiltedCircle { .. } => Signature::Minkowski,
            CurveSpec::Reparametrized { base, .. } => base.signature(),
            _ => Signature::Euclidean,
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            CurveSpec::Helix { .. } => false,
            CurveSpec::Reparametrized { base, .. } => base.is_closed(),
            _ => true,
        }
    }

    /// Looks up a library curve by name.
    pub fn named(name: &str) -> Option<Self> {
        Some(match name {
            "circle" => CurveSpec::Circle { radius: 1.0 },
            "ellipse" => CurveSpec::Ellipse { a: 2.0, b: 1.0 },
            "helix" => CurveSpec::Helix { a: 1.0, b: 0.5 },
            "wobble" => CurveSpec::Wobble { amp: 0.2, freq: 3.0 },
            "spacelike-circle" => CurveSpec::SpacelikeCircle { radius: 1.0 },
            "tilted-circle" => CurveSpec::TiltedCircle { amp: 0.2, freq: 2.0 },
            _ => return None,
        })
    }

    pub fn jet<T: Real>(&self, t: T) -> CurveJet<T> {
        let z = T::zero();
        let (c, s) = (t.cos(), t.sin());
        let trig = |amp: f64, w: f64| {
            // amp sin(w t) and its derivatives
            let (a, w) = (T::lit(amp), T::lit(w));
            let (cw, sw) = ((w * t).cos(), (w * t).sin());
            [a * sw, a * w * cw, -a * w * w * sw, -a * w * w * w * cw]
        };
        let circ = |r: T| [[r * c, r * s], [-r * s, r * c], [-r * c, -r * s], [r * s, -r * c]];
        match self {
            CurveSpec::Circle { radius } => circ(T::lit(*radius)).map(|[x, y]| [x, y, z]),
            CurveSpec::Ellipse { a, b } => {
                let (a, b) = (T::lit(*a), T::lit(*b));
                [[a * c, b * s, z], [-a * s, b * c, z], [-a * c, -b * s, z], [a * s, -b * c, z]]
            }
            CurveSpec::Helix { a, b } => {
                let (a, b) = (T::lit(*a), T::lit(*b));
                [[a * c, a * s, b * t], [-a * s, a * c, b], [-a * c, -a * s, z], [a * s, -a * c, z]]
            }
            CurveSpec::Wobble { amp, freq } => {
                let h = trig(*amp, *freq);
                let xy = circ(T::one());
                [0, 1, 2, 3].map(|d| [xy[d][0], xy[d][1], h[d]])
            }
            CurveSpec::SpacelikeCircle { radius } => circ(T::lit(*radius)).map(|[x, y]| [z, x, y]),
            CurveSpec::TiltedCircle { amp, freq } => {
                let h = trig(*amp, *freq);
                let xy = circ(T::one());
                [0, 1, 2, 3].map(|d| [h[d], xy[d][0], xy[d][1]])
            }
            CurveSpec::Reparametrized { base, amp } => {
                let a = T::lit(*amp);
                let u = t + a * s;
                let (u1, u2, u3) = (T::one() + a * c, -a * s, -a * c);
                let g = base.jet(u);
                let mut out = [[z; 3]; 4];
                for i in 0..3 {
                    out[0][i] = g[0][i];
                    out[1][i] = g[1][i] * u1;
                    out[2][i] = g[2][i] * u1 * u1 + g[1][i] * u2;
                    out[3][i] = g[3][i] * u1 * u1 * u1 + T::lit(3.0) * g[2][i] * u1 * u2 + g[1][i] * u3;
                }
                out
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ClosedCurve<'a> {
    pub spec: &'a CurveSpec,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrenetData<T> {
    pub signature: Signature,
    pub params: Vec<T>,
    pub tangent: Vec<V3<T>>,
    pub normal: Vec<V3<T>>,
    pub binormal: Vec<V3<T>>,
    pub curvature: Vec<T>,
    pub torsion: Vec<T>,
    /// Triple-product torsion, Euclidean curves only.
    pub torsion_triple: Option<Vec<T>>,
    pub torsion_variance: T,
    /// Largest deviation of `<e_a, e_b>` from the signature.
    pub orthonormality_defect: T,
}

pub const MIN_CURVATURE: f64 = 1e-8;

fn cross<T: Real>(u: &V3<T>, w: &V3<T>) -> V3<T> {
    [u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]]
}

struct FrameAt<T> {
    t: V3<T>,
    n: V3<T>,
    b: V3<T>,
    kappa: T,
    speed: T,
}

fn frame_at<T: Real>(spec: &CurveSpec, sig: Signature, param: T, sample: usize) -> Result<FrameAt<T>> {
    let [_, d1, d2, _] = spec.jet(param);
    let sp2 = sig.dot(&d1, &d1);
    if !(sp2 > T::zero()) {
        return Err(GeomError::FrameUndefined { sample, detail: "tangent is not spacelike".into() });
    }
    let speed = sp2.sqrt();
    let t = d1.map(|x| x / speed);
    let proj = sig.dot(&d2, &t);
    let acc: V3<T> = [0, 1, 2].map(|i| (d2[i] - proj * t[i]) / sp2);
    let k2 = sig.dot(&acc, &acc);
    if !(k2 > T::lit(MIN_CURVATURE * MIN_CURVATURE)) {
        return Err(GeomError::FrameUndefined {
            sample,
            detail: format!("curvature vector degenerate, <k, k> = {}", k2.to_f64_lossy()),
        });
    }
    let kappa = k2.sqrt();
    let n = acc.map(|x| x / kappa);
    // Raise the Euclidean cross product with the signature to get the normal.
    let c = cross(&t, &n);
    let mut b = [0, 1, 2].map(|i| sig.eta::<T>(i) * c[i]);
    let bn = sig.dot(&b, &b).abs().sqrt();
    b = b.map(|x| x / bn);
    if sig == Signature::Minkowski && b[0] < T::zero() {
        b = b.map(|x| -x);
    }
    Ok(FrameAt { t, n, b, kappa, speed })
}

impl<'a> ClosedCurve<'a> {
    pub fn new(spec: &'a CurveSpec, samples: usize) -> Self {
        Self { spec, samples }
    }

    pub fn frenet<T: Real>(&self) -> Result<FrenetData<T>> {
        let sig = self.spec.signature();
        let ns = self.samples.max(1);
        let h = T::lit(1e-3);
        let mut out = FrenetData {
            signature: sig,
            params: Vec::with_capacity(ns),
            tangent: Vec::with_capacity(ns),
            normal: Vec::with_capacity(ns),
            binormal: Vec::with_capacity(ns),
            curvature: Vec::with_capacity(ns),
            torsion: Vec::with_capacity(ns),
            torsion_triple: (sig == Signature::Euclidean).then(Vec::new),
            torsion_variance: T::zero(),
            orthonormality_defect: T::zero(),
        };
        for k in 0..ns {
            let param = T::lit(TAU * k as f64 / ns as f64);
            let f = frame_at(self.spec, sig, param, k)?;
            let nb = |o: f64| frame_at(self.spec, sig, param + T::lit(o) * h, k).map(|g| g.n);
            let (p1, m1, p2, m2) = (nb(1.0)?, nb(-1.0)?, nb(2.0)?, nb(-2.0)?);
            let dn: V3<T> = [0, 1, 2].map(|i| {
                (-p2[i] + T::lit(8.0) * p1[i] - T::lit(8.0) * m1[i] + m2[i]) / (T::lit(12.0) * h * f.speed)
            });
            out.torsion.push(sig.dot(&dn, &f.b));
            if let Some(tt) = out.torsion_triple.as_mut() {
                let [_, d1, d2, d3] = self.spec.jet(param);
                let c = cross(&d1, &d2);
                let c2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
                tt.push((c[0] * d3[0] + c[1] * d3[1] + c[2] * d3[2]) / c2);
            }
            let legs = [f.t, f.n, f.b];
            let expect = [T::one(), T::one(), sig.eta::<T>(0)];
            for a in 0..3 {
                for b in 0..3 {
                    let e = if a == b { expect[a] } else { T::zero() };
                    let d = (sig.dot(&legs[a], &legs[b]) - e).abs();
                    out.orthonormality_defect = out.orthonormality_defect.max(d);
                }
            }
            out.params.push(param);
            out.tangent.push(f.t);
            out.normal.push(f.n);
            out.binormal.push(f.b);
            out.curvature.push(f.kappa);
        }
        let m = mean(&out.torsion);
        out.torsion_variance = out.torsion.iter().map(|&x| (x - m) * (x - m)).fold(T::zero(), |a, b| a + b)
            / T::lit(ns as f64);
        Ok(out)
    }
}

fn mean<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |a, &b| a + b) / T::lit(v.len().max(1) as f64)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TimeFlatCurve {
    pub is_time_flat: bool,
    pub mean_torsion: f64,
    pub max_deviation: f64,
}

pub const CURVE_TIME_FLAT_REL: f64 = 1e-6;

pub fn is_time_flat_curve<T: Real>(curve: &ClosedCurve<'_>) -> Result<TimeFlatCurve> {
    let d = curve.frenet::<T>()?;
    let m = mean(&d.torsion).to_f64_lossy();
    let dev = d.torsion.iter().fold(0.0f64, |a, &x| a.max((x.to_f64_lossy() - m).abs()));
    Ok(TimeFlatCurve { is_time_flat: dev < CURVE_TIME_FLAT_REL * (1.0 + m.abs()), mean_torsion: m, max_deviation: dev })
}

impl<T: Real> FrenetData<T> {
    /// Columns `s, kappa, tau` with `s` the arclength from the first sample
    /// (trapezoidal in the parameter).
    pub fn write_csv<W: Write>(&self, spec: &CurveSpec, mut w: W) -> io::Result<()> {
        writeln!(w, "s,kappa,tau")?;
        let sig = self.signature;
        let speed = |p: T| {
            let d1 = spec.jet(p)[1];
            sig.dot(&d1, &d1).sqrt().to_f64_lossy()
        };
        let mut s = 0.0;
        for k in 0..self.params.len() {
            if k > 0 {
                let dp = (self.params[k] - self.params[k - 1]).to_f64_lossy();
                s += 0.5 * dp * (speed(self.params[k]) + speed(self.params[k - 1]));
            }
            writeln!(w, "{s},{},{}", self.curvature[k], self.torsion[k])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_and_helix() {
        let c = CurveSpec::Circle { radius: 1.0 };
        let d = ClosedCurve::new(&c, 64).frenet::<f64>().unwrap();
        assert!(d.curvature.iter().all(|k| (k - 1.0).abs() < 1e-12));
        assert!(d.torsion.iter().all(|t| t.abs() < 1e-10));
        let h = CurveSpec::Helix { a: 1.0, b: 0.5 };
        let d = ClosedCurve::new(&h, 64).frenet::<f64>().unwrap();
        assert!(d.curvature.iter().all(|k| (k - 0.8).abs() < 1e-12));
        assert!(d.torsion.iter().all(|t| (t - 0.4).abs() < 1e-10));
        assert!(d.torsion_triple.unwrap().iter().all(|t| (t - 0.4).abs() < 1e-12));
    }

    #[test]
    fn minkowski_frame_signature() {
        let c = CurveSpec::TiltedCircle { amp: 0.2, freq: 2.0 };
        let d = ClosedCurve::new(&c, 64).frenet::<f64>().unwrap();
        assert!(d.orthonormality_defect < 1e-12);
        assert!(d.binormal.iter().all(|b| b[0] > 0.0));
        assert!(!is_time_flat_curve::<f64>(&ClosedCurve::new(&c, 64)).unwrap().is_time_flat);
        let p = CurveSpec::SpacelikeCircle { radius: 2.0 };
        let f = is_time_flat_curve::<f64>(&ClosedCurve::new(&p, 64)).unwrap();
        assert!(f.is_time_flat && f.mean_torsion.abs() < 1e-10);
    }

    #[test]
    fn straight_line_is_rejected() {
        let c = CurveSpec::Ellipse { a: 1.0, b: 0.0 };
        assert!(matches!(ClosedCurve::new(&c, 8).frenet::<f64>(), Err(GeomError::FrameUndefined { .. })));
    }
}
