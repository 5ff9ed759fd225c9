//! Analytic (3+1) spacetime backends: metric, Christoffel symbols, Einstein
//! tensor, and a dominant-energy sampler.
//!
//! Every backend uses a Cartesian-type chart `(t, x, y, z)` so that coordinate
//! components of smooth vector fields along a sphere are smooth functions on it:
//!
//! * Minkowski: `-dt^2 + dx^2`.
//! * Schwarzschild (static chart in Cartesian form):
//!   `-(1 - 2m/r) dt^2 + (delta_ij + s(r) n_i n_j) dx^i dx^j`, `s = 2m / (r - 2m)`.
//! * FLRW (comoving Cartesian): `-dt^2 + t^(2q) delta_ij dx^i dx^j`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::linalg::{inner, invert, Chr4, Mat4, Vec4};
use crate::scalar::Real;

/// Relative exterior margin for the Schwarzschild chart.
pub const SCHWARZSCHILD_MARGIN: f64 = 1e-6;
/// Earliest admissible FLRW time.
pub const FLRW_MIN_TIME: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    CartesianMinkowski,
    SchwarzschildStatic,
    FlrwComoving,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacetimeEvent<T> {
    pub coords: Vec4<T>,
    pub chart: Chart,
}

impl<T: Real> SpacetimeEvent<T> {
    pub fn new(chart: Chart, coords: Vec4<T>) -> Self {
        Self { coords, chart }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BackendKind<T> {
    Minkowski,
    Schwarzschild { mass: T },
    /// Scale factor `a(t) = t^exponent`; `exponent = 2/3` is dust.
    Flrw { exponent: T },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DerivativeMode<T> {
    Analytic,
    /// `h1` for Christoffel symbols, `h2` for curvature; both scaled by
    /// `max(1, |coordinate|)`.
    FiniteDifference { h1: T, h2: T },
}

impl<T: Real> DerivativeMode<T> {
    pub fn default_fd() -> Self {
        DerivativeMode::FiniteDifference {
            h1: T::lit(1e-4),
            h2: T::lit(1e-3),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricBackend<T> {
    pub kind: BackendKind<T>,
    pub mode: DerivativeMode<T>,
}

/// Result of sampling `T(u, v)` over future-timelike unit pairs.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DecSample<T> {
    pub min_value: T,
    pub satisfied: bool,
}

fn fd4<T: Real, const N: usize, F>(f: F, x: &Vec4<T>, dir: usize, h: T) -> [[T; N]; N]
where
    F: Fn(&Vec4<T>) -> [[T; N]; N],
{
    let shift = |k: T| {
        let mut y = *x;
        y[dir] += k * h;
        f(&y)
    };
    let (p1, m1, p2, m2) = (shift(T::one()), shift(-T::one()), shift(T::lit(2.0)), shift(T::lit(-2.0)));
    let mut out = [[T::zero(); N]; N];
    let den = T::lit(12.0) * h;
    for i in 0..N {
        for j in 0..N {
            out[i][j] = (-p2[i][j] + T::lit(8.0) * p1[i][j] - T::lit(8.0) * m1[i][j] + m2[i][j]) / den;
        }
    }
    out
}

fn step_for<T: Real>(h: T, coord: T) -> T {
    h * T::one().max(coord.abs())
}

impl<T: Real> MetricBackend<T> {
    pub fn minkowski() -> Self {
        Self { kind: BackendKind::Minkowski, mode: DerivativeMode::Analytic }
    }

    pub fn schwarzschild(mass: T) -> Self {
        Self { kind: BackendKind::Schwarzschild { mass }, mode: DerivativeMode::Analytic }
    }

    pub fn flrw(exponent: T) -> Self {
        Self { kind: BackendKind::Flrw { exponent }, mode: DerivativeMode::Analytic }
    }

    pub fn with_mode(mut self, mode: DerivativeMode<T>) -> Self {
        self.mode = mode;
        self
    }

    pub fn chart(&self) -> Chart {
        match self.kind {
            BackendKind::Minkowski => Chart::CartesianMinkowski,
            BackendKind::Schwarzschild { .. } => Chart::SchwarzschildStatic,
            BackendKind::Flrw { .. } => Chart::FlrwComoving,
        }
    }

    /// Checks that raw chart coordinates are admissible.
    pub fn check_admissible(&self, x: &Vec4<T>) -> Result<()> {
        if x.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::Domain("non-finite coordinates".into()));
        }
        match self.kind {
            BackendKind::Minkowski => Ok(()),
            BackendKind::Schwarzschild { mass } => {
                let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
                let bound = T::lit(2.0) * mass * (T::one() + T::lit(SCHWARZSCHILD_MARGIN));
                if r <= bound {
                    Err(GeomError::Domain(format!(
                        "Schwarzschild chart requires r > 2m(1 + 1e-6) = {bound}, got r = {r}"
                    )))
                } else {
                    Ok(())
                }
            }
            BackendKind::Flrw { .. } => {
                if x[0] <= T::lit(FLRW_MIN_TIME) {
                    Err(GeomError::Domain(format!("FLRW chart requires t > 0.1, got t = {}", x[0])))
                } else {
                    Ok(())
                }
            }
        }
    }

    fn check_event(&self, ev: &SpacetimeEvent<T>) -> Result<()> {
        if ev.chart != self.chart() {
            return Err(GeomError::Domain(format!(
                "event chart {:?} does not match backend chart {:?}",
                ev.chart,
                self.chart()
            )));
        }
        self.check_admissible(&ev.coords)
    }

    pub fn metric_at(&self, ev: &SpacetimeEvent<T>) -> Result<Mat4<T>> {
        self.check_event(ev)?;
        Ok(self.metric(&ev.coords))
    }

    pub fn christoffel_at(&self, ev: &SpacetimeEvent<T>) -> Result<Chr4<T>> {
        self.check_event(ev)?;
        Ok(self.christoffel(&ev.coords))
    }

    pub fn einstein_at(&self, ev: &SpacetimeEvent<T>) -> Result<Mat4<T>> {
        self.check_event(ev)?;
        Ok(self.einstein(&ev.coords))
    }

    /// Metric components at admissible raw coordinates.
    pub fn metric(&self, x: &Vec4<T>) -> Mat4<T> {
        let mut g = [[T::zero(); 4]; 4];
        match self.kind {
            BackendKind::Minkowski => {
                g[0][0] = -T::one();
                for i in 1..4 {
                    g[i][i] = T::one();
                }
            }
            BackendKind::Schwarzschild { mass } => {
                let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
                let two_m = T::lit(2.0) * mass;
                g[0][0] = -(T::one() - two_m / r);
                let s = two_m / (r - two_m);
                for i in 1..4 {
                    for j in 1..4 {
                        let d = if i == j { T::one() } else { T::zero() };
                        g[i][j] = d + s * x[i] * x[j] / (r * r);
                    }
                }
            }
            BackendKind::Flrw { exponent } => {
                let a2 = x[0].powf(T::lit(2.0) * exponent);
                g[0][0] = -T::one();
                for i in 1..4 {
                    g[i][i] = a2;
                }
            }
        }
        g
    }

    /// Closed-form metric derivatives `dg[c][a][b] = d_c g_ab`.
    pub fn metric_derivatives(&self, x: &Vec4<T>) -> [Mat4<T>; 4] {
        let mut dg = [[[T::zero(); 4]; 4]; 4];
        match self.kind {
            BackendKind::Minkowski => {}
            BackendKind::Schwarzschild { mass } => {
                let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
                let two_m = T::lit(2.0) * mass;
                let n = [T::zero(), x[1] / r, x[2] / r, x[3] / r];
                let s = two_m / (r - two_m);
                let ds = -two_m / ((r - two_m) * (r - two_m));
                let df = two_m / (r * r);
                let dn = |i: usize, k: usize| {
                    let d = if i == k { T::one() } else { T::zero() };
                    (d - n[i] * n[k]) / r
                };
                for k in 1..4 {
                    dg[k][0][0] = -df * n[k];
                    for i in 1..4 {
                        for j in 1..4 {
                            dg[k][i][j] = ds * n[k] * n[i] * n[j] + s * (dn(i, k) * n[j] + n[i] * dn(j, k));
                        }
                    }
                }
            }
            BackendKind::Flrw { exponent } => {
                let t = x[0];
                let a = t.powf(exponent);
                let adot = exponent * t.powf(exponent - T::one());
                for i in 1..4 {
                    dg[0][i][i] = T::lit(2.0) * a * adot;
                }
            }
        }
        dg
    }

    fn christoffel_from_dg(g: &Mat4<T>, dg: &[Mat4<T>; 4]) -> Chr4<T> {
        let ginv = invert(g).expect("metric is nondegenerate on admissible events");
        let half = T::lit(0.5);
        let mut chr = [[[T::zero(); 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for c in b..4 {
                    let mut s = T::zero();
                    for d in 0..4 {
                        s += ginv[a][d] * (dg[b][d][c] + dg[c][d][b] - dg[d][b][c]);
                    }
                    chr[a][b][c] = half * s;
                    chr[a][c][b] = half * s;
                }
            }
        }
        chr
    }

    /// Christoffel symbols `chr[a][b][c]` in the configured derivative mode.
    pub fn christoffel(&self, x: &Vec4<T>) -> Chr4<T> {
        let g = self.metric(x);
        let dg = match self.mode {
            DerivativeMode::Analytic => self.metric_derivatives(x),
            DerivativeMode::FiniteDifference { h1, .. } => {
                let mut dg = [[[T::zero(); 4]; 4]; 4];
                for (c, slot) in dg.iter_mut().enumerate() {
                    *slot = fd4(|y| self.metric(y), x, c, step_for(h1, x[c]));
                }
                dg
            }
        };
        Self::christoffel_from_dg(&g, &dg)
    }

    /// Closed-form Einstein tensor (covariant components).
    pub fn einstein_closed_form(&self, x: &Vec4<T>) -> Mat4<T> {
        let mut out = [[T::zero(); 4]; 4];
        if let BackendKind::Flrw { exponent: q } = self.kind {
            let t = x[0];
            let a2 = t.powf(T::lit(2.0) * q);
            out[0][0] = T::lit(3.0) * q * q / (t * t);
            let pressure_term = -(T::lit(3.0) * q * q - T::lit(2.0) * q) / (t * t) * a2;
            for i in 1..4 {
                out[i][i] = pressure_term;
            }
        }
        out
    }

    /// Einstein tensor assembled from Christoffel symbols and their
    /// fourth-order central differences with step `h` (scaled per coordinate).
    pub fn einstein_from_christoffels<F>(&self, x: &Vec4<T>, chr_at: F, h: T) -> Mat4<T>
    where
        F: Fn(&Vec4<T>) -> Chr4<T>,
    {
        let g = self.metric(x);
        let ginv = invert(&g).expect("nondegenerate metric");
        let chr = chr_at(x);
        // dchr[c][a][b][d] = d_c chr^a_{bd}
        let mut dchr = [[[[T::zero(); 4]; 4]; 4]; 4];
        for c in 0..4 {
            let hc = step_for(h, x[c]);
            let eval = |k: T| {
                let mut y = *x;
                y[c] += k * hc;
                chr_at(&y)
            };
            let (p1, m1, p2, m2) = (eval(T::one()), eval(-T::one()), eval(T::lit(2.0)), eval(T::lit(-2.0)));
            let den = T::lit(12.0) * hc;
            for a in 0..4 {
                for b in 0..4 {
                    for d in 0..4 {
                        dchr[c][a][b][d] = (-p2[a][b][d] + T::lit(8.0) * p1[a][b][d]
                            - T::lit(8.0) * m1[a][b][d]
                            + m2[a][b][d])
                            / den;
                    }
                }
            }
        }
        let mut ric = [[T::zero(); 4]; 4];
        for b in 0..4 {
            for d in 0..4 {
                let mut s = T::zero();
                for a in 0..4 {
                    s += dchr[a][a][d][b] - dchr[d][a][a][b];
                    for e in 0..4 {
                        s += chr[a][a][e] * chr[e][d][b] - chr[a][d][e] * chr[e][a][b];
                    }
                }
                ric[b][d] = s;
            }
        }
        let mut scalar = T::zero();
        for b in 0..4 {
            for d in 0..4 {
                scalar += ginv[b][d] * ric[b][d];
            }
        }
        let mut out = [[T::zero(); 4]; 4];
        for b in 0..4 {
            for d in 0..4 {
                let sym = T::lit(0.5) * (ric[b][d] + ric[d][b]);
                out[b][d] = sym - T::lit(0.5) * scalar * g[b][d];
            }
        }
        out
    }

    /// Einstein tensor in the configured derivative mode.
    pub fn einstein(&self, x: &Vec4<T>) -> Mat4<T> {
        match self.mode {
            DerivativeMode::Analytic => self.einstein_closed_form(x),
            DerivativeMode::FiniteDifference { h2, .. } => {
                self.einstein_from_christoffels(x, |y| self.christoffel(y), h2)
            }
        }
    }

    /// Covariant divergence `g^{ac} nabla_c G_ab` by fourth-order differences of
    /// the Einstein tensor with step `h`.
    pub fn einstein_divergence(&self, x: &Vec4<T>, h: T) -> Vec4<T> {
        let g = self.metric(x);
        let ginv = invert(&g).expect("nondegenerate metric");
        let chr = self.christoffel(x);
        let gt = self.einstein(x);
        let mut dgt = [[[T::zero(); 4]; 4]; 4];
        for (c, slot) in dgt.iter_mut().enumerate() {
            *slot = fd4(|y| self.einstein(y), x, c, step_for(h, x[c]));
        }
        let mut out = [T::zero(); 4];
        for (b, o) in out.iter_mut().enumerate() {
            let mut s = T::zero();
            for a in 0..4 {
                for c in 0..4 {
                    let mut cov = dgt[c][a][b];
                    for d in 0..4 {
                        cov -= chr[d][c][a] * gt[d][b] + chr[d][c][b] * gt[a][d];
                    }
                    s += ginv[a][c] * cov;
                }
            }
            *o = s;
        }
        out
    }

    /// Orthonormal tetrad at `x` (first leg future timelike) by Gram-Schmidt
    /// from the coordinate basis.
    pub fn tetrad(&self, x: &Vec4<T>) -> [Vec4<T>; 4] {
        let g = self.metric(x);
        let mut legs = [[T::zero(); 4]; 4];
        for (a, leg) in legs.iter_mut().enumerate() {
            leg[a] = T::one();
        }
        for a in 0..4 {
            let mut v = legs[a];
            for b in 0..a {
                let eb = legs[b];
                let sign = if b == 0 { -T::one() } else { T::one() };
                let c = inner(&g, &v, &eb) * sign;
                for k in 0..4 {
                    v[k] -= c * eb[k];
                }
            }
            let n2 = inner(&g, &v, &v).abs().sqrt();
            for k in v.iter_mut() {
                *k /= n2;
            }
            legs[a] = v;
        }
        legs
    }

    /// Samples `T(u, v) = G(u, v) / 8 pi` over `n_samples` random pairs of
    /// future-timelike unit vectors; returns the minimum and whether it is at
    /// least `-tolerance`.
    pub fn dec_sample_check(
        &self,
        ev: &SpacetimeEvent<T>,
        n_samples: usize,
        tolerance: T,
        seed: u64,
    ) -> Result<DecSample<T>> {
        self.check_event(ev)?;
        let x = ev.coords;
        let tet = self.tetrad(&x);
        let gt = self.einstein(&x);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random_unit = |rng: &mut ChaCha8Rng| -> Vec4<T> {
            let chi = T::lit(rng.gen_range(0.0..2.0));
            let z: f64 = rng.gen_range(-1.0..1.0);
            let ph: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let s = (1.0 - z * z).sqrt();
            let dir = [T::lit(s * ph.cos()), T::lit(s * ph.sin()), T::lit(z)];
            let mut u = [T::zero(); 4];
            for k in 0..4 {
                u[k] = chi.cosh() * tet[0][k]
                    + chi.sinh() * (dir[0] * tet[1][k] + dir[1] * tet[2][k] + dir[2] * tet[3][k]);
            }
            u
        };
        let eight_pi = T::lit(8.0) * T::PI();
        let mut min_value = T::infinity();
        for _ in 0..n_samples.max(1) {
            let u = random_unit(&mut rng);
            let v = random_unit(&mut rng);
            min_value = min_value.min(inner(&gt, &u, &v) / eight_pi);
        }
        Ok(DecSample { min_value, satisfied: min_value >= -tolerance })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn ev(chart: Chart, c: [f64; 4]) -> SpacetimeEvent<f64> {
        SpacetimeEvent::new(chart, c)
    }

    #[test]
    fn minkowski_metric_is_flat() {
        let b = MetricBackend::<f64>::minkowski();
        let g = b.metric_at(&ev(Chart::CartesianMinkowski, [0.3, 1.0, -2.0, 5.0])).unwrap();
        for a in 0..4 {
            for c in 0..4 {
                let e = if a != c { 0.0 } else if a == 0 { -1.0 } else { 1.0 };
                assert_eq!(g[a][c], e);
            }
        }
        let chr = b.christoffel(&[0.0, 1.0, 2.0, 3.0]);
        assert!(chr.iter().flatten().flatten().all(|v| *v == 0.0));
        assert_eq!(b.einstein(&[0.0, 1.0, 2.0, 3.0]), [[0.0; 4]; 4]);
    }

    #[test]
    fn schwarzschild_values_at_r4() {
        let b = MetricBackend::schwarzschild(1.0);
        let x = ev(Chart::SchwarzschildStatic, [0.0, 4.0, 0.0, 0.0]);
        let g = b.metric_at(&x).unwrap();
        assert!((g[0][0] + 0.5).abs() < 1e-15);
        assert!((g[1][1] - 2.0).abs() < 1e-15);
        assert!((g[2][2] - 1.0).abs() < 1e-15);
        let chr = b.christoffel_at(&x).unwrap();
        assert!((chr[1][0][0] - 0.03125).abs() < 1e-15);
    }

    #[test]
    fn schwarzschild_rejects_interior() {
        let b = MetricBackend::schwarzschild(1.0);
        let err = b.metric_at(&ev(Chart::SchwarzschildStatic, [0.0, 1.5, 0.0, 0.0])).unwrap_err();
        assert!(matches!(err, GeomError::Domain(ref m) if m.contains("r > 2m")));
        let wrong_chart = b.metric_at(&ev(Chart::CartesianMinkowski, [0.0, 4.0, 0.0, 0.0]));
        assert!(wrong_chart.is_err());
    }

    #[test]
    fn flrw_metric_and_friedmann() {
        let b = MetricBackend::flrw(2.0 / 3.0);
        let x = ev(Chart::FlrwComoving, [1.0, 0.2, 0.1, -0.4]);
        let g = b.metric_at(&x).unwrap();
        assert!((g[1][1] - 1.0).abs() < 1e-15 && (g[0][0] + 1.0).abs() < 1e-15);
        let gt = b.einstein_at(&x).unwrap();
        assert!((gt[0][0] - 4.0 / 3.0).abs() < 1e-14);
        assert!(gt[1][1].abs() < 1e-14);
        assert!(b.metric_at(&ev(Chart::FlrwComoving, [0.05, 0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn fd_christoffels_match_analytic() {
        let b = MetricBackend::schwarzschild(1.0);
        let fd = b.with_mode(DerivativeMode::default_fd());
        let x = [0.0, 3.0, -1.5, 2.2];
        let (ca, cf) = (b.christoffel(&x), fd.christoffel(&x));
        let mut m = 0.0f64;
        for a in 0..4 {
            m = m.max(max_abs_diff(&ca[a], &cf[a]));
        }
        assert!(m < 1e-8, "max diff {m}");
    }

    #[test]
    fn fd_einstein_vanishes_for_schwarzschild() {
        let b = MetricBackend::schwarzschild(1.0).with_mode(DerivativeMode::default_fd());
        let gt = b.einstein(&[0.0, 4.0, 0.0, 0.0]);
        let m = gt.iter().flatten().fold(0.0f64, |a, v| a.max(f64::abs(*v)));
        assert!(m < 1e-6, "max |G| = {m}");
    }

    #[test]
    fn fd_einstein_matches_friedmann() {
        let b = MetricBackend::flrw(2.0 / 3.0);
        let fd = b.einstein_from_christoffels(&[1.3, 0.1, 0.2, 0.3], |y| b.christoffel(y), 1e-3);
        let cf = b.einstein_closed_form(&[1.3, 0.1, 0.2, 0.3]);
        assert!(max_abs_diff(&fd, &cf) < 1e-8);
    }

    #[test]
    fn dec_samples() {
        let m = MetricBackend::<f64>::minkowski();
        let s = m.dec_sample_check(&ev(Chart::CartesianMinkowski, [0.0; 4]), 50, 1e-12, 1).unwrap();
        assert_eq!(s.min_value, 0.0);
        assert!(s.satisfied);
        let f = MetricBackend::flrw(2.0 / 3.0);
        let s = f.dec_sample_check(&ev(Chart::FlrwComoving, [1.0, 0.0, 0.0, 0.0]), 200, 1e-12, 2).unwrap();
        assert!(s.min_value >= 0.0 && s.satisfied);
        let sch = MetricBackend::schwarzschild(1.0).with_mode(DerivativeMode::default_fd());
        let s = sch
            .dec_sample_check(&ev(Chart::SchwarzschildStatic, [0.0, 4.0, 0.5, 0.0]), 100, 1e-6, 3)
            .unwrap();
        assert!(s.min_value.abs() < 1e-6 / (8.0 * std::f64::consts::PI));
    }

    #[test]
    fn tetrad_is_orthonormal() {
        let b = MetricBackend::schwarzschild(1.0);
        let x = [0.0, 2.5, 1.0, -0.7];
        let g = b.metric(&x);
        let t = b.tetrad(&x);
        for a in 0..4 {
            for c in 0..4 {
                let e = if a != c { 0.0 } else if a == 0 { -1.0 } else { 1.0 };
                assert!(f64::abs(inner(&g, &t[a], &t[c]) - e) < 1e-13);
            }
        }
    }
}
