//! Real orthonormal spherical harmonics with closed-form angular derivatives.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Value and angular derivatives up to second order at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AngularJet<T> {
    pub f: T,
    pub f_t: T,
    pub f_p: T,
    pub f_tt: T,
    pub f_tp: T,
    pub f_pp: T,
}

impl<T: Real> AngularJet<T> {
    pub fn constant(c: T) -> Self {
        Self { f: c, ..Self::zero() }
    }

    pub fn zero() -> Self {
        Self {
            f: T::zero(),
            f_t: T::zero(),
            f_p: T::zero(),
            f_tt: T::zero(),
            f_tp: T::zero(),
            f_pp: T::zero(),
        }
    }

    pub fn add_scaled(&mut self, c: T, o: &Self) {
        self.f += c * o.f;
        self.f_t += c * o.f_t;
        self.f_p += c * o.f_p;
        self.f_tt += c * o.f_tt;
        self.f_tp += c * o.f_tp;
        self.f_pp += c * o.f_pp;
    }

    /// Product rule up to second order.
    pub fn mul(&self, o: &Self) -> Self {
        Self {
            f: self.f * o.f,
            f_t: self.f_t * o.f + self.f * o.f_t,
            f_p: self.f_p * o.f + self.f * o.f_p,
            f_tt: self.f_tt * o.f + T::lit(2.0) * self.f_t * o.f_t + self.f * o.f_tt,
            f_tp: self.f_tp * o.f + self.f_t * o.f_p + self.f_p * o.f_t + self.f * o.f_tp,
            f_pp: self.f_pp * o.f + T::lit(2.0) * self.f_p * o.f_p + self.f * o.f_pp,
        }
    }
}

/// Unnormalized associated Legendre `P_l^m(cos theta)` (no Condon-Shortley
/// phase) together with `P_{l-1}^m`.
fn legendre_pair<T: Real>(l: usize, m: usize, x: T, s: T) -> (T, T) {
    let mut pmm = T::one();
    for k in 0..m {
        pmm *= T::lit((2 * k + 1) as f64) * s;
    }
    if l == m {
        return (pmm, T::zero());
    }
    let mut prev = pmm;
    let mut cur = x * T::lit((2 * m + 1) as f64) * pmm;
    for ll in (m + 2)..=l {
        let next = (T::lit((2 * ll - 1) as f64) * x * cur - T::lit((ll + m - 1) as f64) * prev)
            / T::lit((ll - m) as f64);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

fn normalization(l: usize, m: usize) -> f64 {
    let mut ratio = 1.0;
    for k in (l - m + 1)..=(l + m) {
        ratio /= k as f64;
    }
    let n = ((2 * l + 1) as f64 / (4.0 * std::f64::consts::PI) * ratio).sqrt();
    if m == 0 {
        n
    } else {
        n * std::f64::consts::SQRT_2
    }
}

/// Real orthonormal `Y_lm`: `cos(m phi)` for `m > 0`, `sin(|m| phi)` for
/// `m < 0`. Requires `0 < theta < pi`.
pub fn real_sh<T: Real>(l: usize, m: i64, theta: T, phi: T) -> AngularJet<T> {
    let am = m.unsigned_abs() as usize;
    assert!(am <= l, "|m| must not exceed l");
    let (x, s) = (theta.cos(), theta.sin());
    let (p, pm1) = legendre_pair(l, am, x, s);
    let lf = T::lit(l as f64);
    let mf = T::lit(am as f64);
    let p_t = (lf * x * p - T::lit((l + am) as f64) * pm1) / s;
    let p_tt = -x / s * p_t - (lf * (lf + T::one()) - mf * mf / (s * s)) * p;
    let (az, az_p, az_pp) = if m > 0 {
        let (c, sn) = ((mf * phi).cos(), (mf * phi).sin());
        (c, -mf * sn, -mf * mf * c)
    } else if m < 0 {
        let (c, sn) = ((mf * phi).cos(), (mf * phi).sin());
        (sn, mf * c, -mf * mf * sn)
    } else {
        (T::one(), T::zero(), T::zero())
    };
    let n = T::lit(normalization(l, am));
    AngularJet {
        f: n * p * az,
        f_t: n * p_t * az,
        f_p: n * p * az_p,
        f_tt: n * p_tt * az,
        f_tp: n * p_t * az_p,
        f_pp: n * p * az_pp,
    }
}

/// Finite real spherical-harmonic expansion `c0 + sum c_lm Y_lm`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HarmonicSeries {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub terms: Vec<HarmonicTerm>,
    /// Zonal terms `coeff * P_l(cos theta)` with plain Legendre polynomials.
    #[serde(default)]
    pub legendre: Vec<LegendreTerm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegendreTerm {
    pub l: usize,
    pub coeff: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub l: usize,
    pub m: i64,
    pub coeff: f64,
}

impl HarmonicSeries {
    pub fn constant(c: f64) -> Self {
        Self { constant: c, ..Self::default() }
    }

    pub fn with_term(mut self, l: usize, m: i64, coeff: f64) -> Self {
        self.terms.push(HarmonicTerm { l, m, coeff });
        self
    }

    /// Adds `coeff * P_l(cos theta)` (plain Legendre polynomial).
    pub fn with_legendre(mut self, l: usize, coeff: f64) -> Self {
        self.legendre.push(LegendreTerm { l, coeff });
        self
    }

    /// Random band-limited series with coefficients uniform in
    /// `[-amplitude, amplitude]` for `1 <= l <= l_max`.
    pub fn random(l_max: usize, amplitude: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = Self::default();
        for l in 1..=l_max {
            for m in -(l as i64)..=(l as i64) {
                s.terms.push(HarmonicTerm { l, m, coeff: rng.gen_range(-amplitude..=amplitude) });
            }
        }
        s
    }

    pub fn max_degree(&self) -> usize {
        let a = self.terms.iter().map(|t| t.l).max().unwrap_or(0);
        a.max(self.legendre.iter().map(|t| t.l).max().unwrap_or(0))
    }

    pub fn is_axisymmetric(&self) -> bool {
        self.terms.iter().all(|t| t.m == 0 || t.coeff == 0.0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.coeff == 0.0) && self.legendre.iter().all(|t| t.coeff == 0.0)
    }

    pub fn jet<T: Real>(&self, theta: T, phi: T) -> AngularJet<T> {
        let mut out = AngularJet::constant(T::lit(self.constant));
        for t in &self.terms {
            out.add_scaled(T::lit(t.coeff), &real_sh(t.l, t.m, theta, phi));
        }
        for t in &self.legendre {
            let scale = (4.0 * std::f64::consts::PI / (2 * t.l + 1) as f64).sqrt();
            out.add_scaled(T::lit(t.coeff * scale), &real_sh(t.l, 0, theta, phi));
        }
        out
    }

    pub fn eval<T: Real>(&self, theta: T, phi: T) -> T {
        self.jet(theta, phi).f
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            constant: self.constant * c,
            terms: self.terms.iter().map(|t| HarmonicTerm { coeff: t.coeff * c, ..*t }).collect(),
            legendre: self.legendre.iter().map(|t| LegendreTerm { coeff: t.coeff * c, ..*t }).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::SurfaceGrid;

    #[test]
    fn orthonormal_on_grid() {
        let g = SurfaceGrid::<f64>::new(24, 48).unwrap();
        let w = g.unit_sphere_weights();
        let modes = [(0, 0), (1, -1), (2, 0), (2, 1), (3, -2), (5, 4)];
        for (a, &(la, ma)) in modes.iter().enumerate() {
            for (b, &(lb, mb)) in modes.iter().enumerate() {
                let s: f64 = (0..g.len())
                    .map(|k| {
                        let (t, p) = g.angles(k);
                        w[k] * real_sh::<f64>(la, ma, t, p).f * real_sh::<f64>(lb, mb, t, p).f
                    })
                    .sum();
                let e = if a == b { 1.0 } else { 0.0 };
                assert!((s - e).abs() < 1e-12, "({la},{ma})x({lb},{mb}) = {s}");
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let (t, p, h) = (0.9f64, 2.1f64, 1e-5);
        for &(l, m) in &[(1, 0), (2, 1), (3, -2), (4, 4), (6, -3)] {
            let j = real_sh::<f64>(l, m, t, p);
            let ft = (real_sh::<f64>(l, m, t + h, p).f - real_sh::<f64>(l, m, t - h, p).f) / (2.0 * h);
            let fp = (real_sh::<f64>(l, m, t, p + h).f - real_sh::<f64>(l, m, t, p - h).f) / (2.0 * h);
            let ftt = (real_sh::<f64>(l, m, t + h, p).f_t - real_sh::<f64>(l, m, t - h, p).f_t) / (2.0 * h);
            let ftp = (real_sh::<f64>(l, m, t, p + h).f_t - real_sh::<f64>(l, m, t, p - h).f_t) / (2.0 * h);
            let fpp = (real_sh::<f64>(l, m, t, p + h).f_p - real_sh::<f64>(l, m, t, p - h).f_p) / (2.0 * h);
            for (a, b) in [(j.f_t, ft), (j.f_p, fp), (j.f_tt, ftt), (j.f_tp, ftp), (j.f_pp, fpp)] {
                assert!((a - b).abs() < 1e-7, "l={l} m={m}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn legendre_helper_matches_p2() {
        let s = HarmonicSeries::default().with_legendre(2, 1.0);
        let t = 0.7f64;
        let x = t.cos();
        assert!((s.eval(t, 0.3) - 0.5 * (3.0 * x * x - 1.0)).abs() < 1e-14);
    }
}
