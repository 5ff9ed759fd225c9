//! Spacelike hypersurfaces `(M, g, k)` of the spacetime backends, their
//! constraint data, and numerical checks of the identities relating the
//! geometry of a surface in `M` to `g`, `k` and the matter densities.

pub mod algebra;
pub mod identities;
pub mod surface;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{invert, inner, Chr3, Mat3, Vec3, Vec4};
use crate::scalar::Real;
use crate::spacetime::MetricBackend;

pub use algebra::{fuzz_curvature_decomposition, gram_schmidt, decomposition_residual, random_decomposition_inputs, DecompositionInputs};
pub use identities::*;
pub use surface::SliceSurface;

/// Analytic spacelike hypersurfaces in Cartesian slice coordinates `x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SliceKind {
    /// `t = 0` in Minkowski.
    MinkowskiFlat,
    /// `t = const` in Schwarzschild (static chart).
    SchwarzschildStatic { mass: f64 },
    /// `t = epsilon (x^2 - y^2) / 2` in Minkowski.
    MinkowskiGraph { epsilon: f64 },
    /// `t = time` in spatially flat FLRW with `a = t^exponent`.
    FlrwConstantTime { exponent: f64, time: f64 },
}

#[derive(Clone, Copy, Debug)]
pub struct SliceBackend<T> {
    pub kind: SliceKind,
    /// Relative step of the fourth-order central differences.
    pub fd_step: T,
}

/// Point data of the slice together with its constraint residuals.
#[derive(Clone, Copy, Debug)]
pub struct SliceData<T> {
    pub g: Mat3<T>,
    pub k: Mat3<T>,
    pub scalar_curvature: T,
    pub mu: T,
    pub j: Vec3<T>,
    /// `16 pi mu - (R + (tr k)^2 - |k|^2)`.
    pub hamiltonian_residual: T,
    /// `8 pi J - div(k - (tr k) g)`.
    pub momentum_residual: Vec3<T>,
}

/// Fourth-order central difference of a flattened array-valued function.
pub(crate) fn fd4<T: Real, const K: usize, F>(f: &F, x: &Vec3<T>, dir: usize, h: T) -> [T; K]
where
    F: Fn(&Vec3<T>) -> [T; K],
{
    let h = h * T::one().max(x[dir].abs());
    let at = |s: T| {
        let mut y = *x;
        y[dir] += s * h;
        f(&y)
    };
    let (p1, m1, p2, m2) = (at(T::one()), at(-T::one()), at(T::lit(2.0)), at(T::lit(-2.0)));
    let mut out = [T::zero(); K];
    for i in 0..K {
        out[i] = (-p2[i] + T::lit(8.0) * p1[i] - T::lit(8.0) * m1[i] + m2[i]) / (T::lit(12.0) * h);
    }
    out
}

pub(crate) fn flat9<T: Real>(m: &Mat3<T>) -> [T; 9] {
    let mut o = [T::zero(); 9];
    for i in 0..3 {
        for j in 0..3 {
            o[3 * i + j] = m[i][j];
        }
    }
    o
}

pub(crate) fn unflat9<T: Real>(o: &[T; 9]) -> Mat3<T> {
    let mut m = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = o[3 * i + j];
        }
    }
    m
}

impl<T: Real> SliceBackend<T> {
    pub fn new(kind: SliceKind) -> Self {
        Self { kind, fd_step: T::lit(1e-3) }
    }

    /// Ambient spacetime containing the slice.
    pub fn spacetime(&self) -> MetricBackend<T> {
        match self.kind {
            SliceKind::MinkowskiFlat | SliceKind::MinkowskiGraph { .. } => MetricBackend::minkowski(),
            SliceKind::SchwarzschildStatic { mass } => MetricBackend::schwarzschild(T::lit(mass)),
            SliceKind::FlrwConstantTime { exponent, .. } => MetricBackend::flrw(T::lit(exponent)),
        }
    }

    fn graph_gradient(&self, x: &Vec3<T>) -> (Vec3<T>, Mat3<T>) {
        match self.kind {
            SliceKind::MinkowskiGraph { epsilon } => {
                let e = T::lit(epsilon);
                let mut hess = [[T::zero(); 3]; 3];
                hess[0][0] = e;
                hess[1][1] = -e;
                ([e * x[0], -e * x[1], T::zero()], hess)
            }
            _ => ([T::zero(); 3], [[T::zero(); 3]; 3]),
        }
    }

    fn slice_time(&self, x: &Vec3<T>) -> T {
        match self.kind {
            SliceKind::MinkowskiGraph { epsilon } => T::lit(0.5 * epsilon) * (x[0] * x[0] - x[1] * x[1]),
            SliceKind::FlrwConstantTime { time, .. } => T::lit(time),
            _ => T::zero(),
        }
    }

    /// Spacetime event of the slice point `x`.
    pub fn embed(&self, x: &Vec3<T>) -> Vec4<T> {
        [self.slice_time(x), x[0], x[1], x[2]]
    }

    /// Coordinate vectors `d_i Y` of the embedding.
    pub fn embed_jacobian(&self, x: &Vec3<T>) -> [Vec4<T>; 3] {
        let (df, _) = self.graph_gradient(x);
        let mut out = [[T::zero(); 4]; 3];
        for i in 0..3 {
            out[i][0] = df[i];
            out[i][i + 1] = T::one();
        }
        out
    }

    /// Pushes a slice vector forward into the spacetime chart.
    pub fn push_forward(&self, x: &Vec3<T>, u: &Vec3<T>) -> Vec4<T> {
        let jac = self.embed_jacobian(x);
        let mut out = [T::zero(); 4];
        for i in 0..3 {
            for a in 0..4 {
                out[a] += u[i] * jac[i][a];
            }
        }
        out
    }

    /// Future unit normal of the slice.
    pub fn unit_normal(&self, x: &Vec3<T>) -> Vec4<T> {
        match self.kind {
            SliceKind::MinkowskiGraph { .. } => {
                let (df, _) = self.graph_gradient(x);
                let w = (T::one() - (df[0] * df[0] + df[1] * df[1] + df[2] * df[2])).sqrt();
                [T::one() / w, df[0] / w, df[1] / w, df[2] / w]
            }
            _ => {
                let ev = self.embed(x);
                let g = self.spacetime().metric(&ev);
                [T::one() / (-g[0][0]).sqrt(), T::zero(), T::zero(), T::zero()]
            }
        }
    }

    /// Induced Riemannian metric `g_ij`.
    pub fn metric(&self, x: &Vec3<T>) -> Mat3<T> {
        let ev = self.embed(x);
        let big = self.spacetime().metric(&ev);
        let jac = self.embed_jacobian(x);
        let mut g = [[T::zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = inner(&big, &jac[i], &jac[j]);
            }
        }
        g
    }

    /// Second fundamental form `k = -<II, n>` in the future normal direction.
    pub fn extrinsic(&self, x: &Vec3<T>) -> Mat3<T> {
        match self.kind {
            SliceKind::MinkowskiFlat | SliceKind::SchwarzschildStatic { .. } => [[T::zero(); 3]; 3],
            SliceKind::MinkowskiGraph { .. } => {
                let (df, hess) = self.graph_gradient(x);
                let w = (T::one() - (df[0] * df[0] + df[1] * df[1] + df[2] * df[2])).sqrt();
                hess.map(|row| row.map(|v| v / w))
            }
            SliceKind::FlrwConstantTime { exponent, time } => {
                // Gamma^t_ij = a a' delta_ij and <., d_t> = -dt, so k_ij = a a' delta_ij.
                let (q, t) = (T::lit(exponent), T::lit(time));
                let a = t.powf(q);
                let adot = q * t.powf(q - T::one());
                let mut k = [[T::zero(); 3]; 3];
                for (i, row) in k.iter_mut().enumerate() {
                    row[i] = a * adot;
                }
                k
            }
        }
    }

    /// Christoffel symbols of `g` from differences of the metric.
    pub fn christoffel(&self, x: &Vec3<T>) -> Chr3<T> {
        let g = self.metric(x);
        let gi = invert(&g).expect("slice metric is nondegenerate");
        let f = |y: &Vec3<T>| flat9(&self.metric(y));
        let dg: [Mat3<T>; 3] = [0, 1, 2].map(|c| unflat9(&fd4(&f, x, c, self.fd_step)));
        let mut chr = [[[T::zero(); 3]; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let mut s = T::zero();
                    for d in 0..3 {
                        s += gi[a][d] * (dg[b][d][c] + dg[c][d][b] - dg[d][b][c]);
                    }
                    chr[a][b][c] = T::lit(0.5) * s;
                }
            }
        }
        chr
    }

    /// Scalar curvature of `g` from differences of the Christoffel symbols.
    pub fn scalar_curvature(&self, x: &Vec3<T>) -> T {
        let chr = self.christoffel(x);
        let gi = invert(&self.metric(x)).expect("slice metric is nondegenerate");
        let f = |y: &Vec3<T>| {
            let c = self.christoffel(y);
            let mut o = [T::zero(); 27];
            for a in 0..3 {
                for b in 0..3 {
                    for d in 0..3 {
                        o[9 * a + 3 * b + d] = c[a][b][d];
                    }
                }
            }
            o
        };
        let h = self.fd_step * T::lit(3.0);
        let dchr: [[T; 27]; 3] = [0, 1, 2].map(|c| fd4(&f, x, c, h));
        let mut r = T::zero();
        for b in 0..3 {
            for d in 0..3 {
                let mut ric = T::zero();
                for a in 0..3 {
                    ric += dchr[a][9 * a + 3 * b + d] - dchr[d][9 * a + 3 * a + b];
                    for e in 0..3 {
                        ric += chr[a][a][e] * chr[e][b][d] - chr[a][d][e] * chr[e][a][b];
                    }
                }
                r += gi[b][d] * ric;
            }
        }
        r
    }

    /// `(div S)_c = g^{ab} (nabla_a S)_{bc}` for a symmetric tensor field.
    pub fn divergence_sym<F>(&self, x: &Vec3<T>, s: F) -> Vec3<T>
    where
        F: Fn(&Vec3<T>) -> Mat3<T>,
    {
        let chr = self.christoffel(x);
        let gi = invert(&self.metric(x)).expect("slice metric is nondegenerate");
        let sx = s(x);
        let f = |y: &Vec3<T>| flat9(&s(y));
        let ds: [Mat3<T>; 3] = [0, 1, 2].map(|a| unflat9(&fd4(&f, x, a, self.fd_step)));
        let mut out = [T::zero(); 3];
        for c in 0..3 {
            let mut acc = T::zero();
            for a in 0..3 {
                for b in 0..3 {
                    let mut cov = ds[a][b][c];
                    for d in 0..3 {
                        cov -= chr[d][a][b] * sx[d][c] + chr[d][a][c] * sx[b][d];
                    }
                    acc += gi[a][b] * cov;
                }
            }
            out[c] = acc;
        }
        out
    }

    /// `p = (tr k) g - k`.
    pub fn momentum_tensor(&self, x: &Vec3<T>) -> Mat3<T> {
        let g = self.metric(x);
        let k = self.extrinsic(x);
        let tr = trace(&g, &k);
        let mut p = [[T::zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                p[i][j] = tr * g[i][j] - k[i][j];
            }
        }
        p
    }

    /// Energy density `G(n, n) / 8 pi` and momentum density `G(d_i Y, n) / 8 pi`.
    pub fn matter(&self, x: &Vec3<T>) -> (T, Vec3<T>) {
        let ev = self.embed(x);
        let gt = self.spacetime().einstein(&ev);
        let n = self.unit_normal(x);
        let jac = self.embed_jacobian(x);
        let eight_pi = T::lit(8.0) * T::PI();
        let mu = inner(&gt, &n, &n) / eight_pi;
        let j = [0, 1, 2].map(|i| inner(&gt, &jac[i], &n) / eight_pi);
        (mu, j)
    }

    pub fn check_admissible(&self, x: &Vec3<T>) -> Result<()> {
        self.spacetime().check_admissible(&self.embed(x))?;
        if let SliceKind::MinkowskiGraph { .. } = self.kind {
            let (df, _) = self.graph_gradient(x);
            let s = df[0] * df[0] + df[1] * df[1] + df[2] * df[2];
            if !(s < T::one()) {
                return Err(crate::error::GeomError::Domain(format!("graph slice is not spacelike at {x:?}")));
            }
        }
        Ok(())
    }

    /// Slice data at `x` with both constraint residuals.
    pub fn slice_data(&self, x: &Vec3<T>) -> Result<SliceData<T>> {
        self.check_admissible(x)?;
        let g = self.metric(x);
        let k = self.extrinsic(x);
        let r = self.scalar_curvature(x);
        let (mu, j) = self.matter(x);
        let tr = trace(&g, &k);
        let k2 = norm_sq(&g, &k);
        let sixteen_pi = T::lit(16.0) * T::PI();
        let ham = sixteen_pi * mu - (r + tr * tr - k2);
        let div = self.divergence_sym(x, |y| {
            let gy = self.metric(y);
            let ky = self.extrinsic(y);
            let t = trace(&gy, &ky);
            let mut m = ky;
            for i in 0..3 {
                for jj in 0..3 {
                    m[i][jj] -= t * gy[i][jj];
                }
            }
            m
        });
        let eight_pi = T::lit(8.0) * T::PI();
        let mom = [0, 1, 2].map(|i| eight_pi * j[i] - div[i]);
        Ok(SliceData {
            g,
            k,
            scalar_curvature: r,
            mu,
            j,
            hamiltonian_residual: ham,
            momentum_residual: mom,
        })
    }

    /// Deterministic admissible sample points for pointwise checks.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec3<T>> {
        let (lo, hi) = match self.kind {
            SliceKind::SchwarzschildStatic { mass } => (3.0 * mass, 8.0 * mass),
            _ => (0.5, 2.0),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let r: f64 = rng.gen_range(lo..hi);
                let z: f64 = rng.gen_range(-1.0..1.0);
                let ph: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let s = (1.0 - z * z).sqrt();
                [T::lit(r * s * ph.cos()), T::lit(r * s * ph.sin()), T::lit(r * z)]
            })
            .collect()
    }
}

pub(crate) fn trace<T: Real>(g: &Mat3<T>, s: &Mat3<T>) -> T {
    let gi = invert(g).expect("nondegenerate");
    let mut t = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            t += gi[i][j] * s[i][j];
        }
    }
    t
}

pub(crate) fn norm_sq<T: Real>(g: &Mat3<T>, s: &Mat3<T>) -> T {
    let gi = invert(g).expect("nondegenerate");
    let mut t = T::zero();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    t += gi[a][c] * gi[b][d] * s[a][b] * s[c][d];
                }
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraints_hold_on_every_slice() {
        let kinds = [
            SliceKind::MinkowskiFlat,
            SliceKind::SchwarzschildStatic { mass: 1.0 },
            SliceKind::MinkowskiGraph { epsilon: 0.1 },
            SliceKind::FlrwConstantTime { exponent: 2.0 / 3.0, time: 1.0 },
        ];
        for kind in kinds {
            let s = SliceBackend::<f64>::new(kind);
            for x in s.sample_points(10, 7) {
                let d = s.slice_data(&x).unwrap();
                assert!(d.hamiltonian_residual.abs() < 1e-6, "{kind:?} {}", d.hamiltonian_residual);
                assert!(d.momentum_residual.iter().all(|v| v.abs() < 1e-6), "{kind:?} {:?}", d.momentum_residual);
            }
        }
    }

    #[test]
    fn flrw_slice_values() {
        let s = SliceBackend::<f64>::new(SliceKind::FlrwConstantTime { exponent: 2.0 / 3.0, time: 1.0 });
        let d = s.slice_data(&[0.3, 0.2, -0.1]).unwrap();
        // a = 1, a' = 2/3: k = (2/3) delta, 16 pi mu = (tr k)^2 - |k|^2 = 4 - 4/3.
        assert!((d.k[0][0] - 2.0 / 3.0).abs() < 1e-14);
        assert!((16.0 * std::f64::consts::PI * d.mu - 8.0 / 3.0).abs() < 1e-12);
        assert!(d.scalar_curvature.abs() < 1e-8);
    }
}
