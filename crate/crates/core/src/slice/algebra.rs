//! Pointwise algebra splitting the Hamiltonian constraint along a surface.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{inner, Mat3, Vec3};
use crate::scalar::Real;

use super::{norm_sq, trace};

/// One sample: metric, momentum tensor `p`, energy density and a `g`-orthonormal
/// frame `(nu, e1, e2)`.
#[derive(Clone, Copy, Debug)]
pub struct DecompositionInputs<T> {
    pub g: Mat3<T>,
    pub p: Mat3<T>,
    pub mu: T,
    pub frame: [Vec3<T>; 3],
}

impl<T: Real> DecompositionInputs<T> {
    /// Scalar curvature forced by the Hamiltonian constraint with
    /// `k = (tr p / 2) g - p`.
    pub fn constraint_curvature(&self) -> T {
        let half_tr = T::lit(0.5) * trace(&self.g, &self.p);
        let mut k = self.p;
        for i in 0..3 {
            for j in 0..3 {
                k[i][j] = half_tr * self.g[i][j] - self.p[i][j];
            }
        }
        let tk = trace(&self.g, &k);
        T::lit(16.0) * T::PI() * self.mu - tk * tk + norm_sq(&self.g, &k)
    }

    /// Right side assembled from the frame components of `p`.
    pub fn decomposed_curvature(&self) -> T {
        let [nu, e1, e2] = &self.frame;
        let pe = |a: &Vec3<T>, b: &Vec3<T>| inner(&self.p, a, b);
        let pnn = pe(nu, nu);
        let (s11, s12, s22) = (pe(e1, e1), pe(e1, e2), pe(e2, e2));
        let ps2 = s11 * s11 + T::lit(2.0) * s12 * s12 + s22 * s22;
        let trs = s11 + s22;
        let pbar2 = pe(e1, nu).powi(2) + pe(e2, nu).powi(2);
        let half = T::lit(0.5);
        T::lit(16.0) * T::PI() * self.mu + ps2 - half * trs * trs + T::lit(2.0) * pbar2 + half * pnn * pnn
            - pnn * trs
    }
}

pub fn decomposition_residual<T: Real>(inp: &DecompositionInputs<T>) -> T {
    inp.constraint_curvature() - inp.decomposed_curvature()
}

/// `g`-orthonormal frame from three independent vectors. Projections are
/// applied twice so nearly dependent inputs stay orthogonal to roundoff.
pub fn gram_schmidt<T: Real>(g: &Mat3<T>, v: [Vec3<T>; 3]) -> [Vec3<T>; 3] {
    let mut out = v;
    for i in 0..3 {
        for _ in 0..2 {
            for j in 0..i {
                let c = inner(g, &out[i], &out[j]);
                let prev = out[j];
                for a in 0..3 {
                    out[i][a] -= c * prev[a];
                }
            }
        }
        let n = inner(g, &out[i], &out[i]).sqrt();
        for a in 0..3 {
            out[i][a] /= n;
        }
    }
    out
}

/// Random positive-definite metric, symmetric `p`, `mu` and frame.
pub fn random_decomposition_inputs<T: Real>(rng: &mut ChaCha8Rng) -> DecompositionInputs<T> {
    let mut u = || T::lit(rng.gen_range(-1.0..1.0));
    let mut b = [[T::zero(); 3]; 3];
    let mut p = [[T::zero(); 3]; 3];
    let mut vecs = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = u();
            vecs[i][j] = u();
        }
        for j in i..3 {
            let x = u();
            p[i][j] = x;
            p[j][i] = x;
        }
    }
    let mut g = [[T::zero(); 3]; 3];
    for i in 0..3 {
        g[i][i] = T::one();
        for j in 0..3 {
            for k in 0..3 {
                g[i][j] += T::lit(0.3) * b[k][i] * b[k][j];
            }
        }
    }
    let mu = u().abs();
    DecompositionInputs { g, p, mu, frame: gram_schmidt(&g, vecs) }
}

/// Largest residual over `count` random samples.
pub fn fuzz_curvature_decomposition<T: Real>(count: usize, seed: u64) -> T {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| decomposition_residual(&random_decomposition_inputs::<T>(&mut rng)).abs())
        .fold(T::zero(), T::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclid(p: Mat3<f64>) -> DecompositionInputs<f64> {
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        DecompositionInputs { g: id, p, mu: 0.25, frame: id }
    }

    #[test]
    fn zero_and_identity_tensors() {
        let four_pi = 4.0 * std::f64::consts::PI;
        let z = euclid([[0.0; 3]; 3]);
        assert!((z.constraint_curvature() - four_pi).abs() < 1e-14);
        let one = euclid([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!((one.decomposed_curvature() - (four_pi - 1.5)).abs() < 1e-14);
        assert!(decomposition_residual(&one).abs() < 1e-14);
    }

    #[test]
    fn random_samples() {
        assert!(fuzz_curvature_decomposition::<f64>(1000, 3) < 1e-12);
    }
}
