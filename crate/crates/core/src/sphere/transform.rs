//! Orthogonal projection onto real spherical harmonics of bounded degree.

use crate::scalar::Real;
use crate::sphere::{real_sh, SurfaceGrid};

#[derive(Clone, Debug)]
pub struct BandLimiter<T> {
    l_max: usize,
    m_max: usize,
    n_theta: usize,
    n_phi: usize,
    /// `lambda[m][l - m][i]`: normalized Legendre factor of `Y_lm` at ring `i`.
    lambda: Vec<Vec<Vec<T>>>,
    cos: Vec<Vec<T>>,
    sin: Vec<Vec<T>>,
    /// `gl_weight_i * 2 pi / n_phi`.
    ring_w: Vec<T>,
}

impl<T: Real> BandLimiter<T> {
    /// Projector onto degrees `<= l_max` (clamped to what the grid resolves).
    pub fn new(grid: &SurfaceGrid<T>, l_max: usize) -> Self {
        let l_max = l_max.min(grid.n_theta() - 1);
        let m_max = l_max.min(grid.n_phi() / 2 - 1);
        let theta: Vec<f64> = grid.theta().iter().map(|t| t.to_f64_lossy()).collect();
        let lambda = (0..=m_max)
            .map(|m| {
                (m..=l_max)
                    .map(|l| theta.iter().map(|&t| T::lit(real_sh::<f64>(l, m as i64, t, 0.0).f)).collect())
                    .collect()
            })
            .collect();
        let np = grid.n_phi();
        let dphi = std::f64::consts::TAU / np as f64;
        let cos = (0..=m_max).map(|m| (0..np).map(|j| T::lit((m as f64 * dphi * j as f64).cos())).collect()).collect();
        let sin = (0..=m_max).map(|m| (0..np).map(|j| T::lit((m as f64 * dphi * j as f64).sin())).collect()).collect();
        let ring_w = grid.gl_weights().iter().map(|&w| w * T::lit(dphi)).collect();
        Self { l_max, m_max, n_theta: grid.n_theta(), n_phi: np, lambda, cos, sin, ring_w }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn apply(&self, f: &[T]) -> Vec<T> {
        let (nt, np) = (self.n_theta, self.n_phi);
        let mut out = vec![T::zero(); nt * np];
        for m in 0..=self.m_max {
            let mut a = vec![T::zero(); nt];
            let mut b = vec![T::zero(); nt];
            for i in 0..nt {
                let row = &f[i * np..(i + 1) * np];
                for j in 0..np {
                    a[i] += row[j] * self.cos[m][j];
                    b[i] += row[j] * self.sin[m][j];
                }
            }
            let mut ra = vec![T::zero(); nt];
            let mut rb = vec![T::zero(); nt];
            for lam in &self.lambda[m] {
                let (mut ca, mut cb) = (T::zero(), T::zero());
                for i in 0..nt {
                    ca += self.ring_w[i] * lam[i] * a[i];
                    cb += self.ring_w[i] * lam[i] * b[i];
                }
                for i in 0..nt {
                    ra[i] += ca * lam[i];
                    rb[i] += cb * lam[i];
                }
            }
            for i in 0..nt {
                for j in 0..np {
                    out[i * np + j] += ra[i] * self.cos[m][j] + rb[i] * self.sin[m][j];
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::HarmonicSeries;

    #[test]
    fn band_limited_fields_are_fixed() {
        let g = SurfaceGrid::<f64>::new(16, 32).unwrap();
        let s = HarmonicSeries::random(8, 1.0, 4);
        let f = g.sample(|t, p| s.eval(t, p));
        let p = BandLimiter::new(&g, 15).apply(&f);
        assert!(f.iter().zip(&p).all(|(a, b)| (a - b).abs() < 1e-12));
        let low = BandLimiter::new(&g, 3).apply(&f);
        let expect = HarmonicSeries { terms: s.terms.iter().filter(|t| t.l <= 3).cloned().collect(), ..Default::default() };
        for k in 0..g.len() {
            let (t, ph) = g.angles(k);
            assert!((low[k] - expect.eval(t, ph)).abs() < 1e-12);
        }
    }
}
