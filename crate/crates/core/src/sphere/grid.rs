//! Gauss-Legendre colatitude by uniform longitude grid on the parameter sphere.
//!
//! Nodes exclude the poles. Differentiation in `phi` is the periodic spectral
//! (cotangent-kernel) derivative on each ring. Differentiation in `theta` uses
//! the double-Fourier extension of a field across the poles,
//! `f(-theta, phi) = s * f(theta, phi + pi)`, where the sign `s` is the field's
//! [`Parity`]: smooth scalars are `Even`, the `theta` component of a 1-form is
//! `Odd`, and so on. On each azimuthal wavenumber the extension is even or odd
//! in `theta`, so the degree-`(n_theta - 1)` cosine or sine interpolant through
//! the `n_theta` nodes of a meridian is differentiated. In nodal form this
//! couples the meridian at `phi` only with the antipodal meridian at `phi + pi`.

use crate::error::{GeomError, Result};
use crate::linalg::solve_dense;
use crate::scalar::Real;

/// Sign picked up by a field under `(theta, phi) -> (-theta, phi + pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn times(self, other: Parity) -> Self {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Clone, Debug)]
pub struct SurfaceGrid<T> {
    n_theta: usize,
    n_phi: usize,
    theta: Vec<T>,
    cos_theta: Vec<T>,
    sin_theta: Vec<T>,
    phi: Vec<T>,
    gl_weights: Vec<T>,
    /// `gl_weight * (2 pi / n_phi) / sin(theta)`: multiply by `sqrt(det h)` to
    /// get the area weight of a node.
    ring_weights: Vec<T>,
    /// Same-meridian and antipodal-meridian blocks of `d/dtheta` for `Even`
    /// fields (row-major `n_theta x n_theta`).
    dth_same_even: Vec<T>,
    dth_anti_even: Vec<T>,
    dth_same_odd: Vec<T>,
    dth_anti_odd: Vec<T>,
    /// Periodic derivative kernel indexed by `(j - j') mod n_phi`.
    dphi_kernel: Vec<T>,
}

fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Differentiation matrix of the trigonometric interpolant through `theta`
/// nodes: cosine basis `k = 0..n-1` or sine basis `k = 1..n`.
fn trig_diff_matrix(theta: &[f64], sine: bool) -> Vec<f64> {
    let n = theta.len();
    // Solve D B = B' for D, i.e. B^T D^T = B'^T.
    let mut bt = vec![0.0; n * n];
    let mut dbt = vec![0.0; n * n];
    for i in 0..n {
        for kk in 0..n {
            let k = if sine { kk + 1 } else { kk } as f64;
            let (b, db) = if sine {
                ((k * theta[i]).sin(), k * (k * theta[i]).cos())
            } else {
                ((k * theta[i]).cos(), -k * (k * theta[i]).sin())
            };
            bt[kk * n + i] = b;
            dbt[kk * n + i] = db;
        }
    }
    solve_dense(&mut bt, n, &mut dbt, n).expect("trigonometric interpolation is unisolvent");
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            d[i * n + j] = dbt[j * n + i];
        }
    }
    d
}

impl<T: Real> SurfaceGrid<T> {
    /// Builds the grid; requires `n_theta >= 8`, `n_phi >= 16` and `n_phi` even.
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 8 || n_phi < 16 || !n_phi.is_multiple_of(2) {
            return Err(GeomError::Config(format!(
                "grid {n_theta}x{n_phi} too coarse: need n_theta >= 8, n_phi >= 16, n_phi even"
            )));
        }
        let (xs, ws) = gauss_legendre(n_theta);
        let theta64: Vec<f64> = xs.iter().map(|x| x.acos()).collect();
        let dphi = std::f64::consts::TAU / n_phi as f64;
        let d_cos = trig_diff_matrix(&theta64, false);
        let d_sin = trig_diff_matrix(&theta64, true);
        let nn = n_theta * n_theta;
        let (mut se, mut ae, mut so, mut ao) = (vec![T::zero(); nn], vec![T::zero(); nn], vec![T::zero(); nn], vec![T::zero(); nn]);
        for k in 0..nn {
            // Even fields: even wavenumbers use the cosine interpolant.
            se[k] = T::lit(0.5 * (d_cos[k] + d_sin[k]));
            ae[k] = T::lit(0.5 * (d_cos[k] - d_sin[k]));
            // Odd fields: even wavenumbers use the sine interpolant.
            so[k] = T::lit(0.5 * (d_sin[k] + d_cos[k]));
            ao[k] = T::lit(0.5 * (d_sin[k] - d_cos[k]));
        }
        let mut kernel = vec![T::zero(); n_phi];
        for (d, slot) in kernel.iter_mut().enumerate().skip(1) {
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            *slot = T::lit(0.5 * sign / (std::f64::consts::PI * d as f64 / n_phi as f64).tan());
        }
        Ok(Self {
            n_theta,
            n_phi,
            theta: theta64.iter().map(|&t| T::lit(t)).collect(),
            cos_theta: xs.iter().map(|&x| T::lit(x)).collect(),
            sin_theta: theta64.iter().map(|&t| T::lit(t.sin())).collect(),
            phi: (0..n_phi).map(|j| T::lit(dphi * j as f64)).collect(),
            gl_weights: ws.iter().map(|&w| T::lit(w)).collect(),
            ring_weights: ws
                .iter()
                .zip(&theta64)
                .map(|(&w, &t)| T::lit(w * dphi / t.sin()))
                .collect(),
            dth_same_even: se,
            dth_anti_even: ae,
            dth_same_odd: so,
            dth_anti_odd: ao,
            dphi_kernel: kernel,
        })
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }
    pub fn n_phi(&self) -> usize {
        self.n_phi
    }
    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_phi + j
    }
    pub fn theta(&self) -> &[T] {
        &self.theta
    }
    pub fn phi(&self) -> &[T] {
        &self.phi
    }
    pub fn sin_theta(&self) -> &[T] {
        &self.sin_theta
    }
    pub fn cos_theta(&self) -> &[T] {
        &self.cos_theta
    }
    pub fn gl_weights(&self) -> &[T] {
        &self.gl_weights
    }
    pub fn ring_weights(&self) -> &[T] {
        &self.ring_weights
    }

    /// `(theta, phi)` of node `k`.
    pub fn angles(&self, k: usize) -> (T, T) {
        (self.theta[k / self.n_phi], self.phi[k % self.n_phi])
    }

    /// Area weights of the round unit sphere.
    pub fn unit_sphere_weights(&self) -> Vec<T> {
        let dphi = T::lit(std::f64::consts::TAU / self.n_phi as f64);
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.n_theta {
            for _ in 0..self.n_phi {
                out.push(self.gl_weights[i] * dphi);
            }
        }
        out
    }

    /// Samples a function of `(theta, phi)` at the nodes.
    pub fn sample<F: Fn(T, T) -> T>(&self, f: F) -> Vec<T> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.n_theta {
            for j in 0..self.n_phi {
                out.push(f(self.theta[i], self.phi[j]));
            }
        }
        out
    }

    fn theta_blocks(&self, parity: Parity) -> (&[T], &[T]) {
        match parity {
            Parity::Even => (&self.dth_same_even, &self.dth_anti_even),
            Parity::Odd => (&self.dth_same_odd, &self.dth_anti_odd),
        }
    }

    /// `d/dtheta` of a field with the given parity; the result has the
    /// opposite parity.
    pub fn d_theta(&self, f: &[T], parity: Parity) -> Vec<T> {
        self.apply_theta(f, parity, false)
    }

    /// Transpose of [`Self::d_theta`] as a nodal matrix.
    pub fn d_theta_transpose(&self, f: &[T], parity: Parity) -> Vec<T> {
        self.apply_theta(f, parity, true)
    }

    fn apply_theta(&self, f: &[T], parity: Parity, transpose: bool) -> Vec<T> {
        let (nt, np) = (self.n_theta, self.n_phi);
        let half = np / 2;
        let (same, anti) = self.theta_blocks(parity);
        let mut out = vec![T::zero(); self.len()];
        for i in 0..nt {
            for ip in 0..nt {
                let (a, b) = if transpose {
                    (same[ip * nt + i], anti[ip * nt + i])
                } else {
                    (same[i * nt + ip], anti[i * nt + ip])
                };
                let row = &f[ip * np..(ip + 1) * np];
                let dst = &mut out[i * np..(i + 1) * np];
                for j in 0..np {
                    let ja = if j < half { j + half } else { j - half };
                    dst[j] += a * row[j] + b * row[ja];
                }
            }
        }
        out
    }

    /// Periodic spectral `d/dphi` ring by ring (parity preserving).
    pub fn d_phi(&self, f: &[T]) -> Vec<T> {
        let (nt, np) = (self.n_theta, self.n_phi);
        let mut out = vec![T::zero(); self.len()];
        for i in 0..nt {
            let row = &f[i * np..(i + 1) * np];
            for j in 0..np {
                let mut s = T::zero();
                for (jp, v) in row.iter().enumerate() {
                    let d = (j + np - jp) % np;
                    s += self.dphi_kernel[d] * *v;
                }
                out[i * np + j] = s;
            }
        }
        out
    }

    /// Transpose of [`Self::d_phi`] (it is antisymmetric).
    pub fn d_phi_transpose(&self, f: &[T]) -> Vec<T> {
        self.d_phi(f).into_iter().map(|v| -v).collect()
    }

    /// Entry of the nodal `d/dtheta` matrix coupling output ring `i` to input
    /// ring `ip` on the same (`antipodal = false`) or opposite meridian.
    pub(crate) fn theta_entry(&self, parity: Parity, i: usize, ip: usize, antipodal: bool) -> T {
        let (same, anti) = self.theta_blocks(parity);
        if antipodal {
            anti[i * self.n_theta + ip]
        } else {
            same[i * self.n_theta + ip]
        }
    }

    pub(crate) fn phi_kernel(&self) -> &[T] {
        &self.dphi_kernel
    }

    /// Whether the alternating mode `(-1)^j` is annihilated by both
    /// derivatives (true when `n_phi / 2` is even).
    pub(crate) fn has_checkerboard_null_mode(&self) -> bool {
        (self.n_phi / 2).is_multiple_of(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rejects_coarse_grids() {
        assert!(SurfaceGrid::<f64>::new(6, 32).is_err());
        assert!(SurfaceGrid::<f64>::new(8, 15).is_err());
        assert!(SurfaceGrid::<f64>::new(8, 17).is_err());
    }

    #[test]
    fn unit_sphere_area_is_exact() {
        let g = SurfaceGrid::<f64>::new(24, 48).unwrap();
        let a: f64 = g.unit_sphere_weights().iter().sum();
        assert!((a - 4.0 * PI).abs() / (4.0 * PI) < 1e-12);
    }

    #[test]
    fn derivatives_of_smooth_scalar() {
        let g = SurfaceGrid::<f64>::new(16, 32).unwrap();
        let f = g.sample(|t, p| t.sin() * p.cos());
        let dp = g.d_phi(&f);
        let dt = g.d_theta(&f, Parity::Even);
        for k in 0..g.len() {
            let (t, p) = g.angles(k);
            assert!((dp[k] + t.sin() * p.sin()).abs() < 1e-10);
            assert!((dt[k] - t.cos() * p.cos()).abs() < 1e-10);
        }
        let c = vec![3.0; g.len()];
        assert!(g.d_theta(&c, Parity::Even).iter().all(|v| v.abs() < 1e-12));
        assert!(g.d_phi(&c).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn odd_field_derivative() {
        // d/dtheta of cos(theta) cos(phi) (theta-derivative of x) is -sin(theta) cos(phi)
        let g = SurfaceGrid::<f64>::new(12, 24).unwrap();
        let f = g.sample(|t, p| t.cos() * p.cos());
        let d = g.d_theta(&f, Parity::Odd);
        for k in 0..g.len() {
            let (t, p) = g.angles(k);
            assert!((d[k] + t.sin() * p.cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn transposes_are_consistent() {
        let g = SurfaceGrid::<f64>::new(8, 16).unwrap();
        let a: Vec<f64> = (0..g.len()).map(|k| ((k * 7 % 13) as f64).sin()).collect();
        let b: Vec<f64> = (0..g.len()).map(|k| ((k * 5 % 11) as f64).cos()).collect();
        for parity in [Parity::Even, Parity::Odd] {
            let lhs: f64 = g.d_theta(&a, parity).iter().zip(&b).map(|(x, y)| x * y).sum();
            let rhs: f64 = g.d_theta_transpose(&b, parity).iter().zip(&a).map(|(x, y)| x * y).sum();
            assert!((lhs - rhs).abs() < 1e-10);
        }
        let lhs: f64 = g.d_phi(&a).iter().zip(&b).map(|(x, y)| x * y).sum();
        let rhs: f64 = g.d_phi_transpose(&b).iter().zip(&a).map(|(x, y)| x * y).sum();
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn single_precision_grid_works() {
        let g = SurfaceGrid::<f32>::new(16, 32).unwrap();
        let a: f32 = g.unit_sphere_weights().iter().sum();
        assert!((a - 4.0 * std::f32::consts::PI).abs() < 1e-4);
    }
}
