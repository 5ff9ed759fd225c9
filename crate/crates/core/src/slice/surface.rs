//! Closed 2-surfaces inside a slice, differentiated spectrally on the grid.

use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::linalg::{contract_chr, inner, invert, Chr3, Mat3, Vec3};
use crate::scalar::Real;
use crate::sphere::{HarmonicSeries, InducedMetric, Parity, ScalarField, SurfaceGrid, SymTwoTensorField};

use super::SliceBackend;

#[derive(Clone, Debug)]
pub struct SliceSurface<T> {
    pub slice: SliceBackend<T>,
    pub center: Vec3<T>,
    pub positions: Vec<Vec3<T>>,
    pub e_theta: Vec<Vec3<T>>,
    pub e_phi: Vec<Vec3<T>>,
    pub g: Vec<Mat3<T>>,
    pub christoffels: Vec<Chr3<T>>,
    /// Outward `g`-unit normal in `M`.
    pub nu: Vec<Vec3<T>>,
    pub metric: InducedMetric<T>,
    /// `A(X, Y) = g(nabla_X nu, Y)`.
    pub a: SymTwoTensorField<T>,
    pub mean: ScalarField<T>,
}

fn component<T: Real>(p: &[Vec3<T>], a: usize) -> Vec<T> {
    p.iter().map(|x| x[a]).collect()
}

fn assemble<T: Real>(c: [Vec<T>; 3]) -> Vec<Vec3<T>> {
    (0..c[0].len()).map(|k| [c[0][k], c[1][k], c[2][k]]).collect()
}

impl<T: Real> SliceSurface<T> {
    /// Star-shaped surface `center + r(theta, phi) x_hat`.
    pub fn star_shaped(
        slice: SliceBackend<T>,
        grid: Arc<SurfaceGrid<T>>,
        center: Vec3<T>,
        radius: &HarmonicSeries,
    ) -> Result<Self> {
        let pos = (0..grid.len())
            .map(|k| {
                let (t, p) = grid.angles(k);
                let r = radius.eval(t, p);
                [
                    center[0] + r * t.sin() * p.cos(),
                    center[1] + r * t.sin() * p.sin(),
                    center[2] + r * t.cos(),
                ]
            })
            .collect();
        Self::from_positions(slice, grid, center, pos)
    }

    pub fn from_positions(
        slice: SliceBackend<T>,
        grid: Arc<SurfaceGrid<T>>,
        center: Vec3<T>,
        pos: Vec<Vec3<T>>,
    ) -> Result<Self> {
        let n = grid.len();
        let mut xt: [Vec<T>; 3] = Default::default();
        let mut xp: [Vec<T>; 3] = Default::default();
        let mut xtt: [Vec<T>; 3] = Default::default();
        let mut xtp: [Vec<T>; 3] = Default::default();
        let mut xpp: [Vec<T>; 3] = Default::default();
        for a in 0..3 {
            let c = component(&pos, a);
            xt[a] = grid.d_theta(&c, Parity::Even);
            xp[a] = grid.d_phi(&c);
            xtt[a] = grid.d_theta(&xt[a], Parity::Odd);
            xtp[a] = grid.d_phi(&xt[a]);
            xpp[a] = grid.d_phi(&xp[a]);
        }
        let (e_theta, e_phi) = (assemble(xt), assemble(xp));
        let (xtt, xtp, xpp) = (assemble(xtt), assemble(xtp), assemble(xpp));

        let mut g = Vec::with_capacity(n);
        let mut christoffels = Vec::with_capacity(n);
        let mut nu = Vec::with_capacity(n);
        let mut h = SymTwoTensorField::zeros(n);
        let mut a = SymTwoTensorField::zeros(n);
        for k in 0..n {
            slice.check_admissible(&pos[k])?;
            let gk = slice.metric(&pos[k]);
            let chr = slice.christoffel(&pos[k]);
            let (et, ep) = (&e_theta[k], &e_phi[k]);
            h.tt[k] = inner(&gk, et, et);
            h.tp[k] = inner(&gk, et, ep);
            h.pp[k] = inner(&gk, ep, ep);

            // Normal covector is et x ep; raise it with g^{-1}.
            let cross = [
                et[1] * ep[2] - et[2] * ep[1],
                et[2] * ep[0] - et[0] * ep[2],
                et[0] * ep[1] - et[1] * ep[0],
            ];
            let gi = invert(&gk).ok_or_else(|| GeomError::DegenerateMetric {
                node: k,
                detail: "slice metric is singular".into(),
            })?;
            let mut v = [T::zero(); 3];
            for i in 0..3 {
                for j in 0..3 {
                    v[i] += gi[i][j] * cross[j];
                }
            }
            let norm = inner(&gk, &v, &v).sqrt();
            let radial = [pos[k][0] - center[0], pos[k][1] - center[1], pos[k][2] - center[2]];
            let sign = if inner(&gk, &v, &radial) < T::zero() { -T::one() } else { T::one() };
            if !(norm > T::zero()) {
                return Err(GeomError::InvalidNormal { node: k, detail: "tangents are parallel".into() });
            }
            let nk = v.map(|c| sign * c / norm);

            // A(e_i, e_j) = -g(nabla_{e_i} e_j, nu).
            let second = |x2: &Vec3<T>, u: &Vec3<T>, w: &Vec3<T>| {
                let gam = contract_chr(&chr, u, w);
                let acc = [x2[0] + gam[0], x2[1] + gam[1], x2[2] + gam[2]];
                -inner(&gk, &acc, &nk)
            };
            a.tt[k] = second(&xtt[k], et, et);
            a.tp[k] = second(&xtp[k], et, ep);
            a.pp[k] = second(&xpp[k], ep, ep);
            g.push(gk);
            christoffels.push(chr);
            nu.push(nk);
        }
        let metric = InducedMetric::new(grid, h)?;
        let mean = ScalarField::new(metric.trace(&a));
        Ok(Self { slice, center, positions: pos, e_theta, e_phi, g, christoffels, nu, metric, a, mean })
    }

    pub fn grid(&self) -> &SurfaceGrid<T> {
        self.metric.grid()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Tangent vector `X^theta e_theta + X^phi e_phi` at node `k`.
    pub fn tangent(&self, k: usize, xt: T, xp: T) -> Vec3<T> {
        let (a, b) = (&self.e_theta[k], &self.e_phi[k]);
        [xt * a[0] + xp * b[0], xt * a[1] + xp * b[1], xt * a[2] + xp * b[2]]
    }

    /// Restriction of a tensor on `M` to `T Sigma`.
    pub fn restrict(&self, p: &[Mat3<T>]) -> SymTwoTensorField<T> {
        let n = self.len();
        let mut out = SymTwoTensorField::zeros(n);
        for k in 0..n {
            let (et, ep) = (&self.e_theta[k], &self.e_phi[k]);
            out.tt[k] = inner(&p[k], et, et);
            out.tp[k] = inner(&p[k], et, ep);
            out.pp[k] = inner(&p[k], ep, ep);
        }
        out
    }

    /// Surface with node `k` moved to `x_k + s * speed_k * nu_k`.
    pub fn displaced(&self, speed: &[T], s: T) -> Result<Self> {
        let pos = (0..self.len())
            .map(|k| {
                let c = s * speed[k];
                let (x, v) = (&self.positions[k], &self.nu[k]);
                [x[0] + c * v[0], x[1] + c * v[1], x[2] + c * v[2]]
            })
            .collect();
        Self::from_positions(self.slice, self.metric.grid_arc().clone(), self.center, pos)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slice::SliceKind;

    #[test]
    fn round_sphere_in_flat_slice() {
        let grid = Arc::new(SurfaceGrid::<f64>::new(12, 24).unwrap());
        let s = SliceSurface::star_shaped(
            SliceBackend::new(SliceKind::MinkowskiFlat),
            grid,
            [0.0; 3],
            &HarmonicSeries::constant(2.0),
        )
        .unwrap();
        for k in 0..s.len() {
            assert!((s.mean.values[k] - 1.0).abs() < 1e-10);
        }
        assert!((s.metric.area - 16.0 * std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn schwarzschild_sphere_mean_curvature() {
        let grid = Arc::new(SurfaceGrid::<f64>::new(12, 24).unwrap());
        let s = SliceSurface::star_shaped(
            SliceBackend::new(SliceKind::SchwarzschildStatic { mass: 1.0 }),
            grid,
            [0.0; 3],
            &HarmonicSeries::constant(4.0),
        )
        .unwrap();
        let expect = 2.0 / 4.0 * (1.0f64 - 2.0 / 4.0).sqrt();
        for k in 0..s.len() {
            assert!((s.mean.values[k] - expect).abs() < 1e-8, "{}", s.mean.values[k]);
        }
    }
}
