//! Spacelike 2-spheres in a spacetime backend: tangents, normal frame,
//! vector-valued second fundamental form and mean curvature vector.

use std::io::{self, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::linalg::{contract_chr, inner, Chr4, Mat4, Vec4};
use crate::scalar::Real;
use crate::spacetime::MetricBackend;
use crate::sphere::{AngularJet, HarmonicSeries, InducedMetric, Parity, SurfaceGrid, SymTwoTensorField};

/// Lower bound on `<H, H>` for the mean curvature vector to count as spacelike.
pub const MEAN_CURVATURE_FLOOR: f64 = 1e-8;

/// Parametric families `X(theta, phi) = (T(theta, phi), R(theta, phi) * x_hat)`
/// in the Cartesian chart of the backend.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum EmbeddingSpec {
    RoundSphere {
        radius: f64,
        #[serde(default)]
        time: f64,
    },
    /// `t = time + epsilon * profile` over the sphere of the given radius.
    GraphSphere {
        radius: f64,
        #[serde(default)]
        time: f64,
        epsilon: f64,
        profile: HarmonicSeries,
    },
    /// `r = radius * (1 + epsilon * profile)` in the slice `t = time`.
    RadialPerturbation {
        radius: f64,
        #[serde(default)]
        time: f64,
        epsilon: f64,
        profile: HarmonicSeries,
    },
    /// Sphere of constant comoving radius at cosmic time `time`.
    FlrwComovingSphere { radius: f64, time: f64 },
    General { time: HarmonicSeries, radius: HarmonicSeries },
}

impl EmbeddingSpec {
    /// Time and radius functions of the family.
    pub fn time_and_radius(&self) -> (HarmonicSeries, HarmonicSeries) {
        match self {
            EmbeddingSpec::RoundSphere { radius, time } | EmbeddingSpec::FlrwComovingSphere { radius, time } => {
                (HarmonicSeries::constant(*time), HarmonicSeries::constant(*radius))
            }
            EmbeddingSpec::GraphSphere { radius, time, epsilon, profile } => {
                let mut t = profile.scaled(*epsilon);
                t.constant += time;
                (t, HarmonicSeries::constant(*radius))
            }
            EmbeddingSpec::RadialPerturbation { radius, time, epsilon, profile } => {
                let mut r = profile.scaled(epsilon * radius);
                r.constant += radius;
                (HarmonicSeries::constant(*time), r)
            }
            EmbeddingSpec::General { time, radius } => (time.clone(), radius.clone()),
        }
    }

    /// Second-order jets of the four chart components at `(theta, phi)`.
    pub fn jets<T: Real>(&self, theta: T, phi: T) -> [AngularJet<T>; 4] {
        let (ts, rs) = self.time_and_radius();
        let r = rs.jet(theta, phi);
        let unit = unit_radial_jets(theta, phi);
        [ts.jet(theta, phi), r.mul(&unit[0]), r.mul(&unit[1]), r.mul(&unit[2])]
    }
}

fn unit_radial_jets<T: Real>(theta: T, phi: T) -> [AngularJet<T>; 3] {
    let (st, ct, sp, cp) = (theta.sin(), theta.cos(), phi.sin(), phi.cos());
    let z = T::zero();
    [
        AngularJet { f: st * cp, f_t: ct * cp, f_p: -st * sp, f_tt: -st * cp, f_tp: -ct * sp, f_pp: -st * cp },
        AngularJet { f: st * sp, f_t: ct * sp, f_p: st * cp, f_tt: -st * sp, f_tp: ct * cp, f_pp: -st * sp },
        AngularJet { f: ct, f_t: -st, f_p: z, f_tt: -ct, f_tp: z, f_pp: z },
    ]
}

/// Normal vector `n_coeff * n + v_coeff * v` in the frame `(n, v)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NormalVector<T> {
    pub n: T,
    pub v: T,
}

impl<T: Real> NormalVector<T> {
    pub fn new(n: T, v: T) -> Self {
        Self { n, v }
    }

    /// `(a n + b v)^perp = b n + a v`.
    pub fn perp(self) -> Self {
        Self { n: self.v, v: self.n }
    }

    /// Lorentzian inner product in the orthonormal normal frame.
    pub fn dot(self, o: Self) -> T {
        -self.n * o.n + self.v * o.v
    }

    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    pub fn scale(self, c: T) -> Self {
        Self { n: self.n * c, v: self.v * c }
    }


    /// Outward unit spacelike normal `sinh(psi) n + cosh(psi) v`.
    pub fn boosted_outward(psi: T) -> Self {
        Self { n: psi.sinh(), v: psi.cosh() }
    }
}

impl<T: Real> std::ops::Add for NormalVector<T> {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self { n: self.n + o.n, v: self.v + o.v }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TangentSource {
    /// Differentiate the closed-form family.
    ClosedForm,
    /// Spectrally differentiate the node positions.
    Spectral,
}

#[derive(Clone, Copy, Debug)]
pub struct SurfaceOptions {
    pub tangents: TangentSource,
    /// Fail unless `<H, H> > MEAN_CURVATURE_FLOOR` everywhere.
    pub require_spacelike_mean_curvature: bool,
}

impl Default for SurfaceOptions {
    fn default() -> Self {
        Self { tangents: TangentSource::ClosedForm, require_spacelike_mean_curvature: true }
    }
}

/// Future timelike unit normal `n` and outward spacelike unit normal `v`.
#[derive(Clone, Debug)]
pub struct NormalFrame<T> {
    pub n: Vec<Vec4<T>>,
    pub v: Vec<Vec4<T>>,
}

/// `II(e_i, e_j) = a_ij n + b_ij v` and its trace `H = tr_h II`.
#[derive(Clone, Debug)]
pub struct SecondFundamentalForm<T> {
    pub ii_n: SymTwoTensorField<T>,
    pub ii_v: SymTwoTensorField<T>,
    pub mean: Vec<NormalVector<T>>,
    /// `<H, H>` per node.
    pub mean_sq: Vec<T>,
}

impl<T: Real> SecondFundamentalForm<T> {
    /// Scalar form `II_nu = -<II, nu>`.
    pub fn scalar_form(&self, nu: &[NormalVector<T>]) -> SymTwoTensorField<T> {
        let n = nu.len();
        let mut out = SymTwoTensorField::zeros(n);
        for k in 0..n {
            let (cn, cv) = (nu[k].n, nu[k].v);
            out.tt[k] = self.ii_n.tt[k] * cn - self.ii_v.tt[k] * cv;
            out.tp[k] = self.ii_n.tp[k] * cn - self.ii_v.tp[k] * cv;
            out.pp[k] = self.ii_n.pp[k] * cn - self.ii_v.pp[k] * cv;
        }
        out
    }

    /// `|H| = sqrt(<H, H>)` (NaN where `H` is not spacelike).
    pub fn mean_norm(&self) -> Vec<T> {
        self.mean_sq.iter().map(|s| s.sqrt()).collect()
    }

    /// `nu_H = -H / |H|`.
    pub fn nu_h(&self) -> Vec<NormalVector<T>> {
        self.mean.iter().zip(&self.mean_sq).map(|(h, s)| h.scale(-T::one() / s.sqrt())).collect()
    }

    pub fn nu_h_perp(&self) -> Vec<NormalVector<T>> {
        self.nu_h().into_iter().map(NormalVector::perp).collect()
    }
}

#[derive(Clone, Debug)]
pub struct EmbeddedSurface<T> {
    pub backend: MetricBackend<T>,
    pub positions: Vec<Vec4<T>>,
    pub e_theta: Vec<Vec4<T>>,
    pub e_phi: Vec<Vec4<T>>,
    pub ambient_metric: Vec<Mat4<T>>,
    pub christoffels: Vec<Chr4<T>>,
    pub metric: InducedMetric<T>,
    pub frame: NormalFrame<T>,
    /// Normal parts of `D_{e_i} e_j` as ambient vectors (`tt`, `tp`, `pp`).
    pub ii_ambient: [Vec<Vec4<T>>; 3],
    pub sff: SecondFundamentalForm<T>,
}

/// Closed-form family evaluated with default options.
pub fn evaluate_surface<T: Real>(
    spec: &EmbeddingSpec,
    grid: Arc<SurfaceGrid<T>>,
    backend: MetricBackend<T>,
) -> Result<EmbeddedSurface<T>> {
    EmbeddedSurface::from_spec(spec, grid, backend, SurfaceOptions::default())
}

fn component<T: Real>(xs: &[Vec4<T>], a: usize) -> Vec<T> {
    xs.iter().map(|x| x[a]).collect()
}

fn assemble<T: Real>(cols: [Vec<T>; 4]) -> Vec<Vec4<T>> {
    (0..cols[0].len()).map(|k| [cols[0][k], cols[1][k], cols[2][k], cols[3][k]]).collect()
}

impl<T: Real> EmbeddedSurface<T> {
    pub fn from_spec(
        spec: &EmbeddingSpec,
        grid: Arc<SurfaceGrid<T>>,
        backend: MetricBackend<T>,
        opts: SurfaceOptions,
    ) -> Result<Self> {
        let n = grid.len();
        let mut pos = Vec::with_capacity(n);
        let mut d1 = [Vec::with_capacity(n), Vec::with_capacity(n)];
        let mut d2 = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
        for k in 0..n {
            let (t, p) = grid.angles(k);
            let j = spec.jets(t, p);
            pos.push([j[0].f, j[1].f, j[2].f, j[3].f]);
            d1[0].push([j[0].f_t, j[1].f_t, j[2].f_t, j[3].f_t]);
            d1[1].push([j[0].f_p, j[1].f_p, j[2].f_p, j[3].f_p]);
            d2[0].push([j[0].f_tt, j[1].f_tt, j[2].f_tt, j[3].f_tt]);
            d2[1].push([j[0].f_tp, j[1].f_tp, j[2].f_tp, j[3].f_tp]);
            d2[2].push([j[0].f_pp, j[1].f_pp, j[2].f_pp, j[3].f_pp]);
        }
        match opts.tangents {
            TangentSource::ClosedForm => Self::build(grid, backend, pos, d1, d2, opts),
            TangentSource::Spectral => Self::from_positions(pos, grid, backend, opts),
        }
    }

    /// Surface through the given node positions, differentiated spectrally.
    pub fn from_positions(
        pos: Vec<Vec4<T>>,
        grid: Arc<SurfaceGrid<T>>,
        backend: MetricBackend<T>,
        opts: SurfaceOptions,
    ) -> Result<Self> {
        let mut xt: [Vec<T>; 4] = Default::default();
        let mut xp: [Vec<T>; 4] = Default::default();
        let mut xtt: [Vec<T>; 4] = Default::default();
        let mut xtp: [Vec<T>; 4] = Default::default();
        let mut xpp: [Vec<T>; 4] = Default::default();
        for a in 0..4 {
            let c = component(&pos, a);
            xt[a] = grid.d_theta(&c, Parity::Even);
            xp[a] = grid.d_phi(&c);
            xtt[a] = grid.d_theta(&xt[a], Parity::Odd);
            xtp[a] = grid.d_phi(&xt[a]);
            xpp[a] = grid.d_phi(&xp[a]);
        }
        let d1 = [assemble(xt), assemble(xp)];
        let d2 = [assemble(xtt), assemble(xtp), assemble(xpp)];
        Self::build(grid, backend, pos, d1, d2, opts)
    }

    fn build(
        grid: Arc<SurfaceGrid<T>>,
        backend: MetricBackend<T>,
        pos: Vec<Vec4<T>>,
        d1: [Vec<Vec4<T>>; 2],
        d2: [Vec<Vec4<T>>; 3],
        opts: SurfaceOptions,
    ) -> Result<Self> {
        let n = grid.len();
        for x in &pos {
            backend.check_admissible(x)?;
        }
        let [e_theta, e_phi] = d1;
        let ambient_metric: Vec<Mat4<T>> = pos.iter().map(|x| backend.metric(x)).collect();
        let christoffels: Vec<Chr4<T>> = pos.iter().map(|x| backend.christoffel(x)).collect();

        let mut h = SymTwoTensorField::zeros(n);
        let mut worst: Option<(usize, T)> = None;
        for k in 0..n {
            let g = &ambient_metric[k];
            let (e, f, gg) = (inner(g, &e_theta[k], &e_theta[k]), inner(g, &e_theta[k], &e_phi[k]), inner(g, &e_phi[k], &e_phi[k]));
            h.tt[k] = e;
            h.tp[k] = f;
            h.pp[k] = gg;
            let half_tr = T::lit(0.5) * (e + gg);
            let lam_min = half_tr - (half_tr * half_tr - (e * gg - f * f)).max(T::zero()).sqrt();
            if !(lam_min > T::zero()) && worst.is_none_or(|(_, w)| lam_min < w || lam_min.is_nan()) {
                worst = Some((k, lam_min));
            }
        }
        if let Some((node, value)) = worst {
            return Err(GeomError::NotSpacelike { node, value: value.to_f64_lossy() });
        }
        let metric = InducedMetric::new(grid, h)?;

        let mut fn_ = Vec::with_capacity(n);
        let mut fv = Vec::with_capacity(n);
        for k in 0..n {
            let g = &ambient_metric[k];
            let hi = metric.inv.at(k);
            let tangents = [e_theta[k], e_phi[k]];
            let project = |u: &Vec4<T>| -> Vec4<T> {
                let c = [inner(g, u, &tangents[0]), inner(g, u, &tangents[1])];
                let mut out = *u;
                for i in 0..2 {
                    let coef = hi[i][0] * c[0] + hi[i][1] * c[1];
                    for a in 0..4 {
                        out[a] -= coef * tangents[i][a];
                    }
                }
                out
            };
            let u = project(&[T::one(), T::zero(), T::zero(), T::zero()]);
            let uu = inner(g, &u, &u);
            if !(uu < T::zero()) {
                return Err(GeomError::InvalidNormal {
                    node: k,
                    detail: format!("projected time direction has <u,u> = {uu}"),
                });
            }
            let nn: Vec4<T> = u.map(|c| c / (-uu).sqrt());
            let x = pos[k];
            let radial = [T::zero(), x[1], x[2], x[3]];
            let mut w = project(&radial);
            let wn = inner(g, &w, &nn);
            for a in 0..4 {
                w[a] += wn * nn[a];
            }
            let ww = inner(g, &w, &w);
            if !(ww > T::epsilon() * inner(g, &radial, &radial).abs()) {
                return Err(GeomError::InvalidNormal {
                    node: k,
                    detail: format!("radial direction is tangent (normal part norm^2 {ww})"),
                });
            }
            fn_.push(nn);
            fv.push(w.map(|c| c / ww.sqrt()));
        }
        let frame = NormalFrame { n: fn_, v: fv };

        let tangents = [&e_theta, &e_phi];
        let pairs = [(0usize, 0usize), (0, 1), (1, 1)];
        let mut ii_ambient: [Vec<Vec4<T>>; 3] = Default::default();
        for (slot, &(i, j)) in pairs.iter().enumerate() {
            let mut col = Vec::with_capacity(n);
            for k in 0..n {
                let gam = contract_chr(&christoffels[k], &tangents[i][k], &tangents[j][k]);
                let mut vv = d2[slot][k];
                for a in 0..4 {
                    vv[a] += gam[a];
                }
                let g = &ambient_metric[k];
                let a_n = -inner(g, &vv, &frame.n[k]);
                let b_v = inner(g, &vv, &frame.v[k]);
                let mut nor = [T::zero(); 4];
                for c in 0..4 {
                    nor[c] = a_n * frame.n[k][c] + b_v * frame.v[k][c];
                }
                col.push(nor);
            }
            ii_ambient[slot] = col;
        }
        let mut surf = Self {
            backend,
            positions: pos,
            e_theta,
            e_phi,
            ambient_metric,
            christoffels,
            metric,
            frame,
            ii_ambient,
            sff: SecondFundamentalForm {
                ii_n: SymTwoTensorField::zeros(0),
                ii_v: SymTwoTensorField::zeros(0),
                mean: Vec::new(),
                mean_sq: Vec::new(),
            },
        };
        surf.sff = surf.second_fundamental_form();
        if opts.require_spacelike_mean_curvature {
            surf.check_spacelike_mean_curvature()?;
        }
        Ok(surf)
    }

    fn second_fundamental_form(&self) -> SecondFundamentalForm<T> {
        let n = self.len();
        let mut ii_n = SymTwoTensorField::zeros(n);
        let mut ii_v = SymTwoTensorField::zeros(n);
        for k in 0..n {
            let g = &self.ambient_metric[k];
            let co = |u: &Vec4<T>| (-inner(g, u, &self.frame.n[k]), inner(g, u, &self.frame.v[k]));
            let (a, b) = co(&self.ii_ambient[0][k]);
            ii_n.tt[k] = a;
            ii_v.tt[k] = b;
            let (a, b) = co(&self.ii_ambient[1][k]);
            ii_n.tp[k] = a;
            ii_v.tp[k] = b;
            let (a, b) = co(&self.ii_ambient[2][k]);
            ii_n.pp[k] = a;
            ii_v.pp[k] = b;
        }
        let hn = self.metric.trace(&ii_n);
        let hv = self.metric.trace(&ii_v);
        let mean: Vec<NormalVector<T>> = hn.iter().zip(&hv).map(|(&a, &b)| NormalVector::new(a, b)).collect();
        let mean_sq = mean.iter().map(|m| m.norm_sq()).collect();
        SecondFundamentalForm { ii_n, ii_v, mean, mean_sq }
    }

    /// Errors at the node with the smallest `<H, H>` if it is not above the floor.
    pub fn check_spacelike_mean_curvature(&self) -> Result<()> {
        let (mut node, mut value) = (0, T::infinity());
        for (k, &s) in self.sff.mean_sq.iter().enumerate() {
            if s < value || s.is_nan() {
                node = k;
                value = s;
            }
        }
        if !(value > T::lit(MEAN_CURVATURE_FLOOR)) {
            return Err(GeomError::MeanCurvatureNotSpacelike { node, value: value.to_f64_lossy() });
        }
        Ok(())
    }

    pub fn grid(&self) -> &SurfaceGrid<T> {
        self.metric.grid()
    }

    pub fn grid_arc(&self) -> &Arc<SurfaceGrid<T>> {
        self.metric.grid_arc()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn area(&self) -> T {
        self.metric.area
    }

    /// Ambient inner product at node `k`.
    pub fn ambient_inner(&self, k: usize, u: &Vec4<T>, w: &Vec4<T>) -> T {
        inner(&self.ambient_metric[k], u, w)
    }

    /// Ambient components of a normal vector at node `k`.
    pub fn normal_vector(&self, k: usize, w: NormalVector<T>) -> Vec4<T> {
        let mut out = [T::zero(); 4];
        for a in 0..4 {
            out[a] = w.n * self.frame.n[k][a] + w.v * self.frame.v[k][a];
        }
        out
    }

    /// Splits `u = tangential + a n + b v` at node `k`.
    pub fn normal_decompose(&self, k: usize, u: &Vec4<T>) -> (Vec4<T>, NormalVector<T>) {
        let a = -self.ambient_inner(k, u, &self.frame.n[k]);
        let b = self.ambient_inner(k, u, &self.frame.v[k]);
        let nor = self.normal_vector(k, NormalVector::new(a, b));
        let mut tan = *u;
        for c in 0..4 {
            tan[c] -= nor[c];
        }
        (tan, NormalVector::new(a, b))
    }

    /// Same surface with the frame replaced by its boost by a constant
    /// rapidity `psi`: `n' = cosh n + sinh v`, `v' = sinh n + cosh v`.
    pub fn with_boosted_frame(&self, psi: T) -> Self {
        let (c, s) = (psi.cosh(), psi.sinh());
        let mut out = self.clone();
        for k in 0..self.len() {
            let (n0, v0) = (self.frame.n[k], self.frame.v[k]);
            for a in 0..4 {
                out.frame.n[k][a] = c * n0[a] + s * v0[a];
                out.frame.v[k][a] = s * n0[a] + c * v0[a];
            }
        }
        out.sff = out.second_fundamental_form();
        out
    }

    /// Node positions, mean curvature vector coefficients and `<H, H>` as CSV.
    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        let cols: Vec<Vec<T>> = (0..4)
            .map(|a| component(&self.positions, a))
            .chain([
                self.sff.mean.iter().map(|m| m.n).collect(),
                self.sff.mean.iter().map(|m| m.v).collect(),
                self.sff.mean_sq.clone(),
            ])
            .collect();
        let refs: Vec<&[T]> = cols.iter().map(|c| c.as_slice()).collect();
        crate::sphere::fields::write_columns(
            self.grid(),
            &["x0", "x1", "x2", "x3", "H_n", "H_v", "H_sq"],
            &refs,
            w,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(nt: usize, np: usize) -> Arc<SurfaceGrid<f64>> {
        Arc::new(SurfaceGrid::new(nt, np).unwrap())
    }

    #[test]
    fn round_sphere_in_minkowski() {
        let s = evaluate_surface(&EmbeddingSpec::RoundSphere { radius: 1.0, time: 0.0 }, grid(16, 32), MetricBackend::minkowski()).unwrap();
        assert!((s.area() - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        for k in 0..s.len() {
            assert!((s.sff.mean_sq[k] - 4.0).abs() < 1e-10);
            let hv = s.normal_vector(k, s.sff.mean[k]);
            let x = s.positions[k];
            assert!(hv[1] * x[1] + hv[2] * x[2] + hv[3] * x[3] < 0.0);
        }
    }

    #[test]
    fn schwarzschild_symmetric_sphere() {
        let s = evaluate_surface(&EmbeddingSpec::RoundSphere { radius: 4.0, time: 0.0 }, grid(16, 32), MetricBackend::schwarzschild(1.0)).unwrap();
        for k in 0..s.len() {
            assert!((s.sff.mean_sq[k] - 0.125).abs() < 1e-10, "{}", s.sff.mean_sq[k]);
        }
    }

    #[test]
    fn spectral_and_closed_form_tangents_agree() {
        let spec = EmbeddingSpec::GraphSphere {
            radius: 1.0,
            time: 0.0,
            epsilon: 0.1,
            profile: HarmonicSeries::random(3, 1.0, 5),
        };
        let g = grid(24, 48);
        let a = evaluate_surface(&spec, g.clone(), MetricBackend::minkowski()).unwrap();
        let opts = SurfaceOptions { tangents: TangentSource::Spectral, ..Default::default() };
        let b = EmbeddedSurface::from_spec(&spec, g, MetricBackend::minkowski(), opts).unwrap();
        for k in 0..a.len() {
            assert!((a.sff.mean_sq[k] - b.sff.mean_sq[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn collapsed_surface_is_not_spacelike() {
        // t = 2 cos(theta) over the unit sphere is timelike near the equator.
        let spec = EmbeddingSpec::GraphSphere {
            radius: 1.0,
            time: 0.0,
            epsilon: 2.0,
            profile: HarmonicSeries::default().with_legendre(1, 1.0),
        };
        let r = evaluate_surface(&spec, grid(8, 16), MetricBackend::minkowski());
        assert!(matches!(r, Err(GeomError::NotSpacelike { .. })));
    }
}
