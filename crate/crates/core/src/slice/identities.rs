//! Residual reports for the constraint equations and the identities used in
//! the Hawking mass variation along a flow inside a slice.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::connection::connection_form;
use crate::error::Result;
use crate::extrinsic::{EmbeddedSurface, NormalVector, SurfaceOptions};
use crate::linalg::{inner, Mat3, Vec3};
use crate::scalar::Real;
use crate::sphere::{HarmonicSeries, OneFormField, ScalarField, SurfaceGrid, SymTwoTensorField};

use super::algebra::fuzz_curvature_decomposition;
use super::{fd4, flat9, unflat9, SliceBackend, SliceKind, SliceSurface};

pub const CONSTRAINT_TOL: f64 = 1e-6;
pub const DIV_IDENTITY_TOL: f64 = 1e-6;
pub const ALGEBRA_TOL: f64 = 1e-12;
pub const P_ALPHA_TOL: f64 = 1e-6;
pub const DISPLACEMENT_TOL: f64 = 1e-5;
/// Default flow-parameter step of the first-variation checks.
pub const LAMBDA_STEP: f64 = 2e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativePath {
    Algebraic,
    ClosedForm,
    Spectral,
    FiniteDifference,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityReport {
    pub id: String,
    pub max_residual: f64,
    pub l2_residual: f64,
    pub threshold: f64,
    pub passed: bool,
    pub grid: Option<(usize, usize)>,
    pub inputs: String,
    pub path: DerivativePath,
}

impl IdentityReport {
    fn new(id: &str, residuals: &[f64], l2: Option<f64>, threshold: f64, inputs: String, path: DerivativePath) -> Self {
        let max = residuals.iter().fold(0.0f64, |m, r| if r.is_finite() { m.max(r.abs()) } else { f64::NAN });
        let rms = (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len().max(1) as f64).sqrt();
        let l2 = l2.unwrap_or(rms);
        Self {
            id: id.into(),
            max_residual: max,
            l2_residual: l2,
            threshold,
            passed: max.is_finite() && max < threshold,
            grid: None,
            inputs,
            path,
        }
    }

    fn on_grid<T: Real>(mut self, grid: &SurfaceGrid<T>) -> Self {
        self.grid = Some((grid.n_theta(), grid.n_phi()));
        self
    }
}

/// Symmetric tensor fields on a slice used to exercise the divergence identities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestTensor {
    Constant { seed: u64 },
    Linear { seed: u64 },
    /// `(1 + |x|^2 / 10) delta + x x^T / 20`.
    RadialQuadratic,
    /// `p = (tr k) g - k` of the slice itself.
    SliceMomentum,
}

fn random_sym(rng: &mut ChaCha8Rng, amp: f64) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let v = amp * rng.gen_range(-1.0..1.0);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

impl TestTensor {
    pub fn describe(&self) -> String {
        match self {
            TestTensor::Constant { seed } => format!("constant p (seed {seed})"),
            TestTensor::Linear { seed } => format!("linear p (seed {seed})"),
            TestTensor::RadialQuadratic => "radial quadratic p".into(),
            TestTensor::SliceMomentum => "p = (tr k) g - k".into(),
        }
    }

    pub fn evaluate<T: Real>(&self, slice: &SliceBackend<T>, x: &Vec3<T>) -> Mat3<T> {
        let lift = |m: [[f64; 3]; 3]| m.map(|r| r.map(T::lit));
        match *self {
            TestTensor::Constant { seed } => lift(random_sym(&mut ChaCha8Rng::seed_from_u64(seed), 1.0)),
            TestTensor::Linear { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut p = lift(random_sym(&mut rng, 1.0));
                for xa in x {
                    let l = lift(random_sym(&mut rng, 0.3));
                    for i in 0..3 {
                        for j in 0..3 {
                            p[i][j] += *xa * l[i][j];
                        }
                    }
                }
                p
            }
            TestTensor::RadialQuadratic => {
                let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                let mut p = [[T::zero(); 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        p[i][j] = x[i] * x[j] / T::lit(20.0);
                    }
                    p[i][i] += T::one() + r2 / T::lit(10.0);
                }
                p
            }
            TestTensor::SliceMomentum => slice.momentum_tensor(x),
        }
    }
}

fn slice_label(kind: &SliceKind) -> String {
    serde_json::to_string(kind).unwrap_or_default()
}

/// Both constraint residuals at `count` sampled points.
pub fn verify_constraints<T: Real>(slice: &SliceBackend<T>, count: usize, seed: u64) -> Result<[IdentityReport; 2]> {
    let mut ham = Vec::with_capacity(count);
    let mut mom = Vec::with_capacity(count);
    for x in slice.sample_points(count, seed) {
        let d = slice.slice_data(&x)?;
        ham.push(d.hamiltonian_residual.to_f64_lossy());
        mom.push(d.momentum_residual.iter().fold(0.0f64, |m, v| m.max(v.to_f64_lossy().abs())));
    }
    let inputs = format!("{} at {count} points", slice_label(&slice.kind));
    Ok([
        IdentityReport::new("hamiltonian_constraint", &ham, None, CONSTRAINT_TOL, inputs.clone(), DerivativePath::FiniteDifference),
        IdentityReport::new("momentum_constraint", &mom, None, CONSTRAINT_TOL, inputs, DerivativePath::FiniteDifference),
    ])
}

/// `-2 div p - 16 pi J` at sampled points.
pub fn verify_momentum_divergence<T: Real>(slice: &SliceBackend<T>, count: usize, seed: u64) -> Result<IdentityReport> {
    let mut res = Vec::with_capacity(count);
    for x in slice.sample_points(count, seed) {
        slice.check_admissible(&x)?;
        let div = slice.divergence_sym(&x, |y| slice.momentum_tensor(y));
        let (_, j) = slice.matter(&x);
        let sixteen_pi = T::lit(16.0) * T::PI();
        res.push((0..3).fold(0.0f64, |m, i| m.max((-T::lit(2.0) * div[i] - sixteen_pi * j[i]).to_f64_lossy().abs())));
    }
    Ok(IdentityReport::new(
        "momentum_divergence",
        &res,
        None,
        DIV_IDENTITY_TOL,
        format!("{} at {count} points", slice_label(&slice.kind)),
        DerivativePath::FiniteDifference,
    ))
}

/// `max(0, |J|_g - mu)` at sampled points.
pub fn verify_dominant_energy<T: Real>(slice: &SliceBackend<T>, count: usize, seed: u64) -> Result<IdentityReport> {
    let mut res = Vec::with_capacity(count);
    for x in slice.sample_points(count, seed) {
        slice.check_admissible(&x)?;
        let (mu, j) = slice.matter(&x);
        let gi = crate::linalg::invert(&slice.metric(&x)).expect("nondegenerate");
        let jn = inner(&gi, &j, &j).sqrt();
        res.push((jn - mu).to_f64_lossy().max(0.0));
    }
    Ok(IdentityReport::new(
        "dominant_energy",
        &res,
        None,
        1e-12,
        format!("{} at {count} points", slice_label(&slice.kind)),
        DerivativePath::ClosedForm,
    ))
}

pub fn verify_curvature_decomposition(count: usize, seed: u64) -> IdentityReport {
    let max = fuzz_curvature_decomposition::<f64>(count, seed);
    IdentityReport::new(
        "curvature_decomposition",
        &[max],
        None,
        ALGEBRA_TOL,
        format!("{count} random (g, p, mu, frame), seed {seed}"),
        DerivativePath::Algebraic,
    )
}

/// `(nabla_a p)_{bc}` at `x`, derivative index first.
fn covariant_derivative<T: Real>(s: &SliceSurface<T>, k: usize, p: &dyn Fn(&Vec3<T>) -> Mat3<T>) -> [Mat3<T>; 3] {
    let x = &s.positions[k];
    let chr = &s.christoffels[k];
    let px = p(x);
    let f = |y: &Vec3<T>| flat9(&p(y));
    let mut out = [[[T::zero(); 3]; 3]; 3];
    for a in 0..3 {
        let d = unflat9(&fd4(&f, x, a, s.slice.fd_step));
        for b in 0..3 {
            for c in 0..3 {
                let mut v = d[b][c];
                for e in 0..3 {
                    v -= chr[e][a][b] * px[e][c] + chr[e][a][c] * px[b][e];
                }
                out[a][b][c] = v;
            }
        }
    }
    out
}

fn nabla_nu_p_nu_nu<T: Real>(s: &SliceSurface<T>, k: usize, p: &dyn Fn(&Vec3<T>) -> Mat3<T>) -> T {
    let dp = covariant_derivative(s, k, p);
    let nu = &s.nu[k];
    let mut v = T::zero();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                v += nu[a] * nu[b] * nu[c] * dp[a][b][c];
            }
        }
    }
    v
}

/// `p(e_i, nu)` as a 1-form on the surface.
fn p_bar<T: Real>(s: &SliceSurface<T>, p: &[Mat3<T>]) -> OneFormField<T> {
    let n = s.len();
    let mut w = OneFormField::zeros(n);
    for k in 0..n {
        w.theta[k] = inner(&p[k], &s.e_theta[k], &s.nu[k]);
        w.phi[k] = inner(&p[k], &s.e_phi[k], &s.nu[k]);
    }
    w
}

fn to_f64<T: Real>(v: &[T]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64_lossy()).collect()
}

/// `(div p)(nu) = (nabla_nu p)(nu, nu) + div_Sigma(p_bar) + H p(nu, nu) - <A, p_Sigma>`.
pub fn verify_normal_divergence_split<T: Real>(s: &SliceSurface<T>, tensor: TestTensor) -> IdentityReport {
    let n = s.len();
    let slice = s.slice;
    let pf = |y: &Vec3<T>| tensor.evaluate(&slice, y);
    let p: Vec<Mat3<T>> = s.positions.iter().map(&pf).collect();
    let div_bar = s.metric.divergence(&p_bar(s, &p));
    let a_dot_p = s.metric.tensor_inner(&s.a, &s.restrict(&p));
    let res: Vec<T> = (0..n)
        .map(|k| {
            let div = slice.divergence_sym(&s.positions[k], pf);
            let lhs = (0..3).fold(T::zero(), |acc, c| acc + div[c] * s.nu[k][c]);
            let pnn = inner(&p[k], &s.nu[k], &s.nu[k]);
            let rhs = nabla_nu_p_nu_nu(s, k, &pf) + div_bar.values[k] + s.mean.values[k] * pnn - a_dot_p[k];
            lhs - rhs
        })
        .collect();
    let l2 = s.metric.l2_norm(&res).to_f64_lossy();
    IdentityReport::new(
        "normal_divergence_split",
        &to_f64(&res),
        Some(l2),
        DIV_IDENTITY_TOL,
        format!("{}, {}", slice_label(&slice.kind), tensor.describe()),
        DerivativePath::FiniteDifference,
    )
    .on_grid(s.grid())
}

/// Lifts the surface into spacetime and compares `p_bar` with the connection
/// 1-form of the slice normal `nu`, and `k|_Sigma` with the second fundamental
/// form along the slice's unit normal.
pub fn verify_p_equals_alpha<T: Real>(s: &SliceSurface<T>) -> Result<[IdentityReport; 2]> {
    let n = s.len();
    let slice = s.slice;
    let pos4 = s.positions.iter().map(|x| slice.embed(x)).collect();
    let lifted = EmbeddedSurface::from_positions(pos4, s.metric.grid_arc().clone(), slice.spacetime(), SurfaceOptions::default())?;
    let mut nus = Vec::with_capacity(n);
    for k in 0..n {
        let nu4 = slice.push_forward(&s.positions[k], &s.nu[k]);
        let (_, w) = lifted.normal_decompose(k, &nu4);
        nus.push(w);
    }
    let conn = connection_form(&lifted, &nus)?;
    let p: Vec<Mat3<T>> = s.positions.iter().map(|x| slice.momentum_tensor(x)).collect();
    let diff = p_bar(s, &p).sub(&conn.alpha);
    let pointwise: Vec<T> = s.metric.form_inner(&diff, &diff).into_iter().map(|v| v.max(T::zero()).sqrt()).collect();
    let inputs = slice_label(&slice.kind).to_string();
    let rep_alpha = IdentityReport::new(
        "p_bar_equals_alpha",
        &to_f64(&pointwise),
        Some(s.metric.l2_norm(&pointwise).to_f64_lossy()),
        P_ALPHA_TOL,
        inputs.clone(),
        DerivativePath::Spectral,
    )
    .on_grid(s.grid());

    let perp: Vec<NormalVector<T>> = nus.iter().map(|w| w.perp()).collect();
    let kk: Vec<Mat3<T>> = s.positions.iter().map(|x| slice.extrinsic(x)).collect();
    let k_sigma = s.restrict(&kk);
    let sff = lifted.sff.scalar_form(&perp);
    let d = SymTwoTensorField::new(
        (0..n).map(|i| k_sigma.tt[i] - sff.tt[i]).collect(),
        (0..n).map(|i| k_sigma.tp[i] - sff.tp[i]).collect(),
        (0..n).map(|i| k_sigma.pp[i] - sff.pp[i]).collect(),
    );
    let kres: Vec<T> = s.metric.tensor_inner(&d, &d).into_iter().map(|v| v.max(T::zero()).sqrt()).collect();
    let rep_k = IdentityReport::new(
        "slice_k_sign",
        &to_f64(&kres),
        Some(s.metric.l2_norm(&kres).to_f64_lossy()),
        P_ALPHA_TOL,
        inputs,
        DerivativePath::Spectral,
    )
    .on_grid(s.grid());
    Ok([rep_alpha, rep_k])
}

/// Sixth-order central difference from samples at `-3h..3h` without `0`.
fn fd6_lambda<T: Real>(q: [T; 6], h: T) -> T {
    let [m3, m2, m1, p1, p2, p3] = q;
    (p3 - m3 - T::lit(9.0) * (p2 - m2) + T::lit(45.0) * (p1 - m1)) / (T::lit(60.0) * h)
}

/// First variations along inverse mean curvature flow inside the slice,
/// from sixth-order differences in the flow parameter with step `h`.
pub fn verify_displacement_variations<T: Real>(s: &SliceSurface<T>, tensor: TestTensor, h: T) -> Result<Vec<IdentityReport>> {
    let n = s.len();
    let slice = s.slice;
    let speed: Vec<T> = s.mean.values.iter().map(|&hm| T::one() / hm).collect();
    let offsets = [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0].map(|c| T::lit(c) * h);
    let mut moved = Vec::with_capacity(6);
    for &o in &offsets {
        moved.push(s.displaced(&speed, o)?);
    }
    let pf = |y: &Vec3<T>| tensor.evaluate(&slice, y);
    let pnn2 = |m: &SliceSurface<T>, k: usize| inner(&pf(&m.positions[k]), &m.nu[k], &m.nu[k]).powi(2);
    let at = |f: &dyn Fn(&SliceSurface<T>) -> T| -> T {
        fd6_lambda([0, 1, 2, 3, 4, 5].map(|i| f(&moved[i])), h)
    };

    let inputs = format!("{}, {}, step {}", slice_label(&slice.kind), tensor.describe(), h);
    let mut out = Vec::new();
    let report = |id: &str, res: Vec<T>, tol: f64| {
        IdentityReport::new(
            id,
            &to_f64(&res),
            Some(s.metric.l2_norm(&res).to_f64_lossy()),
            tol,
            inputs.clone(),
            DerivativePath::FiniteDifference,
        )
        .on_grid(s.grid())
    };

    let r_da: Vec<T> = (0..n).map(|k| at(&|m| m.metric.sqrt_det[k]) - s.metric.sqrt_det[k]).collect();
    out.push(report("area_element_variation", r_da, DISPLACEMENT_TOL));

    let r_area = at(&|m| m.metric.area) - s.metric.area;
    out.push(
        IdentityReport::new("area_variation", &[r_area.to_f64_lossy()], None, DISPLACEMENT_TOL, inputs.clone(), DerivativePath::FiniteDifference)
            .on_grid(s.grid()),
    );

    let inv_h = ScalarField::new(speed.clone());
    let lap = s.metric.laplacian(&inv_h);
    let a2 = s.metric.tensor_inner(&s.a, &s.a);
    let gauss = s.metric.gauss_curvature();
    let r_h: Vec<T> = (0..n)
        .map(|k| {
            let hm = s.mean.values[k];
            let r = slice.scalar_curvature(&s.positions[k]);
            let rhs = -T::lit(2.0) * hm * lap.values[k] - r + T::lit(2.0) * gauss.values[k] - hm * hm - a2[k];
            at(&|m| m.mean.values[k].powi(2)) - rhs
        })
        .collect();
    out.push(report("mean_curvature_variation", r_h, DISPLACEMENT_TOL));

    let grad_h = s.metric.gradient(&s.mean).raised;
    let r_p: Vec<T> = (0..n)
        .map(|k| {
            let hm = s.mean.values[k];
            let p = pf(&s.positions[k]);
            let nu = &s.nu[k];
            let pnn = inner(&p, nu, nu);
            let gh = s.tangent(k, grad_h.theta[k], grad_h.phi[k]);
            let rhs = T::lit(2.0) * pnn / hm
                * (nabla_nu_p_nu_nu(s, k, &pf) + T::lit(2.0) * inner(&p, nu, &gh) / hm);
            at(&|m| pnn2(m, k)) - rhs
        })
        .collect();
    out.push(report("normal_momentum_variation", r_p, DISPLACEMENT_TOL));

    let grad_inv = s.metric.gradient(&inv_h).raised;
    let r_nu: Vec<T> = (0..n)
        .map(|k| {
            let nu = &s.nu[k];
            let vel = nu.map(|c| c * speed[k]);
            let gam = crate::linalg::contract_chr(&s.christoffels[k], &vel, nu);
            let target = s.tangent(k, -grad_inv.theta[k], -grad_inv.phi[k]);
            let mut d = [T::zero(); 3];
            for c in 0..3 {
                d[c] = at(&|m| m.nu[k][c]) + gam[c] - target[c];
            }
            inner(&s.g[k], &d, &d).sqrt()
        })
        .collect();
    out.push(report("normal_variation", r_nu, DISPLACEMENT_TOL));
    Ok(out)
}

/// The full battery on a fixed set of slices and surfaces.
pub fn identity_suite(n_theta: usize, n_phi: usize, seed: u64) -> Result<Vec<IdentityReport>> {
    let grid = Arc::new(SurfaceGrid::<f64>::new(n_theta, n_phi)?);
    let kinds = [
        SliceKind::MinkowskiFlat,
        SliceKind::SchwarzschildStatic { mass: 1.0 },
        SliceKind::MinkowskiGraph { epsilon: 0.1 },
        SliceKind::FlrwConstantTime { exponent: 2.0 / 3.0, time: 1.0 },
    ];
    let mut out = Vec::new();
    for kind in kinds {
        let sb = SliceBackend::<f64>::new(kind);
        out.extend(verify_constraints(&sb, 50, seed)?);
        out.push(verify_momentum_divergence(&sb, 50, seed)?);
        if !matches!(kind, SliceKind::MinkowskiGraph { .. }) {
            out.push(verify_dominant_energy(&sb, 50, seed)?);
        }
    }
    out.push(verify_curvature_decomposition(1000, seed));

    let bumpy = HarmonicSeries::constant(1.0).with_term(2, 1, 0.05).with_term(3, -2, 0.03);
    let surf = |kind: SliceKind, r: &HarmonicSeries| {
        SliceSurface::star_shaped(SliceBackend::new(kind), grid.clone(), [0.0; 3], r)
    };
    let flat = SliceKind::MinkowskiFlat;
    let schw = SliceKind::SchwarzschildStatic { mass: 1.0 };
    let graph = SliceKind::MinkowskiGraph { epsilon: 0.1 };
    let flrw = SliceKind::FlrwConstantTime { exponent: 2.0 / 3.0, time: 1.0 };
    let round = HarmonicSeries::constant(1.0);
    let big = HarmonicSeries::constant(4.0).with_term(2, 0, 0.1);

    out.push(verify_normal_divergence_split(&surf(flat, &round)?, TestTensor::Constant { seed }));
    out.push(verify_normal_divergence_split(&surf(flat, &bumpy)?, TestTensor::Linear { seed }));
    out.push(verify_normal_divergence_split(&surf(schw, &big)?, TestTensor::RadialQuadratic));
    out.push(verify_normal_divergence_split(&surf(graph, &bumpy)?, TestTensor::SliceMomentum));

    for (kind, r) in [(flat, &round), (flrw, &round), (graph, &bumpy)] {
        out.extend(verify_p_equals_alpha(&surf(kind, r)?)?);
    }

    out.extend(verify_displacement_variations(&surf(flat, &HarmonicSeries::constant(1.5))?, TestTensor::Constant { seed }, LAMBDA_STEP)?);
    out.extend(verify_displacement_variations(&surf(flat, &bumpy)?, TestTensor::Linear { seed }, LAMBDA_STEP)?);
    out.extend(verify_displacement_variations(&surf(schw, &big)?, TestTensor::RadialQuadratic, LAMBDA_STEP)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round(kind: SliceKind, r: f64) -> SliceSurface<f64> {
        let grid = Arc::new(SurfaceGrid::new(12, 24).unwrap());
        SliceSurface::star_shaped(SliceBackend::new(kind), grid, [0.0; 3], &HarmonicSeries::constant(r)).unwrap()
    }

    #[test]
    fn round_sphere_displacement_in_flat_slice() {
        let s = round(SliceKind::MinkowskiFlat, 1.5);
        for rep in verify_displacement_variations(&s, TestTensor::Constant { seed: 1 }, LAMBDA_STEP).unwrap() {
            assert!(rep.max_residual < 1e-8, "{rep:?}");
        }
    }

    #[test]
    fn comoving_sphere_has_vanishing_p_bar() {
        let s = round(SliceKind::FlrwConstantTime { exponent: 2.0 / 3.0, time: 1.0 }, 1.0);
        let [a, k] = verify_p_equals_alpha(&s).unwrap();
        assert!(a.passed && k.passed, "{a:?} {k:?}");
    }

    #[test]
    fn report_flags_nan() {
        let r = IdentityReport::new("x", &[1e-9, f64::NAN], None, 1e-6, String::new(), DerivativePath::Algebraic);
        assert!(!r.passed);
    }
}
