//! Hawking mass, uniformly area expanding velocities, the flow they generate,
//! and three independent evaluations of the first variation of the mass.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::connection::connection_form;
use crate::error::{GeomError, Result};
use crate::extrinsic::{EmbeddedSurface, NormalVector, SurfaceOptions, TangentSource};
use crate::linalg::{bilinear, Vec4};
use crate::scalar::Real;
use crate::sphere::{BandLimiter, HarmonicSeries, OneFormField, ScalarField, SurfaceGrid};

/// `|beta|` must stay below `1 - BETA_MARGIN`.
pub const BETA_MARGIN: f64 = 1e-6;

/// How `beta` is assigned to parameter labels `(theta, phi)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BetaPolicy {
    Constant { value: f64 },
    /// Closed-form spherical-harmonic expression.
    Harmonic { series: HarmonicSeries },
    /// Random band-limited field rescaled so that `max |beta| = max_abs`.
    RandomSmooth { seed: u64, l_max: usize, max_abs: f64 },
}

impl Default for BetaPolicy {
    fn default() -> Self {
        BetaPolicy::Constant { value: 0.0 }
    }
}

impl BetaPolicy {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Samples the policy on the grid and checks `|beta| < 1 - BETA_MARGIN`.
    pub fn evaluate<T: Real>(&self, grid: &SurfaceGrid<T>) -> Result<ScalarField<T>> {
        let f = match self {
            BetaPolicy::Constant { value } => ScalarField::constant(grid.len(), T::lit(*value)),
            BetaPolicy::Harmonic { series } => ScalarField::from_fn(grid, |t, p| series.eval(t, p)),
            BetaPolicy::RandomSmooth { seed, l_max, max_abs } => {
                let s = HarmonicSeries::random(*l_max, 1.0, *seed);
                let raw = ScalarField::from_fn(grid, |t, p| s.eval(t, p));
                let m = raw.max_abs();
                if m == T::zero() {
                    raw
                } else {
                    raw.map(|v| v * T::lit(*max_abs) / m)
                }
            }
        };
        check_beta(&f)?;
        Ok(f)
    }
}

fn check_beta<T: Real>(beta: &ScalarField<T>) -> Result<()> {
    let limit = T::one() - T::lit(BETA_MARGIN);
    for (k, &b) in beta.values.iter().enumerate() {
        if !(b.abs() < limit) {
            return Err(GeomError::BetaOutOfRange { node: k, value: b.to_f64_lossy() });
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HawkingMass {
    /// `sqrt(|S|/16pi) (1 - (1/16pi) int <H,H> dA)`.
    pub value: f64,
    /// Same with `<H,H>` replaced by `H^2 - (tr k)^2` for the outward normal `v`.
    pub split_form: f64,
    pub area: f64,
}

pub fn hawking_mass<T: Real>(s: &EmbeddedSurface<T>) -> HawkingMass {
    let sixteen_pi = T::lit(16.0) * T::PI();
    let area = s.area();
    let pre = (area / sixteen_pi).sqrt();
    let value = pre * (T::one() - s.metric.integrate(&s.sff.mean_sq) / sixteen_pi);
    let v = vec![NormalVector::new(T::zero(), T::one()); s.len()];
    let h = s.metric.trace(&s.sff.scalar_form(&v));
    let trk = s.metric.trace(&s.sff.scalar_form(&perp_all(&v)));
    let split: Vec<T> = h.iter().zip(&trk).map(|(&a, &b)| a * a - b * b).collect();
    let split_form = pre * (T::one() - s.metric.integrate(&split) / sixteen_pi);
    HawkingMass {
        value: value.to_f64_lossy(),
        split_form: split_form.to_f64_lossy(),
        area: area.to_f64_lossy(),
    }
}

fn perp_all<T: Real>(v: &[NormalVector<T>]) -> Vec<NormalVector<T>> {
    v.iter().map(|x| x.perp()).collect()
}

/// `xi = I + beta I^perp` with `I = -H / <H,H>`.
#[derive(Clone, Debug)]
pub struct FlowVelocity<T> {
    pub beta: ScalarField<T>,
    pub xi: Vec<NormalVector<T>>,
    pub nu: Vec<NormalVector<T>>,
    pub xi_perp: Vec<NormalVector<T>>,
    /// `max |-<xi, H> - 1|` and `max |<xi, H^perp> - beta|`.
    pub expansion_defect: T,
    pub beta_defect: T,
}

pub fn uae_velocity<T: Real>(s: &EmbeddedSurface<T>, beta: &ScalarField<T>) -> Result<FlowVelocity<T>> {
    check_beta(beta)?;
    s.check_spacelike_mean_curvature()?;
    let n = s.len();
    let mut xi = Vec::with_capacity(n);
    let mut nu = Vec::with_capacity(n);
    let (mut d1, mut d2) = (T::zero(), T::zero());
    for k in 0..n {
        let hvec = s.sff.mean[k];
        let i = hvec.scale(-T::one() / s.sff.mean_sq[k]);
        let x = i + i.perp().scale(beta.values[k]);
        d1 = d1.max((-x.dot(hvec) - T::one()).abs());
        d2 = d2.max((x.dot(hvec.perp()) - beta.values[k]).abs());
        nu.push(x.scale(T::one() / x.norm_sq().sqrt()));
        xi.push(x);
    }
    let xi_perp = perp_all(&xi);
    Ok(FlowVelocity { beta: beta.clone(), xi, nu, xi_perp, expansion_defect: d1, beta_defect: d2 })
}

/// Integrals entering the first-variation formulas; `value` is the prefactor
/// `sqrt(|S|/(16pi)^3)` times their sum.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct VariationTerms {
    pub euler: f64,
    pub einstein: f64,
    pub traceless: f64,
    pub gradient: f64,
    pub divergence: f64,
    pub value: f64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct MeanFrameVariation {
    pub terms: VariationTerms,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct MomentumFormVariation {
    pub terms: VariationTerms,
    /// `max |beta - tr k / H|`.
    pub beta_consistency: f64,
    /// `||div p_bar||` in `L^2`.
    pub div_p_bar_norm: f64,
    /// `integral of beta div p_bar`.
    pub beta_div_integral: f64,
    /// `max |alpha_nu - p_bar|` with `alpha_nu` differentiated directly on the
    /// grid; measures aliasing of the non-band-limited boost.
    pub p_bar_gauge_defect: f64,
}

fn prefactor<T: Real>(s: &EmbeddedSurface<T>) -> T {
    let sixteen_pi = T::lit(16.0) * T::PI();
    (s.area() / (sixteen_pi * sixteen_pi * sixteen_pi)).sqrt()
}

fn finish<T: Real>(s: &EmbeddedSurface<T>, parts: [T; 4]) -> VariationTerms {
    let f = |x: T| x.to_f64_lossy();
    let sum = parts[0] + parts[1] + parts[2] + parts[3];
    VariationTerms {
        euler: 0.0,
        einstein: f(parts[0]),
        traceless: f(parts[1]),
        gradient: f(parts[2]),
        divergence: f(parts[3]),
        value: f(prefactor(s) * sum),
    }
}

fn einstein_pair<T: Real>(s: &EmbeddedSurface<T>, k: usize, a: NormalVector<T>, b: NormalVector<T>) -> T {
    let g = s.backend.einstein(&s.positions[k]);
    let (u, w): (Vec4<T>, Vec4<T>) = (s.normal_vector(k, a), s.normal_vector(k, b));
    bilinear(&g, &u, &w)
}

fn log_gradient<T: Real>(s: &EmbeddedSurface<T>, f: &[T]) -> OneFormField<T> {
    s.metric.gradient(&ScalarField::new(f.iter().map(|v| v.ln()).collect())).lowered
}

/// First variation written with the mean curvature frame and `alpha_H`.
pub fn variation_mean_frame<T: Real>(s: &EmbeddedSurface<T>, vel: &FlowVelocity<T>) -> Result<MeanFrameVariation> {
    let n = s.len();
    let beta = &vel.beta.values;
    let two = T::lit(2.0);
    let nu_h = s.sff.nu_h();
    let h_perp: Vec<NormalVector<T>> = s.sff.mean.iter().map(|h| h.perp()).collect();
    let ein: Vec<T> = (0..n).map(|k| two * einstein_pair(s, k, h_perp[k].scale(-T::one()), vel.xi_perp[k])).collect();

    let a_h = s.metric.trace_free(&s.sff.scalar_form(&nu_h));
    let a_hp = s.metric.trace_free(&s.sff.scalar_form(&perp_all(&nu_h)));
    let q1 = s.metric.tensor_inner(&a_h, &a_h);
    let q2 = s.metric.tensor_inner(&a_h, &a_hp);
    let q3 = s.metric.tensor_inner(&a_hp, &a_hp);
    let tl: Vec<T> = (0..n).map(|k| q1[k] + two * beta[k] * q2[k] + q3[k]).collect();

    let c = connection_form(s, &nu_h)?;
    let dlog = log_gradient(s, &s.sff.mean_norm());
    let g1 = s.metric.form_inner(&dlog, &dlog);
    let g2 = s.metric.form_inner(&c.alpha, &dlog);
    let g3 = s.metric.form_inner(&c.alpha, &c.alpha);
    let gr: Vec<T> = (0..n).map(|k| two * (g1[k] + two * beta[k] * g2[k] + g3[k])).collect();
    let dv: Vec<T> = (0..n).map(|k| two * beta[k] * c.divergence.values[k]).collect();

    let m = &s.metric;
    Ok(MeanFrameVariation { terms: finish(s, [m.integrate(&ein), m.integrate(&tl), m.integrate(&gr), m.integrate(&dv)]) })
}

/// First variation in terms of the hypersurface swept out by the flow,
/// with every quantity expressed on the surface itself.
pub fn variation_momentum_form<T: Real>(s: &EmbeddedSurface<T>, vel: &FlowVelocity<T>) -> Result<MomentumFormVariation> {
    let n = s.len();
    let beta = &vel.beta.values;
    let two = T::lit(2.0);
    let nu = &vel.nu;
    let nu_perp = perp_all(nu);
    let energy: Vec<T> = (0..n)
        .map(|k| two * einstein_pair(s, k, nu_perp[k], nu_perp[k]) - two * beta[k] * einstein_pair(s, k, nu[k], nu_perp[k]))
        .collect();

    let a_full = s.sff.scalar_form(nu);
    let k_sigma = s.sff.scalar_form(&nu_perp);
    let a = s.metric.trace_free(&a_full);
    let k0 = s.metric.trace_free(&k_sigma);
    let p0 = crate::sphere::SymTwoTensorField::new(
        k0.tt.iter().map(|v| -*v).collect(),
        k0.tp.iter().map(|v| -*v).collect(),
        k0.pp.iter().map(|v| -*v).collect(),
    );
    let q1 = s.metric.tensor_inner(&a, &a);
    let q2 = s.metric.tensor_inner(&a, &p0);
    let q3 = s.metric.tensor_inner(&p0, &p0);
    let tl: Vec<T> = (0..n).map(|k| q1[k] + two * beta[k] * q2[k] + q3[k]).collect();

    let hmean: Vec<T> = (0..n).map(|k| -s.sff.mean[k].dot(nu[k])).collect();
    let trk: Vec<T> = (0..n).map(|k| -s.sff.mean[k].dot(nu_perp[k])).collect();
    let mut consistency = T::zero();
    for k in 0..n {
        consistency = consistency.max((beta[k] - trk[k] / hmean[k]).abs());
    }
    // nu = cosh(psi) nu_H + sinh(psi) nu_H^perp with tanh(psi) = beta, so by the
    // gauge law p_bar = alpha_H - d psi and H = |H| cosh(psi); d psi comes from
    // the chain rule rather than differentiating 1/sqrt(1 - beta^2) on the grid.
    let alpha_h = connection_form(s, &s.sff.nu_h())?.alpha;
    let dbeta = s.metric.gradient(&vel.beta).lowered;
    let w: Vec<T> = beta.iter().map(|b| T::one() / (T::one() - *b * *b)).collect();
    let dpsi = OneFormField::new(
        (0..n).map(|k| dbeta.theta[k] * w[k]).collect(),
        (0..n).map(|k| dbeta.phi[k] * w[k]).collect(),
    );
    let pbar = alpha_h.sub(&dpsi);
    let pbar_div = s.metric.divergence(&pbar);
    let direct = connection_form(s, nu)?.alpha.sub(&pbar);
    let gauge_defect = s.metric.form_inner(&direct, &direct).into_iter().fold(T::zero(), |m, v| m.max(v.max(T::zero()).sqrt()));
    let dlog_abs = log_gradient(s, &s.sff.mean_norm());
    let dlog = dlog_abs.add(&OneFormField::new(
        (0..n).map(|k| beta[k] * dpsi.theta[k]).collect(),
        (0..n).map(|k| beta[k] * dpsi.phi[k]).collect(),
    ));
    let g1 = s.metric.form_inner(&dlog, &dlog);
    let g2 = s.metric.form_inner(&pbar, &dlog);
    let g3 = s.metric.form_inner(&pbar, &pbar);
    let gr: Vec<T> = (0..n).map(|k| two * (g1[k] + two * beta[k] * g2[k] + g3[k])).collect();
    let bd: Vec<T> = (0..n).map(|k| beta[k] * pbar_div.values[k]).collect();
    let dv: Vec<T> = bd.iter().map(|v| -two * *v).collect();

    let m = &s.metric;
    Ok(MomentumFormVariation {
        terms: finish(s, [m.integrate(&energy), m.integrate(&tl), m.integrate(&gr), m.integrate(&dv)]),
        beta_consistency: consistency.to_f64_lossy(),
        div_p_bar_norm: m.l2_norm(&pbar_div.values).to_f64_lossy(),
        p_bar_gauge_defect: gauge_defect.to_f64_lossy(),
        beta_div_integral: m.integrate(&bd).to_f64_lossy(),
    })
}

fn flow_options() -> SurfaceOptions {
    SurfaceOptions { tangents: TangentSource::Spectral, require_spacelike_mean_curvature: true }
}

fn velocity_field<T: Real>(s: &EmbeddedSurface<T>, policy: &BetaPolicy, limiter: &BandLimiter<T>) -> Result<Vec<Vec4<T>>> {
    let beta = policy.evaluate(s.grid())?;
    let v = uae_velocity(s, &beta)?;
    let amb: Vec<Vec4<T>> = (0..s.len()).map(|k| s.normal_vector(k, v.xi[k])).collect();
    let mut out = vec![[T::zero(); 4]; s.len()];
    for a in 0..4 {
        let c: Vec<T> = amb.iter().map(|x| x[a]).collect();
        for (o, v) in out.iter_mut().zip(limiter.apply(&c)) {
            o[a] = v;
        }
    }
    Ok(out)
}

fn shifted<T: Real>(base: &[Vec4<T>], k: &[Vec4<T>], c: T) -> Vec<Vec4<T>> {
    base.iter()
        .zip(k)
        .map(|(x, d)| [x[0] + c * d[0], x[1] + c * d[1], x[2] + c * d[2], x[3] + c * d[3]])
        .collect()
}

fn rebuild<T: Real>(s: &EmbeddedSurface<T>, pos: Vec<Vec4<T>>) -> Result<EmbeddedSurface<T>> {
    EmbeddedSurface::from_positions(pos, Arc::clone(s.grid_arc()), s.backend, flow_options())
}

/// Advances `dX/dlambda = xi` by `dl` (negative steps allowed) with classical
/// Runge-Kutta stages.
///
/// The velocity is projected onto spherical harmonics the grid resolves and
/// the step is split so that `|dl| * stiffness <= 2`, where the stiffness
/// `l_max (l_max + 1) (4 pi / |S|) / min <H,H>` bounds the linearized flow
/// operator on that band.
pub fn flow_step<T: Real>(s: &EmbeddedSurface<T>, policy: &BetaPolicy, dl: T) -> Result<EmbeddedSurface<T>> {
    let limiter = BandLimiter::new(s.grid(), s.grid().n_theta() - 1);
    let l = T::lit(limiter.l_max() as f64);
    let min_h = s.sff.mean_sq.iter().fold(T::infinity(), |m, &v| m.min(v));
    let stiffness = l * (l + T::one()) * T::lit(4.0) * T::PI() / (s.area() * min_h);
    let n_sub = (dl.abs() * stiffness / T::lit(2.0)).ceil().to_f64_lossy().max(1.0) as usize;
    let sub = dl / T::lit(n_sub as f64);
    let mut cur = rk4_step(s, policy, sub, &limiter)?;
    for _ in 1..n_sub {
        cur = rk4_step(&cur, policy, sub, &limiter)?;
    }
    Ok(cur)
}

fn rk4_step<T: Real>(s: &EmbeddedSurface<T>, policy: &BetaPolicy, dl: T, limiter: &BandLimiter<T>) -> Result<EmbeddedSurface<T>> {
    let half = T::lit(0.5);
    let x0 = &s.positions;
    let k1 = velocity_field(s, policy, limiter)?;
    let s2 = rebuild(s, shifted(x0, &k1, half * dl))?;
    let k2 = velocity_field(&s2, policy, limiter)?;
    let s3 = rebuild(s, shifted(x0, &k2, half * dl))?;
    let k3 = velocity_field(&s3, policy, limiter)?;
    let s4 = rebuild(s, shifted(x0, &k3, dl))?;
    let k4 = velocity_field(&s4, policy, limiter)?;
    let sixth = dl / T::lit(6.0);
    let two = T::lit(2.0);
    let pos = (0..s.len())
        .map(|k| {
            let mut x = x0[k];
            for a in 0..4 {
                x[a] += sixth * (k1[k][a] + two * k2[k][a] + two * k3[k][a] + k4[k][a]);
            }
            x
        })
        .collect();
    rebuild(s, pos)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlowRecord {
    pub lambda: f64,
    pub area: f64,
    pub hawking_mass: f64,
    pub time_flat_residual: f64,
    pub beta_min: f64,
    pub beta_max: f64,
}

#[derive(Clone, Debug)]
pub struct FlowState<T> {
    pub records: Vec<FlowRecord>,
    pub surface: EmbeddedSurface<T>,
}

impl<T: Real> FlowState<T> {
    /// `max | |S_l| - |S_0| e^l | / (|S_0| e^l)` over the records.
    pub fn area_law_defect(&self) -> f64 {
        let a0 = self.records[0].area;
        self.records
            .iter()
            .map(|r| {
                let e = a0 * r.lambda.exp();
                (r.area - e).abs() / e
            })
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "lambda,area,hawking_mass,time_flat_residual,beta_min,beta_max")?;
        for r in &self.records {
            writeln!(
                w,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                r.lambda, r.area, r.hawking_mass, r.time_flat_residual, r.beta_min, r.beta_max
            )?;
        }
        Ok(())
    }
}

fn record<T: Real>(s: &EmbeddedSurface<T>, policy: &BetaPolicy, lambda: f64) -> Result<FlowRecord> {
    let beta = policy.evaluate(s.grid())?;
    let c = connection_form(s, &s.sff.nu_h())?;
    Ok(FlowRecord {
        lambda,
        area: s.area().to_f64_lossy(),
        hawking_mass: hawking_mass(s).value,
        time_flat_residual: s.metric.l2_norm(&c.divergence.values).to_f64_lossy(),
        beta_min: beta.values.iter().fold(f64::INFINITY, |m, v| m.min(v.to_f64_lossy())),
        beta_max: beta.values.iter().fold(f64::NEG_INFINITY, |m, v| m.max(v.to_f64_lossy())),
    })
}

/// Runs `steps` flow steps of size `dl`; geometry failures become
/// [`GeomError::FlowHalt`] carrying the last good `lambda`.
pub fn run_flow<T: Real>(s0: &EmbeddedSurface<T>, policy: &BetaPolicy, dl: T, steps: usize) -> Result<FlowState<T>> {
    let mut s = s0.clone();
    let mut records = vec![record(&s, policy, 0.0)?];
    let dlf = dl.to_f64_lossy();
    for i in 0..steps {
        let last = dlf * i as f64;
        let next = flow_step(&s, policy, dl)
            .and_then(|n| record(&n, policy, dlf * (i + 1) as f64).map(|r| (n, r)));
        match next {
            Ok((n, r)) => {
                s = n;
                records.push(r);
            }
            Err(e) => return Err(GeomError::FlowHalt { last_good_lambda: last, source: Box::new(e) }),
        }
    }
    Ok(FlowState { records, surface: s })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FiniteDifferenceVariation {
    /// Richardson-extrapolated derivative.
    pub value: f64,
    pub coarse: f64,
    pub fine: f64,
    /// `|fine - coarse| / 3`.
    pub error_bar: f64,
    pub step: f64,
}

fn central<T: Real>(s: &EmbeddedSurface<T>, policy: &BetaPolicy, h: T) -> Result<f64> {
    let p = hawking_mass(&flow_step(s, policy, h)?).value;
    let m = hawking_mass(&flow_step(s, policy, -h)?).value;
    Ok((p - m) / (2.0 * h.to_f64_lossy()))
}

/// Central differences of `m_H` along the flow at `h` and `h/2`, Richardson
/// extrapolated.
pub fn variation_fd<T: Real>(s: &EmbeddedSurface<T>, policy: &BetaPolicy, h: T) -> Result<FiniteDifferenceVariation> {
    let coarse = central(s, policy, h)?;
    let fine = central(s, policy, h * T::lit(0.5))?;
    Ok(FiniteDifferenceVariation {
        value: (4.0 * fine - coarse) / 3.0,
        coarse,
        fine,
        error_bar: (fine - coarse).abs() / 3.0,
        step: h.to_f64_lossy(),
    })
}

/// Second central difference of `m_H` along the flow.
pub fn second_variation_fd<T: Real>(s: &EmbeddedSurface<T>, policy: &BetaPolicy, h: T) -> Result<f64> {
    let base = EmbeddedSurface::from_positions(s.positions.clone(), Arc::clone(s.grid_arc()), s.backend, flow_options())?;
    let m0 = hawking_mass(&base).value;
    let p = hawking_mass(&flow_step(s, policy, h)?).value;
    let m = hawking_mass(&flow_step(s, policy, -h)?).value;
    let hf = h.to_f64_lossy();
    Ok((p - 2.0 * m0 + m) / (hf * hf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extrinsic::{evaluate_surface, EmbeddingSpec};
    use crate::spacetime::MetricBackend;

    fn sphere(r: f64, b: MetricBackend<f64>) -> EmbeddedSurface<f64> {
        let g = Arc::new(SurfaceGrid::new(16, 32).unwrap());
        evaluate_surface(&EmbeddingSpec::RoundSphere { radius: r, time: 0.0 }, g, b).unwrap()
    }

    #[test]
    fn masses_of_symmetric_spheres() {
        let m = hawking_mass(&sphere(1.0, MetricBackend::minkowski()));
        assert!(m.value.abs() < 1e-10 && (m.value - m.split_form).abs() < 1e-10);
        let m = hawking_mass(&sphere(4.0, MetricBackend::schwarzschild(1.0)));
        assert!((m.value - 1.0).abs() < 1e-8, "{m:?}");
    }

    #[test]
    fn velocity_on_unit_sphere() {
        let s = sphere(1.0, MetricBackend::minkowski());
        let v = uae_velocity(&s, &ScalarField::zeros(s.len())).unwrap();
        for k in 0..s.len() {
            assert!((v.xi[k].v - 0.5).abs() < 1e-12 && v.xi[k].n.abs() < 1e-12);
        }
        let bad = ScalarField::constant(s.len(), 1.0);
        assert!(matches!(uae_velocity(&s, &bad), Err(GeomError::BetaOutOfRange { .. })));
    }

    #[test]
    fn round_sphere_variations_vanish() {
        let s = sphere(1.0, MetricBackend::minkowski());
        let policy = BetaPolicy::RandomSmooth { seed: 1, l_max: 3, max_abs: 0.5 };
        let beta = policy.evaluate(s.grid()).unwrap();
        let v = uae_velocity(&s, &beta).unwrap();
        assert!(variation_mean_frame(&s, &v).unwrap().terms.value.abs() < 1e-9);
        let fd = variation_fd(&s, &BetaPolicy::zero(), 1e-3).unwrap();
        assert!(fd.value.abs() < 1e-8);
    }

    #[test]
    fn imcf_of_round_sphere_grows_exponentially() {
        let s = sphere(1.0, MetricBackend::minkowski());
        let st = run_flow(&s, &BetaPolicy::zero(), 0.05, 4).unwrap();
        assert!(st.area_law_defect() < 1e-8, "{}", st.area_law_defect());
        let r = st.surface.positions[0];
        let rad = (r[1] * r[1] + r[2] * r[2] + r[3] * r[3]).sqrt();
        assert!((rad - (0.1f64).exp()).abs() < 1e-8);
    }
}
