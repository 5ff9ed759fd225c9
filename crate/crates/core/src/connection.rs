//! Connection 1-form of the normal bundle, hyperbolic boosts of the normal
//! frame, the frame energy and its minimizer, and time flatness.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::extrinsic::{EmbeddedSurface, NormalVector};
use crate::linalg::{contract_chr, Vec4};
use crate::scalar::Real;
use crate::sphere::{OneFormField, Parity, ScalarField};

pub const TIME_FLAT_ABS: f64 = 1e-7;
pub const TIME_FLAT_REL: f64 = 1e-6;
pub const TIME_FLAT_FLOOR: f64 = 1e-12;
const UNIT_TOLERANCE: f64 = 1e-8;

/// `alpha_nu(X) = <D_X nu, nu^perp>` for a unit outward normal field `nu`.
#[derive(Clone, Debug)]
pub struct ConnectionForm<T> {
    pub alpha: OneFormField<T>,
    pub nu: Vec<NormalVector<T>>,
    /// Rapidity of `nu` relative to the stored outward normal `v`.
    pub boost: ScalarField<T>,
    pub divergence: ScalarField<T>,
    pub l2_norm: T,
    /// `max |<D nu^perp, nu> + alpha|`.
    pub antisymmetry_defect: T,
}

/// Rapidity field `theta` with `nu_bar = cosh(theta) nu + sinh(theta) nu^perp`.
pub type BoostField<T> = ScalarField<T>;

/// Ambient covariant derivatives `D_{e_theta} W`, `D_{e_phi} W` of a vector
/// field along the surface given by ambient components.
fn covariant_derivatives<T: Real>(s: &EmbeddedSurface<T>, w: &[Vec4<T>]) -> [Vec<Vec4<T>>; 2] {
    let g = s.grid();
    let n = s.len();
    let mut dt = vec![[T::zero(); 4]; n];
    let mut dp = vec![[T::zero(); 4]; n];
    for a in 0..4 {
        let c: Vec<T> = w.iter().map(|x| x[a]).collect();
        let ct = g.d_theta(&c, Parity::Even);
        let cp = g.d_phi(&c);
        for k in 0..n {
            dt[k][a] = ct[k];
            dp[k][a] = cp[k];
        }
    }
    for k in 0..n {
        let gt = contract_chr(&s.christoffels[k], &s.e_theta[k], &w[k]);
        let gp = contract_chr(&s.christoffels[k], &s.e_phi[k], &w[k]);
        for a in 0..4 {
            dt[k][a] += gt[a];
            dp[k][a] += gp[a];
        }
    }
    [dt, dp]
}

fn check_unit_outward<T: Real>(nu: &[NormalVector<T>]) -> Result<()> {
    for (k, v) in nu.iter().enumerate() {
        let q = v.norm_sq();
        if !((q - T::one()).abs() < T::lit(UNIT_TOLERANCE).max(T::epsilon() * T::lit(100.0))) || !(v.v > T::zero()) {
            return Err(GeomError::InvalidNormal {
                node: k,
                detail: format!("expected unit outward spacelike normal, got <nu,nu> = {q}, v-component {}", v.v),
            });
        }
    }
    Ok(())
}

/// Connection form of the normal field `nu` (coefficients in the stored frame).
pub fn connection_form<T: Real>(s: &EmbeddedSurface<T>, nu: &[NormalVector<T>]) -> Result<ConnectionForm<T>> {
    check_unit_outward(nu)?;
    let n = s.len();
    let amb: Vec<Vec4<T>> = (0..n).map(|k| s.normal_vector(k, nu[k])).collect();
    let amb_perp: Vec<Vec4<T>> = (0..n).map(|k| s.normal_vector(k, nu[k].perp())).collect();
    let [dt, dp] = covariant_derivatives(s, &amb);
    let [qt, qp] = covariant_derivatives(s, &amb_perp);
    let mut alpha = OneFormField::zeros(n);
    let mut defect = T::zero();
    for k in 0..n {
        alpha.theta[k] = s.ambient_inner(k, &dt[k], &amb_perp[k]);
        alpha.phi[k] = s.ambient_inner(k, &dp[k], &amb_perp[k]);
        let bt = s.ambient_inner(k, &qt[k], &amb[k]);
        let bp = s.ambient_inner(k, &qp[k], &amb[k]);
        defect = defect.max((bt + alpha.theta[k]).abs()).max((bp + alpha.phi[k]).abs());
    }
    let divergence = s.metric.divergence(&alpha);
    let l2_norm = functional_c(&alpha, s).sqrt();
    let boost = ScalarField::new(nu.iter().map(|v| (v.n / v.v).atanh()).collect());
    Ok(ConnectionForm { alpha, nu: nu.to_vec(), boost, divergence, l2_norm, antisymmetry_defect: defect })
}

/// `cosh(theta) nu + sinh(theta) nu^perp` node by node.
pub fn boost_frame<T: Real>(nu: &[NormalVector<T>], theta: &BoostField<T>) -> Vec<NormalVector<T>> {
    nu.iter()
        .zip(&theta.values)
        .map(|(v, &t)| v.scale(t.cosh()) + v.perp().scale(t.sinh()))
        .collect()
}

/// Stored outward normal boosted by a rapidity field.
pub fn outward_from_boost<T: Real>(theta: &BoostField<T>) -> Vec<NormalVector<T>> {
    theta.values.iter().map(|&t| NormalVector::boosted_outward(t)).collect()
}

/// `C = integral of |alpha|^2 dA`.
pub fn functional_c<T: Real>(alpha: &OneFormField<T>, s: &EmbeddedSurface<T>) -> T {
    s.metric.integrate(&s.metric.form_inner(alpha, alpha))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinimizerReport {
    pub c_initial: f64,
    pub c_final: f64,
    pub div_norm_initial: f64,
    pub div_norm_final: f64,
    pub alpha_norm_final: f64,
    pub theta_min: f64,
    pub theta_max: f64,
}

#[derive(Clone, Debug)]
pub struct FrameMinimizer<T> {
    pub nu: Vec<NormalVector<T>>,
    pub theta: BoostField<T>,
    pub connection: ConnectionForm<T>,
    pub report: MinimizerReport,
}

/// Boost `nu0` by the solution of `laplacian(theta) = div(alpha_nu0)`, which
/// makes the connection form divergence free.
pub fn minimize_frame<T: Real>(s: &EmbeddedSurface<T>, nu0: &[NormalVector<T>]) -> Result<FrameMinimizer<T>> {
    let c0 = connection_form(s, nu0)?;
    let theta = s.metric.solve_poisson(&c0.divergence)?;
    let nu = boost_frame(nu0, &theta);
    let c1 = connection_form(s, &nu)?;
    let f = |x: T| x.to_f64_lossy();
    let report = MinimizerReport {
        c_initial: f(c0.l2_norm * c0.l2_norm),
        c_final: f(c1.l2_norm * c1.l2_norm),
        div_norm_initial: f(s.metric.l2_norm(&c0.divergence.values)),
        div_norm_final: f(s.metric.l2_norm(&c1.divergence.values)),
        alpha_norm_final: f(c1.l2_norm),
        theta_min: theta.values.iter().fold(f64::INFINITY, |m, v| m.min(f(*v))),
        theta_max: theta.values.iter().fold(f64::NEG_INFINITY, |m, v| m.max(f(*v))),
    };
    Ok(FrameMinimizer { nu, theta, connection: c1, report })
}

/// Pointwise components of `(D^perp)^* D^perp nu - (-|alpha|^2 nu + div(alpha) nu^perp)`.
#[derive(Clone, Debug)]
pub struct ConnectionLaplacianResidual<T> {
    /// Left side components along `nu` and `nu^perp`.
    pub lhs_nu: ScalarField<T>,
    pub lhs_perp: ScalarField<T>,
    pub along_nu: ScalarField<T>,
    pub along_perp: ScalarField<T>,
}

pub fn connection_laplacian_residual<T: Real>(
    s: &EmbeddedSurface<T>,
    nu: &[NormalVector<T>],
) -> Result<ConnectionLaplacianResidual<T>> {
    let c = connection_form(s, nu)?;
    let n = s.len();
    // D^perp_j nu as ambient normal vectors.
    let amb: Vec<Vec4<T>> = (0..n).map(|k| s.normal_vector(k, nu[k])).collect();
    let [dt, dp] = covariant_derivatives(s, &amb);
    let normal_part = |k: usize, u: &Vec4<T>| s.normal_vector(k, s.normal_decompose(k, u).1);
    let wt: Vec<Vec4<T>> = (0..n).map(|k| normal_part(k, &dt[k])).collect();
    let wp: Vec<Vec4<T>> = (0..n).map(|k| normal_part(k, &dp[k])).collect();
    // -tr D W = -[(1/sqrt h) d_i(sqrt h h^ij W_j) + h^ij Gamma(e_i, W_j)]^perp
    let mut lhs = vec![[T::zero(); 4]; n];
    for a in 0..4 {
        let form = OneFormField::new(wt.iter().map(|w| w[a]).collect(), wp.iter().map(|w| w[a]).collect());
        let d = s.metric.divergence(&form);
        for k in 0..n {
            lhs[k][a] = d.values[k];
        }
    }
    let mut lhs_nu = ScalarField::zeros(n);
    let mut lhs_perp = ScalarField::zeros(n);
    let mut along_nu = ScalarField::zeros(n);
    let mut along_perp = ScalarField::zeros(n);
    let alpha_sq = s.metric.form_inner(&c.alpha, &c.alpha);
    for k in 0..n {
        let hi = s.metric.inv.at(k);
        let e = [s.e_theta[k], s.e_phi[k]];
        let w = [wt[k], wp[k]];
        let mut tot = lhs[k];
        for i in 0..2 {
            for j in 0..2 {
                let gam = contract_chr(&s.christoffels[k], &e[i], &w[j]);
                for a in 0..4 {
                    tot[a] += hi[i][j] * gam[a];
                }
            }
        }
        let (_, co) = s.normal_decompose(k, &tot);
        let co = co.scale(-T::one());
        // components in the (nu, nu^perp) basis
        let cn = co.dot(nu[k]);
        let cp = -co.dot(nu[k].perp());
        lhs_nu.values[k] = cn;
        lhs_perp.values[k] = cp;
        along_nu.values[k] = cn + alpha_sq[k];
        along_perp.values[k] = cp - c.divergence.values[k];
    }
    Ok(ConnectionLaplacianResidual { lhs_nu, lhs_perp, along_nu, along_perp })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TimeFlatReport {
    pub r_abs: f64,
    pub r_rel: f64,
    pub is_time_flat: bool,
    pub alpha_norm: f64,
    pub area: f64,
}

/// `||div alpha_H||` with absolute and relative thresholds.
pub fn time_flat_residual<T: Real>(s: &EmbeddedSurface<T>) -> Result<TimeFlatReport> {
    s.check_spacelike_mean_curvature()?;
    let c = connection_form(s, &s.sff.nu_h())?;
    let r_abs = s.metric.l2_norm(&c.divergence.values).to_f64_lossy();
    let alpha_norm = c.l2_norm.to_f64_lossy();
    let r_rel = r_abs / (alpha_norm + TIME_FLAT_FLOOR);
    let area = s.area().to_f64_lossy();
    let is_time_flat = r_abs < TIME_FLAT_ABS * area.sqrt() || r_rel < TIME_FLAT_REL;
    Ok(TimeFlatReport { r_abs, r_rel, is_time_flat, alpha_norm, area })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extrinsic::{evaluate_surface, EmbeddingSpec};
    use crate::spacetime::MetricBackend;
    use crate::sphere::{HarmonicSeries, SurfaceGrid};
    use std::sync::Arc;

    fn unit_sphere() -> EmbeddedSurface<f64> {
        let g = Arc::new(SurfaceGrid::new(16, 32).unwrap());
        evaluate_surface(&EmbeddingSpec::RoundSphere { radius: 1.0, time: 0.0 }, g, MetricBackend::minkowski()).unwrap()
    }

    #[test]
    fn round_sphere_is_parallel() {
        let s = unit_sphere();
        let c = connection_form(&s, &s.sff.nu_h()).unwrap();
        assert!(c.l2_norm < 1e-12);
        assert!(time_flat_residual(&s).unwrap().is_time_flat);
    }

    #[test]
    fn gauge_law_for_cos_boost() {
        let s = unit_sphere();
        let th = ScalarField::from_fn(s.grid(), |t, _| 0.1 * t.cos());
        let nu = boost_frame(&s.sff.nu_h(), &th);
        let c = connection_form(&s, &nu).unwrap();
        let dth = s.metric.gradient(&th).lowered;
        for k in 0..s.len() {
            assert!((c.alpha.theta[k] + dth.theta[k]).abs() < 1e-10);
            assert!((c.alpha.phi[k] + dth.phi[k]).abs() < 1e-10);
        }
        let cval = functional_c(&c.alpha, &s);
        let expect = 0.01 * 8.0 * std::f64::consts::PI / 3.0;
        assert!((cval / expect - 1.0).abs() < 1e-6);
        assert!(c.antisymmetry_defect < 1e-10);
    }

    #[test]
    fn rejects_non_unit_normal() {
        let s = unit_sphere();
        let nu = vec![NormalVector::new(0.0, 2.0); s.len()];
        assert!(matches!(connection_form(&s, &nu), Err(GeomError::InvalidNormal { .. })));
    }

    #[test]
    fn minimizer_undoes_boost() {
        let s = unit_sphere();
        let th = ScalarField::from_fn(s.grid(), |t, _| 0.1 * t.cos());
        let nu0 = boost_frame(&s.sff.nu_h(), &th);
        let m = minimize_frame(&s, &nu0).unwrap();
        let diff: Vec<f64> = m.theta.values.iter().zip(&th.values).map(|(a, b)| a + b).collect();
        let mean = diff.iter().sum::<f64>() / diff.len() as f64;
        assert!(diff.iter().all(|d| (d - mean).abs() < 1e-9));
        assert!(m.report.c_final < 1e-16);
    }

    #[test]
    fn graph_sphere_is_not_time_flat() {
        let g = Arc::new(SurfaceGrid::<f64>::new(24, 48).unwrap());
        let spec = EmbeddingSpec::GraphSphere {
            radius: 1.0,
            time: 0.0,
            epsilon: 0.3,
            profile: HarmonicSeries::default().with_term(2, 0, 1.0),
        };
        let s = evaluate_surface(&spec, g, MetricBackend::minkowski()).unwrap();
        let r = time_flat_residual(&s).unwrap();
        assert!(!r.is_time_flat && r.r_rel > 1e-2, "{r:?}");
    }
}
