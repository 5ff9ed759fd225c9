use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use timeflat::connection::{boost_frame, connection_form};
use timeflat::curve::{ClosedCurve, CurveSpec};
use timeflat::extrinsic::{evaluate_surface, EmbeddedSurface, EmbeddingSpec, NormalVector};
use timeflat::flow::{hawking_mass, uae_velocity, variation_momentum_form, variation_mean_frame, BetaPolicy};
use timeflat::slice::{decomposition_residual, random_decomposition_inputs};
use timeflat::spacetime::MetricBackend;
use timeflat::sphere::{HarmonicSeries, InducedMetric, ScalarField, SurfaceGrid};

fn grid() -> Arc<SurfaceGrid<f64>> {
    static G: OnceLock<Arc<SurfaceGrid<f64>>> = OnceLock::new();
    G.get_or_init(|| Arc::new(SurfaceGrid::new(16, 32).unwrap())).clone()
}

fn acceptance_grid() -> Arc<SurfaceGrid<f64>> {
    static G: OnceLock<Arc<SurfaceGrid<f64>>> = OnceLock::new();
    G.get_or_init(|| Arc::new(SurfaceGrid::new(32, 64).unwrap())).clone()
}

fn perturbed(seed: u64, eps: f64) -> EmbeddedSurface<f64> {
    perturbed_on(grid(), seed, eps)
}

fn perturbed_on(g: Arc<SurfaceGrid<f64>>, seed: u64, eps: f64) -> EmbeddedSurface<f64> {
    let spec = EmbeddingSpec::RadialPerturbation {
        radius: 1.0,
        time: 0.0,
        epsilon: eps,
        profile: HarmonicSeries::random(3, 1.0, seed),
    };
    evaluate_surface(&spec, g, MetricBackend::minkowski()).unwrap()
}

fn field(g: &SurfaceGrid<f64>, seed: u64, amp: f64) -> ScalarField<f64> {
    let s = HarmonicSeries::random(4, amp, seed);
    ScalarField::from_fn(g, |t, p| s.eval(t, p))
}

/// Arclength integral of `f` by the periodic trapezoid rule.
fn arclength_integral(spec: &CurveSpec, params: &[f64], f: &[f64]) -> f64 {
    let dt = 2.0 * PI / params.len() as f64;
    let sig = spec.signature();
    params
        .iter()
        .zip(f)
        .map(|(&t, &v)| {
            let d1 = spec.jet::<f64>(t)[1];
            v * sig.dot(&d1, &d1).abs().sqrt() * dt
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn perp_is_an_anti_isometric_involution(n in -5.0f64..5.0, v in -5.0f64..5.0, a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let x = NormalVector::new(n, v);
        let y = NormalVector::new(a, b);
        prop_assert_eq!(x.perp().perp(), x);
        prop_assert!((x.perp().dot(y.perp()) + x.dot(y)).abs() < 1e-12);
        prop_assert!(x.dot(x.perp()).abs() < 1e-12);
    }

    #[test]
    fn boosted_outward_is_unit_spacelike(psi in -3.0f64..3.0) {
        let x = NormalVector::boosted_outward(psi);
        prop_assert!((x.norm_sq() - 1.0).abs() < 1e-10 * (1.0 + psi.cosh().powi(2)));
        prop_assert!((x.perp().norm_sq() + 1.0).abs() < 1e-10 * (1.0 + psi.cosh().powi(2)));
    }

    #[test]
    fn curvature_decomposition_is_algebraic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10 {
            let r = decomposition_residual(&random_decomposition_inputs::<f64>(&mut rng));
            prop_assert!(r.abs() < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn planar_curves_have_zero_torsion(a in 0.5f64..3.0, b in 0.5f64..3.0, amp in -0.4f64..0.4) {
        let base = CurveSpec::Ellipse { a, b };
        for spec in [base.clone(), CurveSpec::Reparametrized { base: Box::new(base), amp }] {
            let d = ClosedCurve::new(&spec, 48).frenet::<f64>().unwrap();
            prop_assert!(d.torsion.iter().all(|t| t.abs() < 1e-8));
        }
    }

    #[test]
    fn helix_frenet_data_ignores_parametrization(a in 0.5f64..2.0, b in -1.0f64..1.0, amp in -0.4f64..0.4) {
        let spec = CurveSpec::Reparametrized { base: Box::new(CurveSpec::Helix { a, b }), amp };
        let d = ClosedCurve::new(&spec, 48).frenet::<f64>().unwrap();
        let (kappa, tau) = (a / (a * a + b * b), b / (a * a + b * b));
        prop_assert!(d.curvature.iter().all(|k| (k - kappa).abs() < 1e-8));
        prop_assert!(d.torsion.iter().all(|t| (t - tau).abs() < 1e-8));
    }

    #[test]
    fn total_curvature_ignores_parametrization(amp in -0.3f64..0.3, which in 0usize..3) {
        let base = [
            CurveSpec::Wobble { amp: 0.2, freq: 3.0 },
            CurveSpec::Ellipse { a: 2.0, b: 1.0 },
            CurveSpec::TiltedCircle { amp: 0.2, freq: 2.0 },
        ][which].clone();
        let re = CurveSpec::Reparametrized { base: Box::new(base.clone()), amp };
        let n = 256;
        let d0 = ClosedCurve::new(&base, n).frenet::<f64>().unwrap();
        let d1 = ClosedCurve::new(&re, n).frenet::<f64>().unwrap();
        let sq = |v: &[f64]| v.iter().map(|x| x * x).collect::<Vec<_>>();
        let k0 = arclength_integral(&base, &d0.params, &sq(&d0.curvature));
        let k1 = arclength_integral(&re, &d1.params, &sq(&d1.curvature));
        let t0 = arclength_integral(&base, &d0.params, &sq(&d0.torsion));
        let t1 = arclength_integral(&re, &d1.params, &sq(&d1.torsion));
        prop_assert!((k0 - k1).abs() < 1e-8 * (1.0 + k0), "{k0} vs {k1}");
        prop_assert!((t0 - t1).abs() < 1e-6 * (1.0 + t0), "{t0} vs {t1}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn poisson_round_trip(seed in any::<u64>(), radius in 0.5f64..3.0) {
        let m = InducedMetric::round(grid(), radius).unwrap();
        let f = field(m.grid(), seed, 1.0);
        let mean = m.mean(&f.values);
        let rhs = m.laplacian(&f.map(|v| v - mean));
        let u = m.solve_poisson(&rhs).unwrap();
        let back = m.laplacian(&u);
        let err = back.zip_with(&rhs, |a, b| a - b);
        prop_assert!(m.l2_norm(&err.values) < 1e-9 * (1.0 + m.l2_norm(&rhs.values)));
        prop_assert!(m.mean(&u.values).abs() < 1e-10);
    }

    #[test]
    fn divergence_integrates_to_zero(seed in any::<u64>(), eps in 0.0f64..0.1) {
        let s = perturbed(seed % 1000, eps);
        let f = field(s.grid(), seed, 1.0);
        let w = s.metric.gradient(&f).lowered;
        let total = s.metric.integrate(&s.metric.divergence(&w).values);
        prop_assert!(total.abs() < 1e-9, "{total}");
    }

    #[test]
    fn gauss_bonnet(seed in any::<u64>(), eps in 0.0f64..0.1) {
        let s = perturbed(seed % 1000, eps);
        let k = s.metric.integrate(&s.metric.gauss_curvature().values);
        prop_assert!((k / (4.0 * PI) - 1.0).abs() < 1e-6, "{k}");
    }

    #[test]
    fn boost_gauge_law(seed in any::<u64>(), eps in 0.0f64..0.05) {
        // The boosted frame is not band-limited; 16x32 aliases at the 1e-6 level.
        let s = perturbed_on(acceptance_grid(), seed % 1000, eps);
        // alpha needs an outward nu_H, i.e. a mean-convex surface.
        prop_assume!(s.sff.nu_h().iter().all(|x| x.v > 0.0));
        let theta = field(s.grid(), seed ^ 0x5a5a, 0.1);
        let a0 = connection_form(&s, &s.sff.nu_h()).unwrap();
        let a1 = connection_form(&s, &boost_frame(&s.sff.nu_h(), &theta)).unwrap();
        let dth = s.metric.gradient(&theta).lowered;
        let scale = 1.0 + a0.alpha.theta.iter().chain(&a0.alpha.phi).fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..s.len() {
            prop_assert!((a1.alpha.theta[k] - a0.alpha.theta[k] + dth.theta[k]).abs() < 1e-8 * scale);
            prop_assert!((a1.alpha.phi[k] - a0.alpha.phi[k] + dth.phi[k]).abs() < 1e-8 * scale);
        }
    }

    #[test]
    fn results_ignore_stored_frame(seed in any::<u64>(), psi in -1.0f64..1.0) {
        let s = perturbed(seed % 1000, 0.05);
        let b = s.with_boosted_frame(psi);
        prop_assert!((hawking_mass(&s).value - hawking_mass(&b).value).abs() < 1e-12);
        let policy = BetaPolicy::RandomSmooth { seed, l_max: 3, max_abs: 0.5 };
        let beta = policy.evaluate(s.grid()).unwrap();
        let (v0, v1) = (uae_velocity(&s, &beta).unwrap(), uae_velocity(&b, &beta).unwrap());
        let t0 = variation_mean_frame(&s, &v0).unwrap().terms.value;
        let t1 = variation_mean_frame(&b, &v1).unwrap().terms.value;
        let m0 = variation_momentum_form(&s, &v0).unwrap().terms.value;
        let m1 = variation_momentum_form(&b, &v1).unwrap().terms.value;
        prop_assert!((t0 - t1).abs() < 1e-9, "{t0} vs {t1}");
        prop_assert!((m0 - m1).abs() < 1e-9, "{m0} vs {m1}");
    }

    #[test]
    fn constant_beta_divergence_term_integrates_out(seed in any::<u64>(), beta in -0.9f64..0.9) {
        let s = perturbed(seed % 1000, 0.05);
        let b = BetaPolicy::Constant { value: beta }.evaluate(s.grid()).unwrap();
        let v = uae_velocity(&s, &b).unwrap();
        let momentum = variation_momentum_form(&s, &v).unwrap();
        prop_assert!(momentum.beta_div_integral.abs() < 1e-9, "{}", momentum.beta_div_integral);
    }
}
