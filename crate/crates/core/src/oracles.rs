//! Coarse reference evaluations used to cross-check the spectral pipeline.
//! Everything here is plain `f64` with finite differences and Simpson's rule
//! and shares no code with the sphere calculus.

use std::f64::consts::PI;

use crate::extrinsic::EmbeddingSpec;
use crate::sphere::HarmonicSeries;

/// `t = epsilon P_2(cos theta)` over the Euclidean sphere of radius `radius`.
pub fn graph_p2_spec(radius: f64, epsilon: f64) -> EmbeddingSpec {
    EmbeddingSpec::GraphSphere {
        radius,
        time: 0.0,
        epsilon,
        profile: HarmonicSeries::constant(0.0).with_legendre(2, 1.0),
    }
}

fn d4<F: Fn(f64) -> f64 + ?Sized>(f: &F, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Area and `int <H, H> dA` of the axisymmetric surface
/// `(t(theta), radius sin(theta) cos(phi), radius sin(theta) sin(phi), radius cos(theta))`
/// in Minkowski space, with `H` the Laplacian of the position vector.
pub fn axisymmetric_graph_integrals<F: Fn(f64) -> f64>(t: F, radius: f64, intervals: usize) -> (f64, f64) {
    let n = intervals + intervals % 2;
    let h = 2e-3;
    let dt = |th: f64| d4(&t, th, h);
    let e = |th: f64| radius * radius - dt(th).powi(2);
    // Meridian part of the Laplacian of an axisymmetric function.
    let lap = |f: &dyn Fn(f64) -> f64, th: f64| {
        let flux = |s: f64| s.sin() * d4(f, s, h) / e(s).sqrt();
        d4(&flux, th, h) / (e(th).sqrt() * th.sin())
    };
    let rsin = |s: f64| radius * s.sin();
    let rcos = |s: f64| radius * s.cos();
    let mean_sq = |th: f64| {
        let ht = lap(&t, th);
        let hx = lap(&rsin, th) - 1.0 / (radius * th.sin());
        let hz = lap(&rcos, th);
        -ht * ht + hx * hx + hz * hz
    };
    let area_el = |th: f64| 2.0 * PI * e(th).sqrt() * radius * th.sin();
    let step = PI / n as f64;
    let (mut area, mut hh) = (0.0, 0.0);
    // Both integrands vanish at the poles.
    for i in 1..n {
        let th = i as f64 * step;
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        let da = area_el(th);
        area += w * da;
        hh += w * da * mean_sq(th);
    }
    (area * step / 3.0, hh * step / 3.0)
}

/// Hawking mass `sqrt(|S| / 16 pi) (1 - (1 / 16 pi) int <H, H> dA)` of the
/// graph sphere `t = epsilon P_2(cos theta)` over the sphere of radius `radius`.
pub fn graph_p2_hawking_mass(radius: f64, epsilon: f64) -> f64 {
    let t = |th: f64| {
        let c = th.cos();
        epsilon * 0.5 * (3.0 * c * c - 1.0)
    };
    let (area, hh) = axisymmetric_graph_integrals(t, radius, 4000);
    let s = 16.0 * PI;
    (area / s).sqrt() * (1.0 - hh / s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_sphere_has_zero_mass() {
        assert!(graph_p2_hawking_mass(1.0, 0.0).abs() < 1e-10);
        assert!(graph_p2_hawking_mass(2.5, 0.0).abs() < 1e-10);
    }
}
