use std::sync::Arc;

use timeflat::connection::time_flat_residual;
use timeflat::curve::{ClosedCurve, CurveSpec};
use timeflat::extrinsic::{evaluate_surface, EmbeddingSpec};
use timeflat::flow::hawking_mass;
use timeflat::spacetime::MetricBackend;
use timeflat::sphere::SurfaceGrid;

#[test]
fn f32_pipeline_reproduces_closed_forms() {
    let g = Arc::new(SurfaceGrid::<f32>::new(16, 32).unwrap());
    let spec = EmbeddingSpec::RoundSphere { radius: 4.0, time: 0.0 };
    let s = evaluate_surface(&spec, g, MetricBackend::<f32>::schwarzschild(1.0)).unwrap();
    assert!((hawking_mass(&s).value - 1.0).abs() < 1e-3);
    assert!(time_flat_residual(&s).unwrap().is_time_flat);
}

#[test]
fn f32_helix() {
    let h = CurveSpec::Helix { a: 1.0, b: 0.5 };
    let d = ClosedCurve::new(&h, 32).frenet::<f32>().unwrap();
    assert!(d.curvature.iter().all(|k| (k - 0.8).abs() < 1e-4));
}
