use std::path::PathBuf;

use timeflat::flow::hawking_mass;
use timeflat::scenario::Scenario;

fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

#[test]
fn shipped_scenarios_load_and_build() {
    let mut n = 0;
    for entry in std::fs::read_dir(scenario_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        let mut s = Scenario::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        s.grid.n_theta = 16;
        s.grid.n_phi = 32;
        let m = hawking_mass(&s.surface().unwrap());
        assert!(m.value.is_finite() && m.area > 0.0, "{}", path.display());
        n += 1;
    }
    assert!(n >= 5);
}

#[test]
fn toml_round_trip() {
    let path = scenario_dir().join("perturbed_minkowski.toml");
    let s = Scenario::load(&path).unwrap();
    let back = Scenario::from_toml(&s.to_toml()).unwrap();
    assert_eq!(s, back);
}
