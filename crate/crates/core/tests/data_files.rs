use std::path::PathBuf;

use qglp::io::{load_quantum_group, read_json, state_from_json, AlgebraJson, QuantumGroupJson};
use qglp::qgroup::validate_quantum_group;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

#[test]
fn shipped_quantum_groups_load_and_validate() {
    for name in ["z3.json", "z4.json", "s3.json", "s3_dual.json"] {
        let json: QuantumGroupJson = read_json(data(name)).unwrap();
        let (blocks, weights, delta) = json.raw().unwrap();
        let report = validate_quantum_group(&blocks, weights.as_deref(), &delta);
        assert!(report.passed(), "{name}: {}", report.failure_summary());
        let g = load_quantum_group(data(name)).unwrap();
        let again = QuantumGroupJson::from_quantum_group(&g).build().unwrap();
        assert_eq!(again.dim(), g.dim());
    }
}

#[test]
fn broken_file_fails_coassociativity() {
    let json: QuantumGroupJson = read_json(data("broken.json")).unwrap();
    let (blocks, weights, delta) = json.raw().unwrap();
    let report = validate_quantum_group(&blocks, weights.as_deref(), &delta);
    assert!(!report.passed());
    assert!(report.failure_summary().contains("coassociativity residual"));
    assert!(json.build().is_err());
}

#[test]
fn shipped_states_are_states() {
    let z3 = load_quantum_group(data("z3.json")).unwrap();
    let z4 = load_quantum_group(data("z4.json")).unwrap();
    let oberlin = state_from_json(
        &read_json::<AlgebraJson>(data("oberlin.json")).unwrap(),
        z3.structure().clone(),
    )
    .unwrap();
    let v = oberlin.basis_values();
    assert!((v[0].re - 0.5).abs() < 1e-12 && v[1].norm() < 1e-12 && (v[2].re - 0.5).abs() < 1e-12);
    let half = state_from_json(
        &read_json::<AlgebraJson>(data("half-on-0-2.json")).unwrap(),
        z4.structure().clone(),
    )
    .unwrap();
    assert!((half.basis_values()[2].re - 0.5).abs() < 1e-12);
}
