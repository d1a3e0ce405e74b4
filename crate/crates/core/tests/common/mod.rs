#![allow(dead_code)]

use qglp::group::GroupTable;
use qglp::qgroup::{build_function_algebra, build_group_algebra, tensor_product, QuantumGroup};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c_s3() -> QuantumGroup {
    build_function_algebra(&GroupTable::symmetric(3)).unwrap()
}

pub fn cstar_s3() -> QuantumGroup {
    build_group_algebra(&GroupTable::symmetric(3)).unwrap()
}

pub fn z2_tensor() -> QuantumGroup {
    let a = build_function_algebra(&GroupTable::cyclic(2)).unwrap();
    let b = build_group_algebra(&GroupTable::cyclic(2)).unwrap();
    tensor_product(&a, &b).unwrap()
}

pub fn s3_tensor() -> QuantumGroup {
    tensor_product(&c_s3(), &cstar_s3()).unwrap()
}

/// The small test family: C(ℤ₃), C(ℤ₄), C(S₃), C*(ℤ₄), C*(S₃), C(ℤ₂)⊗C*(ℤ₂).
pub fn small_family() -> Vec<QuantumGroup> {
    vec![
        build_function_algebra(&GroupTable::cyclic(3)).unwrap(),
        build_function_algebra(&GroupTable::cyclic(4)).unwrap(),
        c_s3(),
        build_group_algebra(&GroupTable::cyclic(4)).unwrap(),
        cstar_s3(),
        z2_tensor(),
    ]
}
