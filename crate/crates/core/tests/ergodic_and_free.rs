mod common;

use std::sync::Arc;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use qglp::ergodic::{cesaro_limit, hopf_image, Hom};
use qglp::fdalgebra::{AlgebraElement, BlockStructure, Functional};
use qglp::freeprod::{
    free_map_apply, free_multiply, free_norm_even, free_trace, Component, FreeElement, FreeMap, FreeProductSpec,
};
use qglp::group::GroupTable;
use qglp::improving::MapOnAlgebra;
use qglp::linalg::CVec;
use qglp::qgroup::build_function_algebra;

fn real(v: &[f64]) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0)))
}

fn involution(table: &GroupTable) -> usize {
    (0..table.order())
        .find(|&a| a != table.identity() && table.mul(a, a) == table.identity())
        .unwrap()
}

#[test]
fn measure_on_a_subgroup_of_s3_converges_to_its_haar_measure() {
    let table = GroupTable::symmetric(3);
    let g = build_function_algebra(&table).unwrap();
    let a = involution(&table);
    let mut m = vec![0.0; 6];
    m[table.identity()] = 0.3;
    m[a] = 0.7;
    let r = cesaro_limit(&g, &Functional::from_basis_values(g.structure().clone(), &real(&m))).unwrap();
    assert!(!r.is_haar);
    // fixed functions are constant on the three cosets
    assert_eq!(r.fixed_space_dim, 3);
    let mut eta = [0.0; 6];
    eta[table.identity()] = 0.5;
    eta[a] = 0.5;
    for (k, z) in r.limit().basis_values().iter().enumerate() {
        assert!((z - Complex64::new(eta[k], 0.0)).norm() < 1e-9);
    }
    let ev = r.limit().basis_values();
    let sq = g.convolve_values(&ev, &ev);
    assert!((sq - &ev).iter().all(|z| z.norm() < 1e-10));
}

#[test]
fn hopf_image_of_s3_restricted_to_an_involution() {
    let table = GroupTable::symmetric(3);
    let g = build_function_algebra(&table).unwrap();
    let a = involution(&table);
    let target = Arc::new(BlockStructure::commutative(2).unwrap());
    let images = (0..6)
        .map(|k| {
            if k == table.identity() {
                AlgebraElement::basis_element(target.clone(), 0)
            } else if k == a {
                AlgebraElement::basis_element(target.clone(), 1)
            } else {
                AlgebraElement::zeros(target.clone())
            }
        })
        .collect();
    let pi = Hom::new(g.structure().clone(), target.clone(), images).unwrap();
    let d = hopf_image(&g, &pi, &Functional::trace_state(target)).unwrap();
    assert_eq!(d.quotient.dim(), 2);
    assert!(d.eta_agreement < 1e-7);
    assert!(d.quotient_residual < 1e-10);
    let ev = d.eta.basis_values();
    assert!((ev[table.identity()].re - 0.5).abs() < 1e-9 && (ev[a].re - 0.5).abs() < 1e-9);
}

#[test]
fn hopf_image_of_a_generating_pair_is_everything() {
    // evaluation at {0, 1} in ℤ₃ generates the whole group
    let g = build_function_algebra(&GroupTable::cyclic(3)).unwrap();
    let target = Arc::new(BlockStructure::commutative(2).unwrap());
    let e = |k| AlgebraElement::basis_element(target.clone(), k);
    let pi = Hom::new(
        g.structure().clone(),
        target.clone(),
        vec![e(0), e(1), AlgebraElement::zeros(target.clone())],
    )
    .unwrap();
    let d = hopf_image(&g, &pi, &Functional::trace_state(target)).unwrap();
    assert_eq!(d.quotient.dim(), 3);
    assert!(d.eta.max_abs_diff(g.haar()) < 1e-9);
}

fn rademacher(n: usize) -> FreeProductSpec {
    let c2 = Arc::new(BlockStructure::commutative(2).unwrap());
    FreeProductSpec::new((0..n).map(|_| Component::new(c2.clone(), None).unwrap()).collect()).unwrap()
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[test]
fn two_free_signs_have_arcsine_moments() {
    let spec = rademacher(2);
    let s = spec.letter(0, 0).add(&spec.letter(1, 0));
    for k in 1..=4u32 {
        let q = 2 * k;
        let moment = binomial(q as u64, k as u64);
        let norm = free_norm_even(&spec, &s, q).unwrap();
        assert!((norm - moment.powf(1.0 / q as f64)).abs() < 1e-9, "q = {q}");
    }
}

#[test]
fn three_free_signs_fourth_moment() {
    // noncrossing pair partitions of four points, counted with distinct colours on nested pairs
    let spec = rademacher(3);
    let s = spec.letter(0, 0).add(&spec.letter(1, 0)).add(&spec.letter(2, 0));
    let s2 = free_multiply(&spec, &s, &s);
    let m4 = free_trace(&free_multiply(&spec, &s2, &s2));
    assert!((m4 - Complex64::new(15.0, 0.0)).norm() < 1e-10);
}

#[test]
fn free_map_acts_letterwise() {
    let spec = rademacher(2);
    let g = build_function_algebra(&GroupTable::cyclic(2)).unwrap();
    let map = |t: f64| {
        MapOnAlgebra::right_convolution(
            &g,
            &Functional::from_basis_values(g.structure().clone(), &real(&[1.0 - t, t])),
        )
    };
    let f = FreeMap::new(&spec, &[map(0.4), map(0.1)]).unwrap();
    assert!((f.lambda - 0.8).abs() < 1e-12);
    // e f e ↦ (0.2 e)(0.8 f)(0.2 e)
    let w = FreeElement::word(vec![(0, 0), (1, 0), (0, 0)]);
    let image = free_map_apply(&spec, &f, &w, false).unwrap();
    assert!((image.coefficient(&[(0, 0), (1, 0), (0, 0)]) - Complex64::new(0.2 * 0.8 * 0.2, 0.0)).norm() < 1e-12);
    assert!((image.coefficient_l2() - 0.032).abs() < 1e-12);
    let id = FreeMap::identity(&spec);
    assert!(free_map_apply(&spec, &id, &w, false).unwrap().max_abs_diff(&w) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn free_trace_is_tracial(seed in any::<u64>()) {
        use rand::Rng;
        let m2 = Arc::new(BlockStructure::matrix(2).unwrap());
        let c2 = Arc::new(BlockStructure::commutative(2).unwrap());
        let spec = FreeProductSpec::new(vec![Component::new(c2, None).unwrap(), Component::new(m2, None).unwrap()]).unwrap();
        let mut r = rng(seed);
        let mut random = || {
            let mut u = FreeElement::zero();
            for len in 0..=2 {
                for w in spec.words_of_length(len) {
                    u.add_term(w, Complex64::new(r.gen::<f64>() - 0.5, r.gen::<f64>() - 0.5));
                }
            }
            u
        };
        let (a, b) = (random(), random());
        let ab = free_trace(&free_multiply(&spec, &a, &b));
        let ba = free_trace(&free_multiply(&spec, &b, &a));
        prop_assert!((ab - ba).norm() < 1e-10);
        // ‖a‖₂ is the ℓ₂ norm of the coefficients in the orthonormal word basis
        let n2 = free_norm_even(&spec, &a, 2).unwrap();
        prop_assert!((n2 - a.coefficient_l2()).abs() < 1e-10);
        prop_assert!(free_norm_even(&spec, &a, 2).unwrap() <= free_norm_even(&spec, &a, 4).unwrap() + 1e-10);
    }
}
