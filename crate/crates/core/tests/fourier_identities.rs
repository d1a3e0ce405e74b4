mod common;

use common::*;
use qglp::fdalgebra::{random_state, AlgebraElement};
use qglp::fourier::*;

#[test]
fn plancherel_and_inversion_on_random_elements() {
    let mut r = rng(11);
    for g in small_family().iter().chain([s3_tensor()].iter()) {
        for _ in 0..20 {
            let x = AlgebraElement::random(g.structure().clone(), &mut r);
            let xh = fourier_transform(g, Operand::Element(&x)).unwrap();
            assert!((x.l2_norm() - xh.dual_l2_norm(g).unwrap()).abs() < 1e-8, "{}", g.name());
            let back = inverse_fourier(g, &xh).unwrap();
            assert!(back.max_abs_diff(&x) < 1e-8, "{}", g.name());
        }
    }
}

#[test]
fn convolution_transform_identities() {
    let mut r = rng(12);
    for g in small_family() {
        let s = g.structure().clone();
        for _ in 0..5 {
            let phi = random_state(s.clone(), &mut r);
            let psi = random_state(s.clone(), &mut r);
            let x = AlgebraElement::random(s.clone(), &mut r);
            let ph = fourier_transform(&g, Operand::Functional(&phi)).unwrap();
            let qh = fourier_transform(&g, Operand::Functional(&psi)).unwrap();
            let xh = fourier_transform(&g, Operand::Element(&x)).unwrap();

            // (φ⋆φ')^ = φ̂' φ̂
            let conv = convolve_functionals(&g, &phi, &psi).unwrap();
            let ch = fourier_transform(&g, Operand::Functional(&conv)).unwrap();
            assert!(ch.max_abs_diff(&qh.mul(&ph).unwrap()) < 1e-8, "{}", g.name());

            // (φ∘S)^ = φ̂*
            let phs = fourier_transform(&g, Operand::Functional(&g.compose_antipode(&phi))).unwrap();
            assert!(phs.max_abs_diff(&ph.adjoint()) < 1e-8);

            // (φ⋆x)^ = (φ∘S⁻¹)^ x̂ ; S⁻¹ = S here
            let left = convolve(&g, Operand::Functional(&phi), Operand::Element(&x))
                .unwrap()
                .into_element()
                .unwrap();
            let lh = fourier_transform(&g, Operand::Element(&left)).unwrap();
            assert!(lh.max_abs_diff(&phs.mul(&xh).unwrap()) < 1e-8, "{}", g.name());

            // x⋆φ = m_{φ̂*}(x), the left multiplier with symbol φ̂*
            let right = convolve(&g, Operand::Element(&x), Operand::Functional(&phi))
                .unwrap()
                .into_element()
                .unwrap();
            let m = multiplier_apply(&g, &ph.adjoint(), &x, Side::Left).unwrap();
            assert!(right.max_abs_diff(&m) < 1e-8, "{}", g.name());

            // φ^{⋆3} coefficients are φ̂³
            let p3 = convolution_power(&g, &phi, 3).unwrap();
            let p3h = fourier_transform(&g, Operand::Functional(&p3)).unwrap();
            assert!(p3h.max_abs_diff(&ph.pow(3)) < 1e-8);
        }
    }
}

#[test]
fn convolution_is_associative_and_matches_embedding() {
    let mut r = rng(13);
    for g in small_family() {
        let s = g.structure().clone();
        let a = random_state(s.clone(), &mut r);
        let b = random_state(s.clone(), &mut r);
        let c = random_state(s.clone(), &mut r);
        let l = convolve_functionals(&g, &convolve_functionals(&g, &a, &b).unwrap(), &c).unwrap();
        let rr = convolve_functionals(&g, &a, &convolve_functionals(&g, &b, &c).unwrap()).unwrap();
        assert!(l.max_abs_diff(&rr) < 1e-9);

        // h(· x) ⋆ φ = h(· [(φ∘S) ⋆ x])
        let x = AlgebraElement::random(s.clone(), &mut r);
        let hx = qglp::fdalgebra::Functional::make_state(x.clone());
        let lhs = convolve_functionals(&g, &hx, &a).unwrap();
        let phis = g.compose_antipode(&a);
        let y = convolve(&g, Operand::Functional(&phis), Operand::Element(&x))
            .unwrap()
            .into_element()
            .unwrap();
        let rhs = qglp::fdalgebra::Functional::make_state(y);
        assert!(lhs.max_abs_diff(&rhs) < 1e-8, "{}", g.name());
    }
}
