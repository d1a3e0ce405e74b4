//! Invariant suites run by `qglp selftest`.

use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ergodic::{cesaro_limit, hopf_image, Hom};
use crate::error::Result;
use crate::fdalgebra::{lp_norm, random_state, ricard_xu_defect, AlgebraElement, BlockStructure, Functional};
use crate::fourier::{fourier_transform, inverse_fourier, Operand};
use crate::freeprod::{
    choose_q, free_adjoint, free_multiply, free_norm_even, free_trace, verify_free_improving, Component, FreeElement,
    FreeMap, FreeProductSpec,
};
use crate::group::GroupTable;
use crate::improving::{check_conditions, spectral_gap, CheckOptions, MapOnAlgebra};
use crate::linalg::{c, CVec};
use crate::qgroup::{build_function_algebra, build_group_algebra, tensor_product, QuantumGroup};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub worst: f64,
    pub detail: String,
    pub seconds: f64,
}

struct Tally {
    checks: usize,
    worst: f64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            worst: 0.0,
            failures: Vec::new(),
        }
    }

    /// Records a violation amount (positive means violated) against a tolerance.
    fn violation(&mut self, what: &str, amount: f64, tol: f64) {
        self.checks += 1;
        self.worst = self.worst.max(amount);
        if !(amount <= tol) && self.failures.len() < 5 {
            self.failures.push(format!("{what}: {amount:.3e} > {tol:.0e}"));
        }
    }

    fn require(&mut self, what: &str, ok: bool) {
        self.checks += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what.to_string());
        }
    }
}

fn run(name: &str, f: impl FnOnce(&mut Tally) -> Result<()>) -> SuiteResult {
    let start = Instant::now();
    let mut t = Tally::new();
    if let Err(e) = f(&mut t) {
        t.failures.push(format!("error: {e}"));
    }
    SuiteResult {
        name: name.to_string(),
        passed: t.failures.is_empty(),
        checks: t.checks,
        worst: t.worst,
        detail: t.failures.join("; "),
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn test_algebras() -> Vec<Arc<BlockStructure>> {
    vec![
        Arc::new(BlockStructure::commutative(3).expect("valid")),
        Arc::new(BlockStructure::matrix(2).expect("valid")),
        Arc::new(BlockStructure::new(vec![2, 1, 1], vec![0.25, 0.3, 0.2]).expect("valid")),
    ]
}

pub fn test_quantum_groups() -> Result<Vec<QuantumGroup>> {
    let z2 = GroupTable::cyclic(2);
    Ok(vec![
        build_function_algebra(&GroupTable::cyclic(3))?,
        build_function_algebra(&GroupTable::symmetric(3))?,
        build_group_algebra(&GroupTable::symmetric(3))?,
        tensor_product(&build_function_algebra(&z2)?, &build_group_algebra(&z2)?)?,
    ])
}

/// Runs every suite; `samples` scales the number of random trials.
pub fn run_all(samples: usize, seed: u64) -> Vec<SuiteResult> {
    vec![
        run("fdalgebra norms", |t| norms_suite(t, samples, seed)),
        run("quantum group axioms", quantum_group_suite),
        run("fourier plancherel", |t| fourier_suite(t, samples, seed)),
        run("spectral gap", |t| gap_suite(t, samples, seed)),
        run("five conditions", |t| conditions_suite(t, seed)),
        run("cesaro and hopf image", |t| ergodic_suite(t, samples, seed)),
        run("free product", |t| free_suite(t, seed)),
    ]
}

fn norms_suite(t: &mut Tally, samples: usize, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in test_algebras() {
        for _ in 0..samples {
            let x = AlgebraElement::random(s.clone(), &mut rng);
            let y = AlgebraElement::random(s.clone(), &mut rng);
            let ps = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];
            for w in ps.windows(2) {
                t.violation("monotonicity", lp_norm(&x, w[0])? - lp_norm(&x, w[1])?, 1e-9);
            }
            for (p, q, r) in [(2.0, 2.0, 1.0), (4.0, 4.0, 2.0), (3.0, 1.5, 1.0)] {
                t.violation(
                    "Hölder",
                    lp_norm(&(&x * &y), r)? - lp_norm(&x, p)? * lp_norm(&y, q)?,
                    1e-9,
                );
            }
            t.violation(
                "trace duality",
                (&x * &y).trace().norm() - lp_norm(&x, 3.0)? * lp_norm(&y, 1.5)?,
                1e-9,
            );
            t.violation(
                "‖x‖₂² = τ(x*x)",
                (lp_norm(&x, 2.0)?.powi(2) - x.inner(&x).re).abs(),
                1e-10,
            );
            for p in [1.1, 1.5, 1.9, 2.0] {
                t.violation("Ricard–Xu", -ricard_xu_defect(&x, p)?, 1e-9);
            }
        }
    }
    Ok(())
}

fn quantum_group_suite(t: &mut Tally) -> Result<()> {
    for g in test_quantum_groups()? {
        let total: usize = g.irreps().iter().map(|u| u.dim() * u.dim()).sum();
        t.require(&format!("Σ n_α² = dim for {}", g.name()), total == g.dim());
        let h = g.haar().basis_values();
        for x in 0..g.dim() {
            let e = AlgebraElement::basis_element(g.structure().clone(), x);
            let left = g.right_convolution_matrix(&h) * e.coords();
            let expected = g.structure().unit_coords() * g.haar().eval(&e);
            t.violation("Haar invariance", crate::linalg::max_abs_vec(&(left - expected)), 1e-10);
        }
        let s2 = g.antipode() * g.antipode();
        t.violation(
            "S² = id",
            crate::linalg::max_abs(&(s2 - crate::linalg::CMat::identity(g.dim(), g.dim()))),
            1e-8,
        );
    }
    Ok(())
}

fn fourier_suite(t: &mut Tally, samples: usize, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
    for g in test_quantum_groups()? {
        for _ in 0..samples.min(200) {
            let x = AlgebraElement::random(g.structure().clone(), &mut rng);
            let hat = fourier_transform(&g, Operand::Element(&x))?;
            t.violation("Plancherel", (x.l2_norm() - hat.dual_l2_norm(&g)?).abs(), 1e-8);
            t.violation("inversion", inverse_fourier(&g, &hat)?.max_abs_diff(&x), 1e-8);
        }
    }
    Ok(())
}

fn gap_suite(t: &mut Tally, samples: usize, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
    for g in test_quantum_groups()? {
        for _ in 0..samples.min(50) {
            let phi = random_state(g.structure().clone(), &mut rng);
            let map = MapOnAlgebra::right_convolution(&g, &phi);
            let lambda = spectral_gap(&map);
            let norms = fourier_transform(&g, Operand::Functional(&phi))?.op_norms();
            let max = norms[1..].iter().copied().fold(0.0, f64::max);
            t.violation("λ = max ‖φ̂(α)‖", (lambda - max).abs(), 1e-8);
            t.violation("λ(T) = λ(T*)", (lambda - spectral_gap(&map.adjoint())).abs(), 1e-10);
        }
    }
    Ok(())
}

fn conditions_suite(t: &mut Tally, seed: u64) -> Result<()> {
    let opts = CheckOptions {
        samples: 300,
        seed,
        ..Default::default()
    };
    let z3 = build_function_algebra(&GroupTable::cyclic(3))?;
    let z4 = build_function_algebra(&GroupTable::cyclic(4))?;
    let measure = |g: &QuantumGroup, m: &[f64]| {
        Functional::from_basis_values(
            g.structure().clone(),
            &CVec::from_iterator(m.len(), m.iter().map(|&v| c(v))),
        )
    };
    let r = check_conditions(&z3, &measure(&z3, &[0.5, 0.0, 0.5]), opts)?;
    t.require("Oberlin measure certified", r.all_true());
    t.violation("Oberlin λ", (r.lambda - 0.5).abs(), 1e-9);
    let r = check_conditions(&z4, &measure(&z4, &[0.5, 0.0, 0.5, 0.0]), opts)?;
    t.require("half on {0,2} in ℤ₄ refuted", r.all_false());
    for g in test_quantum_groups()? {
        for s in [0.1, 0.5, 0.9] {
            let phi = g.haar().mix(&crate::improving::counit_state(&g), s);
            let r = check_conditions(&g, &phi, opts)?;
            t.require(&format!("(1−s)h + s·id improving on {}", g.name()), r.all_true());
        }
    }
    Ok(())
}

fn ergodic_suite(t: &mut Tally, samples: usize, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
    for g in test_quantum_groups()? {
        for _ in 0..samples.min(20) {
            let psi = random_state(g.structure().clone(), &mut rng);
            let r = cesaro_limit(&g, &psi)?;
            t.require("faithful state has Haar limit", r.is_haar && r.fixed_space_dim == 1);
            t.violation(
                "iterative Cesàro agreement",
                r.iterative_residual - r.iterative_tolerance,
                0.0,
            );
        }
    }
    let z4 = build_function_algebra(&GroupTable::cyclic(4))?;
    let target = Arc::new(BlockStructure::commutative(2)?);
    let e = |k| AlgebraElement::basis_element(target.clone(), k);
    let z = AlgebraElement::zeros(target.clone());
    let pi = Hom::new(z4.structure().clone(), target.clone(), vec![e(0), z.clone(), e(1), z])?;
    let data = hopf_image(&z4, &pi, &Functional::trace_state(target))?;
    t.require("Hopf image of {0,2} has dimension 2", data.quotient.dim() == 2);
    t.violation("η two ways", data.eta_agreement, 1e-7);
    t.violation("η⋆η = η", data.idempotence_residual, 1e-9);
    Ok(())
}

fn free_suite(t: &mut Tally, seed: u64) -> Result<()> {
    let c2 = Arc::new(BlockStructure::commutative(2)?);
    let m2 = Arc::new(BlockStructure::matrix(2)?);
    let spec = FreeProductSpec::new(vec![Component::new(c2.clone(), None)?, Component::new(m2, None)?])?;
    for r in 0..=3 {
        for w in spec.words_of_length(r) {
            let word = FreeElement::word(w.clone());
            if r > 0 {
                t.violation("alternating words are centered", free_trace(&word).norm(), 0.0);
            }
            for v in spec.words_of_length(r) {
                let other = FreeElement::word(v.clone());
                let ip = free_trace(&free_multiply(&spec, &free_adjoint(&spec, &word), &other));
                let expected = if v == w { 1.0 } else { 0.0 };
                t.violation("word orthonormality", (ip - c(expected)).norm(), 1e-10);
            }
        }
    }
    let z2 = FreeProductSpec::new(vec![
        Component::new(c2.clone(), None)?,
        Component::new(c2.clone(), None)?,
    ])?;
    let sum = z2.letter(0, 0).add(&z2.letter(1, 0));
    t.violation(
        "‖e+f‖₄ = 6^{1/4}",
        (free_norm_even(&z2, &sum, 4)? - 6f64.powf(0.25)).abs(),
        1e-9,
    );
    let g = build_function_algebra(&GroupTable::cyclic(2))?;
    let mu = Functional::from_basis_values(g.structure().clone(), &CVec::from_vec(vec![c(0.6), c(0.4)]));
    let map = MapOnAlgebra::right_convolution(&g, &mu);
    let f = FreeMap::new(&z2, &[map.clone(), map])?;
    let q = choose_q(f.lambda, z2.c(), z2.n(), z2.m())?;
    t.require("choose_q gives 4", q == Some(4));
    let r = verify_free_improving(&z2, &f, 4, 3, 50, seed)?;
    t.require("free improvement holds", r.passed());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_at_small_scale() {
        for r in run_all(20, 11) {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
