//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the PASS/FAIL lines are always printed; exits non-zero on any failure.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use num_complex::Complex64;
use qglp::ergodic::{cesaro_limit, hopf_image, Hom};
use qglp::fdalgebra::{random_state, ricard_xu_defect, AlgebraElement, BlockStructure, Functional};
use qglp::fourier::{fourier_transform, inverse_fourier, Operand};
use qglp::freeprod::{
    choose_q, free_adjoint, free_multiply, free_norm_even, free_trace, verify_free_improving, Component, FreeElement,
    FreeMap, FreeProductSpec,
};
use qglp::group::GroupTable;
use qglp::improving::{
    check_conditions, counit_state, ritter_check, schur_check, spectral_gap, CheckOptions, MapOnAlgebra,
};
use qglp::linalg::CVec;
use qglp::qgroup::{build_function_algebra, QuantumGroup};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit, || {
        format!("took {:.1}s, limit {limit}s", elapsed.as_secs_f64())
    })
}

fn measure(g: &QuantumGroup, m: &[f64]) -> Functional {
    Functional::from_basis_values(
        g.structure().clone(),
        &CVec::from_iterator(m.len(), m.iter().map(|&v| Complex64::new(v, 0.0))),
    )
}

fn err(e: qglp::Error) -> String {
    e.to_string()
}

/// Weighted `ℓ_p` norm on `C(G)` with uniform weights.
fn uniform_lp(f: &[Complex64], p: f64) -> f64 {
    let n = f.len() as f64;
    (f.iter().map(|z| z.norm().powf(p)).sum::<f64>() / n).powf(1.0 / p)
}

fn oberlin() -> Outcome {
    let start = Instant::now();
    let g = build_function_algebra(&GroupTable::cyclic(3)).map_err(err)?;
    let mu = measure(&g, &[0.5, 0.0, 0.5]);
    let r = check_conditions(&g, &mu, CheckOptions::default()).map_err(err)?;
    ensure(r.all_true(), || format!("verdicts {:?}", r.verdicts()))?;
    ensure((r.lambda - 0.5).abs() < 1e-9, || format!("λ = {}", r.lambda))?;
    // |μ̂(k)| = |½ + ½ω^{2k}| = ½ for k = 1, 2
    let w = std::f64::consts::TAU / 3.0;
    let oracle = (1..3)
        .map(|k| (Complex64::new(0.5, 0.0) + Complex64::from_polar(0.5, 2.0 * w * k as f64)).norm())
        .fold(0.0, f64::max);
    ensure((r.lambda - oracle).abs() < 1e-9, || format!("oracle λ = {oracle}"))?;
    let wit = r.witness.clone().ok_or("no witness")?;
    ensure(wit.p <= 1.9 && wit.lambda_c_p < wit.sqrt_p_minus_1, || {
        format!("witness {wit:?}")
    })?;
    for s in [&r.left_samples, &r.right_samples] {
        let s = s.as_ref().ok_or("no sampling summary")?;
        ensure(s.min_slack >= -1e-8, || format!("sampled slack {}", s.min_slack))?;
    }
    // direct check: (f⋆μ)(t) = ½ f(t) + ½ f(t+2) against ‖f‖_p at the witness exponent
    let mut rng = rng(0x0be1);
    let map = MapOnAlgebra::right_convolution(&g, &mu);
    let mut worst = f64::INFINITY;
    for k in 0..10_000 {
        let f: Vec<Complex64> = (0..3)
            .map(|_| {
                if k % 2 == 0 {
                    Complex64::new(rng.gen::<f64>(), 0.0)
                } else {
                    Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
                }
            })
            .collect();
        let conv: Vec<Complex64> = (0..3).map(|t| 0.5 * f[t] + 0.5 * f[(t + 2) % 3]).collect();
        let x = AlgebraElement::from_coords(g.structure().clone(), &CVec::from_vec(f.clone()));
        let ours = map.apply(&x).coords();
        let diff = (0..3).map(|t| (ours[t] - conv[t]).norm()).fold(0.0, f64::max);
        ensure(diff < 1e-12, || {
            format!("convolution disagrees with the group formula by {diff}")
        })?;
        worst = worst.min(uniform_lp(&f, wit.p) - uniform_lp(&conv, 2.0));
    }
    ensure(worst >= -1e-8, || format!("direct sampling slack {worst}"))?;
    within(start.elapsed(), 5.0)?;
    Ok(format!(
        "λ = {}, witness p = {:.4} (λc_p = {:.4} < √(p−1) = {:.4}), min slack {:.2e}, {:.2}s",
        r.lambda,
        wit.p,
        wit.lambda_c_p,
        wit.sqrt_p_minus_1,
        worst,
        start.elapsed().as_secs_f64()
    ))
}

fn negative_control() -> Outcome {
    let table = GroupTable::cyclic(4);
    let g = build_function_algebra(&table).map_err(err)?;
    let mu = measure(&g, &[0.5, 0.0, 0.5, 0.0]);
    let r = check_conditions(&g, &mu, CheckOptions::default()).map_err(err)?;
    ensure(r.all_false(), || format!("verdicts {:?}", r.verdicts()))?;
    ensure(!ritter_check(&table, &[0, 2]).map_err(err)?, || {
        "ritter_check accepted {0,2}".into()
    })?;
    // the order-2 character is g ↦ (−1)^g
    let sign = [1.0, -1.0, 1.0, -1.0];
    let k = g
        .irreps()
        .iter()
        .position(|u| {
            let v = u.entry(0, 0).coords();
            u.dim() == 1 && (0..4).all(|t| (v[t] - Complex64::new(sign[t], 0.0)).norm() < 1e-10)
        })
        .ok_or("order-2 character not found among the irreps")?;
    let hat = fourier_transform(&g, Operand::Functional(&mu)).map_err(err)?;
    let modulus = hat.matrices[k][(0, 0)].norm();
    ensure((modulus - 1.0).abs() < 1e-10, || format!("|μ̂(χ₂)| = {modulus}"))?;
    Ok(format!(
        "five conditions false, ritter false, |μ̂| = {modulus} at irrep {k}"
    ))
}

/// Subgroup generated by `{s⁻¹t}`, by breadth-first closure.
fn bfs_generates(table: &GroupTable, support: &[usize]) -> bool {
    let n = table.order();
    let inv = |a: usize| (0..n).find(|&b| table.mul(a, b) == table.identity()).unwrap();
    let gens: Vec<usize> = support
        .iter()
        .flat_map(|&s| support.iter().map(move |&t| (s, t)))
        .map(|(s, t)| table.mul(inv(s), t))
        .collect();
    let mut seen = BTreeSet::from([table.identity()]);
    let mut queue = vec![table.identity()];
    while let Some(a) = queue.pop() {
        for &s in &gens {
            let b = table.mul(a, s);
            if seen.insert(b) {
                queue.push(b);
            }
        }
    }
    seen.len() == n
}

fn ritter_sweep() -> Outcome {
    let start = Instant::now();
    let mut subsets = 0;
    for (name, table) in [
        ("ℤ₃", GroupTable::cyclic(3)),
        ("ℤ₄", GroupTable::cyclic(4)),
        ("ℤ₆", GroupTable::cyclic(6)),
        ("S₃", GroupTable::symmetric(3)),
    ] {
        let g = build_function_algebra(&table).map_err(err)?;
        let n = table.order();
        for mask in 1u32..(1 << n) {
            let support: Vec<usize> = (0..n).filter(|k| mask & (1 << k) != 0).collect();
            let mut m = vec![0.0; n];
            for &s in &support {
                m[s] = 1.0 / support.len() as f64;
            }
            let hat = fourier_transform(&g, Operand::Functional(&measure(&g, &m))).map_err(err)?;
            let contraction = hat.op_norms()[1..].iter().all(|&v| v < 1.0 - 1e-9);
            let bfs = bfs_generates(&table, &support);
            let ritter = ritter_check(&table, &support).map_err(err)?;
            ensure(contraction == bfs && ritter == bfs, || {
                format!("{name} support {support:?}: fourier {contraction}, bfs {bfs}, ritter_check {ritter}")
            })?;
            subsets += 1;
        }
    }
    within(start.elapsed(), 60.0)?;
    Ok(format!(
        "{subsets} supports agree, {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

/// Positive-definite `φ(γ) = Σ_x f(x) conj f(xγ) / Σ|f|²`.
fn autocorrelation(table: &GroupTable, f: &[Complex64]) -> Vec<Complex64> {
    let n = table.order();
    let norm: f64 = f.iter().map(|z| z.norm_sqr()).sum();
    (0..n)
        .map(|g| (0..n).map(|x| f[x] * f[table.mul(x, g)].conj()).sum::<Complex64>() / norm)
        .collect()
}

fn schur_grid() -> Outcome {
    let mut rng = rng(0x5c4u64);
    let opts = CheckOptions {
        samples: 2000,
        ..Default::default()
    };
    let (mut total, mut holding) = (0, 0);
    for table in [GroupTable::cyclic(4), GroupTable::symmetric(3)] {
        let n = table.order();
        let mut seeds: Vec<Vec<Complex64>> = (0..4)
            .map(|_| {
                (0..n)
                    .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                    .collect()
            })
            .collect();
        // indicators of the subgroups {e, a}
        for a in 1..n {
            if table.mul(a, a) == table.identity() {
                seeds.push(
                    (0..n)
                        .map(|x| Complex64::new(if x == 0 || x == a { 1.0 } else { 0.0 }, 0.0))
                        .collect(),
                );
            }
        }
        for f in &seeds {
            let phi = autocorrelation(&table, f);
            for step in 0..=10 {
                let t = step as f64 / 10.0;
                let values: Vec<Complex64> = phi.iter().map(|&z| t * z + (1.0 - t)).collect();
                let r = schur_check(&table, &values, opts).map_err(err)?;
                ensure(r.agrees && r.conditions.all_true() == r.holds, || {
                    format!(
                        "values {values:?}: max |φ| = {}, report {:?}",
                        r.max_nontrivial,
                        r.conditions.verdicts()
                    )
                })?;
                total += 1;
                holding += r.holds as usize;
            }
        }
    }
    ensure(total >= 100, || format!("only {total} functions"))?;
    Ok(format!(
        "{total} positive-definite functions, {holding} strictly contracting, all agree"
    ))
}

fn plancherel() -> Outcome {
    let mut rng = rng(0x91a);
    let mut worst: f64 = 0.0;
    for g in [c_s3(), cstar_s3(), z2_tensor()] {
        let total: usize = g.irreps().iter().map(|u| u.dim() * u.dim()).sum();
        ensure(total == g.dim(), || {
            format!("{}: Σ n_α² = {total}, dim {}", g.name(), g.dim())
        })?;
        for _ in 0..1000 {
            let x = AlgebraElement::random(g.structure().clone(), &mut rng);
            let hat = fourier_transform(&g, Operand::Element(&x)).map_err(err)?;
            let norm_gap = (x.l2_norm() - hat.dual_l2_norm(&g).map_err(err)?).abs();
            let round_trip = inverse_fourier(&g, &hat).map_err(err)?.max_abs_diff(&x);
            worst = worst.max(norm_gap).max(round_trip);
        }
    }
    ensure(worst < 1e-8, || format!("worst residual {worst:.3e}"))?;
    Ok(format!("3000 elements, worst residual {worst:.2e}"))
}

fn spectral_gap_equality() -> Outcome {
    let mut rng = rng(0x6a9);
    let mut worst: f64 = 0.0;
    let family = small_family();
    for g in &family {
        for _ in 0..100 {
            let phi = random_state(g.structure().clone(), &mut rng);
            let lambda = spectral_gap(&MapOnAlgebra::right_convolution(g, &phi));
            let norms = fourier_transform(g, Operand::Functional(&phi)).map_err(err)?.op_norms();
            let max = norms[1..].iter().copied().fold(0.0, f64::max);
            worst = worst.max((lambda - max).abs());
        }
    }
    ensure(worst < 1e-8, || format!("worst |λ − max‖φ̂‖| = {worst:.3e}"))?;
    Ok(format!(
        "{} quantum groups × 100 states, worst {worst:.2e}",
        family.len()
    ))
}

fn cesaro() -> Outcome {
    let mut rng = rng(0xce5);
    let mut worst: f64 = 0.0;
    let family = small_family();
    let per = 100usize.div_ceil(family.len());
    for g in &family {
        for _ in 0..per {
            let psi = random_state(g.structure().clone(), &mut rng);
            ensure(psi.is_faithful_state(), || "random state is not faithful".into())?;
            let r = cesaro_limit(g, &psi).map_err(err)?;
            ensure(r.is_haar && r.iterative_agrees(), || format!("{}: {r:?}", g.name()))?;
            worst = worst.max(r.haar_distance);
        }
        let r = cesaro_limit(g, &counit_state(g)).map_err(err)?;
        ensure(!r.is_haar && r.fixed_space_dim > 1, || {
            format!("{}: δ_e gives {r:?}", g.name())
        })?;
        // δ_e convolution is the identity, so everything is fixed
        ensure(r.fixed_space_dim == g.dim(), || {
            format!("{}: fixed dim {}", g.name(), r.fixed_space_dim)
        })?;
    }
    ensure(worst < 1e-8, || format!("distance to h {worst:.3e}"))?;
    Ok(format!(
        "{} faithful states reach h (worst {worst:.2e}); δ_e fixes everything",
        per * family.len()
    ))
}

fn hopf() -> Outcome {
    let g = build_function_algebra(&GroupTable::cyclic(4)).map_err(err)?;
    let target = Arc::new(BlockStructure::commutative(2).map_err(err)?);
    let e = |k| AlgebraElement::basis_element(target.clone(), k);
    let z = AlgebraElement::zeros(target.clone());
    let pi = Hom::new(g.structure().clone(), target.clone(), vec![e(0), z.clone(), e(1), z]).map_err(err)?;
    let mut worst: f64 = 0.0;
    for m in [[0.5, 0.5], [0.3, 0.7], [0.9, 0.1]] {
        let phi = Functional::from_basis_values(
            target.clone(),
            &CVec::from_vec(vec![Complex64::new(m[0], 0.0), Complex64::new(m[1], 0.0)]),
        );
        let d = hopf_image(&g, &pi, &phi).map_err(err)?;
        ensure(d.quotient.dim() == 2, || {
            format!("quotient dimension {}", d.quotient.dim())
        })?;
        let expected = measure(&g, &[0.5, 0.0, 0.5, 0.0]);
        ensure(d.eta.max_abs_diff(&expected) < 1e-9, || {
            format!("η = {:?}", d.eta.basis_values())
        })?;
        ensure(d.eta_agreement < 1e-7, || format!("η agreement {}", d.eta_agreement))?;
        worst = worst.max(d.eta_agreement);
    }
    Ok(format!("quotient dimension 2, η = ½(δ₀+δ₂), agreement {worst:.2e}"))
}

fn ricard_xu() -> Outcome {
    let mut rng = rng(0x71c);
    let algebras = [
        Arc::new(BlockStructure::commutative(3).map_err(err)?),
        Arc::new(BlockStructure::matrix(2).map_err(err)?),
        Arc::new(BlockStructure::normalized(vec![1, 1, 2], &[1.0, 1.0, 1.0]).map_err(err)?),
    ];
    let mut worst = f64::INFINITY;
    for s in &algebras {
        for _ in 0..10_000 {
            let x = AlgebraElement::random(s.clone(), &mut rng);
            for p in [1.1, 1.5, 1.9, 2.0] {
                worst = worst.min(ricard_xu_defect(&x, p).map_err(err)?);
            }
        }
    }
    ensure(worst >= -1e-9, || format!("defect {worst:.3e}"))?;
    Ok(format!("30000 elements × 4 exponents, min defect {worst:.2e}"))
}

fn free_product() -> Outcome {
    let start = Instant::now();
    let c2 = Arc::new(BlockStructure::commutative(2).map_err(err)?);
    let comp = || Component::new(c2.clone(), None).map_err(err);
    let spec = FreeProductSpec::new(vec![comp()?, comp()?]).map_err(err)?;
    let g = build_function_algebra(&GroupTable::cyclic(2)).map_err(err)?;
    let t = 0.4;
    let map = MapOnAlgebra::right_convolution(&g, &measure(&g, &[1.0 - t, t]));
    let f = FreeMap::new(&spec, &[map.clone(), map]).map_err(err)?;
    ensure((f.lambda - 0.2).abs() < 1e-12, || format!("λ = {}", f.lambda))?;
    let q = choose_q(f.lambda, spec.c(), spec.n(), spec.m()).map_err(err)?;
    ensure(q == Some(4), || format!("choose_q gave {q:?}"))?;
    let r = verify_free_improving(&spec, &f, 4, 3, 200, 0xf4ee).map_err(err)?;
    ensure(r.passed(), || format!("violation {:?}", r.violation))?;
    let sum = spec.letter(0, 0).add(&spec.letter(1, 0));
    let norm4 = free_norm_even(&spec, &sum, 4).map_err(err)?;
    ensure((norm4 - 6f64.powf(0.25)).abs() < 1e-9, || format!("‖e+f‖₄ = {norm4}"))?;
    let mut pairs = 0;
    for r in 0..=4 {
        let words = spec.words_of_length(r);
        for w in &words {
            let a = FreeElement::word(w.clone());
            if r > 0 {
                ensure(free_trace(&a) == Complex64::new(0.0, 0.0), || format!("τ({w:?}) ≠ 0"))?;
            }
            for v in &words {
                let ip = free_trace(&free_multiply(
                    &spec,
                    &free_adjoint(&spec, &a),
                    &FreeElement::word(v.clone()),
                ));
                let expected = if v == w { 1.0 } else { 0.0 };
                ensure((ip - expected).norm() < 1e-12, || format!("⟨{w:?}, {v:?}⟩ = {ip}"))?;
                pairs += 1;
            }
        }
    }
    within(start.elapsed(), 60.0)?;
    Ok(format!(
        "q = 4, no violation in 200 samples (min slack {:.3}), ‖e+f‖₄ = {norm4:.12}, {pairs} word pairs orthonormal",
        r.min_slack
    ))
}

fn finite_contrast() -> Outcome {
    let opts = CheckOptions {
        samples: 2000,
        ..Default::default()
    };
    let family = small_family();
    for g in &family {
        let h = g.haar();
        let eps = counit_state(g);
        for k in 1..=9 {
            let s = k as f64 / 10.0;
            let phi = h.mix(&eps, s);
            let r = check_conditions(g, &phi, opts).map_err(err)?;
            ensure(r.all_true(), || format!("{} at s = {s}: {:?}", g.name(), r.verdicts()))?;
            ensure((r.lambda - s).abs() < 1e-8, || {
                format!("{} at s = {s}: λ = {}", g.name(), r.lambda)
            })?;
        }
    }
    Ok(format!(
        "(1−s)h + s·id certified on {} quantum groups for s = 0.1…0.9",
        family.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Oberlin measure on ℤ₃", oberlin),
        ("negative control on ℤ₄", negative_control),
        ("Ritter equivalence sweep", ritter_sweep),
        ("Schur corollary", schur_grid),
        ("Plancherel and inversion", plancherel),
        ("spectral gap equality", spectral_gap_equality),
        ("Cesàro limits and non-degeneracy", cesaro),
        ("Hopf image of ℤ₄ at {0,2}", hopf),
        ("Ricard–Xu invariant", ricard_xu),
        ("free product", free_product),
        ("finite versus circle contrast", finite_contrast),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
