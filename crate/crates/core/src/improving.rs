//! Spectral gaps, best constants `c_p`, witness exponents and the five-way
//! certification of `L_p`-improving convolution operators.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ergodic;
use crate::error::{Error, Result};
use crate::fdalgebra::{lp_norm, AlgebraElement, BlockStructure, Functional};
use crate::fourier::{fourier_transform, Operand};
use crate::group::GroupTable;
use crate::linalg::{self, c, CMat, CVec, ONE, ZERO};
use crate::qgroup::{build_group_algebra, Origin, QuantumGroup};
use crate::tol;

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 0x1a7e_5eed;
const TWO_POSITIVE_SAMPLES: usize = 1000;
const CP_RESTARTS: usize = 32;
const WITNESS_MARGIN: f64 = 1e-6;
const SLACK_TOL: f64 = 1e-8;

/// A linear map `T : A → A` in the matrix-unit basis.
#[derive(Clone, Debug)]
pub struct MapOnAlgebra {
    structure: Arc<BlockStructure>,
    matrix: CMat,
    pub unital: bool,
    pub trace_preserving: bool,
    pub two_positive: bool,
}

impl MapOnAlgebra {
    pub fn new(structure: Arc<BlockStructure>, matrix: CMat) -> Result<Self> {
        let d = structure.dim();
        if matrix.shape() != (d, d) {
            return Err(Error::Shape(format!(
                "map matrix is {}×{}, algebra has dimension {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let one = structure.unit_coords();
        let unital = linalg::max_abs_vec(&(&matrix * &one - &one)) <= tol::ALGEBRAIC;
        // τ(e_I) as a row vector
        let t = CVec::from_fn(d, |i, _| {
            let (b, r, col) = structure.label(i);
            if r == col {
                c(structure.block_weights()[b])
            } else {
                ZERO
            }
        });
        let trace_preserving = linalg::max_abs_vec(&(matrix.transpose() * &t - &t)) <= tol::ALGEBRAIC;
        let mut map = MapOnAlgebra {
            structure,
            matrix,
            unital,
            trace_preserving,
            two_positive: false,
        };
        map.two_positive = map.sample_two_positivity(TWO_POSITIVE_SAMPLES, DEFAULT_SEED);
        Ok(map)
    }

    pub fn identity(structure: Arc<BlockStructure>) -> Self {
        let d = structure.dim();
        MapOnAlgebra::new(structure, CMat::identity(d, d)).expect("square")
    }

    /// `x ↦ τ(x)1`, which is `x ↦ h(x)1` for the Haar state of a quantum group.
    pub fn trace_projection(structure: Arc<BlockStructure>) -> Self {
        let d = structure.dim();
        let one = structure.unit_coords();
        let mut m = CMat::zeros(d, d);
        for i in 0..d {
            let (b, r, col) = structure.label(i);
            if r == col {
                m.set_column(i, &(&one * c(structure.block_weights()[b])));
            }
        }
        MapOnAlgebra::new(structure, m).expect("square")
    }

    /// `x ↦ x ⋆ φ = (φ ⊗ ι)Δ(x)`.
    pub fn right_convolution(g: &QuantumGroup, phi: &Functional) -> Self {
        MapOnAlgebra::new(g.structure().clone(), g.right_convolution_matrix(&phi.basis_values())).expect("square")
    }

    /// `x ↦ φ ⋆ x = (ι ⊗ φ)Δ(x)`.
    pub fn left_convolution(g: &QuantumGroup, phi: &Functional) -> Self {
        MapOnAlgebra::new(g.structure().clone(), g.left_convolution_matrix(&phi.basis_values())).expect("square")
    }

    pub fn structure(&self) -> &Arc<BlockStructure> {
        &self.structure
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_coords(self.structure.clone(), &(&self.matrix * x.coords()))
    }

    /// Matrix in the `L₂(τ)`-orthonormal basis `e_I / ‖e_I‖₂`.
    pub fn onb_matrix(&self) -> CMat {
        let norms = self.structure.basis_norms();
        let d = norms.len();
        CMat::from_fn(d, d, |i, j| self.matrix[(i, j)] * c(norms[i] / norms[j]))
    }

    /// The `L₂(τ)` adjoint `T*`.
    pub fn adjoint(&self) -> Self {
        let norms = self.structure.basis_norms();
        let t = self.onb_matrix().adjoint();
        let d = norms.len();
        let m = CMat::from_fn(d, d, |i, j| t[(i, j)] * c(norms[j] / norms[i]));
        MapOnAlgebra::new(self.structure.clone(), m).expect("square")
    }

    fn sample_two_positivity(&self, samples: usize, seed: u64) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = &self.structure;
        for _ in 0..samples {
            // a random positive element of M₂ ⊗ A, one 2n×2n block per block of A
            let big: Vec<CMat> = s
                .block_dims()
                .iter()
                .map(|&n| {
                    let g = linalg::random_gaussian(&mut rng, 2 * n, 2 * n);
                    g.adjoint() * g
                })
                .collect();
            let corner = |a: usize, b: usize| -> AlgebraElement {
                let blocks = big
                    .iter()
                    .zip(s.block_dims())
                    .map(|(m, &n)| m.view((a * n, b * n), (n, n)).into_owned())
                    .collect();
                AlgebraElement::from_blocks(s.clone(), blocks).expect("shape")
            };
            let images = [[0, 0], [0, 1], [1, 0], [1, 1]].map(|[a, b]| self.apply(&corner(a, b)));
            for (k, &n) in s.block_dims().iter().enumerate() {
                let mut m = CMat::zeros(2 * n, 2 * n);
                for (q, img) in images.iter().enumerate() {
                    let (a, b) = (q / 2, q % 2);
                    m.view_mut((a * n, b * n), (n, n)).copy_from(img.block(k));
                }
                let scale = linalg::max_abs(&m).max(1.0);
                if !(linalg::max_abs(&(&m - m.adjoint())) <= 1e-9 * scale) {
                    return false;
                }
                let min = linalg::hermitian_eigenvalues(&m)[0];
                if min < -1e-9 * scale {
                    return false;
                }
            }
        }
        true
    }
}

/// Largest singular value of `T` on the `L₂`-orthocomplement of `1`, with
/// the corresponding unit vector of that complement.
pub fn spectral_gap_with_vector(t: &MapOnAlgebra) -> (f64, AlgebraElement) {
    let s = t.structure();
    let norms = s.basis_norms();
    let u = CVec::from_iterator(norms.len(), s.unit_coords().iter().zip(&norms).map(|(z, n)| z * c(*n)));
    let d = norms.len();
    let proj = CMat::identity(d, d) - &u * u.adjoint();
    let restricted = t.onb_matrix() * &proj;
    if d == 1 {
        return (0.0, AlgebraElement::zeros(s.clone()));
    }
    let f = linalg::svd(&restricted);
    let sigma = f.singular_values[0];
    let v = f.v_t.row(0).adjoint();
    let v = &proj * v;
    let x = AlgebraElement::from_l2_coords(s.clone(), &v);
    let n = x.l2_norm();
    let x = if n > 0.0 { x.scale(c(1.0 / n)) } else { x };
    (sigma, x)
}

pub fn spectral_gap(t: &MapOnAlgebra) -> f64 {
    spectral_gap_with_vector(t).0
}

#[derive(Clone, Debug)]
pub struct BestConstant {
    pub p: f64,
    pub value: f64,
    /// Trace-zero maximizer with `‖x‖₂ = 1`.
    pub witness: AlgebraElement,
}

fn cp_cache() -> &'static Mutex<HashMap<(Vec<usize>, Vec<u64>, u64), BestConstant>> {
    static CACHE: OnceLock<Mutex<HashMap<(Vec<usize>, Vec<u64>, u64), BestConstant>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `c_p = sup ‖x‖₂/‖x‖_p` over nonzero trace-zero `x`, by projected gradient
/// ascent of `log‖x‖₂ − log‖x‖_p` from structured and random starting points.
pub fn best_constant_cp(structure: &Arc<BlockStructure>, p: f64) -> Result<BestConstant> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::Domain(format!("c_p needs 1 <= p <= 2, got {p}")));
    }
    let key = (
        structure.block_dims().to_vec(),
        structure.block_weights().iter().map(|w| w.to_bits()).collect(),
        p.to_bits(),
    );
    if let Some(hit) = cp_cache().lock().expect("cache").get(&key) {
        return Ok(hit.clone());
    }
    let result = compute_cp(structure, p);
    cp_cache().lock().expect("cache").insert(key, result.clone());
    Ok(result)
}

fn compute_cp(s: &Arc<BlockStructure>, p: f64) -> BestConstant {
    let zero = AlgebraElement::zeros(s.clone());
    if s.dim() == 1 || (p - 2.0).abs() < 1e-15 {
        let witness = seeds(s).into_iter().next().unwrap_or(zero);
        return BestConstant { p, value: 1.0, witness };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ p.to_bits());
    let mut starts = seeds(s);
    for _ in 0..CP_RESTARTS {
        starts.push(AlgebraElement::random(s.clone(), &mut rng));
    }
    let mut best: Option<(f64, AlgebraElement)> = None;
    for x0 in starts {
        let x0 = center(&x0);
        if x0.l2_norm() < 1e-12 {
            continue;
        }
        let (f, x) = ascend(&x0, p, 150);
        if best.as_ref().is_none_or(|(bf, _)| f > *bf) {
            best = Some((f, x));
        }
    }
    let (_, x) = best.expect("at least one start");
    let (f, x) = ascend(&x, p, 2000);
    BestConstant {
        p,
        value: f.exp().max(1.0),
        witness: x,
    }
}

/// Off-diagonal matrix units and differences of normalized diagonal units.
fn seeds(s: &Arc<BlockStructure>) -> Vec<AlgebraElement> {
    let mut out = Vec::new();
    for (b, &n) in s.block_dims().iter().enumerate() {
        if n > 1 {
            out.push(AlgebraElement::matrix_unit(s.clone(), b, 0, 1));
        }
    }
    let diag: Vec<(usize, usize)> = s
        .block_dims()
        .iter()
        .enumerate()
        .flat_map(|(b, &n)| (0..n).map(move |a| (b, a)))
        .collect();
    for (k, &(bi, ai)) in diag.iter().enumerate() {
        for &(bj, aj) in &diag[k + 1..] {
            let wi = s.block_weights()[bi];
            let wj = s.block_weights()[bj];
            let x = &AlgebraElement::matrix_unit(s.clone(), bi, ai, ai).scale(c(wj))
                - &AlgebraElement::matrix_unit(s.clone(), bj, aj, aj).scale(c(wi));
            out.push(x);
        }
    }
    out
}

fn center(x: &AlgebraElement) -> AlgebraElement {
    x - &AlgebraElement::scalar(x.structure().clone(), x.trace())
}

fn objective(x: &AlgebraElement, p: f64) -> f64 {
    let l2 = x.l2_norm();
    let lp = lp_norm(x, p).unwrap_or(0.0);
    if l2 == 0.0 || lp == 0.0 {
        return f64::NEG_INFINITY;
    }
    l2.ln() - lp.ln()
}

/// τ-gradient of `log‖x‖₂ − log‖x‖_p`, projected onto trace zero.
fn gradient(x: &AlgebraElement, p: f64) -> AlgebraElement {
    let l2sq = x.l2_norm().powi(2);
    let lp = lp_norm(x, p).unwrap_or(0.0);
    let blocks: Vec<CMat> = x
        .blocks()
        .iter()
        .map(|b| {
            let svd = linalg::svd(b);
            let (u, vt) = (svd.u, svd.v_t);
            let sig = CMat::from_diagonal(&CVec::from_iterator(
                svd.singular_values.len(),
                svd.singular_values
                    .iter()
                    .map(|&s| if s > 0.0 { c((s / lp).powf(p - 1.0)) } else { ZERO }),
            ));
            u * sig * vt
        })
        .collect();
    let dp = AlgebraElement::from_blocks(x.structure().clone(), blocks).expect("shape");
    center(&(&x.scale(c(1.0 / l2sq)) - &dp.scale(c(1.0 / lp))))
}

fn ascend(x0: &AlgebraElement, p: f64, iters: usize) -> (f64, AlgebraElement) {
    let mut x = x0.scale(c(1.0 / x0.l2_norm()));
    let mut f = objective(&x, p);
    let mut step: f64 = 1.0;
    for _ in 0..iters {
        let g = gradient(&x, p);
        let gn = g.l2_norm().powi(2);
        if gn < 1e-24 {
            break;
        }
        let mut accepted = false;
        step = (step * 4.0).min(16.0);
        while step > 1e-12 {
            let y = &x + &g.scale(c(step));
            let y = y.scale(c(1.0 / y.l2_norm()));
            let fy = objective(&y, p);
            if fy >= f + 1e-4 * step * gn {
                x = y;
                f = fy;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (f, x)
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub p: f64,
    pub c_p: f64,
    /// `λ·c_p` and `√(p−1)`; the first is strictly smaller.
    pub lambda_c_p: f64,
    pub sqrt_p_minus_1: f64,
    pub probes: usize,
}

/// Exponent `p ∈ (1,2)` with `(p−1) > λ²c_p² + 10⁻⁶`, found by probing
/// `p = 2 − 2^{-k}` and then bisecting towards smaller `p`.
pub fn witness_p(structure: &Arc<BlockStructure>, lambda: f64) -> Result<Option<Witness>> {
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("λ must be nonnegative, got {lambda}")));
    }
    if lambda >= 1.0 {
        return Ok(None);
    }
    let mut probes = 0;
    let mut valid = |p: f64| -> Result<Option<f64>> {
        probes += 1;
        let cp = best_constant_cp(structure, p)?.value;
        Ok(((p - 1.0) > lambda * lambda * cp * cp + WITNESS_MARGIN).then_some(cp))
    };
    let mut lo = 1.0;
    let mut hi = None;
    for k in 1..=48 {
        let p = 2.0 - 0.5f64.powi(k);
        if let Some(cp) = valid(p)? {
            hi = Some((p, cp));
            break;
        }
        lo = p;
    }
    let Some((mut hi_p, mut hi_c)) = hi else {
        return Ok(None);
    };
    for _ in 0..8 {
        let mid = 0.5 * (lo + hi_p);
        match valid(mid)? {
            Some(cp) => {
                hi_p = mid;
                hi_c = cp;
            }
            None => lo = mid,
        }
    }
    Ok(Some(Witness {
        p: hi_p,
        c_p: hi_c,
        lambda_c_p: lambda * hi_c,
        sqrt_p_minus_1: (hi_p - 1.0).sqrt(),
        probes,
    }))
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub samples: usize,
    pub seed: u64,
    /// Allowed negative slack in the sampled `‖Tx‖₂ ≤ ‖x‖_p` checks.
    pub tol: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            tol: SLACK_TOL,
        }
    }
}

/// An element breaking `‖Tx‖₂ ≤ ‖x‖_p`.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub p: f64,
    pub epsilon: f64,
    pub l2_of_image: f64,
    pub lp_of_input: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleSummary {
    pub positive: usize,
    pub general: usize,
    pub adversarial: usize,
    /// `min (‖x‖_p − ‖Tx‖₂)` over all samples.
    pub min_slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionsReport {
    /// (1) `‖φ⋆x‖₂ ≤ ‖x‖_p` for some `p < 2`.
    pub improving_left: bool,
    /// (2) `‖x⋆φ‖₂ ≤ ‖x‖_p` for some `p < 2`.
    pub improving_right: bool,
    /// (3) `‖φ̂(α)‖ < 1` for every nontrivial irrep.
    pub fourier_strict_contraction: bool,
    /// (4) Cesàro means of `ψ^{⋆k}` converge to `h`.
    pub cesaro_to_haar: bool,
    /// (5) `ψ` is non-degenerate.
    pub nondegenerate: bool,
    /// Set when `max ‖φ̂(α)‖` is too close to 1 to decide (3).
    pub indeterminate: bool,
    pub lambda: f64,
    pub lambda_left: f64,
    pub lambda_right: f64,
    pub witness: Option<Witness>,
    pub fourier_norms: Vec<f64>,
    /// Nontrivial irrep attaining the largest `‖φ̂(α)‖`.
    pub worst_irrep: Option<usize>,
    pub lambda_fourier_residual: f64,
    pub left_samples: Option<SampleSummary>,
    pub right_samples: Option<SampleSummary>,
    pub violation: Option<Violation>,
    pub cesaro_haar_distance: f64,
    pub fixed_space_dim: usize,
    pub nondegeneracy_margin: f64,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
}

impl ConditionsReport {
    pub fn verdicts(&self) -> [bool; 5] {
        [
            self.improving_left,
            self.improving_right,
            self.fourier_strict_contraction,
            self.cesaro_to_haar,
            self.nondegenerate,
        ]
    }

    pub fn all_true(&self) -> bool {
        self.verdicts().iter().all(|&b| b)
    }

    pub fn all_false(&self) -> bool {
        self.verdicts().iter().all(|&b| !b)
    }

    pub fn consistent(&self) -> bool {
        self.all_true() || self.all_false()
    }
}

/// Evaluates the five equivalent conditions for the state `φ` with
/// `ψ = (φ∘S)⋆φ`, and fails with [`Error::Consistency`] if they disagree.
pub fn check_conditions(g: &QuantumGroup, phi: &Functional, opts: CheckOptions) -> Result<ConditionsReport> {
    if !phi.structure().same_shape(g.structure()) {
        return Err(Error::Shape("state lives on a different algebra".into()));
    }
    if !phi.is_state() {
        return Err(Error::Domain("φ is not a state".into()));
    }
    let s = g.structure();
    let phi_s = g.compose_antipode(phi);
    let psi = Functional::from_basis_values(
        s.clone(),
        &g.convolve_values(&phi_s.basis_values(), &phi.basis_values()),
    );

    let hat = fourier_transform(g, Operand::Functional(phi))?;
    let fourier_norms = hat.op_norms();
    let worst_irrep = (1..fourier_norms.len()).max_by(|&a, &b| fourier_norms[a].total_cmp(&fourier_norms[b]));
    let max_nontrivial = worst_irrep.map_or(0.0, |k| fourier_norms[k]);
    let margin = 1.0 - max_nontrivial;
    let indeterminate = (1e-11..=1e-9).contains(&margin);
    let fourier_strict_contraction = margin > 1e-9;

    let right = MapOnAlgebra::right_convolution(g, phi);
    let left = MapOnAlgebra::left_convolution(g, phi);
    let (lambda_right, gap_right) = spectral_gap_with_vector(&right);
    let (lambda_left, gap_left) = spectral_gap_with_vector(&left);
    let lambda = lambda_left.max(lambda_right);
    let lambda_fourier_residual = (lambda_right - max_nontrivial).abs();
    if lambda_fourier_residual > tol::SPECTRAL {
        return Err(Error::Consistency(format!(
            "spectral gap {lambda_right} differs from max ‖φ̂(α)‖ = {max_nontrivial}"
        )));
    }

    let witness = if lambda < 1.0 - 1e-10 {
        witness_p(s, lambda)?
    } else {
        None
    };
    let mut violation = None;
    let (improving_left, improving_right, left_samples, right_samples) = match &witness {
        Some(w) => {
            let cp_witness = best_constant_cp(s, w.p)?.witness;
            let l = sample_inequality(&left, w.p, &[&gap_left, &cp_witness], opts);
            let r = sample_inequality(&right, w.p, &[&gap_right, &cp_witness], opts);
            (l.min_slack >= -opts.tol, r.min_slack >= -opts.tol, Some(l), Some(r))
        }
        None => {
            violation = find_violation(&right, &gap_right);
            (false, false, None, None)
        }
    };

    let cesaro = ergodic::cesaro_limit(g, &psi)?;
    let nondegeneracy_margin = ergodic::nondegeneracy_margin(g, &psi)?;
    let report = ConditionsReport {
        improving_left,
        improving_right,
        fourier_strict_contraction,
        cesaro_to_haar: cesaro.is_haar,
        nondegenerate: nondegeneracy_margin > 1e-9,
        indeterminate,
        lambda,
        lambda_left,
        lambda_right,
        witness,
        fourier_norms,
        worst_irrep,
        lambda_fourier_residual,
        left_samples,
        right_samples,
        violation,
        cesaro_haar_distance: cesaro.haar_distance,
        fixed_space_dim: cesaro.fixed_space_dim,
        nondegeneracy_margin,
        seed: opts.seed,
        samples: opts.samples,
        tol: opts.tol,
    };
    if !report.indeterminate && !report.consistent() {
        return Err(Error::Consistency(format!(
            "conditions (1)-(5) disagree: {:?}; λ = {lambda:.3e}, 1 − max‖φ̂‖ = {margin:.3e}, \
             Cesàro distance {:.3e}, non-degeneracy margin {nondegeneracy_margin:.3e}",
            report.verdicts(),
            report.cesaro_haar_distance
        )));
    }
    Ok(report)
}

fn sample_inequality(t: &MapOnAlgebra, p: f64, extra: &[&AlgebraElement], opts: CheckOptions) -> SampleSummary {
    let s = t.structure();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut min_slack = f64::INFINITY;
    let mut check = |x: &AlgebraElement| {
        let lhs = t.apply(x).l2_norm();
        let rhs = lp_norm(x, p).expect("p >= 1");
        min_slack = min_slack.min(rhs - lhs);
    };
    for _ in 0..opts.samples {
        check(&AlgebraElement::random_positive(s.clone(), &mut rng));
    }
    for _ in 0..opts.samples {
        let x = AlgebraElement::random(s.clone(), &mut rng);
        check(&x.scale(c(1.0 / x.l2_norm())));
    }
    let one = AlgebraElement::identity(s.clone());
    let mut adversarial = 0;
    for v in extra {
        if v.l2_norm() == 0.0 {
            continue;
        }
        check(v);
        adversarial += 1;
        for eps in [1e-3, 1e-2, 0.1, 0.3, 1.0, 3.0] {
            check(&(&one + &v.scale(c(eps))));
            check(&(&one + &v.scale(C64I * eps)));
            adversarial += 2;
        }
    }
    SampleSummary {
        positive: opts.samples,
        general: opts.samples,
        adversarial,
        min_slack,
    }
}

const C64I: crate::linalg::C64 = crate::linalg::C64::new(0.0, 1.0);

/// For `λ = 1`: some `1 + εv` with `v` a norm-preserved trace-zero direction
/// has `‖T(1+εv)‖₂ > ‖1+εv‖_p`.
fn find_violation(t: &MapOnAlgebra, v: &AlgebraElement) -> Option<Violation> {
    let one = AlgebraElement::identity(t.structure().clone());
    for p in [1.99, 1.9, 1.5] {
        for epsilon in [1e-3, 1e-2, 0.1, 0.3, 1.0] {
            let x = &one + &v.scale(c(epsilon));
            let l2_of_image = t.apply(&x).l2_norm();
            let lp_of_input = lp_norm(&x, p).expect("p >= 1");
            if l2_of_image > lp_of_input + 1e-12 {
                return Some(Violation {
                    p,
                    epsilon,
                    l2_of_image,
                    lp_of_input,
                });
            }
        }
    }
    None
}

/// The subgroup generated by `{i⁻¹j : i, j ∈ support}` is the whole group.
pub fn ritter_check(table: &GroupTable, support: &[usize]) -> Result<bool> {
    if support.is_empty() {
        return Err(Error::Domain("empty support".into()));
    }
    if let Some(&bad) = support.iter().find(|&&i| i >= table.order()) {
        return Err(Error::Input(format!(
            "support element {bad} outside a group of order {}",
            table.order()
        )));
    }
    let gens: Vec<usize> = support
        .iter()
        .flat_map(|&i| support.iter().map(move |&j| (i, j)))
        .map(|(i, j)| table.mul(table.inverse(i), j))
        .collect();
    Ok(table.generated_subgroup(&gens).len() == table.order())
}

#[derive(Clone, Debug, Serialize)]
pub struct SchurReport {
    pub holds: bool,
    pub max_nontrivial: f64,
    pub conditions: ConditionsReport,
    pub agrees: bool,
}

/// The state on `C*(Γ)` with `φ(λ(γ)) = values[γ]`.
pub fn group_algebra_state(g: &QuantumGroup, values: &[crate::linalg::C64]) -> Result<Functional> {
    let Origin::GroupAlgebra { table, lambda } = g.origin() else {
        return Err(Error::Input(format!("{} is not a group algebra", g.name())));
    };
    if values.len() != table.order() {
        return Err(Error::Input(format!(
            "{} values for a group of order {}",
            values.len(),
            table.order()
        )));
    }
    let lam = CMat::from_columns(lambda);
    let rhs = CMat::from_column_slice(values.len(), 1, values);
    let basis = linalg::solve(&lam.transpose(), &rhs)
        .ok_or_else(|| Error::Consistency("group elements do not form a basis".into()))?;
    let f = Functional::from_basis_values(g.structure().clone(), &basis.column(0).into_owned());
    if (values[table.identity()] - ONE).norm() > tol::ALGEBRAIC {
        return Err(Error::Domain(format!("φ(e) = {} ≠ 1", values[table.identity()])));
    }
    if !f.is_state() {
        return Err(Error::Domain(format!(
            "φ is not positive definite (smallest eigenvalue {:.3e})",
            f.min_eigenvalue()
        )));
    }
    Ok(f)
}

/// `|φ(γ)| < 1` for all `γ ≠ e`, cross-checked against the five conditions
/// for the corresponding state on `C*(Γ)`.
pub fn schur_check(table: &GroupTable, values: &[crate::linalg::C64], opts: CheckOptions) -> Result<SchurReport> {
    let g = build_group_algebra(table)?;
    let phi = group_algebra_state(&g, values)?;
    let max_nontrivial = (0..table.order())
        .filter(|&k| k != table.identity())
        .map(|k| values[k].norm())
        .fold(0.0, f64::max);
    let holds = max_nontrivial < 1.0 - 1e-9;
    let conditions = check_conditions(&g, &phi, opts)?;
    let agrees = conditions.all_true() == holds;
    if !agrees && !conditions.indeterminate {
        return Err(Error::Consistency(format!(
            "max |φ(γ)| = {max_nontrivial} but the five conditions are {:?}",
            conditions.verdicts()
        )));
    }
    Ok(SchurReport {
        holds,
        max_nontrivial,
        conditions,
        agrees,
    })
}

/// The counit as a state, so that `x ⋆ ((1−s)h + sε) = (1−s)h(x)1 + s·x`.
pub fn counit_state(g: &QuantumGroup) -> Functional {
    Functional::from_basis_values(g.structure().clone(), g.counit())
}
