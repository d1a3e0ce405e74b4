//! Reduced free products of finite-dimensional algebras, computed exactly at
//! the level of reduced words.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fdalgebra::{AlgebraElement, BlockStructure, Functional};
use crate::improving::MapOnAlgebra;
use crate::linalg::{self, c, CMat, CVec, C64, ONE, ZERO};
use crate::tol;

/// A letter: (component index, index in that component's letter basis).
pub type Letter = (usize, usize);
pub type Word = Vec<Letter>;

/// One free factor `(A_i, φ_i)` with an orthonormal basis of `ker φ_i`.
#[derive(Clone, Debug)]
pub struct Component {
    pub structure: Arc<BlockStructure>,
    pub state: Functional,
    pub letters: Vec<AlgebraElement>,
    /// `e_a e_b = φ(e_a e_b)1 + Σ_k products[a][b][k] e_k`.
    scalar: Vec<Vec<C64>>,
    products: Vec<Vec<CVec>>,
    /// `e_a* = Σ_k adjoints[a][k] e_k`.
    adjoints: Vec<CVec>,
}

impl Component {
    /// Letters are an orthonormal basis of `ker φ` in `L₂(φ)` obtained from
    /// the matrix units; `state` defaults to the reference trace.
    pub fn new(structure: Arc<BlockStructure>, state: Option<Functional>) -> Result<Self> {
        let state = state.unwrap_or_else(|| Functional::trace_state(structure.clone()));
        if !state.is_faithful_state() || !state.structure().same_shape(&structure) {
            return Err(Error::Domain("component state must be faithful".into()));
        }
        let letters = centered_basis(&structure, &state)?;
        Ok(Component::with_letters(structure, state, letters))
    }

    /// Letters rotated to the right singular vectors of `T*` on `ker φ`.
    pub fn adapted_to(structure: Arc<BlockStructure>, state: Option<Functional>, map: &MapOnAlgebra) -> Result<Self> {
        let base = Component::new(structure, state)?;
        let m = base.letter_matrix(map)?;
        let f = linalg::svd(&m.adjoint());
        let v = f.v_t.adjoint();
        let letters = (0..base.letters.len())
            .map(|j| {
                base.letters
                    .iter()
                    .enumerate()
                    .fold(AlgebraElement::zeros(base.structure.clone()), |acc, (l, e)| {
                        &acc + &e.scale(v[(l, j)])
                    })
            })
            .collect();
        Ok(Component::with_letters(base.structure, base.state, letters))
    }

    fn with_letters(structure: Arc<BlockStructure>, state: Functional, letters: Vec<AlgebraElement>) -> Self {
        let n = letters.len();
        let mut scalar = vec![vec![ZERO; n]; n];
        let mut products = vec![vec![CVec::zeros(n); n]; n];
        let mut comp = Component {
            structure,
            state,
            letters,
            scalar: Vec::new(),
            products: Vec::new(),
            adjoints: Vec::new(),
        };
        for a in 0..n {
            for b in 0..n {
                let ab = &comp.letters[a] * &comp.letters[b];
                scalar[a][b] = comp.state.eval(&ab);
                products[a][b] = comp.expand(&ab);
            }
        }
        comp.adjoints = (0..n).map(|a| comp.expand(&comp.letters[a].adjoint())).collect();
        comp.scalar = scalar;
        comp.products = products;
        comp
    }

    /// Letter coordinates `⟨e_k, x − φ(x)1⟩_φ`.
    pub fn expand(&self, x: &AlgebraElement) -> CVec {
        CVec::from_iterator(
            self.letters.len(),
            self.letters.iter().map(|e| self.state.eval(&(&e.adjoint() * x))),
        )
    }

    pub fn num_letters(&self) -> usize {
        self.letters.len()
    }

    /// `M[k][l] = ⟨e_k, T e_l⟩_φ` for a unital `φ`-preserving map `T`.
    pub fn letter_matrix(&self, map: &MapOnAlgebra) -> Result<CMat> {
        if !map.structure().same_shape(&self.structure) {
            return Err(Error::Shape("map acts on a different algebra".into()));
        }
        let one = AlgebraElement::identity(self.structure.clone());
        if map.apply(&one).max_abs_diff(&one) > tol::ALGEBRAIC {
            return Err(Error::Domain("component map is not unital".into()));
        }
        for i in 0..self.structure.dim() {
            let e = AlgebraElement::basis_element(self.structure.clone(), i);
            if (self.state.eval(&map.apply(&e)) - self.state.eval(&e)).norm() > tol::ALGEBRAIC {
                return Err(Error::Domain("component map does not preserve the state".into()));
            }
        }
        let n = self.letters.len();
        let mut m = CMat::zeros(n, n);
        for l in 0..n {
            m.set_column(l, &self.expand(&map.apply(&self.letters[l])));
        }
        Ok(m)
    }
}

fn centered_basis(s: &Arc<BlockStructure>, phi: &Functional) -> Result<Vec<AlgebraElement>> {
    let one = AlgebraElement::identity(s.clone());
    let mut out: Vec<AlgebraElement> = Vec::new();
    for i in 0..s.dim() {
        let e = AlgebraElement::basis_element(s.clone(), i);
        let mut x = &e - &one.scale(phi.eval(&e));
        for f in &out {
            let proj = phi.eval(&(&f.adjoint() * &x));
            x = &x - &f.scale(proj);
        }
        let norm = phi.eval(&(&x.adjoint() * &x)).re.max(0.0).sqrt();
        if norm > 1e-9 {
            out.push(x.scale(c(1.0 / norm)));
        }
    }
    if out.len() + 1 != s.dim() {
        return Err(Error::Consistency(format!(
            "centered subspace has dimension {} instead of {}",
            out.len(),
            s.dim() - 1
        )));
    }
    Ok(out)
}

/// The components of a reduced free product and the constants `c, n, m`.
#[derive(Clone, Debug)]
pub struct FreeProductSpec {
    pub components: Vec<Component>,
}

impl FreeProductSpec {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Input("a free product needs at least one component".into()));
        }
        Ok(FreeProductSpec { components })
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn m(&self) -> usize {
        self.components.iter().map(|c| c.num_letters()).max().unwrap_or(0)
    }

    /// `max ‖e_k^{(i)}‖_∞²`.
    pub fn c(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|comp| comp.letters.iter().map(|e| e.operator_norm().powi(2)))
            .fold(1.0, f64::max)
    }

    /// A component element as a free element: `φ_i(x)𝟙 + Σ_k x_k e_k`.
    pub fn embed(&self, component: usize, x: &AlgebraElement) -> FreeElement {
        let comp = &self.components[component];
        let mut out = FreeElement::scalar(comp.state.eval(x));
        for (k, z) in comp.expand(x).iter().enumerate() {
            out.add_term(vec![(component, k)], *z);
        }
        out
    }

    pub fn letter(&self, component: usize, k: usize) -> FreeElement {
        FreeElement::word(vec![(component, k)])
    }

    /// All reduced words of length exactly `r`.
    pub fn words_of_length(&self, r: usize) -> Vec<Word> {
        let mut words: Vec<Word> = vec![Vec::new()];
        for _ in 0..r {
            let mut next = Vec::new();
            for w in &words {
                for (i, comp) in self.components.iter().enumerate() {
                    if w.last().is_some_and(|&(j, _)| j == i) {
                        continue;
                    }
                    for k in 0..comp.num_letters() {
                        let mut v = w.clone();
                        v.push((i, k));
                        next.push(v);
                    }
                }
            }
            words = next;
        }
        words
    }

    fn check(&self, u: &FreeElement) -> Result<()> {
        for w in u.terms.keys() {
            for (k, &(i, l)) in w.iter().enumerate() {
                if i >= self.n() || l >= self.components[i].num_letters() {
                    return Err(Error::Shape(format!("letter ({i}, {l}) is not in this free product")));
                }
                if k > 0 && w[k - 1].0 == i {
                    return Err(Error::Shape("word is not reduced".into()));
                }
            }
        }
        Ok(())
    }
}

/// `Σ_w x_w w` over reduced words, the empty word standing for `𝟙`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FreeElement {
    terms: BTreeMap<Word, C64>,
}

impl FreeElement {
    pub fn zero() -> Self {
        FreeElement::default()
    }

    pub fn scalar(z: C64) -> Self {
        let mut out = FreeElement::zero();
        out.add_term(Vec::new(), z);
        out
    }

    pub fn one() -> Self {
        FreeElement::scalar(ONE)
    }

    pub fn word(w: Word) -> Self {
        let mut out = FreeElement::zero();
        out.add_term(w, ONE);
        out
    }

    pub fn add_term(&mut self, w: Word, z: C64) {
        if z == ZERO {
            return;
        }
        *self.terms.entry(w).or_insert(ZERO) += z;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &[Letter]) -> C64 {
        self.terms.get(w).copied().unwrap_or(ZERO)
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Homogeneous part of word length `r`.
    pub fn homogeneous(&self, r: usize) -> FreeElement {
        FreeElement {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == r)
                .map(|(w, z)| (w.clone(), *z))
                .collect(),
        }
    }

    pub fn scale(&self, z: C64) -> FreeElement {
        FreeElement {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * z)).collect(),
        }
    }

    pub fn add(&self, other: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        for (w, z) in &other.terms {
            out.add_term(w.clone(), *z);
        }
        out
    }

    pub fn sub(&self, other: &FreeElement) -> FreeElement {
        self.add(&other.scale(c(-1.0)))
    }

    /// `(Σ |x_w|²)^{1/2}`.
    pub fn coefficient_l2(&self) -> f64 {
        self.terms.values().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &FreeElement) -> f64 {
        self.sub(other).terms.values().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn pruned(mut self) -> Self {
        self.terms.retain(|_, z| z.norm() > 1e-300);
        self
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, z)| {
                let word = if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter().map(|(i, k)| format!("e{k}^{i}")).collect::<Vec<_>>().join("⊗")
                };
                format!("({:.6}{:+.6}i)·{word}", z.re, z.im)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Product of two free elements, reduced with the letter-merge rule.
pub fn free_multiply(spec: &FreeProductSpec, u: &FreeElement, v: &FreeElement) -> FreeElement {
    let mut out = FreeElement::zero();
    for (w1, z1) in &u.terms {
        for (w2, z2) in &v.terms {
            multiply_words(spec, w1, w2, z1 * z2, &mut out);
        }
    }
    out.pruned()
}

fn multiply_words(spec: &FreeProductSpec, w1: &[Letter], w2: &[Letter], z: C64, out: &mut FreeElement) {
    if z == ZERO {
        return;
    }
    let (Some(&(i, a)), Some(&(j, b))) = (w1.last(), w2.first()) else {
        let mut w = w1.to_vec();
        w.extend_from_slice(w2);
        out.add_term(w, z);
        return;
    };
    if i != j {
        let mut w = w1.to_vec();
        w.extend_from_slice(w2);
        out.add_term(w, z);
        return;
    }
    let comp = &spec.components[i];
    let (head, tail) = (&w1[..w1.len() - 1], &w2[1..]);
    for (k, coef) in comp.products[a][b].iter().enumerate() {
        if coef.norm() > 1e-15 {
            let mut w = head.to_vec();
            w.push((i, k));
            w.extend_from_slice(tail);
            out.add_term(w, z * coef);
        }
    }
    multiply_words(spec, head, tail, z * comp.scalar[a][b], out);
}

/// The free product state: the coefficient of `𝟙`.
pub fn free_trace(u: &FreeElement) -> C64 {
    u.coefficient(&[])
}

pub fn free_adjoint(spec: &FreeProductSpec, u: &FreeElement) -> FreeElement {
    let mut out = FreeElement::zero();
    for (w, z) in &u.terms {
        let mut partial = vec![(Vec::new(), z.conj())];
        for &(i, a) in w.iter().rev() {
            let adj = &spec.components[i].adjoints[a];
            partial = partial
                .into_iter()
                .flat_map(|(pw, pz)| {
                    adj.iter()
                        .enumerate()
                        .filter(|(_, c)| c.norm() > 1e-15)
                        .map(move |(k, c)| {
                            let mut nw: Word = pw.clone();
                            nw.push((i, k));
                            (nw, pz * c)
                        })
                })
                .collect();
        }
        for (pw, pz) in partial {
            out.add_term(pw, pz);
        }
    }
    out.pruned()
}

/// `‖u‖_q = τ((u*u)^{q/2})^{1/q}` for even `q`.
pub fn free_norm_even(spec: &FreeProductSpec, u: &FreeElement, q: u32) -> Result<f64> {
    if q < 2 || !q.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "word-level norms need an even exponent, got {q}"
        )));
    }
    spec.check(u)?;
    let x = free_multiply(spec, &free_adjoint(spec, u), u);
    let mut acc = x.clone();
    for _ in 1..q / 2 {
        acc = free_multiply(spec, &acc, &x);
    }
    Ok(free_trace(&acc).re.max(0.0).powf(1.0 / q as f64))
}

/// Componentwise unital state-preserving maps acting letterwise.
#[derive(Clone, Debug)]
pub struct FreeMap {
    /// Matrix of `T_i` on the letters of component `i`.
    pub letter_matrices: Vec<CMat>,
    pub singular_values: Vec<Vec<f64>>,
    pub lambda: f64,
}

impl FreeMap {
    pub fn new(spec: &FreeProductSpec, maps: &[MapOnAlgebra]) -> Result<Self> {
        if maps.len() != spec.n() {
            return Err(Error::Shape(format!("{} maps for {} components", maps.len(), spec.n())));
        }
        let letter_matrices = spec
            .components
            .iter()
            .zip(maps)
            .map(|(comp, t)| comp.letter_matrix(t))
            .collect::<Result<Vec<_>>>()?;
        let singular_values: Vec<Vec<f64>> = letter_matrices.iter().map(linalg::singular_values).collect();
        let lambda = singular_values
            .iter()
            .flat_map(|s| s.first().copied())
            .fold(0.0, f64::max);
        Ok(FreeMap {
            letter_matrices,
            singular_values,
            lambda,
        })
    }

    pub fn identity(spec: &FreeProductSpec) -> Self {
        let maps: Vec<MapOnAlgebra> = spec
            .components
            .iter()
            .map(|comp| MapOnAlgebra::identity(comp.structure.clone()))
            .collect();
        FreeMap::new(spec, &maps).expect("identity maps are valid")
    }
}

/// `T(a₁⋯a_r) = T_{i₁}(a₁)⋯T_{i_r}(a_r)`, or the same with `T_i*`.
pub fn free_map_apply(spec: &FreeProductSpec, f: &FreeMap, u: &FreeElement, adjoint: bool) -> Result<FreeElement> {
    if f.letter_matrices.len() != spec.n() {
        return Err(Error::Shape("free map and free product do not match".into()));
    }
    spec.check(u)?;
    let mats: Vec<CMat> = f
        .letter_matrices
        .iter()
        .map(|m| if adjoint { m.adjoint() } else { m.clone() })
        .collect();
    let mut out = FreeElement::zero();
    for (w, z) in &u.terms {
        let mut partial: Vec<(Word, C64)> = vec![(Vec::new(), *z)];
        for &(i, l) in w {
            let col = mats[i].column(l).into_owned();
            partial = partial
                .into_iter()
                .flat_map(|(pw, pz)| {
                    col.iter()
                        .enumerate()
                        .filter(|(_, c)| c.norm() > 1e-15)
                        .map(|(k, c)| {
                            let mut nw = pw.clone();
                            nw.push((i, k));
                            (nw, pz * c)
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        for (pw, pz) in partial {
            out.add_term(pw, pz);
        }
    }
    Ok(out.pruned())
}

/// Smallest even `q ∈ {4, …, 64}` with `λ (c n m)^{1/2 − 1/q} ≤ 1/(q − 1)`.
pub fn choose_q(lambda: f64, c: f64, n: usize, m: usize) -> Result<Option<u32>> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::Domain(format!("choose_q needs 0 <= λ < 1, got {lambda}")));
    }
    if c < 1.0 || n == 0 || m == 0 {
        return Err(Error::Domain("choose_q needs c >= 1 and n, m >= 1".into()));
    }
    let base = c * n as f64 * m as f64;
    Ok((4..=64).step_by(2).find(|&q| {
        let q = q as f64;
        lambda * base.powf(0.5 - 1.0 / q) <= 1.0 / (q - 1.0)
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeVerification {
    pub q: u32,
    pub max_len: usize,
    pub samples: usize,
    pub seed: u64,
    pub lambda: f64,
    pub c: f64,
    pub n: usize,
    pub m: usize,
    /// `min (‖x‖₂ − ‖T* x‖_q)`.
    pub min_slack: f64,
    /// `min ((cnm)^{r(1/2−1/q)}‖y_r‖₂ − ‖y_r‖_q)` over homogeneous parts.
    pub min_claim_slack: f64,
    /// `min (λ^r‖x_r‖₂ − ‖T* x_r‖₂)`.
    pub min_contraction_slack: f64,
    pub violation: Option<String>,
}

impl FreeVerification {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Samples random elements of word length `≤ max_len` and checks
/// `‖T* x‖_q ≤ ‖x‖₂` together with the homogeneous-part bounds of its proof.
pub fn verify_free_improving(
    spec: &FreeProductSpec,
    f: &FreeMap,
    q: u32,
    max_len: usize,
    samples: usize,
    seed: u64,
) -> Result<FreeVerification> {
    let (c_const, n, m) = (spec.c(), spec.n(), spec.m());
    if f.lambda >= 1.0 {
        return Err(Error::Domain(format!(
            "λ = {} leaves no room for improvement",
            f.lambda
        )));
    }
    if q < 4 || !q.is_multiple_of(2) {
        return Err(Error::Domain(format!("q must be an even integer >= 4, got {q}")));
    }
    let admissible = f.lambda * (c_const * n as f64 * m as f64).powf(0.5 - 1.0 / q as f64) <= 1.0 / (q as f64 - 1.0);
    if choose_q(f.lambda, c_const, n, m)?.is_none() || !admissible {
        return Err(Error::Domain(format!(
            "q = {q} does not satisfy the exponent condition for λ = {}",
            f.lambda
        )));
    }
    let words: Vec<Vec<Word>> = (0..=max_len).map(|r| spec.words_of_length(r)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let claim_base = (c_const * n as f64 * m as f64).powf(0.5 - 1.0 / q as f64);
    let mut report = FreeVerification {
        q,
        max_len,
        samples,
        seed,
        lambda: f.lambda,
        c: c_const,
        n,
        m,
        min_slack: f64::INFINITY,
        min_claim_slack: f64::INFINITY,
        min_contraction_slack: f64::INFINITY,
        violation: None,
    };
    for sample in 0..samples {
        let x = random_free_element(&words, &mut rng);
        let rx = free_map_apply(spec, f, &x, true)?;
        let slack = x.coefficient_l2() - free_norm_even(spec, &rx, q)?;
        report.min_slack = report.min_slack.min(slack);
        if slack < -1e-8 && report.violation.is_none() {
            report.violation = Some(format!(
                "sample {sample}: ‖T*x‖_{q} exceeds ‖x‖₂ by {:.3e} for x = {x}",
                -slack
            ));
        }
        for r in 1..=max_len {
            let xr = x.homogeneous(r);
            let yr = rx.homogeneous(r);
            let claim = claim_base.powi(r as i32) * yr.coefficient_l2() - free_norm_even(spec, &yr, q)?;
            report.min_claim_slack = report.min_claim_slack.min(claim);
            let contraction = f.lambda.powi(r as i32) * xr.coefficient_l2() - yr.coefficient_l2();
            report.min_contraction_slack = report.min_contraction_slack.min(contraction);
            if (claim < -1e-8 || contraction < -1e-9) && report.violation.is_none() {
                report.violation = Some(format!(
                    "sample {sample}, length {r}: claim slack {claim:.3e}, contraction slack {contraction:.3e}"
                ));
            }
        }
    }
    Ok(report)
}

/// Gaussian coefficients on every word when there are few of them, otherwise
/// on a random selection of 32 words per length.
fn random_free_element<R: Rng>(words: &[Vec<Word>], rng: &mut R) -> FreeElement {
    let mut x = FreeElement::zero();
    for layer in words {
        let chosen: Vec<&Word> = if layer.len() <= 32 {
            layer.iter().collect()
        } else {
            (0..32).map(|_| &layer[rng.gen_range(0..layer.len())]).collect()
        };
        for w in chosen {
            let g = linalg::random_gaussian_vec(rng, 1)[0];
            x.add_term(w.clone(), g);
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupTable;
    use crate::qgroup::build_function_algebra;

    fn z2_spec() -> FreeProductSpec {
        let s = Arc::new(BlockStructure::commutative(2).unwrap());
        FreeProductSpec::new(vec![
            Component::new(s.clone(), None).unwrap(),
            Component::new(s, None).unwrap(),
        ])
        .unwrap()
    }

    fn lazy_maps(t: f64) -> Vec<MapOnAlgebra> {
        let g = build_function_algebra(&GroupTable::cyclic(2)).unwrap();
        let mu = Functional::from_basis_values(g.structure().clone(), &CVec::from_vec(vec![c(1.0 - t), c(t)]));
        vec![MapOnAlgebra::right_convolution(&g, &mu); 2]
    }

    #[test]
    fn z2_letters_are_plus_minus_one() {
        let spec = z2_spec();
        let e = &spec.components[0].letters[0];
        assert!((e.coords()[0] - ONE).norm() < 1e-12 && (e.coords()[1] + ONE).norm() < 1e-12);
        assert!((spec.c() - 1.0).abs() < 1e-12);
        assert_eq!((spec.n(), spec.m()), (2, 1));
    }

    #[test]
    fn merge_rule_examples() {
        let spec = z2_spec();
        let e = spec.letter(0, 0);
        let f = spec.letter(1, 0);
        let ef = free_multiply(&spec, &e, &f);
        assert_eq!(ef, FreeElement::word(vec![(0, 0), (1, 0)]));
        assert!(free_multiply(&spec, &e, &ef).max_abs_diff(&f) < 1e-12);
        let fe = free_multiply(&spec, &f, &e);
        assert!(free_multiply(&spec, &ef, &fe).max_abs_diff(&FreeElement::one()) < 1e-12);
    }

    #[test]
    fn fourth_moments() {
        let spec = z2_spec();
        let e = spec.letter(0, 0);
        let f = spec.letter(1, 0);
        let ef = free_multiply(&spec, &e, &f);
        assert!((free_norm_even(&spec, &ef, 4).unwrap() - 1.0).abs() < 1e-12);
        assert!((free_norm_even(&spec, &e.add(&f), 4).unwrap() - 6f64.powf(0.25)).abs() < 1e-12);
        assert!((free_norm_even(&spec, &FreeElement::one(), 8).unwrap() - 1.0).abs() < 1e-12);
        assert!(free_norm_even(&spec, &e, 3).is_err());
    }

    #[test]
    fn lazy_maps_scale_letters() {
        let spec = z2_spec();
        let f = FreeMap::new(&spec, &lazy_maps(0.4)).unwrap();
        assert!((f.lambda - 0.2).abs() < 1e-12);
        let w = FreeElement::word(vec![(0, 0), (1, 0)]);
        let tw = free_map_apply(&spec, &f, &w, false).unwrap();
        assert!(tw.max_abs_diff(&w.scale(c(0.04))).abs() < 1e-12);
        let id = FreeMap::identity(&spec);
        assert_eq!(free_map_apply(&spec, &id, &w, true).unwrap(), w);
    }

    #[test]
    fn choose_q_examples() {
        assert_eq!(choose_q(0.0, 1.0, 2, 1).unwrap(), Some(4));
        assert_eq!(choose_q(0.2, 1.0, 2, 1).unwrap(), Some(4));
        assert_eq!(choose_q(0.9, 1.0, 2, 1).unwrap(), None);
        assert!(choose_q(1.0, 1.0, 2, 1).is_err());
    }

    #[test]
    fn verification_small_run() {
        let spec = z2_spec();
        let f = FreeMap::new(&spec, &lazy_maps(0.4)).unwrap();
        let r = verify_free_improving(&spec, &f, 4, 3, 20, 1).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(verify_free_improving(&spec, &FreeMap::identity(&spec), 4, 3, 5, 1).is_err());
    }

    #[test]
    fn noncommutative_component_multiplication_is_associative() {
        let m2 = Arc::new(BlockStructure::matrix(2).unwrap());
        let c2 = Arc::new(BlockStructure::commutative(2).unwrap());
        let spec = FreeProductSpec::new(vec![
            Component::new(m2, None).unwrap(),
            Component::new(c2, None).unwrap(),
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let words: Vec<Vec<Word>> = (0..=2).map(|r| spec.words_of_length(r)).collect();
        let x = random_free_element(&words, &mut rng);
        let y = random_free_element(&words, &mut rng);
        let z = random_free_element(&words, &mut rng);
        let left = free_multiply(&spec, &free_multiply(&spec, &x, &y), &z);
        let right = free_multiply(&spec, &x, &free_multiply(&spec, &y, &z));
        assert!(left.max_abs_diff(&right) < 1e-9);
    }
}
