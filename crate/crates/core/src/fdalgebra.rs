//! Finite-dimensional C*-algebras `M_{n_1} ⊕ … ⊕ M_{n_m}` with a faithful
//! tracial state, their elements, functionals, and noncommutative L_p norms.
//!
//! The reference trace is `τ(x) = Σ_i w_i Tr(x_i)` where `w_i` is the trace
//! of a minimal projection in block `i`. The fixed linear basis is the
//! family of matrix units, ordered block by block and row-major inside a
//! block; every coordinate vector and every stored linear map in this crate
//! uses that order.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, CVec, C64, ONE};
use crate::tol;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockStructure {
    block_dims: Vec<usize>,
    block_weights: Vec<f64>,
    #[serde(skip)]
    offsets: Vec<usize>,
}

impl BlockStructure {
    pub fn new(block_dims: Vec<usize>, block_weights: Vec<f64>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::Structure("no blocks".into()));
        }
        if block_dims.len() != block_weights.len() {
            return Err(Error::Structure(format!(
                "{} block dimensions but {} weights",
                block_dims.len(),
                block_weights.len()
            )));
        }
        if let Some(i) = block_dims.iter().position(|&n| n == 0) {
            return Err(Error::Structure(format!("block {i} has dimension 0")));
        }
        if let Some(i) = block_weights.iter().position(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::Structure(format!(
                "block {i} has non-positive weight {}",
                block_weights[i]
            )));
        }
        let total: f64 = block_dims.iter().zip(&block_weights).map(|(&n, &w)| n as f64 * w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Structure(format!("trace of the unit is {total}, expected 1")));
        }
        let mut offsets = Vec::with_capacity(block_dims.len() + 1);
        let mut acc = 0;
        for &n in &block_dims {
            offsets.push(acc);
            acc += n * n;
        }
        offsets.push(acc);
        Ok(BlockStructure {
            block_dims,
            block_weights,
            offsets,
        })
    }

    /// Weights proportional to `raw`, rescaled so that `τ(1) = 1`.
    pub fn normalized(block_dims: Vec<usize>, raw: &[f64]) -> Result<Self> {
        let total: f64 = block_dims.iter().zip(raw).map(|(&n, &w)| n as f64 * w).sum();
        if !(total > 0.0) {
            return Err(Error::Structure("weights sum to zero".into()));
        }
        let w = raw.iter().map(|&w| w / total).collect();
        BlockStructure::new(block_dims, w)
    }

    /// `ℂ^n` with the uniform probability.
    pub fn commutative(n: usize) -> Result<Self> {
        BlockStructure::new(vec![1; n], vec![1.0 / n as f64; n])
    }

    /// `M_n` with the normalized trace.
    pub fn matrix(n: usize) -> Result<Self> {
        BlockStructure::new(vec![n], vec![1.0 / n as f64])
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn block_weights(&self) -> &[f64] {
        &self.block_weights
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Linear dimension `Σ n_i²`.
    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    pub fn index(&self, block: usize, row: usize, col: usize) -> usize {
        let n = self.block_dims[block];
        self.offsets[block] + row * n + col
    }

    /// Inverse of [`BlockStructure::index`].
    pub fn label(&self, idx: usize) -> (usize, usize, usize) {
        let b = match self.offsets.binary_search(&idx) {
            Ok(b) => b,
            Err(b) => b - 1,
        };
        let n = self.block_dims[b];
        let local = idx - self.offsets[b];
        (b, local / n, local % n)
    }

    /// Weight of the block containing basis element `idx`.
    pub fn weight_of(&self, idx: usize) -> f64 {
        self.block_weights[self.label(idx).0]
    }

    /// Coordinates of the unit.
    pub fn unit_coords(&self) -> CVec {
        let mut v = CVec::zeros(self.dim());
        for (b, &n) in self.block_dims.iter().enumerate() {
            for r in 0..n {
                v[self.index(b, r, r)] = ONE;
            }
        }
        v
    }

    /// `L_2` norms `√w_i` of the matrix units; dividing coordinates by these
    /// gives an orthonormal basis.
    pub fn basis_norms(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.weight_of(i).sqrt()).collect()
    }

    pub fn is_commutative(&self) -> bool {
        self.block_dims.iter().all(|&n| n == 1)
    }

    pub fn same_shape(&self, other: &BlockStructure) -> bool {
        self.block_dims == other.block_dims
    }

    /// Tensor product structure, blocks in lexicographic order `(i, j)`.
    pub fn tensor(&self, other: &BlockStructure) -> TensorLayout {
        let mut dims = Vec::new();
        let mut weights = Vec::new();
        for (&n, &w) in self.block_dims.iter().zip(&self.block_weights) {
            for (&m, &v) in other.block_dims.iter().zip(&other.block_weights) {
                dims.push(n * m);
                weights.push(w * v);
            }
        }
        let structure = BlockStructure::normalized(dims, &weights).expect("tensor of valid structures");
        let d2 = other.dim();
        let mut lex_to_block = vec![0; self.dim() * d2];
        for i in 0..self.dim() {
            let (bi, a, b) = self.label(i);
            for j in 0..d2 {
                let (bj, cc, d) = other.label(j);
                let m = other.block_dims[bj];
                let blk = bi * other.num_blocks() + bj;
                lex_to_block[i * d2 + j] = structure.index(blk, a * m + cc, b * m + d);
            }
        }
        TensorLayout {
            structure: Arc::new(structure),
            left_dim: self.dim(),
            right_dim: d2,
            lex_to_block,
        }
    }
}

/// The tensor product `A ⊗ B` as a block algebra together with the
/// permutation from lexicographic tensor coordinates `I·dim(B) + J` to the
/// block-ordered matrix-unit coordinates of the product structure.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    pub structure: Arc<BlockStructure>,
    pub left_dim: usize,
    pub right_dim: usize,
    pub lex_to_block: Vec<usize>,
}

impl TensorLayout {
    pub fn to_element(&self, lex: &CVec) -> AlgebraElement {
        let mut v = CVec::zeros(self.structure.dim());
        for (k, z) in lex.iter().enumerate() {
            v[self.lex_to_block[k]] = *z;
        }
        AlgebraElement::from_coords(self.structure.clone(), &v)
    }

    pub fn to_lex(&self, x: &AlgebraElement) -> CVec {
        let coords = x.coords();
        CVec::from_fn(self.lex_to_block.len(), |k, _| coords[self.lex_to_block[k]])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    structure: Arc<BlockStructure>,
    blocks: Vec<CMat>,
}

impl AlgebraElement {
    pub fn from_blocks(structure: Arc<BlockStructure>, blocks: Vec<CMat>) -> Result<Self> {
        if blocks.len() != structure.num_blocks() {
            return Err(Error::Shape(format!(
                "{} blocks given, structure has {}",
                blocks.len(),
                structure.num_blocks()
            )));
        }
        for (i, (b, &n)) in blocks.iter().zip(structure.block_dims()).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::Shape(format!(
                    "block {i} is {}x{}, expected {n}x{n}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(AlgebraElement { structure, blocks })
    }

    pub fn zeros(structure: Arc<BlockStructure>) -> Self {
        let blocks = structure.block_dims().iter().map(|&n| CMat::zeros(n, n)).collect();
        AlgebraElement { structure, blocks }
    }

    pub fn identity(structure: Arc<BlockStructure>) -> Self {
        let blocks = structure.block_dims().iter().map(|&n| CMat::identity(n, n)).collect();
        AlgebraElement { structure, blocks }
    }

    pub fn scalar(structure: Arc<BlockStructure>, z: C64) -> Self {
        AlgebraElement::identity(structure).scale(z)
    }

    pub fn matrix_unit(structure: Arc<BlockStructure>, block: usize, row: usize, col: usize) -> Self {
        let mut x = AlgebraElement::zeros(structure);
        x.blocks[block][(row, col)] = ONE;
        x
    }

    pub fn basis_element(structure: Arc<BlockStructure>, idx: usize) -> Self {
        let (b, r, c) = structure.label(idx);
        AlgebraElement::matrix_unit(structure, b, r, c)
    }

    /// Build from coordinates in the matrix-unit basis.
    pub fn from_coords(structure: Arc<BlockStructure>, coords: &CVec) -> Self {
        assert_eq!(coords.len(), structure.dim(), "coordinate length");
        let blocks = structure
            .block_dims()
            .iter()
            .enumerate()
            .map(|(b, &n)| {
                let off = structure.offset(b);
                CMat::from_fn(n, n, |r, col| coords[off + r * n + col])
            })
            .collect();
        AlgebraElement { structure, blocks }
    }

    pub fn coords(&self) -> CVec {
        let mut v = CVec::zeros(self.structure.dim());
        for (b, blk) in self.blocks.iter().enumerate() {
            let n = blk.nrows();
            let off = self.structure.offset(b);
            for r in 0..n {
                for col in 0..n {
                    v[off + r * n + col] = blk[(r, col)];
                }
            }
        }
        v
    }

    /// Coordinates in the `L_2(τ)`-orthonormal basis `e_ab / √w_i`.
    pub fn l2_coords(&self) -> CVec {
        let mut v = self.coords();
        for (i, w) in self.structure.basis_norms().into_iter().enumerate() {
            v[i] *= w;
        }
        v
    }

    pub fn from_l2_coords(structure: Arc<BlockStructure>, v: &CVec) -> Self {
        let mut v = v.clone();
        for (i, w) in structure.basis_norms().into_iter().enumerate() {
            v[i] /= w;
        }
        AlgebraElement::from_coords(structure, &v)
    }

    pub fn structure(&self) -> &Arc<BlockStructure> {
        &self.structure
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMat {
        &self.blocks[i]
    }

    pub fn random<R: Rng + ?Sized>(structure: Arc<BlockStructure>, rng: &mut R) -> Self {
        let blocks = structure
            .block_dims()
            .iter()
            .map(|&n| linalg::random_gaussian(rng, n, n))
            .collect();
        AlgebraElement { structure, blocks }
    }

    pub fn random_self_adjoint<R: Rng + ?Sized>(structure: Arc<BlockStructure>, rng: &mut R) -> Self {
        let g = AlgebraElement::random(structure, rng);
        (&g + &g.adjoint()).scale(c(0.5))
    }

    /// `g*g` for Gaussian `g`, normalized to `τ = 1`.
    pub fn random_positive<R: Rng + ?Sized>(structure: Arc<BlockStructure>, rng: &mut R) -> Self {
        let g = AlgebraElement::random(structure, rng);
        let p = &g.adjoint() * &g;
        let t = p.trace().re;
        p.scale(c(1.0 / t))
    }

    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            structure: self.structure.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn scale(&self, z: C64) -> Self {
        AlgebraElement {
            structure: self.structure.clone(),
            blocks: self.blocks.iter().map(|b| b * z).collect(),
        }
    }

    fn check_same(&self, other: &AlgebraElement) -> Result<()> {
        if Arc::ptr_eq(&self.structure, &other.structure) || self.structure == other.structure {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "elements of different algebras {:?} vs {:?}",
                self.structure.block_dims(),
                other.structure.block_dims()
            )))
        }
    }

    pub fn try_mul(&self, other: &AlgebraElement) -> Result<Self> {
        self.check_same(other)?;
        Ok(AlgebraElement {
            structure: self.structure.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        })
    }

    pub fn try_add(&self, other: &AlgebraElement) -> Result<Self> {
        self.check_same(other)?;
        Ok(AlgebraElement {
            structure: self.structure.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect(),
        })
    }

    /// `τ(x) = Σ_i w_i Tr(x_i)`.
    pub fn trace(&self) -> C64 {
        self.blocks
            .iter()
            .zip(self.structure.block_weights())
            .map(|(b, &w)| b.trace() * w)
            .sum()
    }

    /// `⟨x, y⟩ = τ(x* y)`.
    pub fn inner(&self, other: &AlgebraElement) -> C64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .zip(self.structure.block_weights())
            .map(|((a, b), &w)| a.dotc(b) * w)
            .sum()
    }

    /// Sum of the entries' moduli differences; used for identity residuals.
    pub fn max_abs_diff(&self, other: &AlgebraElement) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| linalg::max_abs(&(a - b)))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(linalg::max_abs).fold(0.0, f64::max)
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.blocks.iter().all(|b| linalg::max_abs(&(b - b.adjoint())) <= tol)
    }

    /// `|x| = (x*x)^{1/2}` through the eigen-decomposition of `x*x`.
    pub fn abs(&self) -> Self {
        AlgebraElement {
            structure: self.structure.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| {
                    let h = b.adjoint() * b;
                    linalg::psd_power(&clamped(&h), 0.5)
                })
                .collect(),
        }
    }

    /// Eigenvalues of `|x_i|` per block, with the block weight.
    pub fn abs_spectrum(&self) -> Vec<(f64, Vec<f64>)> {
        self.blocks
            .iter()
            .zip(self.structure.block_weights())
            .map(|(b, &w)| (w, linalg::singular_values(b)))
            .collect()
    }

    /// Noncommutative `L_p` norm, `p ∈ [1, ∞]` (`f64::INFINITY` for the operator norm).
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_norm(self, p)
    }

    pub fn l2_norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }

    pub fn operator_norm(&self) -> f64 {
        self.blocks.iter().map(linalg::operator_norm).fold(0.0, f64::max)
    }

    /// Conditional expectation onto the scalars, `τ(x)·1`.
    pub fn expectation(&self) -> Self {
        AlgebraElement::scalar(self.structure.clone(), self.trace())
    }

    /// Kronecker product `x ⊗ y` in the tensor layout's block order.
    pub fn tensor(&self, other: &AlgebraElement, layout: &TensorLayout) -> Self {
        let mut blocks = Vec::with_capacity(layout.structure.num_blocks());
        for a in &self.blocks {
            for b in &other.blocks {
                blocks.push(a.kronecker(b));
            }
        }
        AlgebraElement {
            structure: layout.structure.clone(),
            blocks,
        }
    }
}

fn clamped(h: &CMat) -> CMat {
    let (vals, vecs) = linalg::hermitian_eigen(h);
    let d = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&v| if v > -tol::CLAMP { c(v.max(0.0)) } else { c(v) }),
    ));
    &vecs * d * vecs.adjoint()
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(rhs).expect("add: structure mismatch")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(&rhs.scale(c(-1.0))).expect("sub: structure mismatch")
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_mul(rhs).expect("mul: structure mismatch")
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(c(-1.0))
    }
}

/// `‖x‖_p = (Σ_i w_i Σ_k (λ_k^i)^p)^{1/p}` with `λ_k^i` the eigenvalues of `|x_i|`.
pub fn lp_norm(x: &AlgebraElement, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Domain(format!("L_p norm needs p >= 1, got {p}")));
    }
    let spectrum = x.abs_spectrum();
    if p.is_infinite() {
        return Ok(spectrum.iter().flat_map(|(_, s)| s.iter().copied()).fold(0.0, f64::max));
    }
    // Scale by the largest singular value to keep powers in range.
    let smax = spectrum.iter().flat_map(|(_, s)| s.iter().copied()).fold(0.0, f64::max);
    if smax == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = spectrum
        .iter()
        .map(|(w, s)| w * s.iter().map(|&v| (v / smax).powf(p)).sum::<f64>())
        .sum();
    Ok(smax * sum.powf(1.0 / p))
}

/// Positivity verdict with the smallest eigenvalue as witness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Positivity {
    pub positive: bool,
    pub self_adjoint: bool,
    pub min_eigenvalue: f64,
}

pub fn is_positive(x: &AlgebraElement, tol: f64) -> Positivity {
    let self_adjoint = x.is_self_adjoint(tol);
    let min_eigenvalue = x
        .blocks()
        .iter()
        .flat_map(linalg::hermitian_eigenvalues)
        .fold(f64::INFINITY, f64::min);
    Positivity {
        positive: self_adjoint && min_eigenvalue >= -tol,
        self_adjoint,
        min_eigenvalue,
    }
}

/// `‖x‖_p² − ‖Ex‖_p² − (p−1)‖x − Ex‖_p²` for the trace-preserving
/// expectation `E` onto the scalars. Nonnegative for `1 < p ≤ 2`.
pub fn ricard_xu_defect(x: &AlgebraElement, p: f64) -> Result<f64> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::Domain(format!("defect needs 1 < p <= 2, got {p}")));
    }
    let ex = x.expectation();
    let centered = x - &ex;
    let a = lp_norm(x, p)?;
    let b = lp_norm(&ex, p)?;
    let d = lp_norm(&centered, p)?;
    Ok(a * a - b * b - (p - 1.0) * d * d)
}

/// A linear functional `φ(y) = τ(y d)` stored through its density `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional {
    density: AlgebraElement,
    is_state: bool,
    is_faithful_state: bool,
    min_eigenvalue: f64,
}

impl Functional {
    /// Wrap a density; state and faithfulness flags follow the density's
    /// positivity and normalization at tolerance `1e-10`.
    pub fn make_state(density: AlgebraElement) -> Self {
        let pos = is_positive(&density, tol::ALGEBRAIC);
        let t = density.trace();
        let normalized = (t - ONE).norm() <= tol::ALGEBRAIC;
        let is_state = pos.positive && normalized;
        Functional {
            is_faithful_state: is_state && pos.min_eigenvalue > tol::ALGEBRAIC,
            is_state,
            min_eigenvalue: if pos.self_adjoint { pos.min_eigenvalue } else { f64::NAN },
            density,
        }
    }

    /// The reference trace `τ` itself.
    pub fn trace_state(structure: Arc<BlockStructure>) -> Self {
        Functional::make_state(AlgebraElement::identity(structure))
    }

    /// The density rescaled so that `τ(d) = 1`.
    pub fn normalized(&self) -> Result<Self> {
        let t = self.density.trace();
        if t.norm() < 1e-300 {
            return Err(Error::Domain("cannot normalize a functional with φ(1) = 0".into()));
        }
        Ok(Functional::make_state(self.density.scale(ONE / t)))
    }

    /// From the values `φ(e_I)` on the matrix-unit basis.
    pub fn from_basis_values(structure: Arc<BlockStructure>, values: &CVec) -> Self {
        // φ(e^i_ab) = w_i d^i_ba
        let mut d = CVec::zeros(structure.dim());
        for idx in 0..structure.dim() {
            let (b, r, col) = structure.label(idx);
            let w = structure.block_weights()[b];
            d[structure.index(b, col, r)] = values[idx] / w;
        }
        Functional::make_state(AlgebraElement::from_coords(structure, &d))
    }

    /// Values `φ(e_I)` on the matrix-unit basis.
    pub fn basis_values(&self) -> CVec {
        let s = self.density.structure();
        let d = self.density.coords();
        CVec::from_fn(s.dim(), |idx, _| {
            let (b, r, col) = s.label(idx);
            d[s.index(b, col, r)] * s.block_weights()[b]
        })
    }

    pub fn eval(&self, y: &AlgebraElement) -> C64 {
        (y * &self.density).trace()
    }

    pub fn density(&self) -> &AlgebraElement {
        &self.density
    }

    pub fn structure(&self) -> &Arc<BlockStructure> {
        self.density.structure()
    }

    pub fn is_state(&self) -> bool {
        self.is_state
    }

    pub fn is_faithful_state(&self) -> bool {
        self.is_faithful_state
    }

    /// Smallest eigenvalue of the density (NaN when not self-adjoint).
    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn scale(&self, z: C64) -> Self {
        Functional::make_state(self.density.scale(z))
    }

    pub fn add(&self, other: &Functional) -> Self {
        Functional::make_state(&self.density + &other.density)
    }

    /// `(1−s)·self + s·other`.
    pub fn mix(&self, other: &Functional, s: f64) -> Self {
        Functional::make_state(&self.density.scale(c(1.0 - s)) + &other.density.scale(c(s)))
    }

    pub fn max_abs_diff(&self, other: &Functional) -> f64 {
        linalg::max_abs_vec(&(self.basis_values() - other.basis_values()))
    }
}

/// Random state with density `g*g / τ(g*g)`; faithful almost surely.
pub fn random_state<R: Rng + ?Sized>(structure: Arc<BlockStructure>, rng: &mut R) -> Functional {
    Functional::make_state(AlgebraElement::random_positive(structure, rng))
}
