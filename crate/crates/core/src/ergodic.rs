//! Convolution powers, Cesàro limits and Hopf images.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fdalgebra::{AlgebraElement, BlockStructure, Functional};
use crate::linalg::{self, c, CMat, CVec, ONE};
use crate::qgroup::QuantumGroup;
use crate::tol;

/// Number of convolution powers in the iterative cross-check.
pub const ITERATIVE_STEPS: usize = 1000;
const HAAR_TOL: f64 = 1e-8;
const FIXED_TOL: f64 = 1e-9;

/// The operator `P_ψ : x ↦ ψ ⋆ x` and its mean-ergodic projection.
#[derive(Clone, Debug)]
pub struct ConvolutionSemigroup {
    pub matrix: CMat,
    /// Orthonormal columns spanning `ker(P − I)`.
    pub fixed_space: CMat,
    /// Projection onto `ker(P − I)` along `ran(P − I)`.
    pub projection: CMat,
    /// Eigenvalues of modulus one other than one itself.
    pub peripheral: Vec<crate::linalg::C64>,
}

impl ConvolutionSemigroup {
    pub fn new(g: &QuantumGroup, psi: &Functional) -> Result<Self> {
        if !psi.structure().same_shape(g.structure()) {
            return Err(Error::Shape("state lives on a different algebra".into()));
        }
        let p = g.left_convolution_matrix(&psi.basis_values());
        let d = g.dim();
        let shifted = &p - CMat::identity(d, d);
        let k = linalg::null_space(&shifted, FIXED_TOL);
        let k_adj = linalg::null_space(&shifted.adjoint(), FIXED_TOL);
        if k.ncols() != k_adj.ncols() {
            return Err(Error::Consistency(format!(
                "eigenvalue 1 is not semisimple: kernel {} vs cokernel {}",
                k.ncols(),
                k_adj.ncols()
            )));
        }
        let gram = k_adj.adjoint() * &k;
        let inv = linalg::inverse(&gram)
            .ok_or_else(|| Error::Consistency("fixed space and cokernel pairing is singular".into()))?;
        let projection = &k * inv * k_adj.adjoint();
        let peripheral = linalg::eigenvalues(&p)
            .into_iter()
            .filter(|z| (z.norm() - 1.0).abs() < 1e-9 && (z - ONE).norm() > 1e-9)
            .collect();
        Ok(ConvolutionSemigroup {
            matrix: p,
            fixed_space: k,
            projection,
            peripheral,
        })
    }

    pub fn fixed_dim(&self) -> usize {
        self.fixed_space.ncols()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CesaroReport {
    /// Basis values of the limit functional.
    #[serde(skip)]
    pub limit: Option<Functional>,
    pub limit_values: Vec<[f64; 2]>,
    pub is_haar: bool,
    pub nondegenerate: bool,
    pub fixed_space_dim: usize,
    pub haar_distance: f64,
    pub iterative_steps: usize,
    pub iterative_residual: f64,
    pub iterative_tolerance: f64,
    pub peripheral_eigenvalues: usize,
}

impl CesaroReport {
    pub fn limit(&self) -> &Functional {
        self.limit.as_ref().expect("limit is always set by cesaro_limit")
    }

    pub fn iterative_agrees(&self) -> bool {
        self.iterative_residual <= self.iterative_tolerance
    }
}

/// `lim (1/n) Σ_{k≤n} ψ^{⋆k}`, computed from the spectral projection of `P_ψ`
/// and cross-checked against a direct average of [`ITERATIVE_STEPS`] powers.
pub fn cesaro_limit(g: &QuantumGroup, psi: &Functional) -> Result<CesaroReport> {
    if !psi.is_state() {
        return Err(Error::Domain("Cesàro limits are taken for states".into()));
    }
    let sg = ConvolutionSemigroup::new(g, psi)?;
    // ψ^{⋆k} = ψ^{⋆(k−1)} ⋆ ψ has basis values Pᵀ f_{k−1}
    let f = psi.basis_values();
    let limit_values = sg.projection.transpose() * &f;

    let pt = sg.matrix.transpose();
    let d = g.dim();
    // w solves (I − Pᵀ)w = (I − Eᵀ)f, so the n-step average differs from the limit by (w − Pᵀⁿw)/n
    let transient_source = &f - &limit_values;
    let w = linalg::lstsq(&(CMat::identity(d, d) - &pt), &transient_source);
    let mut cur = f.clone();
    let mut sum = f.clone();
    let mut w_cur = w.clone();
    for _ in 1..ITERATIVE_STEPS {
        cur = &pt * &cur;
        sum += &cur;
        w_cur = &pt * &w_cur;
    }
    w_cur = &pt * &w_cur;
    let avg = sum / c(ITERATIVE_STEPS as f64);
    let iterative_residual = linalg::max_abs_vec(&(&avg - &limit_values));
    let transient = linalg::max_abs_vec(&(&w - &w_cur)) / ITERATIVE_STEPS as f64;
    let iterative_tolerance = 1e-6 + 2.0 * transient;

    let limit = Functional::from_basis_values(g.structure().clone(), &limit_values);
    let haar_distance = limit.max_abs_diff(g.haar());
    let is_haar = haar_distance <= HAAR_TOL;
    Ok(CesaroReport {
        limit_values: limit_values.iter().map(|z| [z.re, z.im]).collect(),
        limit: Some(limit),
        is_haar,
        nondegenerate: is_haar,
        fixed_space_dim: sg.fixed_dim(),
        haar_distance,
        iterative_steps: ITERATIVE_STEPS,
        iterative_residual,
        iterative_tolerance,
        peripheral_eigenvalues: sg.peripheral.len(),
    })
}

/// Non-degeneracy of `ψ` tested directly: `Σ_{n=1}^{dim A} ψ^{⋆n}` is
/// faithful iff every nonzero positive `x` has `ψ^{⋆n}(x) > 0` for some `n`,
/// because the sequence `ψ^{⋆n}(x)` is determined by its first `dim A` terms.
/// Returns the smallest eigenvalue of the summed density.
pub fn nondegeneracy_margin(g: &QuantumGroup, psi: &Functional) -> Result<f64> {
    let pt = g.left_convolution_matrix(&psi.basis_values()).transpose();
    let mut cur = psi.basis_values();
    let mut sum = cur.clone();
    for _ in 1..g.dim() {
        cur = &pt * &cur;
        sum += &cur;
    }
    let f = Functional::from_basis_values(g.structure().clone(), &(sum / c(g.dim() as f64)));
    Ok(crate::fdalgebra::is_positive(f.density(), tol::ALGEBRAIC).min_eigenvalue)
}

/// A unital *-homomorphism `π : A → B` into a finite-dimensional C*-algebra,
/// given by the images of the matrix units of `A`.
#[derive(Clone, Debug)]
pub struct Hom {
    source: Arc<BlockStructure>,
    target: Arc<BlockStructure>,
    images: Vec<AlgebraElement>,
}

impl Hom {
    pub fn new(source: Arc<BlockStructure>, target: Arc<BlockStructure>, images: Vec<AlgebraElement>) -> Result<Self> {
        if images.len() != source.dim() {
            return Err(Error::Shape(format!(
                "{} images for a source of dimension {}",
                images.len(),
                source.dim()
            )));
        }
        if images.iter().any(|x| !x.structure().same_shape(&target)) {
            return Err(Error::Shape("image outside the target algebra".into()));
        }
        let hom = Hom { source, target, images };
        let res = hom.homomorphism_residual();
        if res > tol::ALGEBRAIC * 10.0 {
            return Err(Error::Domain(format!(
                "π is not a unital *-homomorphism (residual {res:.3e})"
            )));
        }
        Ok(hom)
    }

    pub fn identity(structure: Arc<BlockStructure>) -> Self {
        let images = (0..structure.dim())
            .map(|i| AlgebraElement::basis_element(structure.clone(), i))
            .collect();
        Hom {
            source: structure.clone(),
            target: structure,
            images,
        }
    }

    pub fn source(&self) -> &Arc<BlockStructure> {
        &self.source
    }

    pub fn target(&self) -> &Arc<BlockStructure> {
        &self.target
    }

    pub fn images(&self) -> &[AlgebraElement] {
        &self.images
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        let coords = x.coords();
        let mut out = AlgebraElement::zeros(self.target.clone());
        for (z, img) in coords.iter().zip(&self.images) {
            if z.norm() > 0.0 {
                out = &out + &img.scale(*z);
            }
        }
        out
    }

    /// Basis values of `φ ∘ π`.
    pub fn pull_back(&self, phi: &Functional) -> CVec {
        CVec::from_iterator(self.images.len(), self.images.iter().map(|y| phi.eval(y)))
    }

    /// Rows are the functionals `ω ∘ π` for `ω` running over the dual basis of `B`.
    fn pulled_back_duals(&self) -> CMat {
        let db = self.target.dim();
        let mut m = CMat::zeros(db, self.source.dim());
        for (j, img) in self.images.iter().enumerate() {
            m.set_column(j, &img.coords());
        }
        m
    }

    fn homomorphism_residual(&self) -> f64 {
        let s = &self.source;
        let one = AlgebraElement::identity(s.clone());
        let mut res = self
            .apply(&one)
            .max_abs_diff(&AlgebraElement::identity(self.target.clone()));
        for i in 0..s.dim() {
            let (bi, ri, ci) = s.label(i);
            res = res.max(self.images[s.index(bi, ci, ri)].max_abs_diff(&self.images[i].adjoint()));
            for j in 0..s.dim() {
                let (bj, rj, cj) = s.label(j);
                let prod = &self.images[i] * &self.images[j];
                let expected = if bi == bj && ci == rj {
                    self.images[s.index(bi, ri, cj)].clone()
                } else {
                    AlgebraElement::zeros(self.target.clone())
                };
                res = res.max(prod.max_abs_diff(&expected));
            }
        }
        res
    }
}

#[derive(Clone, Debug)]
pub struct HopfImageData {
    /// `dim ∩_{j≤k} ker π_j` for `k = 1, 2, …` up to stabilization.
    pub kernel_dims: Vec<usize>,
    pub stabilization_index: usize,
    /// Blocks of `A` that survive in the quotient `A / I`.
    pub kept_blocks: Vec<usize>,
    pub quotient: QuantumGroup,
    /// Matrix of the quotient map `q : A → A/I`.
    pub quotient_map: CMat,
    /// Residual of `Δ_π ∘ q = (q ⊗ q) ∘ Δ`.
    pub quotient_residual: f64,
    /// `h_{G_π} ∘ q`.
    pub eta: Functional,
    /// Cesàro limit of the powers of `φ ∘ π`.
    pub eta_cesaro: Functional,
    pub eta_agreement: f64,
    pub idempotence_residual: f64,
}

/// Hopf image of `π` and the associated idempotent state.
///
/// The annihilator of `∩_{j≤k} ker π_j` in the dual algebra is
/// `V_k = F + F·V_{k−1}` where `F = {ω ∘ π}`, because
/// `(ω_1 ⊗ ⋯ ⊗ ω_k)π^{⊗k}Δ^{(k−1)} = (ω_1∘π) ⋆ ⋯ ⋆ (ω_k∘π)`.
/// This avoids building `π_k` with its exponentially large target.
pub fn hopf_image(g: &QuantumGroup, pi: &Hom, phi: &Functional) -> Result<HopfImageData> {
    if !pi.source().same_shape(g.structure()) {
        return Err(Error::Shape("π is not defined on this quantum group".into()));
    }
    if !phi.structure().same_shape(pi.target()) || !phi.is_faithful_state() {
        return Err(Error::Domain("φ must be a faithful state on the target of π".into()));
    }
    let d = g.dim();
    let f = linalg::column_span(&pi.pulled_back_duals().transpose(), tol::RANK);
    let mut v = f.clone();
    let mut kernel_dims = vec![d - v.ncols()];
    let mut stabilization_index = 1;
    for k in 2..=d.max(2) {
        let mut gens: Vec<CVec> = v.column_iter().map(|c| c.into_owned()).collect();
        for a in 0..f.ncols() {
            for b in 0..v.ncols() {
                gens.push(g.convolve_values(&f.column(a).into_owned(), &v.column(b).into_owned()));
            }
        }
        let next = linalg::column_span(&CMat::from_columns(&gens), tol::RANK);
        kernel_dims.push(d - next.ncols());
        let grew = next.ncols() > v.ncols();
        v = next;
        if !grew {
            break;
        }
        stabilization_index = k;
    }

    // I = V^⊥ is a two-sided ideal, hence a sum of whole blocks of A
    let s = g.structure();
    let mut kept_blocks = Vec::new();
    for b in 0..s.num_blocks() {
        let n = s.block_dims()[b];
        let off = s.offset(b);
        let weight: f64 = (0..n * n)
            .map(|k| v.row(off + k).iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum();
        if weight > tol::RANK {
            kept_blocks.push(b);
        }
    }
    let kept_dim: usize = kept_blocks.iter().map(|&b| s.block_dims()[b].pow(2)).sum();
    if kept_dim != v.ncols() {
        return Err(Error::Consistency(format!(
            "annihilator of dimension {} is not a sum of blocks (kept blocks span {kept_dim})",
            v.ncols()
        )));
    }

    let mut q = CMat::zeros(kept_dim, d);
    let mut row = 0;
    for &b in &kept_blocks {
        let off = s.offset(b);
        for k in 0..s.block_dims()[b].pow(2) {
            q[(row, off + k)] = ONE;
            row += 1;
        }
    }
    let qq = q.kronecker(&q);
    let dq = &qq * g.delta();
    let delta_pi = &dq * q.transpose();
    let quotient_residual = linalg::max_abs(&(&delta_pi * &q - &dq));
    let quotient = QuantumGroup::new(
        format!("Hopf image of π on {}", g.name()),
        kept_blocks.iter().map(|&b| s.block_dims()[b]).collect(),
        None,
        delta_pi,
    )?;
    if quotient_residual > 1e-9 {
        return Err(Error::Consistency(format!(
            "kernel is not a Hopf ideal: Δ_π∘q − (q⊗q)∘Δ residual {quotient_residual:.3e}"
        )));
    }

    let eta_values = q.transpose() * quotient.haar().basis_values();
    let eta = Functional::from_basis_values(s.clone(), &eta_values);
    let pulled = Functional::from_basis_values(s.clone(), &pi.pull_back(phi));
    let eta_cesaro = cesaro_limit(g, &pulled)?.limit().clone();
    let eta_agreement = eta.max_abs_diff(&eta_cesaro);
    let square = g.convolve_values(&eta_values, &eta_values);
    let idempotence_residual = linalg::max_abs_vec(&(square - &eta_values));
    Ok(HopfImageData {
        kernel_dims,
        stabilization_index,
        kept_blocks,
        quotient,
        quotient_map: q,
        quotient_residual,
        eta,
        eta_cesaro,
        eta_agreement,
        idempotence_residual,
    })
}
