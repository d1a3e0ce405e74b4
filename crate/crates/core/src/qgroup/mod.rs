//! Finite quantum groups `(A, Δ)` with their Haar state, antipode and
//! irreducible corepresentations.

mod build;
mod dual;
mod validate;
pub mod wedderburn;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fdalgebra::{AlgebraElement, BlockStructure, Functional, TensorLayout};
use crate::group::GroupTable;
use crate::linalg::{CMat, CVec};

pub use validate::{validate_quantum_group, Check, ValidationReport};

/// Fixed seed for the internal block decompositions, so that constructed
/// objects do not depend on caller randomness.
pub(crate) const DECOMPOSITION_SEED: u64 = 0x5eed_0f_9e7e;

/// Where a quantum group came from; group constructors keep the group so
/// that group-level checks can translate between the two pictures.
#[derive(Clone, Debug)]
pub enum Origin {
    Generic,
    /// `C(G)`: basis element `g` is `δ_g`.
    FunctionAlgebra(GroupTable),
    /// `C*(Γ)`: `lambda[γ]` holds the matrix-unit coordinates of `λ(γ)`.
    GroupAlgebra {
        table: GroupTable,
        lambda: Vec<CVec>,
    },
}

/// A unitary corepresentation `u = (u_ij)` with `Δ(u_jk) = Σ_p u_jp ⊗ u_pk`.
#[derive(Clone, Debug)]
pub struct Corepresentation {
    dim: usize,
    entries: Vec<AlgebraElement>,
    q_matrix: CMat,
}

impl Corepresentation {
    pub(crate) fn new(dim: usize, entries: Vec<AlgebraElement>) -> Self {
        Corepresentation {
            dim,
            entries,
            q_matrix: CMat::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i * self.dim + j]
    }

    pub fn q_matrix(&self) -> &CMat {
        &self.q_matrix
    }

    /// Quantum dimension `Tr(Q_α)`.
    pub fn quantum_dim(&self) -> f64 {
        self.q_matrix.trace().re
    }
}

#[derive(Clone, Debug)]
pub struct QuantumGroup {
    name: String,
    structure: Arc<BlockStructure>,
    delta: CMat,
    /// `slices[I][(K, L)] = Δ[(K, L), I]`.
    slices: Vec<CMat>,
    layout: TensorLayout,
    haar: Functional,
    counit: CVec,
    antipode: CMat,
    irreps: Vec<Corepresentation>,
    origin: Origin,
}

impl QuantumGroup {
    /// Validate `(A, Δ)` and derive the Haar state, antipode and irreps.
    ///
    /// Block weights are always recomputed from the Haar state; supplied
    /// weights that disagree by more than `1e-8` are rejected.
    pub fn new(
        name: impl Into<String>,
        block_dims: Vec<usize>,
        weights: Option<Vec<f64>>,
        delta: CMat,
    ) -> Result<Self> {
        Self::with_origin(name.into(), block_dims, weights, delta, Origin::Generic)
    }

    pub(crate) fn with_origin(
        name: String,
        block_dims: Vec<usize>,
        weights: Option<Vec<f64>>,
        delta: CMat,
        origin: Origin,
    ) -> Result<Self> {
        let report = validate_quantum_group(&block_dims, weights.as_deref(), &delta);
        if let Some(dim) = report.haar_dimension.filter(|&d| d != 1) {
            return Err(Error::Haar(dim));
        }
        if !report.passed() {
            return Err(Error::InvalidQuantumGroup(report.failure_summary()));
        }
        let derived = report
            .derived
            .ok_or_else(|| Error::Consistency("validation passed without derived data".into()))?;
        let structure = derived.structure;
        let layout = structure.tensor(&structure);
        let slices = slices(&delta, structure.dim());
        Ok(QuantumGroup {
            name,
            layout,
            haar: Functional::trace_state(structure.clone()),
            structure,
            delta,
            slices,
            counit: derived.counit,
            antipode: derived.antipode,
            irreps: derived.irreps,
            origin,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn structure(&self) -> &Arc<BlockStructure> {
        &self.structure
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    /// `Δ` as a `dim² × dim` matrix; row `K·dim + L` is the coefficient of `e_K ⊗ e_L`.
    pub fn delta(&self) -> &CMat {
        &self.delta
    }

    pub fn tensor_layout(&self) -> &TensorLayout {
        &self.layout
    }

    /// The Haar state. Since it is tracial and the block weights are taken
    /// from it, its density is the unit.
    pub fn haar(&self) -> &Functional {
        &self.haar
    }

    /// Counit values `ε(e_I)`.
    pub fn counit(&self) -> &CVec {
        &self.counit
    }

    pub fn antipode(&self) -> &CMat {
        &self.antipode
    }

    pub fn irreps(&self) -> &[Corepresentation] {
        &self.irreps
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn group_table(&self) -> Option<&GroupTable> {
        match &self.origin {
            Origin::Generic => None,
            Origin::FunctionAlgebra(t) => Some(t),
            Origin::GroupAlgebra { table, .. } => Some(table),
        }
    }

    /// `Δ(x)` as an element of `A ⊗ A`.
    pub fn apply_delta(&self, x: &AlgebraElement) -> AlgebraElement {
        self.layout.to_element(&(&self.delta * x.coords()))
    }

    pub fn apply_antipode(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_coords(self.structure.clone(), &(&self.antipode * x.coords()))
    }

    /// `φ ∘ S`.
    pub fn compose_antipode(&self, phi: &Functional) -> Functional {
        let values = self.antipode.transpose() * phi.basis_values();
        Functional::from_basis_values(self.structure.clone(), &values)
    }

    /// Basis values of `φ ⋆ ψ = (φ ⊗ ψ)Δ`.
    pub fn convolve_values(&self, f: &CVec, g: &CVec) -> CVec {
        CVec::from_fn(self.dim(), |i, _| (f.transpose() * &self.slices[i] * g)[(0, 0)])
    }

    /// Matrix of `x ↦ (ι ⊗ ψ)Δ(x) = ψ ⋆ x`, given the basis values of `ψ`.
    pub fn left_convolution_matrix(&self, g: &CVec) -> CMat {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for i in 0..d {
            m.set_column(i, &(&self.slices[i] * g));
        }
        m
    }

    /// Matrix of `x ↦ (φ ⊗ ι)Δ(x) = x ⋆ φ`, given the basis values of `φ`.
    pub fn right_convolution_matrix(&self, f: &CVec) -> CMat {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for i in 0..d {
            m.set_column(i, &(self.slices[i].transpose() * f));
        }
        m
    }

    pub fn is_commutative(&self) -> bool {
        self.structure.is_commutative()
    }

    /// Cocommutative iff `Δ = flip ∘ Δ`.
    pub fn is_cocommutative(&self, tol: f64) -> bool {
        self.slices
            .iter()
            .all(|s| crate::linalg::max_abs(&(s - s.transpose())) <= tol)
    }
}

pub(crate) fn slices(delta: &CMat, d: usize) -> Vec<CMat> {
    (0..d)
        .map(|i| CMat::from_fn(d, d, |k, l| delta[(k * d + l, i)]))
        .collect()
}

/// Serializable summary used by reports.
#[derive(Clone, Debug, Serialize)]
pub struct QuantumGroupSummary {
    pub name: String,
    pub dim: usize,
    pub blocks: Vec<usize>,
    pub weights: Vec<f64>,
    pub irrep_dims: Vec<usize>,
    pub commutative: bool,
    pub cocommutative: bool,
}

impl From<&QuantumGroup> for QuantumGroupSummary {
    fn from(g: &QuantumGroup) -> Self {
        QuantumGroupSummary {
            name: g.name.clone(),
            dim: g.dim(),
            blocks: g.structure.block_dims().to_vec(),
            weights: g.structure.block_weights().to_vec(),
            irrep_dims: g.irreps.iter().map(|u| u.dim()).collect(),
            commutative: g.is_commutative(),
            cocommutative: g.is_cocommutative(1e-10),
        }
    }
}

/// Haar state of `G`.
pub fn haar_state(g: &QuantumGroup) -> &Functional {
    g.haar()
}

/// Antipode of `G` as a matrix in the matrix-unit basis.
pub fn antipode(g: &QuantumGroup) -> &CMat {
    g.antipode()
}

/// Irreducible unitary corepresentations, trivial one first.
pub fn peter_weyl(g: &QuantumGroup) -> &[Corepresentation] {
    g.irreps()
}

pub use build::{build_function_algebra, build_group_algebra, tensor_product, trivial};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupTable;
    use crate::linalg::max_abs;

    fn flipped(delta: &CMat, d: usize) -> CMat {
        CMat::from_fn(d * d, d, |r, i| delta[((r % d) * d + r / d, i)])
    }

    #[test]
    fn flipped_delta_is_the_opposite_group_and_stays_valid() {
        let g = build_function_algebra(&GroupTable::symmetric(3)).unwrap();
        let report = validate_quantum_group(&[1; 6], None, &flipped(g.delta(), 6));
        assert!(report.passed(), "{}", report.failure_summary());
        assert!(report.check("coassociativity").unwrap().residual < 1e-12);
    }

    #[test]
    fn latin_square_delta_fails_coassociativity() {
        let t = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ];
        let mut bad = CMat::zeros(25, 5);
        for a in 0..5 {
            for b in 0..5 {
                bad[(a * 5 + b, t[a][b])] = crate::linalg::ONE;
            }
        }
        let report = validate_quantum_group(&[1; 5], None, &bad);
        let check = report.check("coassociativity").unwrap();
        assert!(!check.passed && check.residual > 1e-9);
        assert!(report.check("*-homomorphism").unwrap().passed);
        match QuantumGroup::new("bad", vec![1; 5], None, bad) {
            Err(Error::InvalidQuantumGroup(msg)) => assert!(msg.contains("coassociativity residual")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dropping_a_basis_vector_breaks_cancellation() {
        let g = build_function_algebra(&GroupTable::cyclic(3)).unwrap();
        let mut bad = g.delta().clone();
        bad.column_mut(2).fill(crate::linalg::ZERO);
        let report = validate_quantum_group(&[1; 3], None, &bad);
        assert!(!report.passed());
        assert!(!report.check("cancellation (right slice)").unwrap().passed);
        assert!(!report.check("cancellation (left slice)").unwrap().passed);
    }

    #[test]
    fn wrong_weights_are_rejected() {
        let g = build_function_algebra(&GroupTable::cyclic(2)).unwrap();
        let r = QuantumGroup::new("w", vec![1, 1], Some(vec![0.4, 0.6]), g.delta().clone());
        assert!(matches!(r, Err(Error::InvalidQuantumGroup(m)) if m.contains("supplied weights")));
    }

    #[test]
    fn shape_errors_do_not_panic() {
        let report = validate_quantum_group(&[2], None, &CMat::zeros(3, 3));
        assert!(!report.passed());
        let report = validate_quantum_group(&[0], None, &CMat::zeros(0, 0));
        assert!(!report.passed());
    }

    #[test]
    fn trivial_group_has_single_trivial_irrep() {
        let t = trivial();
        assert_eq!(t.irreps().len(), 1);
        assert_eq!(t.irreps()[0].dim(), 1);
    }

    #[test]
    fn s3_function_times_group_algebra_is_neither_commutative_nor_cocommutative() {
        let t = GroupTable::symmetric(3);
        let a = build_function_algebra(&t).unwrap();
        let b = build_group_algebra(&t).unwrap();
        let g = tensor_product(&a, &b).unwrap();
        assert_eq!(g.dim(), 36);
        assert!(!g.is_commutative());
        assert!(!g.is_cocommutative(1e-8));
        let dims: usize = g.irreps().iter().map(|u| u.dim() * u.dim()).sum();
        assert_eq!(dims, 36);
        let s = g.antipode();
        assert!(max_abs(&(s * s - CMat::identity(36, 36))) < 1e-8);
    }
}
