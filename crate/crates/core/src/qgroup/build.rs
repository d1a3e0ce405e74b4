//! Constructors: function algebras, group algebras, tensor products.

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::linalg::{c, CMat, CVec, C64, ONE, ZERO};

use super::wedderburn::{SemisimpleAlgebra, SimpleBlock};
use super::{Origin, QuantumGroup, DECOMPOSITION_SEED};

/// `C(G)` with `Δ(δ_g) = Σ_{st=g} δ_s ⊗ δ_t`.
pub fn build_function_algebra(table: &GroupTable) -> Result<QuantumGroup> {
    let n = table.order();
    let mut delta = CMat::zeros(n * n, n);
    for s in 0..n {
        for t in 0..n {
            delta[(s * n + t, table.mul(s, t))] = ONE;
        }
    }
    QuantumGroup::with_origin(
        format!("C(G), |G| = {n}"),
        vec![1; n],
        Some(vec![1.0 / n as f64; n]),
        delta,
        Origin::FunctionAlgebra(table.clone()),
    )
}

/// `C*(Γ)`, block-decomposed through the regular representation, with
/// `Δ(λ(γ)) = λ(γ) ⊗ λ(γ)`.
pub fn build_group_algebra(table: &GroupTable) -> Result<QuantumGroup> {
    let n = table.order();
    let mut unit = CVec::zeros(n);
    unit[table.identity()] = ONE;
    let alg = SemisimpleAlgebra::from_products(n, unit, |a, b| {
        let mut v = CVec::zeros(n);
        v[table.mul(a, b)] = ONE;
        v
    });
    let dec = alg.decompose(DECOMPOSITION_SEED)?;
    let blocks = order_blocks(dec.blocks, n);
    let dims: Vec<usize> = blocks.iter().map(|b| b.n).collect();
    let weights: Vec<f64> = blocks.iter().map(|b| b.unit(0, 0).norm_squared()).collect();

    // coordinates of λ(γ) against the matrix units: ⟨E_kl, δ_γ⟩ / ‖E_kl‖²
    let dim: usize = dims.iter().map(|k| k * k).sum();
    let lambda: Vec<CVec> = (0..n)
        .map(|g| {
            let mut v = CVec::zeros(dim);
            let mut off = 0;
            for (b, w) in blocks.iter().zip(&weights) {
                for (k, e) in b.units.iter().enumerate() {
                    v[off + k] = e[g].conj() / c(*w);
                }
                off += b.n * b.n;
            }
            v
        })
        .collect();

    let mut delta = CMat::zeros(dim * dim, dim);
    let mut col = 0;
    for b in &blocks {
        for e in &b.units {
            for (g, lg) in lambda.iter().enumerate() {
                if e[g] == ZERO {
                    continue;
                }
                let kron = lg.kronecker(lg) * e[g];
                let mut target = delta.column_mut(col);
                target += kron;
            }
            col += 1;
        }
    }
    let weights = Some(weights);
    QuantumGroup::with_origin(
        format!("C*(Γ), |Γ| = {n}"),
        dims,
        weights,
        delta,
        Origin::GroupAlgebra {
            table: table.clone(),
            lambda,
        },
    )
}

/// Trivial representation first, then increasing dimension.
fn order_blocks(mut blocks: Vec<SimpleBlock>, n: usize) -> Vec<SimpleBlock> {
    let avg = c(1.0 / n as f64);
    let is_trivial = |b: &SimpleBlock| b.n == 1 && b.units[0].iter().all(|z| (*z - avg).norm() < 1e-8);
    let pos = blocks.iter().position(is_trivial);
    let first = pos.map(|p| blocks.remove(p));
    blocks.sort_by_key(|b| b.n);
    if let Some(f) = first {
        blocks.insert(0, f);
    }
    blocks
}

/// `A₁ ⊗ A₂` with `Δ = (ι ⊗ flip ⊗ ι)(Δ₁ ⊗ Δ₂)` and product weights.
pub fn tensor_product(g1: &QuantumGroup, g2: &QuantumGroup) -> Result<QuantumGroup> {
    let layout = g1.structure().tensor(g2.structure());
    let (d1, d2) = (g1.dim(), g2.dim());
    let d = d1 * d2;
    let place = |i: usize, j: usize| layout.lex_to_block[i * d2 + j];
    let nonzero = |m: &CMat, col: usize| -> Vec<(usize, C64)> {
        m.column(col)
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > 0.0)
            .map(|(r, z)| (r, *z))
            .collect()
    };
    let mut delta = CMat::zeros(d * d, d);
    for i in 0..d1 {
        let a = nonzero(g1.delta(), i);
        for j in 0..d2 {
            let b = nonzero(g2.delta(), j);
            let col = place(i, j);
            for &(r1, z1) in &a {
                let (k, l) = (r1 / d1, r1 % d1);
                for &(r2, z2) in &b {
                    let (m, q) = (r2 / d2, r2 % d2);
                    delta[(place(k, m) * d + place(l, q), col)] += z1 * z2;
                }
            }
        }
    }
    let s = &layout.structure;
    QuantumGroup::new(
        format!("{} ⊗ {}", g1.name(), g2.name()),
        s.block_dims().to_vec(),
        Some(s.block_weights().to_vec()),
        delta,
    )
}

/// The one-point quantum group `ℂ`.
pub fn trivial() -> QuantumGroup {
    QuantumGroup::new("trivial", vec![1], Some(vec![1.0]), CMat::from_element(1, 1, ONE))
        .expect("trivial quantum group")
}

impl QuantumGroup {
    /// Coordinates of `δ_g` in `C(G)` or of `λ(γ)` in `C*(Γ)`.
    pub fn group_element(&self, g: usize) -> Result<CVec> {
        match self.origin() {
            Origin::FunctionAlgebra(t) if g < t.order() => {
                let mut v = CVec::zeros(self.dim());
                v[g] = ONE;
                Ok(v)
            }
            Origin::GroupAlgebra { lambda, .. } if g < lambda.len() => Ok(lambda[g].clone()),
            Origin::Generic => Err(Error::Input(format!("{} has no underlying group", self.name()))),
            _ => Err(Error::Input(format!("group element {g} out of range"))),
        }
    }
}
