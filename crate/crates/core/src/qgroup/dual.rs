//! Peter–Weyl decomposition through the dual algebra `D = A*` with the
//! convolution product `(φψ)(x) = (φ ⊗ ψ)Δ(x)`.
//!
//! Coordinates on `D` are `f'_I = φ(e_I)/√w_I`, which are orthonormal for
//! the Plancherel inner product. The matrix units of `D` pair with a basis
//! of `A` whose elements are exactly the coefficients of the irreducible
//! corepresentations.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fdalgebra::{AlgebraElement, BlockStructure, TensorLayout};
use crate::linalg::{self, c, CMat, CVec, ONE, ZERO};

use super::wedderburn::SemisimpleAlgebra;
use super::{Corepresentation, DECOMPOSITION_SEED};

pub(crate) struct PeterWeyl {
    pub counit: CVec,
    pub irreps: Vec<Corepresentation>,
    pub antipode: CMat,
    pub counit_residual: f64,
    pub decomposition_residual: f64,
    pub coaction_residual: f64,
    pub unitarity_residual: f64,
    pub orthogonality_residual: f64,
}

/// Basis-independent ordering key: arguments of the character's coordinates
/// in `[0, 2π)`, quantized so that round-off does not reorder ties.
fn character_key(u: &Corepresentation) -> Vec<i64> {
    let mut chi = u.entry(0, 0).coords();
    for i in 1..u.dim() {
        chi += u.entry(i, i).coords();
    }
    chi.iter()
        .map(|z| {
            if z.norm() < 1e-9 {
                -1
            } else {
                (z.arg().rem_euclid(std::f64::consts::TAU) * 1e6).round() as i64
                    % (std::f64::consts::TAU * 1e6).round() as i64
            }
        })
        .collect()
}

pub(crate) fn decompose(
    structure: &Arc<BlockStructure>,
    delta: &CMat,
    slices: &[CMat],
    layout: &TensorLayout,
) -> Result<PeterWeyl> {
    let d = structure.dim();
    let sq: Vec<f64> = structure.basis_norms();
    let (dual, counit_residual) = SemisimpleAlgebra::with_solved_unit(d, |k, l| {
        CVec::from_fn(d, |i, _| slices[i][(k, l)] * c(sq[k] * sq[l] / sq[i]))
    });
    if counit_residual > 1e-8 {
        return Err(Error::Consistency(format!(
            "dual algebra has no unit (residual {counit_residual:.3e})"
        )));
    }
    let counit = CVec::from_fn(d, |i, _| dual.unit()[i] * c(sq[i]));
    let dec = dual.decompose(DECOMPOSITION_SEED)?;

    // rows of `pairing` are the matrix units of D as functionals on the basis of A
    let mut pairing = CMat::zeros(d, d);
    let mut row = 0;
    for block in &dec.blocks {
        for unit in &block.units {
            for i in 0..d {
                pairing[(row, i)] = unit[i] * c(sq[i]);
            }
            row += 1;
        }
    }
    let dual_basis =
        linalg::inverse(&pairing).ok_or_else(|| Error::Consistency("matrix units of the dual are dependent".into()))?;

    let mut irreps = Vec::with_capacity(dec.blocks.len());
    let mut start = 0;
    for block in &dec.blocks {
        let n = block.n;
        let entries: Vec<AlgebraElement> = (0..n * n)
            .map(|k| AlgebraElement::from_coords(structure.clone(), &dual_basis.column(start + k).into_owned()))
            .collect();
        start += n * n;
        irreps.push(unitarize(structure, n, entries)?);
    }

    let unit = AlgebraElement::identity(structure.clone());
    let trivial = irreps
        .iter()
        .position(|u| u.dim() == 1 && u.entry(0, 0).max_abs_diff(&unit) < 1e-8)
        .ok_or_else(|| Error::Consistency("no trivial corepresentation found".into()))?;
    let first = irreps.remove(trivial);
    irreps.sort_by_cached_key(|u| (u.dim(), character_key(u)));
    irreps.insert(0, first);

    let antipode = antipode_matrix(structure, &irreps)?;
    Ok(PeterWeyl {
        counit,
        coaction_residual: coaction_residual(delta, layout, &irreps),
        unitarity_residual: irreps.iter().map(unitarity_residual).fold(0.0, f64::max),
        orthogonality_residual: orthogonality_residual(&irreps),
        irreps,
        antipode,
        counit_residual,
        decomposition_residual: dec.residual,
    })
}

/// Conjugate `u` by `F^{1/2}`, where `F = (h ⊗ ι)(u*u)` satisfies
/// `u*(1 ⊗ F)u = 1 ⊗ F` by invariance of `h`, making the result unitary.
fn unitarize(structure: &Arc<BlockStructure>, n: usize, u: Vec<AlgebraElement>) -> Result<Corepresentation> {
    let at = |i: usize, j: usize| &u[i * n + j];
    let f = CMat::from_fn(n, n, |j, k| (0..n).map(|i| at(i, j).inner(at(i, k))).sum());
    let (vals, _) = linalg::hermitian_eigen(&f);
    if vals.first().copied().unwrap_or(0.0) <= 1e-12 {
        return Err(Error::Consistency("corepresentation Gram matrix is singular".into()));
    }
    let half = linalg::psd_power(&f, 0.5);
    let neg_half = linalg::psd_power(&f, -0.5);
    let zero = AlgebraElement::zeros(structure.clone());
    let mut entries = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut acc = zero.clone();
            for cc in 0..n {
                for dd in 0..n {
                    let coef = half[(a, cc)] * neg_half[(dd, b)];
                    if coef != ZERO {
                        acc = &acc + &at(cc, dd).scale(coef);
                    }
                }
            }
            entries.push(acc);
        }
    }
    Ok(Corepresentation::new(n, entries))
}

/// `S(u_ij) = (u_ji)*`, extended linearly through the coefficient basis.
fn antipode_matrix(structure: &Arc<BlockStructure>, irreps: &[Corepresentation]) -> Result<CMat> {
    let d = structure.dim();
    let mut coeffs = CMat::zeros(d, d);
    let mut images = CMat::zeros(d, d);
    let mut col = 0;
    for u in irreps {
        let n = u.dim();
        for i in 0..n {
            for j in 0..n {
                coeffs.set_column(col, &u.entry(i, j).coords());
                images.set_column(col, &u.entry(j, i).adjoint().coords());
                col += 1;
            }
        }
    }
    let inv = linalg::inverse(&coeffs)
        .ok_or_else(|| Error::Consistency("corepresentation coefficients are dependent".into()))?;
    Ok(images * inv)
}

pub(crate) fn coaction_residual(delta: &CMat, layout: &TensorLayout, irreps: &[Corepresentation]) -> f64 {
    let mut res: f64 = 0.0;
    for u in irreps {
        let n = u.dim();
        for j in 0..n {
            for k in 0..n {
                let lhs = delta * u.entry(j, k).coords();
                let mut rhs = CVec::zeros(lhs.len());
                for p in 0..n {
                    rhs += layout.to_lex(&u.entry(j, p).tensor(u.entry(p, k), layout));
                }
                res = res.max(linalg::max_abs_vec(&(lhs - rhs)));
            }
        }
    }
    res
}

pub(crate) fn unitarity_residual(u: &Corepresentation) -> f64 {
    let n = u.dim();
    let s = u.entry(0, 0).structure().clone();
    let one = AlgebraElement::identity(s.clone());
    let zero = AlgebraElement::zeros(s);
    let mut res: f64 = 0.0;
    for i in 0..n {
        for k in 0..n {
            let mut left = zero.clone();
            let mut right = zero.clone();
            for j in 0..n {
                left = &left + &(&u.entry(j, i).adjoint() * u.entry(j, k));
                right = &right + &(u.entry(i, j) * &u.entry(k, j).adjoint());
            }
            let target = if i == k { &one } else { &zero };
            res = res.max(left.max_abs_diff(target)).max(right.max_abs_diff(target));
        }
    }
    res
}

/// Both Haar orthogonality relations `h(u_ij (v_lm)*) = h((u_ij)* v_lm) = δ δ_il δ_jm / n`.
pub(crate) fn orthogonality_residual(irreps: &[Corepresentation]) -> f64 {
    let mut res: f64 = 0.0;
    for (a, u) in irreps.iter().enumerate() {
        for (b, v) in irreps.iter().enumerate() {
            for i in 0..u.dim() {
                for j in 0..u.dim() {
                    for l in 0..v.dim() {
                        for m in 0..v.dim() {
                            let target = if a == b && i == l && j == m {
                                ONE / c(u.dim() as f64)
                            } else {
                                ZERO
                            };
                            let first = v.entry(l, m).inner(u.entry(i, j));
                            let second = u.entry(i, j).inner(v.entry(l, m));
                            res = res.max((first - target).norm()).max((second - target).norm());
                        }
                    }
                }
            }
        }
    }
    res
}
