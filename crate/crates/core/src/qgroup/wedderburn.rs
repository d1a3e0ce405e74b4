//! Numerical Artin–Wedderburn decomposition of a semisimple *-algebra.
//!
//! The algebra is given by its left-multiplication matrices in coordinates
//! that are orthonormal for a faithful trace inner product `⟨a,b⟩ = t(a^♯ b)`.
//! In such coordinates `L_a† = L_{a^♯}`, so the involution is recovered as
//! `a^♯ = L_a† 1` and never has to be supplied.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, CVec};

const GAP: f64 = 1e-6;
const MAX_RETRIES: usize = 5;

pub struct SemisimpleAlgebra {
    /// `left[k]` is the matrix of `x ↦ b_k x` for basis vector `b_k`.
    left: Vec<CMat>,
    unit: CVec,
}

/// One simple summand `≅ M_n`, described by `n²` matrix units stored
/// row-major: `units[k*n + l] = E_kl`.
#[derive(Clone, Debug)]
pub struct SimpleBlock {
    pub n: usize,
    pub units: Vec<CVec>,
}

impl SimpleBlock {
    pub fn unit(&self, k: usize, l: usize) -> &CVec {
        &self.units[k * self.n + l]
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub blocks: Vec<SimpleBlock>,
    /// Largest deviation from `E_kl E_mn = δ_lm E_kn`, `E_kl^♯ = E_lk`, `Σ E_kk = 1`.
    pub residual: f64,
    pub attempts: usize,
}

impl SemisimpleAlgebra {
    /// `mul(i, j)` returns the coordinates of `b_i b_j`.
    pub fn from_products(dim: usize, unit: CVec, mul: impl Fn(usize, usize) -> CVec) -> Self {
        let mut left = vec![CMat::zeros(dim, dim); dim];
        for (i, l) in left.iter_mut().enumerate() {
            for j in 0..dim {
                l.set_column(j, &mul(i, j));
            }
        }
        SemisimpleAlgebra { left, unit }
    }

    /// Like [`from_products`](Self::from_products) for an algebra whose unit
    /// is not known in advance; the unit is solved from `Σ u_k L_k = I`.
    /// Returns the algebra and the residual of the two-sided unit identity.
    pub fn with_solved_unit(dim: usize, mul: impl Fn(usize, usize) -> CVec) -> (Self, f64) {
        let mut alg = Self::from_products(dim, CVec::zeros(dim), mul);
        let mut stacked = CMat::zeros(dim * dim, dim);
        for (k, l) in alg.left.iter().enumerate() {
            for (r, z) in l.iter().enumerate() {
                stacked[(r, k)] = *z;
            }
        }
        let id = CMat::identity(dim, dim);
        let rhs = CVec::from_iterator(dim * dim, id.iter().copied());
        alg.unit = linalg::lstsq(&stacked, &rhs);
        let left_res = linalg::max_abs(&(alg.left_matrix(&alg.unit) - &id));
        let mut right = CMat::zeros(dim, dim);
        for j in 0..dim {
            right.set_column(j, &(&alg.left[j] * &alg.unit));
        }
        let right_res = linalg::max_abs(&(right - &id));
        (alg, left_res.max(right_res))
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    pub fn unit(&self) -> &CVec {
        &self.unit
    }

    pub fn left_matrix(&self, a: &CVec) -> CMat {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for (k, z) in a.iter().enumerate() {
            if z.norm() != 0.0 {
                m += &self.left[k] * *z;
            }
        }
        m
    }

    pub fn mul(&self, a: &CVec, b: &CVec) -> CVec {
        self.left_matrix(a) * b
    }

    pub fn star(&self, a: &CVec) -> CVec {
        self.left_matrix(a).adjoint() * &self.unit
    }

    /// Basis of the center as orthonormal columns.
    pub fn center(&self) -> CMat {
        let d = self.dim();
        // z commutes with every b_k: L_k z − R_k z = 0, where R_k z = z b_k = L_z b_k.
        let mut stacked = CMat::zeros(d * d, d);
        for k in 0..d {
            let mut rk = CMat::zeros(d, d);
            for j in 0..d {
                rk.set_column(j, &self.left[j].column(k));
            }
            let diff = &self.left[k] - rk;
            stacked.view_mut((k * d, 0), (d, d)).copy_from(&diff);
        }
        linalg::null_space(&stacked, 1e-9)
    }

    pub fn decompose(&self, seed: u64) -> Result<Decomposition> {
        let mut last = String::new();
        for attempt in 0..MAX_RETRIES {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64 * 7919));
            match self.try_decompose(&mut rng) {
                Ok(mut d) => {
                    d.attempts = attempt + 1;
                    return Ok(d);
                }
                Err(msg) => last = msg,
            }
        }
        Err(Error::Decomposition {
            retries: MAX_RETRIES,
            detail: last,
        })
    }

    fn try_decompose(&self, rng: &mut ChaCha8Rng) -> std::result::Result<Decomposition, String> {
        let d = self.dim();
        let center = self.center();
        let r = center.ncols();
        if r == 0 {
            return Err("trivial center".into());
        }
        let z = &center * linalg::random_gaussian_vec(rng, r);
        let lz = self.left_matrix(&z);
        let (vals, vecs) = linalg::hermitian_eigen(&lz);
        let clusters = cluster(&vals);
        if clusters.len() != r {
            return Err(format!(
                "{} eigenvalue clusters for a center of dimension {r}",
                clusters.len()
            ));
        }
        let mut blocks = Vec::with_capacity(r);
        for range in clusters {
            let size = range.len();
            let n = (size as f64).sqrt().round() as usize;
            if n * n != size {
                return Err(format!("cluster of size {size} is not a square"));
            }
            let basis = vecs.columns(range.start, size).into_owned();
            blocks.push(self.block_units(&basis, n, rng)?);
        }
        let residual = self.residual(&blocks);
        if residual > 1e-7 {
            return Err(format!("matrix-unit residual {residual:.3e}"));
        }
        debug_assert_eq!(blocks.iter().map(|b| b.n * b.n).sum::<usize>(), d);
        Ok(Decomposition {
            blocks,
            residual,
            attempts: 0,
        })
    }

    /// Matrix units of the simple summand spanned by the orthonormal columns of `basis`.
    fn block_units(&self, basis: &CMat, n: usize, rng: &mut ChaCha8Rng) -> std::result::Result<SimpleBlock, String> {
        let proj = basis * basis.adjoint();
        let p = &proj * &self.unit;
        if n == 1 {
            return Ok(SimpleBlock { n, units: vec![p] });
        }
        // self-adjoint element of the block; its left action is ŝ ⊗ I_n
        let a = basis * linalg::random_gaussian_vec(rng, n * n);
        let s = &a + self.star(&a);
        let local = basis.adjoint() * self.left_matrix(&s) * basis;
        let (vals, vecs) = linalg::hermitian_eigen(&local);
        let groups = cluster(&vals);
        if groups.len() != n || groups.iter().any(|g| g.len() != n) {
            return Err(format!(
                "block of size {n}: spectral groups {:?}",
                groups.iter().map(|g| g.len()).collect::<Vec<_>>()
            ));
        }
        let p_local = basis.adjoint() * &p;
        let minimal: Vec<CVec> = groups
            .iter()
            .map(|g| {
                let w = vecs.columns(g.start, g.len());
                basis * (w * (w.adjoint() * &p_local))
            })
            .collect();
        let e1 = &minimal[0];
        let e1_norm2 = e1.dotc(e1).re;
        let mut col = Vec::with_capacity(n);
        col.push(e1.clone());
        for ek in minimal.iter().skip(1) {
            let b = basis * linalg::random_gaussian_vec(rng, n * n);
            let x = self.mul(&self.mul(ek, &b), e1);
            let lam = x.dotc(&x).re / e1_norm2;
            if !(lam > 1e-12) {
                return Err("degenerate off-diagonal matrix unit".into());
            }
            col.push(x * c(1.0 / lam.sqrt()));
        }
        let row: Vec<CVec> = col.iter().map(|x| self.star(x)).collect();
        let mut units = Vec::with_capacity(n * n);
        for k in 0..n {
            for l in 0..n {
                units.push(if l == 0 {
                    col[k].clone()
                } else {
                    self.mul(&col[k], &row[l])
                });
            }
        }
        Ok(SimpleBlock { n, units })
    }

    fn residual(&self, blocks: &[SimpleBlock]) -> f64 {
        let mut res: f64 = 0.0;
        let mut total = CVec::zeros(self.dim());
        for b in blocks {
            let n = b.n;
            for k in 0..n {
                total += b.unit(k, k);
                for l in 0..n {
                    res = res.max(linalg::max_abs_vec(&(self.star(b.unit(k, l)) - b.unit(l, k))));
                    for m in 0..n {
                        for q in 0..n {
                            let prod = self.mul(b.unit(k, l), b.unit(m, q));
                            let diff = if l == m { prod - b.unit(k, q) } else { prod };
                            res = res.max(linalg::max_abs_vec(&diff));
                        }
                    }
                }
            }
        }
        res.max(linalg::max_abs_vec(&(total - &self.unit)))
    }
}

/// Split an ascending list into runs separated by gaps larger than [`GAP`].
fn cluster(vals: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=vals.len() {
        if i == vals.len() || vals[i] - vals[i - 1] > GAP {
            out.push(start..i);
            start = i;
        }
    }
    out
}
