//! Dense complex linear-algebra helpers shared by the analysis modules.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
///
/// The input is symmetrised as `(m + m*)/2` first so that round-off in the
/// caller does not leak into the decomposition.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let h = (m + m.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Eigenvalues of a general complex matrix, read off the triangular Schur factor.
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let scale = max_abs(m).max(1.0);
    let trace = m.trace();
    let trusted = |ev: Vec<C64>| -> Option<Vec<C64>> {
        let sum: C64 = ev.iter().sum();
        ((sum - trace).norm() <= 1e-9 * scale * m.nrows() as f64).then_some(ev)
    };
    if let Some(s) = Schur::try_new(m.clone(), f64::EPSILON, 5000) {
        if let Some(ev) = trusted(s.unpack().1.diagonal().iter().copied().collect()) {
            return ev;
        }
    }
    // the shifted QR iteration can stall on exactly repeated eigenvalues;
    // a fixed unitary similarity breaks the symmetry without moving the spectrum
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0x5c4u64);
    for _ in 0..8 {
        let q = random_gaussian(&mut rng, m.nrows(), m.nrows()).qr().q();
        let conj = q.adjoint() * m * &q;
        if let Some(s) = Schur::try_new(conj, f64::EPSILON * scale, 20000) {
            if let Some(ev) = trusted(s.unpack().1.diagonal().iter().copied().collect()) {
                return ev;
            }
        }
    }
    panic!("Schur iteration did not converge on a {0}×{0} matrix", m.nrows())
}

/// Thin singular value decomposition `m = u·diag(s)·v_t`, values descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMat,
    pub singular_values: Vec<f64>,
    pub v_t: CMat,
}

impl Svd {
    pub fn reconstruct(&self) -> CMat {
        let k = self.singular_values.len();
        let d = CMat::from_diagonal(&CVec::from_iterator(k, self.singular_values.iter().map(|&v| c(v))));
        &self.u * d * &self.v_t
    }
}

/// Thin SVD by one-sided Jacobi rotations. Accurate for small singular
/// values, which matters for the rank decisions made from it.
pub fn svd(m: &CMat) -> Svd {
    let (r, k) = (m.nrows(), m.ncols());
    if r == 0 || k == 0 {
        return Svd {
            u: CMat::zeros(r, 0),
            singular_values: Vec::new(),
            v_t: CMat::zeros(0, k),
        };
    }
    if r < k {
        let t = svd(&m.adjoint());
        return Svd {
            u: t.v_t.adjoint(),
            singular_values: t.singular_values,
            v_t: t.u.adjoint(),
        };
    }
    let mut a = m.clone();
    let mut v = CMat::identity(k, k);
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate(&mut a, p, q, cs, sn, phase);
                rotate(&mut v, p, q, cs, sn, phase);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..k).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let mut u = CMat::zeros(r, k);
    let mut v_t = CMat::zeros(k, k);
    for (j, &i) in order.iter().enumerate() {
        if norms[i] > 0.0 {
            u.set_column(j, &(a.column(i) / c(norms[i])));
        }
        v_t.set_row(j, &v.column(i).adjoint());
    }
    Svd {
        u,
        singular_values: order.iter().map(|&i| norms[i]).collect(),
        v_t,
    }
}

/// `(x_p, x_q) ← (c x_p − s ē x_q, s x_p + c ē x_q)` on columns, `ē` a phase.
fn rotate(x: &mut CMat, p: usize, q: usize, cs: f64, sn: f64, phase: C64) {
    for i in 0..x.nrows() {
        let xp = x[(i, p)];
        let xq = x[(i, q)] * phase;
        x[(i, p)] = xp * cs - xq * sn;
        x[(i, q)] = xp * sn + xq * cs;
    }
}

/// Singular values, descending.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    svd(m).singular_values
}

pub fn operator_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Orthonormal basis (as columns) of the null space of `m`.
///
/// A singular value counts as zero when it is at most `tol * max(1, σ_max)`.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    let cols = m.ncols();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    let rows = m.nrows().max(cols);
    let mut padded = CMat::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let f = svd(&padded);
    let smax = f.singular_values[0];
    let thresh = tol * smax.max(1.0);
    let idx: Vec<usize> = (0..cols).filter(|&k| f.singular_values[k] <= thresh).collect();
    let mut out = CMat::zeros(cols, idx.len());
    for (j, &k) in idx.iter().enumerate() {
        out.set_column(j, &f.v_t.row(k).adjoint());
    }
    out
}

/// Numerical rank with the same threshold convention as [`null_space`].
pub fn rank(m: &CMat, tol: f64) -> usize {
    let s = singular_values(m);
    let smax = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&v| v > tol * smax.max(1.0)).count()
}

/// Orthonormal basis of the column span of `m`.
pub fn column_span(m: &CMat, tol: f64) -> CMat {
    if m.ncols() == 0 || m.nrows() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    let f = svd(m);
    let smax = f.singular_values[0];
    let idx: Vec<usize> = (0..f.singular_values.len())
        .filter(|&k| f.singular_values[k] > tol * smax.max(1.0))
        .collect();
    let mut out = CMat::zeros(m.nrows(), idx.len());
    for (j, &k) in idx.iter().enumerate() {
        out.set_column(j, &f.u.column(k));
    }
    out
}

/// Hermitian power `h^t` of a positive semidefinite matrix (eigenvalues clamped at 0).
pub fn psd_power(h: &CMat, t: f64) -> CMat {
    let (vals, vecs) = hermitian_eigen(h);
    let d = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&v| {
            let v = v.max(0.0);
            if v == 0.0 {
                ZERO
            } else {
                c(v.powf(t))
            }
        }),
    ));
    &vecs * d * vecs.adjoint()
}

pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

pub fn random_gaussian_vec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Max absolute entry; the residual measure used by all identity checks.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_vec(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Solve `m x = b` for invertible `m`.
pub fn solve(m: &CMat, b: &CMat) -> Option<CMat> {
    m.clone().lu().solve(b)
}

/// Least-squares solution of `m x = b` through the SVD.
pub fn lstsq(m: &CMat, b: &CVec) -> CVec {
    let f = svd(m);
    let smax = f.singular_values.first().copied().unwrap_or(0.0);
    let ub = f.u.adjoint() * b;
    let scaled = CVec::from_iterator(
        ub.len(),
        ub.iter()
            .zip(&f.singular_values)
            .map(|(z, &s)| if s > 1e-13 * smax { z / s } else { ZERO }),
    );
    f.v_t.adjoint() * scaled
}

pub fn inverse(m: &CMat) -> Option<CMat> {
    m.clone().try_inverse()
}
