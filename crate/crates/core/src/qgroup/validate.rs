//! Structured validation of a candidate `(A, Δ)`.

use std::sync::Arc;

use serde::Serialize;

use crate::fdalgebra::{AlgebraElement, BlockStructure, TensorLayout};
use crate::linalg::{self, c, CMat, CVec};

use super::dual;
use super::Corepresentation;

const IDENTITY_TOL: f64 = 1e-9;
const IRREP_TOL: f64 = 1e-8;
const WEIGHT_TOL: f64 = 1e-8;
const CANCELLATION_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    /// Dimension of the space of bi-invariant functionals, once computed.
    pub haar_dimension: Option<usize>,
    #[serde(skip)]
    pub(crate) derived: Option<Derived>,
}

#[derive(Clone, Debug)]
pub(crate) struct Derived {
    pub structure: Arc<BlockStructure>,
    pub counit: CVec,
    pub antipode: CMat,
    pub irreps: Vec<Corepresentation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line per failed check, `"<name> residual <r>: <detail>"`.
    pub fn failure_summary(&self) -> String {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} residual {:.3e}: {}", c.name, c.residual, c.detail))
            .collect::<Vec<_>>()
            .join("; ")
    }

    fn push(&mut self, name: &str, passed: bool, residual: f64, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            residual,
            detail: detail.into(),
        });
    }
}

/// Check every quantum-group axiom for `Δ` on `⊕ M_{n_i}` and, when they
/// hold, derive the Haar state, irreps and antipode. Never panics on
/// mathematically invalid input.
pub fn validate_quantum_group(block_dims: &[usize], weights: Option<&[f64]>, delta: &CMat) -> ValidationReport {
    let mut report = ValidationReport {
        checks: Vec::new(),
        haar_dimension: None,
        derived: None,
    };
    let ones = vec![1.0; block_dims.len()];
    let provisional = match BlockStructure::normalized(block_dims.to_vec(), &ones) {
        Ok(s) => Arc::new(s),
        Err(e) => {
            report.push("shape", false, f64::INFINITY, e.to_string());
            return report;
        }
    };
    let d = provisional.dim();
    if delta.nrows() != d * d || delta.ncols() != d {
        report.push(
            "shape",
            false,
            f64::INFINITY,
            format!("delta is {}x{}, expected {}x{d}", delta.nrows(), delta.ncols(), d * d),
        );
        return report;
    }
    if let Some(w) = weights {
        if w.len() != block_dims.len() {
            report.push("shape", false, f64::INFINITY, "weights and blocks differ in length");
            return report;
        }
    }
    report.push("shape", true, 0.0, format!("dim {d}"));

    let layout = provisional.tensor(&provisional);
    let slices = super::slices(delta, d);

    let unit = provisional.unit_coords();
    let unit_res = linalg::max_abs_vec(&(delta * &unit - unit.kronecker(&unit)));
    report.push("unital", unit_res <= IDENTITY_TOL, unit_res, "Δ(1) = 1⊗1");

    let hom_res = homomorphism_residual(&provisional, delta, &layout);
    report.push(
        "*-homomorphism",
        hom_res <= IDENTITY_TOL,
        hom_res,
        "Δ(xy) = Δ(x)Δ(y), Δ(x*) = Δ(x)*",
    );

    let coassoc = coassociativity_residual(delta, &slices);
    report.push("coassociativity", coassoc <= IDENTITY_TOL, coassoc, "(Δ⊗ι)Δ = (ι⊗Δ)Δ");

    let (left, right) = cancellation_margins(&provisional, delta);
    report.push(
        "cancellation (right slice)",
        left > CANCELLATION_TOL,
        left,
        "smallest singular value of a⊗b ↦ Δ(a)(1⊗b)",
    );
    report.push(
        "cancellation (left slice)",
        right > CANCELLATION_TOL,
        right,
        "smallest singular value of a⊗b ↦ Δ(a)(b⊗1)",
    );

    let axioms_hold = report.passed();

    let kernel = invariant_functionals(&slices, &unit);
    report.haar_dimension = Some(kernel.ncols());
    if kernel.ncols() != 1 {
        report.push(
            "haar uniqueness",
            false,
            kernel.ncols() as f64,
            format!("invariant functionals form a space of dimension {}", kernel.ncols()),
        );
        return report;
    }
    let f = kernel.column(0).into_owned();
    let total = f.dot(&unit);
    if total.norm() < 1e-12 {
        report.push("haar uniqueness", false, 0.0, "invariant functional vanishes at 1");
        return report;
    }
    let h = f / total;
    report.push("haar uniqueness", true, 0.0, "one-dimensional invariant space");

    let (trace_res, block_values) = traciality(&provisional, &h);
    report.push(
        "haar tracial",
        trace_res <= IDENTITY_TOL,
        trace_res,
        "h restricted to each block is a multiple of Tr",
    );
    if trace_res > IDENTITY_TOL {
        return report;
    }
    let min_weight = block_values.iter().copied().fold(f64::INFINITY, f64::min);
    report.push(
        "haar faithful",
        min_weight > IDENTITY_TOL,
        min_weight,
        "smallest minimal-projection weight",
    );
    if min_weight <= IDENTITY_TOL {
        return report;
    }
    if let Some(w) = weights {
        let diff = w
            .iter()
            .zip(&block_values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        report.push(
            "supplied weights",
            diff <= WEIGHT_TOL,
            diff,
            format!("Haar weights {block_values:?}"),
        );
    }
    let structure = match BlockStructure::normalized(block_dims.to_vec(), &block_values) {
        Ok(s) => Arc::new(s),
        Err(e) => {
            report.push("haar weights", false, f64::INFINITY, e.to_string());
            return report;
        }
    };
    if !axioms_hold {
        return report;
    }
    let layout = structure.tensor(&structure);

    let pw = match dual::decompose(&structure, delta, &slices, &layout) {
        Ok(pw) => pw,
        Err(e) => {
            report.push("peter-weyl", false, f64::INFINITY, e.to_string());
            return report;
        }
    };
    let count: usize = pw.irreps.iter().map(|u| u.dim() * u.dim()).sum();
    report.push(
        "peter-weyl",
        count == d && pw.decomposition_residual <= 1e-7,
        pw.decomposition_residual,
        format!(
            "irrep dims {:?}, Σ n² = {count}",
            pw.irreps.iter().map(|u| u.dim()).collect::<Vec<_>>()
        ),
    );
    report.push(
        "counit",
        pw.counit_residual <= IRREP_TOL,
        pw.counit_residual,
        "unit of the dual algebra",
    );
    report.push(
        "corepresentation identity",
        pw.coaction_residual <= IRREP_TOL,
        pw.coaction_residual,
        "Δ(u_jk) = Σ_p u_jp ⊗ u_pk",
    );
    report.push(
        "unitarity",
        pw.unitarity_residual <= IRREP_TOL,
        pw.unitarity_residual,
        "u*u = uu* = 1",
    );
    report.push(
        "orthogonality",
        pw.orthogonality_residual <= IRREP_TOL,
        pw.orthogonality_residual,
        "h(u_ij (v_lm)*) = δ δ_il δ_jm / n",
    );

    let s = &pw.antipode;
    let involutive = linalg::max_abs(&(s * s - CMat::identity(d, d)));
    report.push("antipode S²=id", involutive <= IRREP_TOL, involutive, "S∘S = ι");
    let anti = antihomomorphism_residual(&structure, s);
    report.push(
        "antipode antihomomorphism",
        anti <= IRREP_TOL,
        anti,
        "S(xy) = S(y)S(x), S(S(x)*)* = x",
    );
    let hv = trace_values(&structure);
    let invariant = linalg::max_abs_vec(&(s.transpose() * &hv - &hv));
    report.push(
        "h∘S = h",
        invariant <= IRREP_TOL,
        invariant,
        "antipode preserves the Haar state",
    );

    report.derived = Some(Derived {
        structure,
        counit: pw.counit,
        antipode: pw.antipode,
        irreps: pw.irreps,
    });
    report
}

/// Basis values of the trace of a structure, `τ(e_I) = w_i δ_ab`.
fn trace_values(s: &BlockStructure) -> CVec {
    CVec::from_fn(s.dim(), |i, _| {
        let (b, r, col) = s.label(i);
        if r == col {
            c(s.block_weights()[b])
        } else {
            c(0.0)
        }
    })
}

fn homomorphism_residual(s: &Arc<BlockStructure>, delta: &CMat, layout: &TensorLayout) -> f64 {
    let d = s.dim();
    let images: Vec<AlgebraElement> = (0..d)
        .map(|i| layout.to_element(&delta.column(i).into_owned()))
        .collect();
    let mut res: f64 = 0.0;
    for i in 0..d {
        let (bi, ri, ci) = s.label(i);
        let star = s.index(bi, ci, ri);
        res = res.max(images[star].max_abs_diff(&images[i].adjoint()));
        for j in 0..d {
            let (bj, rj, cj) = s.label(j);
            let prod = &images[i] * &images[j];
            let expected = if bi == bj && ci == rj {
                images[s.index(bi, ri, cj)].clone()
            } else {
                AlgebraElement::zeros(layout.structure.clone())
            };
            res = res.max(prod.max_abs_diff(&expected));
        }
    }
    res
}

fn coassociativity_residual(delta: &CMat, slices: &[CMat]) -> f64 {
    let d = slices.len();
    let delta_t = delta.transpose();
    let mut res: f64 = 0.0;
    for v in slices {
        // (Δ⊗ι)Δ(e_I) as rows (a,b), column c; (ι⊗Δ)Δ(e_I) as row a, columns (b,c)
        let left = delta * v;
        let right = v * &delta_t;
        for a in 0..d {
            for b in 0..d {
                for cc in 0..d {
                    res = res.max((left[(a * d + b, cc)] - right[(a, b * d + cc)]).norm());
                }
            }
        }
    }
    res
}

/// Smallest singular values of the two slice maps. Both maps commute with
/// right multiplication by matrix units in the second (resp. first) leg, so
/// they split into one square piece per block.
fn cancellation_margins(s: &BlockStructure, delta: &CMat) -> (f64, f64) {
    let d = s.dim();
    let mut right_min = f64::INFINITY;
    let mut left_min = f64::INFINITY;
    for (j, &n) in s.block_dims().iter().enumerate() {
        let size = d * n;
        let mut mr = CMat::zeros(size, size);
        let mut ml = CMat::zeros(size, size);
        for k in 0..d {
            for r in 0..n {
                let col = k * n + r;
                for t in 0..n {
                    let idx = s.index(j, t, r);
                    for other in 0..d {
                        mr[(other * n + t, col)] = delta[(other * d + idx, k)];
                        ml[(t * d + other, col)] = delta[(idx * d + other, k)];
                    }
                }
            }
        }
        right_min = right_min.min(linalg::singular_values(&mr).last().copied().unwrap_or(0.0));
        left_min = left_min.min(linalg::singular_values(&ml).last().copied().unwrap_or(0.0));
    }
    (right_min, left_min)
}

/// Null space of the bi-invariance system, in basis-value coordinates.
fn invariant_functionals(slices: &[CMat], unit: &CVec) -> CMat {
    let d = slices.len();
    let mut sys = CMat::zeros(2 * d * d, d);
    for (i, sl) in slices.iter().enumerate() {
        for l in 0..d {
            let row = i * d + l;
            // (φ⊗ι)Δ(e_I) − φ(e_I)1, coefficient of e_L
            for k in 0..d {
                sys[(row, k)] += sl[(k, l)];
            }
            sys[(row, i)] -= unit[l];
            // (ι⊗φ)Δ(e_I) − φ(e_I)1, coefficient of e_K with K = l
            let row = d * d + i * d + l;
            for m in 0..d {
                sys[(row, m)] += sl[(l, m)];
            }
            sys[(row, i)] -= unit[l];
        }
    }
    linalg::null_space(&sys, 1e-9)
}

/// Residual of `h|_{block i} = c_i Tr` and the values `c_i`.
fn traciality(s: &BlockStructure, h: &CVec) -> (f64, Vec<f64>) {
    let mut res: f64 = 0.0;
    let mut values = Vec::with_capacity(s.num_blocks());
    for (b, &n) in s.block_dims().iter().enumerate() {
        let mean = (0..n).map(|r| h[s.index(b, r, r)]).sum::<crate::linalg::C64>() / c(n as f64);
        res = res.max(mean.im.abs());
        for r in 0..n {
            for col in 0..n {
                let target = if r == col { mean } else { c(0.0) };
                res = res.max((h[s.index(b, r, col)] - target).norm());
            }
        }
        values.push(mean.re);
    }
    (res, values)
}

fn antihomomorphism_residual(s: &Arc<BlockStructure>, antipode: &CMat) -> f64 {
    let d = s.dim();
    let images: Vec<AlgebraElement> = (0..d)
        .map(|i| AlgebraElement::from_coords(s.clone(), &antipode.column(i).into_owned()))
        .collect();
    let apply = |x: &AlgebraElement| AlgebraElement::from_coords(s.clone(), &(antipode * x.coords()));
    let mut res: f64 = 0.0;
    for i in 0..d {
        let (bi, ri, ci) = s.label(i);
        let e_i = AlgebraElement::basis_element(s.clone(), i);
        let twisted = apply(&apply(&e_i).adjoint()).adjoint();
        res = res.max(twisted.max_abs_diff(&e_i));
        for j in 0..d {
            let (bj, rj, cj) = s.label(j);
            let lhs = if bi == bj && ci == rj {
                images[s.index(bi, ri, cj)].clone()
            } else {
                AlgebraElement::zeros(s.clone())
            };
            res = res.max(lhs.max_abs_diff(&(&images[j] * &images[i])));
        }
    }
    res
}
