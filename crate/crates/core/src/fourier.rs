//! Fourier transform, inversion, convolution and Fourier multipliers on a
//! finite quantum group, with the convention `φ̂(α) = (φ ⊗ ι)((u^α)*)`.

use crate::error::{Error, Result};
use crate::fdalgebra::{AlgebraElement, Functional};
use crate::linalg::{self, c, CMat, C64};
use crate::qgroup::{Corepresentation, QuantumGroup};

/// One `n_α × n_α` matrix per irrep, in the order of [`QuantumGroup::irreps`].
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoefficients {
    pub alpha_dims: Vec<usize>,
    pub matrices: Vec<CMat>,
}

impl FourierCoefficients {
    pub fn new(matrices: Vec<CMat>) -> Result<Self> {
        for (k, m) in matrices.iter().enumerate() {
            if m.nrows() != m.ncols() {
                return Err(Error::Shape(format!("coefficient {k} is not square")));
            }
        }
        Ok(FourierCoefficients {
            alpha_dims: matrices.iter().map(|m| m.nrows()).collect(),
            matrices,
        })
    }

    /// Identity in every irrep.
    pub fn identity(g: &QuantumGroup) -> Self {
        let matrices = g.irreps().iter().map(|u| CMat::identity(u.dim(), u.dim())).collect();
        FourierCoefficients::new(matrices).expect("square")
    }

    /// `1` on the trivial irrep and `0` elsewhere.
    pub fn trivial_projection(g: &QuantumGroup) -> Self {
        let matrices = g
            .irreps()
            .iter()
            .enumerate()
            .map(|(k, u)| {
                if k == 0 {
                    CMat::identity(1, 1)
                } else {
                    CMat::zeros(u.dim(), u.dim())
                }
            })
            .collect();
        FourierCoefficients::new(matrices).expect("square")
    }

    pub fn adjoint(&self) -> Self {
        FourierCoefficients {
            alpha_dims: self.alpha_dims.clone(),
            matrices: self.matrices.iter().map(|m| m.adjoint()).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        FourierCoefficients {
            alpha_dims: self.alpha_dims.clone(),
            matrices: self.matrices.iter().map(|m| m.pow(n)).collect(),
        }
    }

    /// Blockwise product `self(α)·other(α)`.
    pub fn mul(&self, other: &FourierCoefficients) -> Result<Self> {
        self.check_shape(&other.alpha_dims)?;
        Ok(FourierCoefficients {
            alpha_dims: self.alpha_dims.clone(),
            matrices: self.matrices.iter().zip(&other.matrices).map(|(a, b)| a * b).collect(),
        })
    }

    /// Operator norms `‖a_α‖`.
    pub fn op_norms(&self) -> Vec<f64> {
        self.matrices.iter().map(linalg::operator_norm).collect()
    }

    /// `(Σ_α d_α Tr(Q_α a_α* a_α))^{1/2}` against the irreps of `g`.
    pub fn dual_l2_norm(&self, g: &QuantumGroup) -> Result<f64> {
        self.check_shape_against(g)?;
        let mut total = 0.0;
        for (u, a) in g.irreps().iter().zip(&self.matrices) {
            total += u.quantum_dim() * (u.q_matrix() * a.adjoint() * a).trace().re;
        }
        Ok(total.sqrt())
    }

    pub fn max_abs_diff(&self, other: &FourierCoefficients) -> f64 {
        self.matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| linalg::max_abs(&(a - b)))
            .fold(0.0, f64::max)
    }

    fn check_shape(&self, dims: &[usize]) -> Result<()> {
        if self.alpha_dims != dims {
            return Err(Error::Shape(format!(
                "coefficient dimensions {:?} do not match {:?}",
                self.alpha_dims, dims
            )));
        }
        Ok(())
    }

    fn check_shape_against(&self, g: &QuantumGroup) -> Result<()> {
        let dims: Vec<usize> = g.irreps().iter().map(|u| u.dim()).collect();
        self.check_shape(&dims)
    }
}

/// What is being transformed or convolved. Elements enter through the
/// embedding `x ↦ h(· x)`.
#[derive(Clone, Copy, Debug)]
pub enum Operand<'a> {
    Functional(&'a Functional),
    Element(&'a AlgebraElement),
}

#[derive(Clone, Debug)]
pub enum Convolved {
    Functional(Functional),
    Element(AlgebraElement),
}

impl Convolved {
    pub fn into_functional(self) -> Option<Functional> {
        match self {
            Convolved::Functional(f) => Some(f),
            Convolved::Element(_) => None,
        }
    }

    pub fn into_element(self) -> Option<AlgebraElement> {
        match self {
            Convolved::Element(x) => Some(x),
            Convolved::Functional(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn assert_kac(u: &Corepresentation) -> Result<()> {
    let n = u.dim();
    if linalg::max_abs(&(u.q_matrix() - CMat::identity(n, n))) > 1e-12 {
        return Err(Error::Consistency(
            "Q_α differs from the identity on a finite quantum group".into(),
        ));
    }
    Ok(())
}

/// `φ̂(α)_ij = φ((u^α_ji)*)`; for an element, `x̂(α)_ij = h((u^α_ji)* x)`.
pub fn fourier_transform(g: &QuantumGroup, input: Operand<'_>) -> Result<FourierCoefficients> {
    let eval = |y: &AlgebraElement| -> Result<C64> {
        match input {
            Operand::Functional(phi) => {
                if !phi.structure().same_shape(g.structure()) {
                    return Err(Error::Shape("functional lives on a different algebra".into()));
                }
                Ok(phi.eval(y))
            }
            Operand::Element(x) => {
                if !x.structure().same_shape(g.structure()) {
                    return Err(Error::Shape("element lives on a different algebra".into()));
                }
                Ok(g.haar().eval(&(y * x)))
            }
        }
    };
    let mut matrices = Vec::with_capacity(g.irreps().len());
    for u in g.irreps() {
        assert_kac(u)?;
        let n = u.dim();
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = eval(&u.entry(j, i).adjoint())?;
            }
        }
        matrices.push(m);
    }
    FourierCoefficients::new(matrices)
}

/// `x = Σ_α d_α Σ_ij (a_α Q_α)_ij u^α_ji`.
pub fn inverse_fourier(g: &QuantumGroup, a: &FourierCoefficients) -> Result<AlgebraElement> {
    a.check_shape_against(g)?;
    let mut x = AlgebraElement::zeros(g.structure().clone());
    for (u, m) in g.irreps().iter().zip(&a.matrices) {
        assert_kac(u)?;
        let aq = m * u.q_matrix();
        let d = c(u.quantum_dim());
        for i in 0..u.dim() {
            for j in 0..u.dim() {
                let coef = d * aq[(i, j)];
                if coef.norm() > 0.0 {
                    x = &x + &u.entry(j, i).scale(coef);
                }
            }
        }
    }
    Ok(x)
}

/// `φ ⋆ φ' = (φ ⊗ φ')Δ`, `φ ⋆ x = (ι ⊗ φ)Δ(x)`, `x ⋆ φ = (φ ⊗ ι)Δ(x)`.
pub fn convolve(g: &QuantumGroup, left: Operand<'_>, right: Operand<'_>) -> Result<Convolved> {
    match (left, right) {
        (Operand::Functional(a), Operand::Functional(b)) => Ok(Convolved::Functional(convolve_functionals(g, a, b)?)),
        (Operand::Functional(phi), Operand::Element(x)) => {
            check(
                g,
                phi.structure().same_shape(g.structure()) && x.structure().same_shape(g.structure()),
            )?;
            let m = g.left_convolution_matrix(&phi.basis_values());
            Ok(Convolved::Element(AlgebraElement::from_coords(
                g.structure().clone(),
                &(m * x.coords()),
            )))
        }
        (Operand::Element(x), Operand::Functional(phi)) => {
            check(
                g,
                phi.structure().same_shape(g.structure()) && x.structure().same_shape(g.structure()),
            )?;
            let m = g.right_convolution_matrix(&phi.basis_values());
            Ok(Convolved::Element(AlgebraElement::from_coords(
                g.structure().clone(),
                &(m * x.coords()),
            )))
        }
        (Operand::Element(_), Operand::Element(_)) => Err(Error::Input(
            "element ⋆ element is not a supported convolution mode; embed one side as h(· x)".into(),
        )),
    }
}

fn check(g: &QuantumGroup, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Shape(format!("operand does not live on {}", g.name())))
    }
}

pub fn convolve_functionals(g: &QuantumGroup, a: &Functional, b: &Functional) -> Result<Functional> {
    check(
        g,
        a.structure().same_shape(g.structure()) && b.structure().same_shape(g.structure()),
    )?;
    let values = g.convolve_values(&a.basis_values(), &b.basis_values());
    Ok(Functional::from_basis_values(g.structure().clone(), &values))
}

/// `φ^{⋆n}` for `n ≥ 1`.
pub fn convolution_power(g: &QuantumGroup, phi: &Functional, n: u32) -> Result<Functional> {
    if n == 0 {
        return Err(Error::Domain("convolution powers start at n = 1".into()));
    }
    let base = phi.basis_values();
    let mut acc = base.clone();
    for _ in 1..n {
        acc = g.convolve_values(&acc, &base);
    }
    Ok(Functional::from_basis_values(g.structure().clone(), &acc))
}

/// Fourier multiplier: `Left` gives `(m_a x)^(α) = x̂(α) a_α`, `Right` gives `a_α x̂(α)`.
pub fn multiplier_apply(
    g: &QuantumGroup,
    a: &FourierCoefficients,
    x: &AlgebraElement,
    side: Side,
) -> Result<AlgebraElement> {
    let xh = fourier_transform(g, Operand::Element(x))?;
    let coeffs = match side {
        Side::Left => xh.mul(a)?,
        Side::Right => a.mul(&xh)?,
    };
    inverse_fourier(g, &coeffs)
}

/// Matrix of the multiplier `m_a` in the matrix-unit basis.
pub fn multiplier_matrix(g: &QuantumGroup, a: &FourierCoefficients, side: Side) -> Result<CMat> {
    let d = g.dim();
    let mut m = CMat::zeros(d, d);
    for i in 0..d {
        let e = AlgebraElement::basis_element(g.structure().clone(), i);
        m.set_column(i, &multiplier_apply(g, a, &e, side)?.coords());
    }
    Ok(m)
}
