//! The Hilbert module `M_{m,n}(ℂ)` over the algebra `M_n(ℂ)`.
//!
//! The inner product is `⟨x, y⟩ = x*y`: conjugate-linear in the first slot,
//! linear in the second, with the algebra acting on the right (`x·a`). Only
//! `Re φ(⟨x, y⟩)` enters the derivative formulas and states satisfy
//! `φ(a*) = conj φ(a)`, so the first-slot-linear convention yields identical
//! real parts. The square case `m = n` is the algebra as a module over itself.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{operator_norm, ComplexMatrix};

/// An element of `M_{m,n}(ℂ)` viewed as a right `M_n(ℂ)`-module element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModuleElement(ComplexMatrix);

/// An element of the coefficient algebra `M_n(ℂ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct AlgebraElement(ComplexMatrix);

impl ModuleElement {
    pub fn new(matrix: ComplexMatrix) -> Self {
        Self(matrix)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// `n`, the size of the coefficient algebra.
    pub fn algebra_dim(&self) -> usize {
        self.0.cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn zero(rows: usize, algebra_dim: usize) -> Self {
        Self(ComplexMatrix::zeros(rows, algebra_dim))
    }

    pub fn scale(&self, s: num_complex::Complex64) -> Self {
        Self(self.0.scale(s))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_shape(self, other)?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_shape(self, other)?;
        Ok(Self(&self.0 - &other.0))
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: num_complex::Complex64, other: &Self) -> Result<Self> {
        same_shape(self, other)?;
        Ok(Self(&self.0 + &other.0.scale(s)))
    }

    pub fn neg(&self) -> Self {
        Self(-&self.0)
    }

    pub fn norm(&self) -> f64 {
        module_norm(self)
    }

    /// Algebra elements are module elements of the algebra over itself.
    pub fn from_algebra(a: &AlgebraElement) -> Self {
        Self(a.0.clone())
    }
}

impl From<ComplexMatrix> for ModuleElement {
    fn from(m: ComplexMatrix) -> Self {
        Self(m)
    }
}

impl AlgebraElement {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::ShapeMismatch {
                left: matrix.shape(),
                right: (matrix.cols(), matrix.cols()),
            });
        }
        Ok(Self(matrix))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Algebra product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::ShapeMismatch {
                left: self.0.shape(),
                right: other.0.shape(),
            });
        }
        Ok(Self(&self.0 * &other.0))
    }

    pub fn norm(&self) -> f64 {
        operator_norm(&self.0)
    }
}

impl TryFrom<ComplexMatrix> for AlgebraElement {
    type Error = Error;
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<AlgebraElement> for ComplexMatrix {
    fn from(a: AlgebraElement) -> Self {
        a.0
    }
}

fn same_shape(x: &ModuleElement, y: &ModuleElement) -> Result<()> {
    if x.shape() != y.shape() {
        return Err(Error::ShapeMismatch {
            left: x.shape(),
            right: y.shape(),
        });
    }
    Ok(())
}

/// `⟨x, y⟩ = x*y`.
pub fn inner_product(x: &ModuleElement, y: &ModuleElement) -> Result<AlgebraElement> {
    same_shape(x, y)?;
    Ok(AlgebraElement(x.0.ad_mul(&y.0)))
}

/// `‖x‖ = ‖⟨x, x⟩‖^{1/2}`, which equals the largest singular value of `x`.
pub fn module_norm(x: &ModuleElement) -> f64 {
    operator_norm(&x.0)
}

/// Right action `x·a`.
pub fn module_action(x: &ModuleElement, a: &AlgebraElement) -> Result<ModuleElement> {
    if x.algebra_dim() != a.dim() {
        return Err(Error::ShapeMismatch {
            left: x.shape(),
            right: a.0.shape(),
        });
    }
    Ok(ModuleElement(&x.0 * &a.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::hermitian_spectrum;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn diag(d: &[f64]) -> ModuleElement {
        ModuleElement::new(ComplexMatrix::from_real_diagonal(d))
    }

    fn sample_3x2() -> ModuleElement {
        let c = Complex64::new;
        ModuleElement::new(
            ComplexMatrix::from_row_major(
                3,
                2,
                vec![c(0.3, -1.2), c(1.1, 0.4), c(-0.7, 0.2), c(0.05, 2.0), c(1.5, -0.3), c(-0.9, -0.8)],
            )
            .unwrap(),
        )
    }

    #[test]
    fn inner_product_examples() {
        let t = diag(&[1.0, 1.0]);
        let s = diag(&[-1.0, 1.0]);
        assert_eq!(inner_product(&t, &s).unwrap().matrix(), s.matrix());

        let z = ModuleElement::zero(3, 2);
        assert!(inner_product(&z, &z).unwrap().matrix().is_zero(0.0));

        let x = sample_3x2();
        let g = inner_product(&x, &x).unwrap();
        let spec = hermitian_spectrum(g.matrix()).unwrap();
        assert!(spec.min() >= -1e-10);
    }

    #[test]
    fn inner_product_shape_mismatch() {
        let x = sample_3x2();
        let y = ModuleElement::zero(2, 2);
        assert!(matches!(inner_product(&x, &y), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn norm_examples() {
        assert_relative_eq!(module_norm(&diag(&[1.0, 1.0])), 1.0, epsilon = 1e-15);
        assert_relative_eq!(module_norm(&diag(&[-1.0, 0.0])), 1.0, epsilon = 1e-15);
        let x = sample_3x2();
        let via_inner = operator_norm(inner_product(&x, &x).unwrap().matrix()).sqrt();
        assert_relative_eq!(module_norm(&x), via_inner, max_relative = 1e-10);
    }

    #[test]
    fn action_examples() {
        let x = sample_3x2();
        assert_eq!(module_action(&x, &AlgebraElement::identity(2)).unwrap(), x);

        // ‖T + S·C‖ = 0 for the 2×2 example.
        let t = diag(&[1.0, 1.0]);
        let s = diag(&[-1.0, 1.0]);
        let c = AlgebraElement::new(ComplexMatrix::from_real_diagonal(&[1.0, -1.0])).unwrap();
        let sum = t.add(&module_action(&s, &c).unwrap()).unwrap();
        assert_eq!(module_norm(&sum), 0.0);

        // ‖x⟨x,x⟩‖ = ‖x‖³
        let cube = module_action(&x, &inner_product(&x, &x).unwrap()).unwrap();
        assert_relative_eq!(module_norm(&cube), module_norm(&x).powi(3), max_relative = 1e-9);

        assert!(module_action(&x, &AlgebraElement::identity(3)).is_err());
    }

    #[test]
    fn algebra_element_must_be_square() {
        assert!(AlgebraElement::new(ComplexMatrix::zeros(2, 3)).is_err());
        let json = r#"{"rows":1,"cols":2,"entries":[[1,0],[0,0]]}"#;
        assert!(serde_json::from_str::<AlgebraElement>(json).is_err());
    }
}
