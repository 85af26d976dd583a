//! One-sided norm derivatives
//! `ρ±(x, y) = lim_{t→0±} (‖x+ty‖² - ‖x‖²)/(2t)`.
//!
//! In the module the supremum over attaining states is a maximum, and on
//! `M_n(ℂ)` the attaining states are the densities on the top face `V` of
//! `⟨x, x⟩`. Hence `ρ+ = λ_max(V*·Re⟨x,y⟩·V)` and `ρ- = λ_min(V*·Re⟨x,y⟩·V)`,
//! where `Re a = (a + a*)/2`. The maximizing (minimizing) states are the pure
//! states on the corresponding eigenvectors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{eigh, operator_norm_raw, ComplexMatrix, HermitianSpectrum};
use crate::module::{inner_product, module_norm, AlgebraElement, ModuleElement};
use crate::state::{
    face_compression, state_from_face_vector, top_face, StateWitness, TopFace, DEFAULT_GAP_TOL, ZERO_NORM,
};

/// Which one-sided limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

/// Extreme value of `Re φ(⟨x,y⟩)` over attaining states, with the state attaining it.
#[derive(Debug, Clone)]
pub struct Extremum {
    pub value: f64,
    /// `None` only for `x = 0`, where every state attains the norm.
    pub witness: Option<StateWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivativePair {
    pub rho_plus: f64,
    pub rho_minus: f64,
    /// `(ρ+ + ρ-)/2`.
    pub rho_mid: f64,
    pub max_witness: Option<StateWitness>,
    pub min_witness: Option<StateWitness>,
}

/// Top face of `x` together with the spectrum of `V*·Re⟨x,y⟩·V`; `None` for `x = 0`.
pub(crate) fn face_real_spectrum(
    x: &ModuleElement,
    y: &ModuleElement,
) -> Result<Option<(TopFace, HermitianSpectrum)>> {
    if x.shape() != y.shape() {
        return Err(Error::ShapeMismatch {
            left: x.shape(),
            right: y.shape(),
        });
    }
    if module_norm(x) <= ZERO_NORM {
        return Ok(None);
    }
    let face = top_face(x, DEFAULT_GAP_TOL)?;
    let xy = inner_product(x, y)?;
    let re = AlgebraElement::new(xy.matrix().hermitian_part())?;
    let comp = face_compression(&face, &re)?;
    let spec = eigh(comp.as_dmatrix());
    Ok(Some((face, spec)))
}

fn extremum(x: &ModuleElement, y: &ModuleElement, side: Side) -> Result<Extremum> {
    let Some((face, spec)) = face_real_spectrum(x, y)? else {
        return Ok(Extremum {
            value: 0.0,
            witness: None,
        });
    };
    let (value, zeta) = match side {
        Side::Plus => (spec.max(), spec.vector(0)),
        Side::Minus => (spec.min(), spec.vector(spec.dim() - 1)),
    };
    let witness = state_from_face_vector(&face, &zeta)?;
    Ok(Extremum {
        value,
        witness: Some(witness),
    })
}

/// `ρ+(x, y)`, the maximum of `Re φ(⟨x,y⟩)` over states with `φ(⟨x,x⟩) = ‖x‖²`.
pub fn rho_plus(x: &ModuleElement, y: &ModuleElement) -> Result<Extremum> {
    extremum(x, y, Side::Plus)
}

/// `ρ-(x, y)`, the corresponding minimum.
pub fn rho_minus(x: &ModuleElement, y: &ModuleElement) -> Result<Extremum> {
    extremum(x, y, Side::Minus)
}

pub fn rho_pair(x: &ModuleElement, y: &ModuleElement) -> Result<DerivativePair> {
    let plus = rho_plus(x, y)?;
    let minus = rho_minus(x, y)?;
    Ok(DerivativePair {
        rho_plus: plus.value,
        rho_minus: minus.value,
        rho_mid: 0.5 * (plus.value + minus.value),
        max_witness: plus.witness,
        min_witness: minus.witness,
    })
}

/// Default stopping tolerance for [`rho_fd`].
pub const FD_TOL: f64 = 1e-6;
const FD_STEPS: i32 = 48;

fn norm_sq(m: &ComplexMatrix) -> f64 {
    operator_norm_raw(m.as_dmatrix()).powi(2)
}

/// The defining difference quotient evaluated at `t = ±2^{-k}`, `k = 1..=48`.
///
/// `t ↦ ‖x+ty‖²` is convex, so the quotients are monotone in `t` and approach
/// the one-sided derivative from above (side `+`) or below (side `-`). The first
/// quotient whose change from its predecessor is below `tol·(1 + ‖x‖‖y‖)` is
/// returned.
pub fn rho_fd(x: &ModuleElement, y: &ModuleElement, side: Side, tol: f64) -> Result<f64> {
    if x.shape() != y.shape() {
        return Err(Error::ShapeMismatch {
            left: x.shape(),
            right: y.shape(),
        });
    }
    let sign = match side {
        Side::Plus => 1.0,
        Side::Minus => -1.0,
    };
    let base = norm_sq(x.matrix());
    let scale = 1.0 + module_norm(x) * module_norm(y);
    let quotient = |k: i32| {
        let t = sign * 2f64.powi(-k);
        let moved = x.matrix() + &y.matrix().scale_real(t);
        (norm_sq(&moved) - base) / (2.0 * t)
    };
    let mut prev = quotient(1);
    let mut width = f64::INFINITY;
    for k in 2..=FD_STEPS {
        let q = quotient(k);
        width = (q - prev).abs();
        if width <= tol * scale {
            return Ok(q);
        }
        prev = q;
    }
    Err(Error::NoConvergence { width })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn diag(d: &[f64]) -> ModuleElement {
        ModuleElement::new(ComplexMatrix::from_real_diagonal(d))
    }

    #[test]
    fn diagonal_values() {
        let t = diag(&[1.0, 1.0]);
        let s = diag(&[-1.0, 1.0]);
        let r = diag(&[-1.0, 0.0]);
        assert_relative_eq!(rho_plus(&t, &s).unwrap().value, 1.0, epsilon = 1e-12);
        assert_relative_eq!(rho_minus(&t, &s).unwrap().value, -1.0, epsilon = 1e-12);
        assert!(rho_plus(&t, &r).unwrap().value.abs() < 1e-12);
        assert_relative_eq!(rho_minus(&t, &r).unwrap().value, -1.0, epsilon = 1e-12);

        let pair = rho_pair(&t, &s).unwrap();
        assert!(pair.rho_mid.abs() < 1e-12);
        assert!(pair.max_witness.is_some() && pair.min_witness.is_some());
    }

    #[test]
    fn self_derivative_is_squared_norm() {
        let x = diag(&[3.0, -0.5]);
        let p = rho_pair(&x, &x).unwrap();
        assert_relative_eq!(p.rho_plus, 9.0, epsilon = 1e-12);
        assert_relative_eq!(p.rho_minus, 9.0, epsilon = 1e-12);
        assert_relative_eq!(p.rho_mid, 9.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_first_argument() {
        let z = ModuleElement::zero(2, 2);
        let p = rho_pair(&z, &diag(&[1.0, 2.0])).unwrap();
        assert_eq!((p.rho_plus, p.rho_minus), (0.0, 0.0));
        assert!(p.max_witness.is_none());
    }

    #[test]
    fn fd_diagonal_values() {
        let t = diag(&[1.0, 1.0]);
        let r = diag(&[-1.0, 0.0]);
        assert!(rho_fd(&t, &r, Side::Plus, FD_TOL).unwrap().abs() <= 1e-6);
        assert!((rho_fd(&t, &r, Side::Minus, FD_TOL).unwrap() + 1.0).abs() <= 1e-5);
        let x = diag(&[2.0, 1.0]);
        assert!((rho_fd(&x, &x, Side::Plus, FD_TOL).unwrap() - 4.0).abs() <= 1e-5);
        assert!((rho_fd(&x, &x, Side::Minus, FD_TOL).unwrap() - 4.0).abs() <= 1e-5);
    }

    #[test]
    fn shape_errors() {
        let a = ModuleElement::zero(2, 2);
        let b = ModuleElement::zero(3, 2);
        assert!(rho_plus(&a, &b).is_err());
        assert!(rho_fd(&a, &b, Side::Plus, FD_TOL).is_err());
    }
}
