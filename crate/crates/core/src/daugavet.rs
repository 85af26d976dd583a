//! The cube identities `ρ±(x, x⟨x,x⟩) = ‖x‖⁴`, the module Daugavet equation
//! `‖αx + βx⟨x,x⟩‖ = α‖x‖ + β‖x‖³`, and its operator form with an explicit
//! attaining vector.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::derivative::rho_pair;
use crate::error::{Error, Result};
use crate::matrix::{eigh, operator_norm, ComplexMatrix};
use crate::module::{inner_product, module_action, module_norm, ModuleElement};

/// Default relative tolerance for the identity checks.
pub const DAUGAVET_TOL: f64 = 1e-9;

/// `x⟨x,x⟩`.
pub fn cube(x: &ModuleElement) -> ModuleElement {
    let g = inner_product(x, x).expect("same shape");
    module_action(x, &g).expect("matching dimension")
}

#[derive(Debug, Clone, Serialize)]
pub struct CubeIdentityReport {
    pub norm: f64,
    pub norm4: f64,
    pub rho_plus: f64,
    pub rho_minus: f64,
    /// `max |ρ± - ‖x‖⁴|`.
    pub residual: f64,
    /// `max |φ(⟨x,x⟩²) - ‖x‖⁴|` over the two returned witnesses.
    pub witness_residual: f64,
    pub threshold: f64,
    pub holds: bool,
}

/// Checks `ρ+(x, x⟨x,x⟩) = ‖x‖⁴ = ρ-(x, x⟨x,x⟩)` within `tol·(1 + ‖x‖⁴)`, along
/// with `φ(⟨x,x⟩²) = ‖x‖⁴` for the attaining states.
pub fn rho_cube_identity(x: &ModuleElement, tol: f64) -> CubeIdentityReport {
    let norm = module_norm(x);
    let norm4 = norm.powi(4);
    let pair = rho_pair(x, &cube(x)).expect("same shape");
    let residual = (pair.rho_plus - norm4).abs().max((pair.rho_minus - norm4).abs());
    let g = inner_product(x, x).expect("same shape");
    let g2 = g.mul(&g).expect("square");
    let witness_residual = [&pair.max_witness, &pair.min_witness]
        .into_iter()
        .flatten()
        .map(|w| (w.value(&g2).expect("dimension") - norm4).norm())
        .fold(0.0, f64::max);
    let threshold = tol * (1.0 + norm4);
    CubeIdentityReport {
        norm,
        norm4,
        rho_plus: pair.rho_plus,
        rho_minus: pair.rho_minus,
        residual,
        witness_residual,
        threshold,
        holds: residual <= threshold && witness_residual <= threshold,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DaugavetReport {
    pub alpha: f64,
    pub beta: f64,
    /// `‖αx + βx⟨x,x⟩‖`.
    pub lhs: f64,
    /// `α‖x‖ + β‖x‖³`.
    pub rhs: f64,
    pub residual: f64,
    /// `|‖x⟨x,x⟩‖ - ‖x‖³|`.
    pub cube_residual: f64,
    pub threshold: f64,
    pub holds: bool,
}

/// Checks the module Daugavet equation for positive `α`, `β` within `tol·(1 + rhs)`.
pub fn module_daugavet_check(x: &ModuleElement, alpha: f64, beta: f64, tol: f64) -> Result<DaugavetReport> {
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::InvalidScalars { alpha, beta });
    }
    let c = cube(x);
    let norm = module_norm(x);
    let lhs = x
        .scale(Complex64::new(alpha, 0.0))
        .axpy(Complex64::new(beta, 0.0), &c)?
        .norm();
    let rhs = alpha * norm + beta * norm.powi(3);
    let residual = (lhs - rhs).abs();
    let cube_residual = (module_norm(&c) - norm.powi(3)).abs();
    let threshold = tol * (1.0 + rhs);
    Ok(DaugavetReport {
        alpha,
        beta,
        lhs,
        rhs,
        residual,
        cube_residual,
        threshold,
        holds: residual <= threshold && cube_residual <= tol * (1.0 + norm.powi(3)),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorWitnessReport {
    /// Unit vector `x_o`, a top right-singular vector of `T`.
    pub vector: Vec<Complex64>,
    pub norm_t: f64,
    pub norm_cube: f64,
    pub norm_sum: f64,
    /// `|‖T + TT*T‖ - (‖T‖ + ‖T‖³)|`.
    pub sum_residual: f64,
    /// `|‖Tx_o‖ - ‖T‖|`.
    pub attain_residual: f64,
    /// `max(|‖TT*Tx_o‖ - ‖TT*T‖|, |‖TT*T‖ - ‖T‖³|)`.
    pub cube_attain_residual: f64,
    /// `‖(T/‖T‖)x_o - (TT*T/‖TT*T‖)x_o‖`.
    pub alignment_residual: f64,
    pub tol: f64,
    pub holds: bool,
    pub note: &'static str,
}

const COMPACTNESS_NOTE: &str =
    "finite dimension: every operator is compact, so the distance hypothesis is vacuous and a witness always exists";

/// Operator form of the Daugavet equation for `S = TT*T`, returning the unit
/// vector `x_o` with `(T/‖T‖)x_o = (TT*T/‖TT*T‖)x_o`.
pub fn operator_daugavet_witness(t: &ComplexMatrix, tol: f64) -> Result<OperatorWitnessReport> {
    let norm_t = operator_norm(t);
    if norm_t <= crate::state::ZERO_NORM {
        return Err(Error::ZeroOperator);
    }
    let gram = t.ad_mul(t);
    let spec = eigh(gram.as_dmatrix());
    let xo: DVector<Complex64> = spec.vector(0).normalize();

    let s = t * &gram;
    let norm_cube = operator_norm(&s);
    let norm_sum = operator_norm(&(t + &s));
    let tx = t.apply(&xo);
    let sx = s.apply(&xo);
    let sum_residual = (norm_sum - norm_t - norm_t.powi(3)).abs();
    let attain_residual = (tx.norm() - norm_t).abs();
    let cube_attain_residual = (sx.norm() - norm_cube).abs().max((norm_cube - norm_t.powi(3)).abs());
    let alignment_residual = (tx / Complex64::new(norm_t, 0.0) - sx / Complex64::new(norm_cube, 0.0)).norm();
    let rel = |r: f64, scale: f64| r <= tol * (1.0 + scale);
    let holds = rel(sum_residual, norm_t + norm_t.powi(3))
        && rel(attain_residual, norm_t)
        && rel(cube_attain_residual, norm_cube)
        && alignment_residual <= tol;
    Ok(OperatorWitnessReport {
        vector: xo.iter().copied().collect(),
        norm_t,
        norm_cube,
        norm_sum,
        sum_residual,
        attain_residual,
        cube_attain_residual,
        alignment_residual,
        tol,
        holds,
        note: COMPACTNESS_NOTE,
    })
}
