//! States on `M_n(ℂ)` as density matrices, and the top face of `⟨x, x⟩`.
//!
//! A state `φ` attains `φ(⟨x, x⟩) = ‖x‖²` exactly when its density matrix is
//! supported on the top eigenspace of `⟨x, x⟩`. [`TopFace`] stores an isometry
//! onto that eigenspace, so every question about the attaining states reduces to
//! a question about compressions `V*aV`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{eigh, ComplexMatrix};
use crate::module::{inner_product, AlgebraElement, ModuleElement};

/// Default relative threshold for joining the top face.
pub const DEFAULT_GAP_TOL: f64 = 1e-10;

/// Elements with norm at or below this are treated as zero.
pub const ZERO_NORM: f64 = 1e-12;

const DENSITY_TOL: f64 = 1e-10;

/// Orthonormal basis of the top eigenspace of `⟨x, x⟩`.
#[derive(Debug, Clone)]
pub struct TopFace {
    /// `n×k` isometry whose columns span the face.
    pub isometry: ComplexMatrix,
    /// `λ_max(⟨x, x⟩) = ‖x‖²`.
    pub lambda_max: f64,
    /// Distance from `λ_max` to the largest eigenvalue left out of the face;
    /// infinite when the face is everything.
    pub gap: f64,
    pub gap_tol: f64,
    /// Set when the gap is within ten face tolerances, where the face
    /// dimension is numerically ambiguous.
    pub near_degenerate: bool,
}

impl TopFace {
    pub fn dim(&self) -> usize {
        self.isometry.cols()
    }

    pub fn algebra_dim(&self) -> usize {
        self.isometry.rows()
    }

    /// The image `Vζ` of a face coordinate vector.
    pub fn embed(&self, zeta: &DVector<Complex64>) -> DVector<Complex64> {
        self.isometry.apply(zeta)
    }
}

/// A state `a ↦ tr(p a)` given by its density matrix `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateWitness {
    pub density: ComplexMatrix,
}

impl StateWitness {
    /// Validates `p = p*`, `p ≥ 0` and `tr p = 1`, each to 1e-10.
    pub fn new(density: ComplexMatrix) -> Result<Self> {
        if !density.is_square() {
            return Err(Error::ShapeMismatch {
                left: density.shape(),
                right: (density.cols(), density.cols()),
            });
        }
        let asym = density.max_abs_diff(&density.adjoint());
        if asym > DENSITY_TOL {
            return Err(Error::NonHermitianInput {
                asymmetry: asym,
                allowed: DENSITY_TOL,
            });
        }
        let spec = eigh(density.as_dmatrix());
        if spec.min() < -DENSITY_TOL {
            return Err(Error::InvalidArgument(format!(
                "density has negative eigenvalue {}",
                spec.min()
            )));
        }
        let tr = density.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidArgument(format!("density has trace {tr}")));
        }
        Ok(Self { density })
    }

    /// Pure state `vv*` for a unit vector `v`.
    pub fn pure(v: &DVector<Complex64>) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() > DENSITY_TOL {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(Self {
            density: ComplexMatrix::wrap(v * v.adjoint()),
        })
    }

    /// The normalized trace `I/n`.
    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            density: ComplexMatrix::identity(n).scale_real(1.0 / n as f64),
        }
    }

    /// `w·a + (1-w)·b` for `w ∈ [0, 1]`.
    pub fn mixture(w: f64, a: &Self, b: &Self) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidArgument(format!("mixture weight {w}")));
        }
        if a.dim() != b.dim() {
            return Err(Error::ShapeMismatch {
                left: a.density.shape(),
                right: b.density.shape(),
            });
        }
        Ok(Self {
            density: &a.density.scale_real(w) + &b.density.scale_real(1.0 - w),
        })
    }

    pub fn dim(&self) -> usize {
        self.density.rows()
    }

    /// `φ(a) = tr(p a)`.
    pub fn value(&self, a: &AlgebraElement) -> Result<Complex64> {
        state_value(self, a)
    }

    /// Deviation from the density-matrix axioms: the largest of the
    /// asymmetry, the negative part of the spectrum and `|tr p - 1|`.
    pub fn validity_defect(&self) -> f64 {
        let asym = self.density.max_abs_diff(&self.density.adjoint());
        let neg = (-eigh(self.density.as_dmatrix()).min()).max(0.0);
        let tr = (self.density.trace() - Complex64::new(1.0, 0.0)).norm();
        asym.max(neg).max(tr)
    }
}

fn trace_product(p: &DMatrix<Complex64>, a: &DMatrix<Complex64>) -> Complex64 {
    let n = p.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += p[(i, j)] * a[(j, i)];
        }
    }
    acc
}

/// The top face of `⟨x, x⟩`: eigenvectors with eigenvalue at least
/// `(1 - gap_tol)·λ_max`.
pub fn top_face(x: &ModuleElement, gap_tol: f64) -> Result<TopFace> {
    let gram = inner_product(x, x)?;
    let spec = eigh(gram.matrix().as_dmatrix());
    let lambda_max = spec.max();
    if lambda_max <= ZERO_NORM * ZERO_NORM {
        return Err(Error::ZeroElement);
    }
    let cutoff = (1.0 - gap_tol) * lambda_max;
    let k = spec.eigenvalues.iter().take_while(|&&l| l >= cutoff).count().max(1);
    let n = spec.dim();
    let gap = if k == n {
        f64::INFINITY
    } else {
        lambda_max - spec.eigenvalues[k]
    };
    let isometry = ComplexMatrix::wrap(spec.eigenvectors.columns(0, k).into_owned());
    Ok(TopFace {
        isometry,
        lambda_max,
        gap,
        gap_tol,
        near_degenerate: gap <= 10.0 * gap_tol * lambda_max,
    })
}

/// `φ(a) = tr(p a)`.
pub fn state_value(p: &StateWitness, a: &AlgebraElement) -> Result<Complex64> {
    if p.dim() != a.dim() {
        return Err(Error::ShapeMismatch {
            left: p.density.shape(),
            right: a.matrix().shape(),
        });
    }
    Ok(trace_product(p.density.as_dmatrix(), a.matrix().as_dmatrix()))
}

/// `V* a V`; its numerical range is `{φ(a) : φ attains ‖x‖²}`.
pub fn face_compression(face: &TopFace, a: &AlgebraElement) -> Result<ComplexMatrix> {
    if face.algebra_dim() != a.dim() {
        return Err(Error::ShapeMismatch {
            left: face.isometry.shape(),
            right: a.matrix().shape(),
        });
    }
    let v = face.isometry.as_dmatrix();
    Ok(ComplexMatrix::wrap(v.ad_mul(&(a.matrix().as_dmatrix() * v))))
}

/// The pure state on `Vζ` for a unit face vector `ζ`.
pub fn state_from_face_vector(face: &TopFace, zeta: &DVector<Complex64>) -> Result<StateWitness> {
    if zeta.len() != face.dim() {
        return Err(Error::ShapeMismatch {
            left: (zeta.len(), 1),
            right: (face.dim(), 1),
        });
    }
    let norm = zeta.norm();
    if (norm - 1.0).abs() > DENSITY_TOL {
        return Err(Error::NotUnitVector { norm });
    }
    let v = face.embed(zeta);
    Ok(StateWitness {
        density: ComplexMatrix::wrap(&v * v.adjoint()),
    })
}

/// `φ(⟨x,x⟩)·φ(⟨y,y⟩) - |φ(⟨x,y⟩)|²`, nonnegative for every state.
pub fn cauchy_schwarz_gap(p: &StateWitness, x: &ModuleElement, y: &ModuleElement) -> Result<f64> {
    let xx = state_value(p, &inner_product(x, x)?)?.re;
    let yy = state_value(p, &inner_product(y, y)?)?.re;
    let xy = state_value(p, &inner_product(x, y)?)?;
    Ok(xx * yy - xy.norm_sqr())
}

/// `|φ(⟨x,x⟩) - ‖x‖²|`: zero exactly for states attaining the norm.
pub fn face_defect(p: &StateWitness, x: &ModuleElement) -> Result<f64> {
    let g = inner_product(x, x)?;
    let lmax = eigh(g.matrix().as_dmatrix()).max();
    Ok((state_value(p, &g)?.re - lmax).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag_el(d: &[f64]) -> ModuleElement {
        ModuleElement::new(ComplexMatrix::from_real_diagonal(d))
    }

    fn alg_diag(d: &[f64]) -> AlgebraElement {
        AlgebraElement::new(ComplexMatrix::from_real_diagonal(d)).unwrap()
    }

    fn basis(n: usize, i: usize) -> DVector<Complex64> {
        let mut v = DVector::zeros(n);
        v[i] = c(1.0, 0.0);
        v
    }

    #[test]
    fn top_face_examples() {
        let f = top_face(&diag_el(&[1.0, 1.0]), DEFAULT_GAP_TOL).unwrap();
        assert_eq!(f.dim(), 2);
        assert_relative_eq!(f.lambda_max, 1.0, epsilon = 1e-15);
        assert!(f.gap.is_infinite());
        let vv = f.isometry.ad_mul(&f.isometry);
        assert!(vv.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);

        let f = top_face(&diag_el(&[-1.0, 0.0]), DEFAULT_GAP_TOL).unwrap();
        assert_eq!(f.dim(), 1);
        assert_relative_eq!(f.gap, 1.0, epsilon = 1e-15);
        assert_relative_eq!(f.isometry.get(0, 0).norm(), 1.0, epsilon = 1e-15);
        assert!(f.isometry.get(1, 0).norm() < 1e-15);
        assert!(!f.near_degenerate);
    }

    #[test]
    fn top_face_rejects_zero() {
        assert!(matches!(
            top_face(&ModuleElement::zero(2, 3), DEFAULT_GAP_TOL),
            Err(Error::ZeroElement)
        ));
    }

    #[test]
    fn near_degenerate_flag() {
        let f = top_face(&diag_el(&[1.0, 1.0 - 2e-10]), DEFAULT_GAP_TOL).unwrap();
        assert_eq!(f.dim(), 1);
        assert!(f.near_degenerate);
    }

    #[test]
    fn state_value_examples() {
        let p = StateWitness::maximally_mixed(3);
        assert_relative_eq!(state_value(&p, &AlgebraElement::identity(3)).unwrap().re, 1.0, epsilon = 1e-15);

        let p = StateWitness::pure(&basis(2, 0)).unwrap();
        assert_eq!(state_value(&p, &alg_diag(&[-1.0, 1.0])).unwrap(), c(-1.0, 0.0));

        assert!(state_value(&p, &AlgebraElement::identity(3)).is_err());
    }

    #[test]
    fn compression_examples() {
        let t = diag_el(&[1.0, 1.0]);
        let f = top_face(&t, DEFAULT_GAP_TOL).unwrap();
        let s = alg_diag(&[-1.0, 1.0]);
        let m = face_compression(&f, &s).unwrap();
        // V is unitary here: unitarily equivalent copy, and with V = I exactly S.
        let spec = eigh(m.as_dmatrix());
        assert_relative_eq!(spec.max(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(spec.min(), -1.0, epsilon = 1e-14);

        let f = top_face(&diag_el(&[-1.0, 0.0]), DEFAULT_GAP_TOL).unwrap();
        let m = face_compression(&f, &alg_diag(&[5.0, 7.0])).unwrap();
        assert_eq!(m.shape(), (1, 1));
        assert_relative_eq!(m.get(0, 0).re, 5.0, epsilon = 1e-14);
        assert!(m.get(0, 0).im.abs() < 1e-14);
    }

    #[test]
    fn face_vector_states() {
        let f = top_face(&diag_el(&[-1.0, 0.0]), DEFAULT_GAP_TOL).unwrap();
        let p = state_from_face_vector(&f, &basis(1, 0)).unwrap();
        let vv = &f.isometry * &f.isometry.adjoint();
        assert!(p.density.max_abs_diff(&vv) < 1e-15);

        let t = diag_el(&[1.0, 1.0]);
        let f = top_face(&t, DEFAULT_GAP_TOL).unwrap();
        let zeta = f.isometry.adjoint().apply(&basis(2, 0));
        let p = state_from_face_vector(&f, &zeta).unwrap();
        assert!(p.density.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0])) < 1e-14);
        let r = diag_el(&[-1.0, 0.0]);
        let tr = inner_product(&t, &r).unwrap();
        assert_relative_eq!(state_value(&p, &tr).unwrap().re, -1.0, epsilon = 1e-14);
        assert_relative_eq!(p.density.trace().re, 1.0, epsilon = 1e-14);

        let bad = DVector::from_element(2, c(1.0, 0.0));
        assert!(matches!(state_from_face_vector(&f, &bad), Err(Error::NotUnitVector { .. })));
    }

    #[test]
    fn cauchy_schwarz_examples() {
        let x = ModuleElement::new(
            ComplexMatrix::from_row_major(2, 2, vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.5, 0.0)]).unwrap(),
        );
        let f = top_face(&x, DEFAULT_GAP_TOL).unwrap();
        let zeta = DVector::from_element(1, c(1.0, 0.0));
        let p = state_from_face_vector(&f, &zeta).unwrap();
        assert!(cauchy_schwarz_gap(&p, &x, &x).unwrap().abs() < 1e-12);

        let e1 = ModuleElement::new(ComplexMatrix::from_real_rows(&[&[1.0], &[0.0]]).unwrap());
        let e2 = ModuleElement::new(ComplexMatrix::from_real_rows(&[&[0.0], &[2.0]]).unwrap());
        let p = StateWitness::maximally_mixed(1);
        assert_relative_eq!(cauchy_schwarz_gap(&p, &e1, &e2).unwrap(), 4.0, epsilon = 1e-15);
    }

    #[test]
    fn witness_validation() {
        assert!(StateWitness::new(ComplexMatrix::from_real_diagonal(&[0.5, 0.5])).is_ok());
        assert!(StateWitness::new(ComplexMatrix::from_real_diagonal(&[1.5, -0.5])).is_err());
        assert!(StateWitness::new(ComplexMatrix::from_real_diagonal(&[0.5, 0.6])).is_err());
        let a = StateWitness::pure(&basis(2, 0)).unwrap();
        let b = StateWitness::pure(&basis(2, 1)).unwrap();
        let m = StateWitness::mixture(0.25, &a, &b).unwrap();
        assert!(m.validity_defect() < 1e-15);
        assert!(StateWitness::mixture(1.5, &a, &b).is_err());
    }
}
