//! Seeded random instances.
//!
//! Every instance is drawn from its own ChaCha stream keyed by `(seed, index)`,
//! so instances are reproducible individually and independent of evaluation
//! order.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::derivative::rho_pair;
use crate::matrix::{eigh, ComplexMatrix};
use crate::module::{inner_product, AlgebraElement, ModuleElement};

pub const MAX_DIM: usize = 6;

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Complex standard Gaussian: `E|z|² = 1`.
pub fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_element<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ModuleElement {
    ModuleElement::new(ComplexMatrix::from_dmatrix(gaussian_matrix(rng, rows, cols)))
}

pub fn random_algebra<R: Rng>(rng: &mut R, n: usize, scale: f64) -> AlgebraElement {
    let m = gaussian_matrix(rng, n, n) * Complex64::new(scale, 0.0);
    AlgebraElement::new(ComplexMatrix::from_dmatrix(m)).expect("square")
}

/// Nonzero complex scalar with modulus in `[0.25, 4]` and uniform phase.
pub fn random_scalar<R: Rng>(rng: &mut R) -> Complex64 {
    let r = 4f64.powf(rng.random_range(-1.0..=1.0));
    Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Haar-ish unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    gaussian_matrix(rng, n, n).qr().q()
}

/// `x = U diag(s) W*` whose `k` largest singular values are exactly equal, so
/// the top face of `⟨x, x⟩` has dimension `k` (requires `k ≤ min(rows, cols)`).
pub fn degenerate_element<R: Rng>(rng: &mut R, rows: usize, cols: usize, k: usize) -> ModuleElement {
    let r = rows.min(cols);
    assert!(k >= 1 && k <= r);
    let u = random_unitary(rng, rows);
    let w = random_unitary(rng, cols);
    let top = rng.random_range(1.0..2.0);
    let mut s = DMatrix::zeros(rows, cols);
    for i in 0..r {
        let v = if i < k { top } else { rng.random_range(0.0..0.9) * top };
        s[(i, i)] = Complex64::new(v, 0.0);
    }
    ModuleElement::new(ComplexMatrix::from_dmatrix(u * s * w.adjoint()))
}

/// How the second element of a pair was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Independent Gaussian `x`, `y`.
    Generic,
    /// `x` with an exactly repeated top singular value, Gaussian `y`.
    DegenerateFace,
    /// `⟨x, y⟩ = 0` by projecting `y` off the range of a rank-deficient `x`.
    IpOrthogonal,
    /// `y` annihilates a top left singular vector of `x`.
    StrongBj,
    /// `y - cx` with `c` chosen so a top-face pure state kills `⟨x, y⟩`.
    BjProjected,
    /// `y - cx` shifted so that `ρ+(x, y) = 0`.
    RealBj,
    /// `y - cx` shifted so that `ρ+(x, y) + ρ-(x, y) = 0`.
    RhoOrthogonal,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Generic,
        Family::DegenerateFace,
        Family::IpOrthogonal,
        Family::StrongBj,
        Family::BjProjected,
        Family::RealBj,
        Family::RhoOrthogonal,
    ];
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub index: u64,
    pub family: Family,
    pub x: ModuleElement,
    pub y: ModuleElement,
}

fn top_left_vector(x: &ModuleElement) -> nalgebra::DVector<Complex64> {
    let m = x.matrix().as_dmatrix();
    eigh(&(m * m.adjoint())).vector(0)
}

fn top_right_vector(x: &ModuleElement) -> nalgebra::DVector<Complex64> {
    let g = inner_product(x, x).expect("same shape");
    eigh(g.matrix().as_dmatrix()).vector(0)
}

/// `x`, either generic or (with probability one half, when the shape allows)
/// with a doubly degenerate top face.
fn base_element<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ModuleElement {
    if rows.min(cols) >= 2 && rng.random_bool(0.5) {
        degenerate_element(rng, rows, cols, 2)
    } else {
        random_element(rng, rows, cols)
    }
}

/// `y - cx`, snapped to exact zero when the subtraction cancels to rounding
/// level (e.g. 1×1 shapes, where the projection removes all of `y`).
fn shifted(x: &ModuleElement, y: &ModuleElement, c: Complex64) -> ModuleElement {
    let out = y.axpy(-c, x).expect("same shape");
    if out.norm() <= 64.0 * f64::EPSILON * (y.norm() + c.norm() * x.norm()) {
        return y.scale(Complex64::new(0.0, 0.0));
    }
    out
}

/// Builds one instance of `family` with shape `rows × cols`.
pub fn build<R: Rng>(rng: &mut R, family: Family, rows: usize, cols: usize) -> (ModuleElement, ModuleElement) {
    match family {
        Family::Generic => (random_element(rng, rows, cols), random_element(rng, rows, cols)),
        Family::DegenerateFace => {
            let r = rows.min(cols);
            let k = if r >= 3 && rng.random_bool(0.3) { 3 } else { r.min(2) };
            (degenerate_element(rng, rows, cols, k), random_element(rng, rows, cols))
        }
        Family::IpOrthogonal => {
            // rank(x) < rows leaves room for a nonzero y orthogonal to its range
            let rank = rows.saturating_sub(1).max(1);
            let a = gaussian_matrix(rng, rows, rank);
            let b = gaussian_matrix(rng, rank, cols);
            let x = &a * &b;
            let q = a.qr().q();
            let z = gaussian_matrix(rng, rows, cols);
            let y = if rows == 1 { z.clone() * Complex64::new(0.0, 0.0) } else { &z - &q * (q.adjoint() * &z) };
            (
                ModuleElement::new(ComplexMatrix::from_dmatrix(x)),
                ModuleElement::new(ComplexMatrix::from_dmatrix(y)),
            )
        }
        Family::StrongBj => {
            let x = base_element(rng, rows, cols);
            let u = top_left_vector(&x);
            let z = gaussian_matrix(rng, rows, cols);
            let y = &z - &u * (u.adjoint() * &z);
            (x, ModuleElement::new(ComplexMatrix::from_dmatrix(y)))
        }
        Family::BjProjected => {
            let x = base_element(rng, rows, cols);
            let y = random_element(rng, rows, cols);
            let v = top_right_vector(&x);
            let xy = inner_product(&x, &y).expect("same shape");
            let lambda = x.norm().powi(2);
            let c = v.dotc(&(xy.matrix().as_dmatrix() * &v)) / lambda;
            let y = shifted(&x, &y, c);
            (x, y)
        }
        Family::RealBj => {
            let x = base_element(rng, rows, cols);
            let y = random_element(rng, rows, cols);
            let p = rho_pair(&x, &y).expect("same shape");
            let c = Complex64::new(p.rho_plus / x.norm().powi(2), 0.0);
            let y = shifted(&x, &y, c);
            (x, y)
        }
        Family::RhoOrthogonal => {
            let x = base_element(rng, rows, cols);
            let y = random_element(rng, rows, cols);
            let p = rho_pair(&x, &y).expect("same shape");
            let c = Complex64::new(p.rho_mid / x.norm().powi(2), 0.0);
            let y = shifted(&x, &y, c);
            (x, y)
        }
    }
}

/// Instance `index` of a seeded sweep. Families cycle with the index; shapes are
/// uniform in `min_dim..=MAX_DIM` on both sides.
pub fn instance(seed: u64, index: u64, min_dim: usize) -> Instance {
    let family = Family::ALL[(index % Family::ALL.len() as u64) as usize];
    instance_of(seed, index, family, min_dim)
}

pub fn instance_of(seed: u64, index: u64, family: Family, min_dim: usize) -> Instance {
    let mut rng = rng_for(seed, index);
    let rows = rng.random_range(min_dim..=MAX_DIM);
    let cols = rng.random_range(min_dim..=MAX_DIM);
    let (x, y) = build(&mut rng, family, rows, cols);
    Instance { index, family, x, y }
}

/// Generic pairs, shapes in `min_dim..=MAX_DIM`.
pub fn generic_pair(seed: u64, index: u64, min_dim: usize) -> Instance {
    instance_of(seed, index, Family::Generic, min_dim)
}

/// A random density matrix `G G*/tr(G G*)`.
pub fn random_density<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let p = &g * g.adjoint();
    let tr = p.trace().re;
    ComplexMatrix::from_dmatrix(p / Complex64::new(tr, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivative::rho_pair;
    use crate::state::{top_face, DEFAULT_GAP_TOL};

    #[test]
    fn scalar_projection_cancels_exactly() {
        let mut rng = rng_for(11, 0);
        for _ in 0..20 {
            let (_, y) = build(&mut rng, Family::BjProjected, 1, 1);
            assert_eq!(y.norm(), 0.0);
        }
    }

    #[test]
    fn instances_are_reproducible() {
        for i in 0..14 {
            let a = instance(7, i, 1);
            let b = instance(7, i, 1);
            assert_eq!(a.x, b.x);
            assert_eq!(a.y, b.y);
        }
        assert_ne!(instance(7, 0, 1).x, instance(8, 0, 1).x);
    }

    #[test]
    fn degenerate_faces_have_requested_dimension() {
        let mut rng = rng_for(1, 0);
        for k in 1..=3 {
            let x = degenerate_element(&mut rng, 5, 4, k);
            let face = top_face(&x, DEFAULT_GAP_TOL).unwrap();
            assert_eq!(face.dim(), k);
        }
    }

    #[test]
    fn families_satisfy_their_construction() {
        for i in 0..40 {
            let inst = instance_of(3, i, Family::ALL[(i % 7) as usize], 2);
            let (x, y) = (&inst.x, &inst.y);
            let s = 1.0 + x.norm() * y.norm();
            match inst.family {
                Family::IpOrthogonal => {
                    assert!(inner_product(x, y).unwrap().norm() <= 1e-12 * s);
                }
                Family::RealBj => {
                    assert!(rho_pair(x, y).unwrap().rho_plus.abs() <= 1e-12 * s);
                }
                Family::RhoOrthogonal => {
                    assert!(rho_pair(x, y).unwrap().rho_mid.abs() <= 1e-12 * s);
                }
                _ => {}
            }
        }
    }

    #[test]
    fn densities_are_states() {
        let mut rng = rng_for(0, 0);
        let p = random_density(&mut rng, 4);
        assert!((p.trace().re - 1.0).abs() < 1e-14);
        assert!(eigh(p.as_dmatrix()).min() > -1e-14);
    }
}
