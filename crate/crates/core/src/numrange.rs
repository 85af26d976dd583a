//! Deciding `0 ∈ W(M)` for the numerical range `W(M) = {ζ*Mζ : ‖ζ‖ = 1}`.
//!
//! The support function `h(θ) = λ_max((e^{iθ}M + e^{-iθ}M*)/2)` is nonnegative
//! for every `θ` exactly when `0 ∈ W(M)`. A negative minimum yields a separating
//! direction. Otherwise a unit vector hitting (a point within tolerance of) the
//! origin is assembled from eigenvectors, using the fact that the numerical range
//! of a two-dimensional compression contains the segment between any two of its
//! points.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::matrix::{eigh, operator_norm_raw, ComplexMatrix};
use crate::search::{minimize_periodic, ANGLE_GRID};

const REFINE_MINIMA: usize = 8;
const BISECTION_STEPS: usize = 200;

/// How membership was settled.
#[derive(Debug, Clone)]
pub enum NumRangeCertificate {
    /// `ζ` is a unit vector and `value = ζ*Mζ`.
    Member { zeta: DVector<Complex64>, value: Complex64 },
    /// `λ_max(Re(e^{iθ}M)) = support < 0`, so `W(M)` lies in an open half-plane.
    Separated { theta: f64, support: f64 },
}

#[derive(Debug, Clone)]
pub struct ZeroMembership {
    /// `min_θ λ_max(Re(e^{iθ}M))`.
    pub min_support: f64,
    /// Minimizing angle.
    pub theta: f64,
    /// `tol·(1 + ‖M‖)`, the absolute threshold actually used.
    pub threshold: f64,
    pub certificate: NumRangeCertificate,
}

impl ZeroMembership {
    pub fn contains(&self) -> bool {
        matches!(self.certificate, NumRangeCertificate::Member { .. })
    }

    pub fn zeta(&self) -> Option<&DVector<Complex64>> {
        match &self.certificate {
            NumRangeCertificate::Member { zeta, .. } => Some(zeta),
            NumRangeCertificate::Separated { .. } => None,
        }
    }

    /// `|ζ*Mζ|` for a member certificate.
    pub fn residual(&self) -> Option<f64> {
        match &self.certificate {
            NumRangeCertificate::Member { value, .. } => Some(value.norm()),
            NumRangeCertificate::Separated { .. } => None,
        }
    }
}

fn rotated(m: &DMatrix<Complex64>, theta: f64) -> DMatrix<Complex64> {
    m * Complex64::from_polar(1.0, theta)
}

/// `λ_max(Re(e^{iθ}M))`.
pub fn support(m: &ComplexMatrix, theta: f64) -> f64 {
    support_raw(m.as_dmatrix(), theta)
}

fn support_raw(m: &DMatrix<Complex64>, theta: f64) -> f64 {
    if m.nrows() == 1 {
        return (m[(0, 0)] * Complex64::from_polar(1.0, theta)).re;
    }
    eigh(&rotated(m, theta)).max()
}

fn quad(m: &DMatrix<Complex64>, z: &DVector<Complex64>) -> Complex64 {
    z.dotc(&(m * z))
}

/// Decides whether `0 ∈ W(M)`.
///
/// Members are certified by a unit `ζ` with `|ζ*Mζ| ≤ tol·(1+‖M‖)`; non-members by
/// an angle with `λ_max(Re(e^{iθ}M)) < -tol·(1+‖M‖)/2`. The angle search is a
/// 720-point grid followed by golden-section refinement of the lowest local minima.
pub fn zero_in_numrange(m: &ComplexMatrix, tol: f64) -> ZeroMembership {
    assert!(m.is_square(), "numerical range needs a square matrix");
    let a = m.as_dmatrix();
    let threshold = tol * (1.0 + operator_norm_raw(a));

    if a.nrows() == 1 {
        let v = a[(0, 0)];
        let theta = (PI - v.arg()).rem_euclid(2.0 * PI);
        let min_support = -v.norm();
        let certificate = if min_support >= -threshold / 2.0 {
            NumRangeCertificate::Member {
                zeta: DVector::from_element(1, Complex64::new(1.0, 0.0)),
                value: v,
            }
        } else {
            NumRangeCertificate::Separated { theta, support: min_support }
        };
        return ZeroMembership { min_support, theta, threshold, certificate };
    }

    let (theta, min_support) = minimize_periodic(|t| support_raw(a, t), ANGLE_GRID, REFINE_MINIMA);
    let theta = polish_angle(a, theta);
    let min_support = min_support.min(support_raw(a, theta));
    let certificate = if min_support < -threshold / 2.0 {
        NumRangeCertificate::Separated { theta, support: min_support }
    } else {
        let zeta = member_vector(a, theta, min_support, threshold);
        let value = quad(a, &zeta);
        NumRangeCertificate::Member { zeta, value }
    };
    ZeroMembership { min_support, theta, threshold, certificate }
}

/// `h'(θ) = -Im(z*e^{iθ}Mz)` for the top eigenvector `z`.
fn support_slope(m: &DMatrix<Complex64>, theta: f64) -> f64 {
    let n = rotated(m, theta);
    let spec = eigh(&n);
    -quad(&n, &spec.vector(0)).im
}

/// Golden-section search only pins a smooth minimum to about `sqrt(ε)`; the
/// slope changes sign at the minimizer, so bisect on it to full precision.
fn polish_angle(m: &DMatrix<Complex64>, theta: f64) -> f64 {
    let slope = |t: f64| support_slope(m, t);
    let mut h = 1e-7;
    let bracket = loop {
        let (lo, hi) = (theta - h, theta + h);
        if slope(lo) <= 0.0 && slope(hi) >= 0.0 {
            break Some((lo, hi));
        }
        h *= 4.0;
        if h > 0.05 {
            break None;
        }
    };
    let Some((mut lo, mut hi)) = bracket else {
        return theta;
    };
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let best = if support_raw(m, lo) <= support_raw(m, hi) { lo } else { hi };
    let slack = 16.0 * f64::EPSILON * (1.0 + operator_norm_raw(m));
    if support_raw(m, best) <= support_raw(m, theta) + slack {
        best.rem_euclid(2.0 * PI)
    } else {
        theta
    }
}

/// Unit vector on the path from `z1` to `z2` whose value is `w1 + t(w2 - w1)`.
///
/// The phase `γ` in `normalize((1-s)z1 + s·e^{iγ}z2)` is chosen so that every
/// value along the path stays on the line through `w1` and `w2`; the position on
/// that line is continuous in `s`, so bisection reaches any `t ∈ [0, 1]`.
pub(crate) fn path_to_target(
    m: &DMatrix<Complex64>,
    z1: &DVector<Complex64>,
    z2: &DVector<Complex64>,
    t_target: f64,
) -> DVector<Complex64> {
    let w1 = quad(m, z1);
    let w2 = quad(m, z2);
    let d = w2 - w1;
    let dd = d.norm_sqr();
    if dd == 0.0 || !dd.is_finite() {
        return z1.clone();
    }
    let t_target = t_target.clamp(0.0, 1.0);
    let c = z1.dotc(z2);
    let a = z1.dotc(&(m * z2)) - c * w1;
    let b = z2.dotc(&(m * z1)) - c.conj() * w1;
    let p = d.conj() * a;
    let q = d.conj() * b;
    let gamma = (-(p.im + q.im)).atan2(p.re - q.re);
    let rot = Complex64::from_polar(1.0, gamma);

    let point = |s: f64| -> (DVector<Complex64>, f64) {
        let mut z = z1 * Complex64::new(1.0 - s, 0.0) + z2 * (rot * s);
        let n = z.norm();
        z /= Complex64::new(n, 0.0);
        let t = (d.conj() * (quad(m, &z) - w1)).re / dd;
        (z, t)
    };

    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = (z1.clone(), t_target.abs());
    if (1.0 - t_target).abs() < best.1 {
        best = (point(1.0).0, (1.0 - t_target).abs());
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let (z, t) = point(mid);
        let err = (t - t_target).abs();
        if err < best.1 {
            best = (z, err);
        }
        if t < t_target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-17 {
            break;
        }
    }
    best.0
}

/// Parameter of the point on segment `[w1, w2]` closest to the origin.
fn nearest_on_segment(w1: Complex64, w2: Complex64) -> f64 {
    let d = w2 - w1;
    let dd = d.norm_sqr();
    if dd == 0.0 {
        return 0.0;
    }
    (-(d.conj() * w1).re / dd).clamp(0.0, 1.0)
}

/// Within the eigenspace of `re_part` for eigenvalues within `band` of its
/// extreme (`top` chooses max or min), a unit vector whose value under `n` has
/// imaginary part as close to zero as the face allows.
fn face_real_point(
    n: &DMatrix<Complex64>,
    re_part: &DMatrix<Complex64>,
    im_part: &DMatrix<Complex64>,
    band: f64,
    top: bool,
) -> DVector<Complex64> {
    let spec = eigh(re_part);
    let dim = spec.dim();
    let idx: Vec<usize> = if top {
        (0..dim).take_while(|&i| spec.eigenvalues[i] >= spec.max() - band).collect()
    } else {
        (0..dim).rev().take_while(|&i| spec.eigenvalues[i] <= spec.min() + band).collect()
    };
    let u = DMatrix::from_columns(&idx.iter().map(|&i| spec.eigenvectors.column(i)).collect::<Vec<_>>());
    if u.ncols() == 1 {
        return u.column(0).into_owned();
    }
    let k_face = u.ad_mul(&(im_part * &u));
    let ks = eigh(&k_face);
    let hi = &u * ks.vector(0);
    let lo = &u * ks.vector(ks.dim() - 1);
    let (khi, klo) = (ks.max(), ks.min());
    if klo <= 0.0 && khi >= 0.0 && khi > klo {
        let t = khi / (khi - klo);
        path_to_target(n, &hi, &lo, t)
    } else if khi.abs() <= klo.abs() {
        hi
    } else {
        lo
    }
}

/// Builds a unit `ζ` with `ζ*Mζ ≈ 0`, given that `min_θ h(θ) = min_support` is
/// attained at `theta` and is not below `-threshold/2`.
fn member_vector(
    a: &DMatrix<Complex64>,
    theta: f64,
    min_support: f64,
    threshold: f64,
) -> DVector<Complex64> {
    let n = rotated(a, theta);
    let h = (&n + n.adjoint()) * Complex64::new(0.5, 0.0);
    let k = (&n - n.adjoint()) * Complex64::new(0.0, -0.5);
    let band = (threshold / 4.0).max(64.0 * f64::EPSILON * (1.0 + h.norm()));

    // Nearest point in the supporting face at the minimizing angle: real part
    // ≈ min_support and, by optimality of theta, the face straddles Im = 0.
    let z_right = face_real_point(&n, &h, &k, band, true);
    let w_right = quad(&n, &z_right);
    if w_right.norm() <= threshold {
        return z_right;
    }

    // The origin is interior. Find a point on the real axis with Re ≤ 0 by
    // maximizing the concave g(μ) = λ_min(H + μK) over μ; g'(μ) is the imaginary
    // part of the bottom eigenvector's value.
    let bottom = |mu: f64| -> (DVector<Complex64>, Complex64) {
        let spec = eigh(&(&h + &k * Complex64::new(mu, 0.0)));
        let z = spec.vector(spec.dim() - 1);
        let w = quad(&n, &z);
        (z, w)
    };
    let (z0, w0) = bottom(0.0);
    let z_left = if w0.im.abs() <= band {
        z0
    } else {
        let dir = if w0.im > 0.0 { 1.0 } else { -1.0 };
        let mu_cap = 4.0 * (1.0 + a.norm()) / min_support.max(f64::MIN_POSITIVE);
        let mut step = 1.0;
        let mut inner = (0.0, z0, w0);
        let mut outer = None;
        while step <= mu_cap * 2.0 {
            let (z, w) = bottom(dir * step);
            if w.im * dir <= 0.0 {
                outer = Some((dir * step, z, w));
                break;
            }
            inner = (dir * step, z, w);
            step *= 2.0;
        }
        match outer {
            None => inner.1,
            Some(outer) => {
                let (mut mu_in, mut z_in, mut w_in) = inner;
                let (mut mu_out, mut z_out, mut w_out) = outer;
                let mut found = None;
                for _ in 0..BISECTION_STEPS {
                    let t = w_in.im / (w_in.im - w_out.im);
                    let crossing = w_in.re + t * (w_out.re - w_in.re);
                    if crossing <= 0.0 {
                        found = Some(path_to_target(&n, &z_in, &z_out, t));
                        break;
                    }
                    let mu = 0.5 * (mu_in + mu_out);
                    if mu == mu_in || mu == mu_out {
                        break;
                    }
                    let (z, w) = bottom(mu);
                    if w.im * dir > 0.0 {
                        (mu_in, z_in, w_in) = (mu, z, w);
                    } else {
                        (mu_out, z_out, w_out) = (mu, z, w);
                    }
                }
                found.unwrap_or(if w_in.im.abs() <= w_out.im.abs() { z_in } else { z_out })
            }
        }
    };
    let w_left = quad(&n, &z_left);
    let t = nearest_on_segment(w_right, w_left);
    let z = path_to_target(&n, &z_right, &z_left, t);
    if quad(&n, &z).norm() <= w_right.norm() {
        z
    } else {
        z_right
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenvalue_zero_is_member() {
        let m = ComplexMatrix::from_real_diagonal(&[-1.0, 0.0]);
        let r = zero_in_numrange(&m, 1e-9);
        assert!(r.contains());
        let z = r.zeta().unwrap();
        assert!(r.residual().unwrap() <= 1e-12);
        assert!((z[1].norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn identity_is_separated_at_pi() {
        let r = zero_in_numrange(&ComplexMatrix::identity(2), 1e-9);
        assert!(!r.contains());
        match r.certificate {
            NumRangeCertificate::Separated { theta, support } => {
                assert!((theta - PI).abs() < 1e-9);
                assert!((support + 1.0).abs() < 1e-12);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn symmetric_diagonal_gets_balanced_vector() {
        let m = ComplexMatrix::from_real_diagonal(&[-1.0, 1.0]);
        let r = zero_in_numrange(&m, 1e-9);
        assert!(r.contains());
        assert!(r.residual().unwrap() < 1e-12);
        let z = r.zeta().unwrap();
        assert!((z[0].norm() - 0.5f64.sqrt()).abs() < 1e-9);
        assert!((z[1].norm() - 0.5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn scalar_cases() {
        let m = ComplexMatrix::from_row_major(1, 1, vec![c(0.0, 1.0)]).unwrap();
        assert!(!zero_in_numrange(&m, 1e-9).contains());
        let m = ComplexMatrix::from_row_major(1, 1, vec![c(1e-12, 0.0)]).unwrap();
        assert!(zero_in_numrange(&m, 1e-9).contains());
    }

    #[test]
    fn interior_point_of_normal_matrix() {
        // W = triangle with vertices 1, i, -1-i; origin strictly inside.
        let m = ComplexMatrix::from_row_major(
            3,
            3,
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, -1.0)],
        )
        .unwrap();
        let r = zero_in_numrange(&m, 1e-9);
        assert!(r.contains());
        assert!(r.residual().unwrap() <= r.threshold);
    }

    #[test]
    fn nilpotent_disk() {
        // W of [[0,2],[0,0]] is the closed unit disk; shifting by 0.999 keeps 0 inside.
        let m = ComplexMatrix::from_row_major(2, 2, vec![c(0.999, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.999, 0.0)]).unwrap();
        let r = zero_in_numrange(&m, 1e-9);
        assert!(r.contains());
        assert!(r.residual().unwrap() <= r.threshold);
        let m = ComplexMatrix::from_row_major(2, 2, vec![c(1.001, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(1.001, 0.0)]).unwrap();
        assert!(!zero_in_numrange(&m, 1e-9).contains());
    }

    #[test]
    fn path_hits_requested_point() {
        let m = ComplexMatrix::from_real_diagonal(&[3.0, -1.0]);
        let a = m.as_dmatrix();
        let z1 = DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let z2 = DVector::from_vec(vec![c(0.0, 0.0), c(0.0, 1.0)]);
        let z = path_to_target(a, &z1, &z2, 0.75);
        assert!((z.norm() - 1.0).abs() < 1e-14);
        assert!((quad(a, &z) - c(0.0, 0.0)).norm() < 1e-12);
    }
}
