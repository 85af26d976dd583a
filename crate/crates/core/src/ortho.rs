//! Decision procedures for the orthogonality and parallelism relations.
//!
//! Every predicate scales its tolerance by the natural size of the quantity it
//! thresholds and reports a signed margin, normalized so that
//! `holds == (margin >= -tol)`.

use std::f64::consts::TAU;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::derivative::{face_real_spectrum, rho_pair};
use crate::error::{Error, Result};
use crate::matrix::{eigh, operator_norm, operator_norm_raw};
use crate::module::{inner_product, module_norm, AlgebraElement, ModuleElement};
use crate::numrange::{zero_in_numrange, ZeroMembership};
use crate::parallel::{map_indexed, Execution};
use crate::search::{maximize_periodic, ANGLE_GRID};
use crate::state::{face_compression, state_from_face_vector, top_face, StateWitness, TopFace, DEFAULT_GAP_TOL, ZERO_NORM};

/// Default relative tolerance for every predicate.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `⟨x, y⟩ = 0`.
    Ip,
    /// `‖x‖ ≤ ‖x + λy‖` for all complex `λ`.
    Bj,
    /// `‖x‖ ≤ ‖x + αy‖` for all real `α`.
    BjReal,
    /// `‖x‖ ≤ ‖x + ya‖` for all algebra elements `a`.
    BjStrong,
    /// `ρ+(x, y) + ρ-(x, y) = 0`.
    Rho,
    /// `‖x + ξy‖ = ‖x‖ + ‖y‖` for some unimodular `ξ`.
    Parallel,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::Ip,
        Relation::Bj,
        Relation::BjReal,
        Relation::BjStrong,
        Relation::Rho,
        Relation::Parallel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::Ip => "ip",
            Relation::Bj => "bj",
            Relation::BjReal => "bj-real",
            Relation::BjStrong => "bj-strong",
            Relation::Rho => "rho",
            Relation::Parallel => "parallel",
        }
    }
}

impl std::str::FromStr for Relation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Relation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown relation '{s}'")))
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    State { state: StateWitness },
    Vector { vector: Vec<Complex64> },
    /// `ξ = e^{iθ}`.
    Angle { theta: f64, xi: Complex64 },
}

impl Witness {
    pub fn state(&self) -> Option<&StateWitness> {
        match self {
            Witness::State { state } => Some(state),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrthoReport {
    pub relation: Relation,
    pub holds: bool,
    pub margin: f64,
    pub tol: f64,
    pub witness: Option<Witness>,
}

impl OrthoReport {
    fn new(relation: Relation, margin: f64, tol: f64, witness: Option<Witness>) -> Self {
        let holds = margin >= -tol;
        Self {
            relation,
            holds,
            margin,
            tol,
            witness: if holds || relation == Relation::Parallel { witness } else { None },
        }
    }
}

fn check_shapes(x: &ModuleElement, y: &ModuleElement) -> Result<()> {
    if x.shape() != y.shape() {
        return Err(Error::ShapeMismatch {
            left: x.shape(),
            right: y.shape(),
        });
    }
    Ok(())
}

fn is_zero(x: &ModuleElement) -> bool {
    module_norm(x) <= ZERO_NORM
}

fn scale(x: &ModuleElement, y: &ModuleElement) -> f64 {
    1.0 + module_norm(x) * module_norm(y)
}

fn any_state(x: &ModuleElement) -> Option<Witness> {
    Some(Witness::State {
        state: StateWitness::maximally_mixed(x.algebra_dim()),
    })
}

/// `x ⊥ y`: `‖⟨x,y⟩‖ ≤ tol·(1 + ‖x‖‖y‖)`.
pub fn is_ip_orthogonal(x: &ModuleElement, y: &ModuleElement, tol: f64) -> Result<OrthoReport> {
    let xy = inner_product(x, y)?;
    let margin = -operator_norm(xy.matrix()) / scale(x, y);
    Ok(OrthoReport::new(Relation::Ip, margin, tol, None))
}

/// Face of `x` and the membership decision for `0 ∈ W(V*⟨x,y⟩V)`.
pub(crate) fn bj_membership(
    x: &ModuleElement,
    y: &ModuleElement,
    tol: f64,
) -> Result<(TopFace, ZeroMembership)> {
    let face = top_face(x, DEFAULT_GAP_TOL)?;
    let comp = face_compression(&face, &inner_product(x, y)?)?;
    let local_tol = tol * scale(x, y) / (1.0 + operator_norm(&comp));
    let membership = zero_in_numrange(&comp, local_tol);
    Ok((face, membership))
}

/// Birkhoff–James orthogonality, decided as "some attaining state annihilates
/// `⟨x, y⟩`", i.e. `0 ∈ W(V*⟨x,y⟩V)`.
pub fn is_bj(x: &ModuleElement, y: &ModuleElement, tol: f64) -> Result<OrthoReport> {
    check_shapes(x, y)?;
    if is_zero(x) {
        return Ok(OrthoReport::new(Relation::Bj, 0.0, tol, any_state(x)));
    }
    let (face, membership) = bj_membership(x, y, tol)?;
    let margin = 2.0 * membership.min_support / scale(x, y);
    let witness = match membership.zeta() {
        Some(zeta) => Some(Witness::State {
            state: state_from_face_vector(&face, &zeta.normalize())?,
        }),
        None => None,
    };
    let mut report = OrthoReport::new(Relation::Bj, margin, tol, witness);
    report.holds = membership.contains();
    Ok(report)
}

/// Real Birkhoff–James orthogonality: `ρ-(x,y) ≤ 0 ≤ ρ+(x,y)`. The witness
/// mixes the minimizing and maximizing states so that `Re φ(⟨x,y⟩) = 0`.
pub fn is_bj_real(x: &ModuleElement, y: &ModuleElement, tol: f64) -> Result<OrthoReport> {
    check_shapes(x, y)?;
    if is_zero(x) {
        return Ok(OrthoReport::new(Relation::BjReal, 0.0, tol, any_state(x)));
    }
    let pair = rho_pair(x, y)?;
    let (plus, minus) = (pair.rho_plus, pair.rho_minus);
    let margin = plus.min(-minus) / scale(x, y);
    let (max_w, min_w) = (pair.max_witness.unwrap(), pair.min_witness.unwrap());
    let state = if plus <= 0.0 {
        max_w
    } else if minus >= 0.0 {
        min_w
    } else {
        StateWitness::mixture(plus / (plus - minus), &min_w, &max_w)?
    };
    Ok(OrthoReport::new(
        Relation::BjReal,
        margin,
        tol,
        Some(Witness::State { state }),
    ))
}

/// Strong Birkhoff–James orthogonality: some attaining state annihilates the
/// positive element `⟨x,y⟩⟨y,x⟩`, i.e. `λ_min(V*⟨x,y⟩⟨y,x⟩V) ≤ tol·(1 + ‖x‖²‖y‖²)`.
pub fn is_bj_strong(x: &ModuleElement, y: &ModuleElement, tol: f64) -> Result<OrthoReport> {
    check_shapes(x, y)?;
    if is_zero(x) {
        return Ok(OrthoReport::new(Relation::BjStrong, 0.0, tol, any_state(x)));
    }
    let face = top_face(x, DEFAULT_GAP_TOL)?;
    let xy = inner_product(x, y)?;
    let positive = xy.mul(&xy.adjoint())?;
    let comp = face_compression(&face, &positive)?;
    let spec = eigh(comp.as_dmatrix());
    let (nx, ny) = (module_norm(x), module_norm(y));
    let margin = -spec.min() / (1.0 + nx * nx * ny * ny);
    let state = state_from_face_vector(&face, &spec.vector(spec.dim() - 1))?;
    Ok(OrthoReport::new(
        Relation::BjStrong,
        margin,
        tol,
        Some(Witness::State { state }),
    ))
}

/// ρ-orthogonality: `|ρ+(x,y) + ρ-(x,y)| ≤ tol·(1 + ‖x‖‖y‖)`.
pub fn is_rho_orthogonal(x: &ModuleElement, y: &ModuleElement, tol: f64) -> Result<OrthoReport> {
    let pair = rho_pair(x, y)?;
    let margin = -(pair.rho_plus + pair.rho_minus).abs() / scale(x, y);
    Ok(OrthoReport::new(Relation::Rho, margin, tol, None))
}

/// Norm-parallelism over unimodular `ξ`: the best `‖x + e^{iθ}y‖` found by a
/// 720-angle scan plus golden-section refinement, compared with `‖x‖ + ‖y‖`
/// relative to `1 + ‖x‖ + ‖y‖`.
pub fn is_norm_parallel(x: &ModuleElement, y: &ModuleElement, tol: f64) -> Result<OrthoReport> {
    check_shapes(x, y)?;
    let (nx, ny) = (module_norm(x), module_norm(y));
    let (xm, ym) = (x.matrix().as_dmatrix(), y.matrix().as_dmatrix());
    let objective = |t: f64| operator_norm_raw(&(xm + ym * Complex64::from_polar(1.0, t)));
    let (theta, best) = if nx <= ZERO_NORM || ny <= ZERO_NORM {
        (0.0, objective(0.0))
    } else {
        maximize_periodic(objective, ANGLE_GRID, 8)
    };
    let theta = theta.rem_euclid(TAU);
    let margin = (best - nx - ny) / (1.0 + nx + ny);
    Ok(OrthoReport::new(
        Relation::Parallel,
        margin,
        tol,
        Some(Witness::Angle {
            theta,
            xi: Complex64::from_polar(1.0, theta),
        }),
    ))
}

/// Dispatches on `relation`.
pub fn decide(relation: Relation, x: &ModuleElement, y: &ModuleElement, tol: f64) -> Result<OrthoReport> {
    match relation {
        Relation::Ip => is_ip_orthogonal(x, y, tol),
        Relation::Bj => is_bj(x, y, tol),
        Relation::BjReal => is_bj_real(x, y, tol),
        Relation::BjStrong => is_bj_strong(x, y, tol),
        Relation::Rho => is_rho_orthogonal(x, y, tol),
        Relation::Parallel => is_norm_parallel(x, y, tol),
    }
}

/// Decides `relation` for every pair; results are in input order.
pub fn decide_batch(
    relation: Relation,
    pairs: &[(ModuleElement, ModuleElement)],
    tol: f64,
    exec: Execution,
) -> Vec<Result<OrthoReport>> {
    map_indexed(pairs.len(), exec, |i| decide(relation, &pairs[i].0, &pairs[i].1, tol))
}

/// `m(y) = inf φ(⟨y,y⟩) = λ_min(⟨y,y⟩)` over all states.
pub fn m_lower_bound(y: &ModuleElement) -> f64 {
    let g = inner_product(y, y).expect("same shape");
    eigh(g.matrix().as_dmatrix()).min()
}

fn basis_vector(n: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(n);
    v[0] = Complex64::new(1.0, 0.0);
    v
}

/// Unit `v` with `‖Xv‖ = ‖X‖` and `⟨Xv, Yv⟩ = 0`, from the numerical-range
/// certificate of Birkhoff–James orthogonality.
pub fn bhatia_semrl_witness(x: &ModuleElement, y: &ModuleElement, tol: f64) -> Result<DVector<Complex64>> {
    check_shapes(x, y)?;
    if is_zero(x) {
        return Ok(basis_vector(x.algebra_dim()));
    }
    let (face, membership) = bj_membership(x, y, tol)?;
    match membership.zeta() {
        Some(zeta) => Ok(face.embed(&zeta.normalize())),
        None => Err(Error::PreconditionFailed(
            "x is not Birkhoff-James orthogonal to y".into(),
        )),
    }
}

/// Unit `v` with `‖Xv‖ = ‖X‖` and `Re⟨Xv, Yv⟩ = 0`, when the real relation holds.
pub fn bhatia_semrl_real_witness(x: &ModuleElement, y: &ModuleElement, tol: f64) -> Result<DVector<Complex64>> {
    check_shapes(x, y)?;
    let Some((face, spec)) = face_real_spectrum(x, y)? else {
        return Ok(basis_vector(x.algebra_dim()));
    };
    let (plus, minus) = (spec.max(), spec.min());
    let s = scale(x, y);
    if plus < -tol * s || minus > tol * s {
        return Err(Error::PreconditionFailed(
            "x is not real Birkhoff-James orthogonal to y".into(),
        ));
    }
    let top = spec.vector(0);
    let bottom = spec.vector(spec.dim() - 1);
    let zeta = if plus <= 0.0 {
        top
    } else if minus >= 0.0 {
        bottom
    } else {
        // eigenvectors are orthogonal, so cross terms vanish
        let w = (-minus / (plus - minus)).clamp(0.0, 1.0);
        top * Complex64::new(w.sqrt(), 0.0) + bottom * Complex64::new((1.0 - w).sqrt(), 0.0)
    };
    Ok(face.embed(&zeta.normalize()))
}

/// Evaluates `‖Xv‖ - ‖X‖` and `⟨Xv, Yv⟩` for a candidate vector.
pub fn bhatia_semrl_residuals(x: &ModuleElement, y: &ModuleElement, v: &DVector<Complex64>) -> (f64, Complex64) {
    let xv = x.matrix().apply(v);
    let yv = y.matrix().apply(v);
    (xv.norm() - module_norm(x), xv.dotc(&yv))
}

/// `φ(a)` helper for witness checks.
pub fn witness_value(w: &StateWitness, a: &AlgebraElement) -> Complex64 {
    w.value(a).expect("dimension checked by caller")
}
