//! The seeded property suite.
//!
//! Each instance runs every invariant independently and returns a list of
//! outcomes; aggregation is by sum and min over instances in index order, so
//! the report is the same byte for byte however the instances were scheduled.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::daugavet::{cube, module_daugavet_check, operator_daugavet_witness, rho_cube_identity};
use crate::derivative::{rho_fd, rho_pair, rho_plus, Side, FD_TOL};
use crate::matrix::{eigh, hermitian_spectrum, operator_norm, ComplexMatrix};
use crate::module::{inner_product, module_action, module_norm, AlgebraElement, ModuleElement};
use crate::ortho::{
    bhatia_semrl_real_witness, bhatia_semrl_residuals, bhatia_semrl_witness, decide, m_lower_bound, OrthoReport,
    Relation, Witness, DEFAULT_TOL,
};
use crate::parallel::{map_indexed, Execution};
use crate::state::{cauchy_schwarz_gap, face_defect, top_face, StateWitness, DEFAULT_GAP_TOL};
use crate::verify::gen::{instance, random_algebra, random_density, random_scalar, rng_for, Family};
use crate::verify::oracles::{
    bj_grid_oracle, bj_real_grid_oracle, strong_bj_sample_oracle, ORACLE_GRID, ORACLE_RADIUS, ORACLE_TOL,
};

/// Tolerance for witness equations.
pub const WITNESS_TOL: f64 = 1e-8;
/// Relative tolerance for algebraic identities.
pub const IDENTITY_TOL: f64 = 1e-8;
/// Tolerance of the closed form against finite differences.
pub const FD_AGREEMENT_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub exec: Execution,
    /// Run the grid and sampling oracles on every instance.
    pub oracles: bool,
    pub oracle_grid: usize,
    pub oracle_radius: f64,
    /// Smallest matrix dimension drawn.
    pub min_dim: usize,
}

impl SuiteConfig {
    pub fn new(seed: u64, trials: usize) -> Self {
        Self {
            seed,
            trials,
            exec: Execution::Auto,
            oracles: true,
            oracle_grid: ORACLE_GRID,
            oracle_radius: ORACLE_RADIUS,
            min_dim: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Smallest slack over all checks; negative exactly when a check failed.
    pub worst_margin: f64,
}

/// Closed-form decisions against a one-sided oracle. A certificate `true` with
/// an oracle `false` is a conflict; the reverse is tolerated as oracle
/// resolution.
#[derive(Debug, Clone, Default, Serialize)]
pub struct OracleAgreement {
    pub name: &'static str,
    pub total: usize,
    pub agree: usize,
    pub certificate_true_oracle_false: usize,
    pub certificate_false_oracle_true: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Value {
    Real(f64),
    Bool(bool),
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleCheck {
    pub name: &'static str,
    pub expected: Value,
    pub observed: Value,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub properties: Vec<PropertyResult>,
    pub oracles: Vec<OracleAgreement>,
    pub examples: Vec<ExampleCheck>,
    pub families: BTreeMap<String, usize>,
    pub all_passed: bool,
}

impl SuiteReport {
    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out: Vec<_> = self.properties.iter().filter(|p| p.passed < p.total).map(|p| p.name).collect();
        out.extend(self.examples.iter().filter(|r| !r.passed).map(|r| r.name));
        out.extend(self.oracles.iter().filter(|o| o.certificate_true_oracle_false > 0).map(|o| o.name));
        out
    }
}

#[derive(Debug, Clone, Copy)]
enum Tally {
    Check { ok: bool, margin: f64 },
    Oracle { certificate: bool, oracle: bool },
}

#[derive(Default)]
struct Outcomes(Vec<(&'static str, Tally)>);

impl Outcomes {
    /// Passes when `err ≤ allowed`; the slack `allowed - err` is the margin.
    fn within(&mut self, name: &'static str, err: f64, allowed: f64) {
        let ok = err <= allowed;
        let margin = if err.is_nan() { f64::NEG_INFINITY } else { allowed - err };
        self.0.push((name, Tally::Check { ok, margin }));
    }

    fn truth(&mut self, name: &'static str, ok: bool, margin: f64) {
        self.0.push((name, Tally::Check { ok, margin }));
    }

    fn oracle(&mut self, name: &'static str, certificate: bool, oracle: bool) {
        self.0.push((name, Tally::Oracle { certificate, oracle }));
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn diag(d: &[f64]) -> ModuleElement {
    ModuleElement::new(ComplexMatrix::from_real_diagonal(d))
}

/// `T = I₂`, `S = diag(-1, 1)`, `R = diag(-1, 0)`.
pub fn diagonal_triple() -> (ModuleElement, ModuleElement, ModuleElement) {
    (diag(&[1.0, 1.0]), diag(&[-1.0, 1.0]), diag(&[-1.0, 0.0]))
}

/// Largest normalized residual of the defining equations of a `true` report's
/// witness, or `None` when there is nothing to check.
pub fn witness_residual(x: &ModuleElement, y: &ModuleElement, report: &OrthoReport) -> Option<f64> {
    if !report.holds {
        return None;
    }
    let (nx, ny) = (module_norm(x), module_norm(y));
    let s = 1.0 + nx * ny;
    let xy = inner_product(x, y).ok()?;
    match report.witness.as_ref()? {
        Witness::State { state } => {
            let base = state.validity_defect().max(face_defect(state, x).ok()? / (1.0 + nx * nx));
            let annihilation = match report.relation {
                Relation::Bj => state.value(&xy).ok()?.norm() / s,
                Relation::BjReal => state.value(&xy).ok()?.re.abs() / s,
                Relation::BjStrong => {
                    let pos = xy.mul(&xy.adjoint()).ok()?;
                    state.value(&pos).ok()?.norm() / (1.0 + nx * nx * ny * ny)
                }
                _ => 0.0,
            };
            Some(base.max(annihilation))
        }
        Witness::Angle { xi, .. } => {
            let sum = x.axpy(*xi, y).ok()?.norm();
            Some(((nx + ny - sum) / (1.0 + nx + ny)).max(0.0))
        }
        Witness::Vector { .. } => None,
    }
}

fn check_matcore(out: &mut Outcomes, x: &ModuleElement, y: &ModuleElement) {
    let a = x.matrix();
    out.truth("matcore.adjoint-involution", a.adjoint().adjoint() == *a, 0.0);
    let (n1, n2) = (operator_norm(a), operator_norm(&a.adjoint()));
    out.within("matcore.norm-of-adjoint", (n1 - n2).abs(), 1e-12 * (1.0 + n1));
    let g = inner_product(x, y).unwrap();
    let h = g.matrix() + &g.matrix().adjoint();
    let spec = hermitian_spectrum(&h).unwrap();
    let recon = spec.reconstruct().max_abs_diff(&h);
    out.within("matcore.spectral-reconstruction", recon, 1e-10 * (1.0 + h.frobenius_norm()));
}

fn check_hmodule<R: Rng>(out: &mut Outcomes, rng: &mut R, x: &ModuleElement, y: &ModuleElement) {
    let (nx, ny) = (module_norm(x), module_norm(y));
    let s = 1.0 + nx * ny;
    let xy = inner_product(x, y).unwrap();
    let yx = inner_product(y, x).unwrap();
    out.within(
        "hmodule.conjugate-symmetry",
        yx.matrix().max_abs_diff(&xy.matrix().adjoint()),
        1e-12 * s,
    );
    let a = random_algebra(rng, x.algebra_dim(), 1.0);
    let lhs = inner_product(x, &module_action(y, &a).unwrap()).unwrap();
    let rhs = xy.mul(&a).unwrap();
    out.within(
        "hmodule.action-compatibility",
        lhs.matrix().max_abs_diff(rhs.matrix()),
        1e-12 * s * (1.0 + a.norm()),
    );
    let gram = inner_product(x, x).unwrap();
    let lmin = eigh(gram.matrix().as_dmatrix()).min();
    out.within("hmodule.positivity", -lmin, 1e-12 * (1.0 + nx * nx));
    let unit = module_action(x, &AlgebraElement::identity(x.algebra_dim())).unwrap();
    out.truth("hmodule.unit-action", unit == *x, 0.0);
    out.within("hmodule.norm-identity", (nx * nx - gram.norm()).abs(), 1e-12 * (1.0 + nx * nx));
    out.within(
        "hmodule.cube-norm",
        (module_norm(&cube(x)) - nx.powi(3)).abs(),
        1e-9 * (1.0 + nx.powi(3)),
    );
}

fn check_face<R: Rng>(out: &mut Outcomes, rng: &mut R, x: &ModuleElement, y: &ModuleElement) {
    let (nx, ny) = (module_norm(x), module_norm(y));
    let face = top_face(x, DEFAULT_GAP_TOL).unwrap();
    let v = face.isometry.as_dmatrix();
    let iso = (v.adjoint() * v - nalgebra::DMatrix::identity(face.dim(), face.dim())).norm();
    let gram = inner_product(x, x).unwrap();
    let eig = (gram.matrix().as_dmatrix() * v - v * c(face.lambda_max)).norm();
    out.within(
        "stateface.top-eigenspace",
        iso.max(eig / (1.0 + nx * nx)),
        1e-9,
    );

    let zeta = crate::verify::gen::gaussian_matrix(rng, face.dim(), 1).column(0).normalize();
    let state = crate::state::state_from_face_vector(&face, &zeta).unwrap();
    out.within(
        "stateface.face-states-attain",
        face_defect(&state, x).unwrap(),
        1e-9 * (1.0 + nx * nx),
    );

    let p = StateWitness::new(random_density(rng, x.algebra_dim())).unwrap();
    let scale = 1.0 + nx * nx * ny * ny;
    for st in [&p, &state] {
        let gap = cauchy_schwarz_gap(st, x, y).unwrap();
        out.within("stateface.cauchy-schwarz", -gap / scale, 1e-9);
    }
}

fn check_derivatives<R: Rng>(out: &mut Outcomes, rng: &mut R, x: &ModuleElement, y: &ModuleElement) {
    let (nx, ny) = (module_norm(x), module_norm(y));
    let s = 1.0 + nx * ny;
    let tol = IDENTITY_TOL * s;
    let pair = rho_pair(x, y).unwrap();
    let rp = |a: &ModuleElement, b: &ModuleElement| rho_plus(a, b).unwrap().value;

    // P1
    let self_rho = rp(x, x);
    let p1 = (pair.rho_minus - pair.rho_plus)
        .max(pair.rho_plus.abs() - nx * ny)
        .max((self_rho - nx * nx).abs() / s);
    out.within("normderiv.p1", p1, tol);
    out.within(
        "normderiv.rho-mid",
        (pair.rho_mid - 0.5 * (pair.rho_plus + pair.rho_minus)).abs(),
        1e-12 * s,
    );

    // P2
    let a = rp(&x.neg(), y);
    let b = rp(x, &y.neg());
    let p2 = (a - b).abs().max((b + pair.rho_minus).abs());
    out.within("normderiv.p2", p2, tol);

    // P3
    let alpha = random_scalar(rng);
    let shifted = y.axpy(alpha, x).unwrap();
    let p3 = (rp(x, &shifted) - alpha.re * nx * nx - pair.rho_plus).abs();
    out.within("normderiv.p3", p3, IDENTITY_TOL * (1.0 + nx * module_norm(&shifted)));

    // P4
    let (al, be) = (random_scalar(rng), random_scalar(rng));
    let lhs = rp(&x.scale(al), &y.scale(be));
    let phase = Complex64::from_polar(1.0, be.arg() - al.arg());
    let rhs = al.norm() * be.norm() * rp(x, &y.scale(phase));
    out.within("normderiv.p4", (lhs - rhs).abs(), IDENTITY_TOL * (1.0 + al.norm() * be.norm() * nx * ny));

    // P5: ρ+(x + ty, y) decreases to ρ+(x, y) as t ↓ 0
    let d: Vec<f64> = [1e-2, 1e-4, 1e-6]
        .iter()
        .map(|&t| rp(&x.axpy(c(t), y).unwrap(), y) - pair.rho_plus)
        .collect();
    let slack = 1e-9 * s;
    let monotone = d[0] + slack >= d[1] && d[1] + slack >= d[2] && d[2] >= -slack;
    let final_allowed = 1e-4 * (1.0 + ny * ny);
    out.truth(
        "normderiv.p5",
        monotone && d[2].abs() <= final_allowed,
        if monotone { final_allowed - d[2].abs() } else { -1.0 },
    );

    // witnesses attain the extrema and lie in the face
    let xy = inner_product(x, y).unwrap();
    let mut worst: f64 = 0.0;
    for (w, target) in [(&pair.max_witness, pair.rho_plus), (&pair.min_witness, pair.rho_minus)] {
        let w = w.as_ref().expect("nonzero x");
        worst = worst
            .max((w.value(&xy).unwrap().re - target).abs() / s)
            .max(face_defect(w, x).unwrap() / (1.0 + nx * nx))
            .max(w.validity_defect());
    }
    out.within("normderiv.witness-validity", worst, 1e-9);

    // closed form against the defining quotient
    let fd = |side| rho_fd(x, y, side, FD_TOL).map_or(f64::INFINITY, |v| v);
    let err = (fd(Side::Plus) - pair.rho_plus).abs().max((fd(Side::Minus) - pair.rho_minus).abs());
    out.within("normderiv.closed-form-vs-fd", err, FD_AGREEMENT_TOL * s);
}

fn check_relations<R: Rng>(
    out: &mut Outcomes,
    rng: &mut R,
    x: &ModuleElement,
    y: &ModuleElement,
    cfg: &SuiteConfig,
    oracle_seed: u64,
) {
    let (nx, ny) = (module_norm(x), module_norm(y));
    let s = 1.0 + nx * ny;
    let t = DEFAULT_TOL;
    let at = |r: Relation, tol: f64| decide(r, x, y, tol).unwrap();
    let reports: Vec<OrthoReport> = Relation::ALL.iter().map(|&r| at(r, t)).collect();
    let holds = |r: Relation| reports[Relation::ALL.iter().position(|&q| q == r).unwrap()].holds;

    // implication chains: stronger at t gives weaker at 10t
    let weak = |r: Relation| at(r, 10.0 * t).holds;
    let chain1 = (!holds(Relation::Ip) || weak(Relation::BjStrong))
        && (!holds(Relation::BjStrong) || weak(Relation::BjReal));
    let chain2 = (!holds(Relation::Ip) || weak(Relation::Rho)) && (!holds(Relation::Rho) || weak(Relation::BjReal));
    out.truth("ortho.chain-ip-strong-real", chain1, 0.0);
    out.truth("ortho.chain-ip-rho-real", chain2, 0.0);
    out.truth(
        "ortho.strong-implies-bj",
        !holds(Relation::BjStrong) || weak(Relation::Bj),
        0.0,
    );

    for rep in &reports {
        let needs = matches!(
            rep.relation,
            Relation::Bj | Relation::BjReal | Relation::BjStrong | Relation::Parallel
        );
        if rep.holds && needs {
            match witness_residual(x, y, rep) {
                Some(r) => out.within("ortho.witness-validity", r, WITNESS_TOL),
                None => out.truth("ortho.witness-validity", false, -1.0),
            }
        }
        out.truth("ortho.margin-consistency", rep.holds == (rep.margin >= -rep.tol), 0.0);
    }

    let scale_norm = 1.0 + nx;
    if holds(Relation::Bj) {
        let v = bhatia_semrl_witness(x, y, t).unwrap();
        let (dn, ip) = bhatia_semrl_residuals(x, y, &v);
        out.within("ortho.bhatia-semrl", (dn.abs() / scale_norm).max(ip.norm() / s), WITNESS_TOL);

        let m = m_lower_bound(y);
        let mut worst = f64::INFINITY;
        for _ in 0..100 {
            let lambda = Complex64::from_polar(2.0 * rng.random::<f64>().sqrt(), rng.random_range(0.0..TAU));
            let lhs = x.axpy(lambda, y).unwrap().norm().powi(2);
            let rhs = nx * nx + lambda.norm_sqr() * m;
            let allowed = 1e-8 * (1.0 + nx * nx + lambda.norm_sqr() * ny * ny);
            worst = worst.min(lhs - rhs + allowed);
        }
        out.truth("ortho.m-inequality", worst >= 0.0, worst);
    }
    if holds(Relation::BjReal) {
        let v = bhatia_semrl_real_witness(x, y, t).unwrap();
        let (dn, ip) = bhatia_semrl_residuals(x, y, &v);
        out.within("ortho.bhatia-semrl-real", (dn.abs() / scale_norm).max(ip.re.abs() / s), WITNESS_TOL);
    }
    out.within("ortho.m-nonnegative", -m_lower_bound(y), 1e-10 * (1.0 + ny * ny));

    // homogeneity: complex scalings for ip/bj/strong, real ones for the real relations
    let (cx, dy) = (random_scalar(rng), random_scalar(rng));
    let (rx, ry) = (
        c(cx.norm() * if rng.random_bool(0.5) { 1.0 } else { -1.0 }),
        c(dy.norm() * if rng.random_bool(0.5) { 1.0 } else { -1.0 }),
    );
    let mut same = true;
    for r in Relation::ALL {
        let (a, b) = match r {
            Relation::Ip | Relation::Bj | Relation::BjStrong => (cx, dy),
            Relation::BjReal | Relation::Rho => (rx, ry),
            Relation::Parallel => continue,
        };
        same &= decide(r, &x.scale(a), &y.scale(b), t).unwrap().holds == holds(r);
    }
    out.truth("ortho.homogeneity", same, 0.0);

    if cfg.oracles {
        let bj = bj_grid_oracle(x, y, cfg.oracle_radius, cfg.oracle_grid, ORACLE_TOL);
        out.oracle("bj-vs-grid", holds(Relation::Bj), bj.holds);
        let real = bj_real_grid_oracle(x, y, cfg.oracle_radius, cfg.oracle_grid, ORACLE_TOL);
        out.oracle("bj-real-vs-grid", holds(Relation::BjReal), real.holds);
        let strong = strong_bj_sample_oracle(x, y, 100, oracle_seed, ORACLE_TOL);
        out.oracle("bj-strong-vs-sampling", holds(Relation::BjStrong), strong.holds);
    }
}

fn check_daugavet<R: Rng>(out: &mut Outcomes, rng: &mut R, x: &ModuleElement) {
    let nx = module_norm(x);
    for (a, b) in [(1.0, 1.0), (0.5, 2.0), (3.0, 0.1)] {
        let r = module_daugavet_check(x, a, b, 1e-9).unwrap();
        out.within("daugavet.module-equation", r.residual, r.threshold);
    }
    let r = rho_cube_identity(x, IDENTITY_TOL);
    out.within("daugavet.cube-identity", r.residual.max(r.witness_residual), r.threshold);

    let w = operator_daugavet_witness(x.matrix(), IDENTITY_TOL).unwrap();
    let worst = (w.sum_residual / (1.0 + nx + nx.powi(3)))
        .max(w.attain_residual / (1.0 + nx))
        .max(w.cube_attain_residual / (1.0 + nx.powi(3)))
        .max(w.alignment_residual);
    out.within("daugavet.operator-witness", worst, IDENTITY_TOL);

    let par = decide(Relation::Parallel, x, &cube(x), DEFAULT_TOL).unwrap();
    let xi_err = match par.witness {
        Some(Witness::Angle { xi, .. }) => (xi - c(1.0)).norm(),
        _ => f64::INFINITY,
    };
    out.truth("daugavet.parallel-to-cube", par.holds && xi_err <= 1e-6, par.margin);

    let k = random_scalar(rng);
    let base = module_daugavet_check(x, 0.5, 2.0, 1e-9).unwrap();
    let scaled = module_daugavet_check(&x.scale(k), 0.5, 2.0 / k.norm_sqr(), 1e-9).unwrap();
    let allowed = 1e-9 * (1.0 + k.norm() * base.rhs);
    let err = (scaled.lhs - k.norm() * base.lhs).abs();
    out.truth("daugavet.scaling", err <= allowed && scaled.holds, allowed - err);
}

fn run_instance(x: &ModuleElement, y: &ModuleElement, cfg: &SuiteConfig, stream: u64) -> Outcomes {
    let mut rng = rng_for(cfg.seed ^ 0x9e37_79b9_7f4a_7c15, stream);
    let mut out = Outcomes::default();
    check_matcore(&mut out, x, y);
    check_hmodule(&mut out, &mut rng, x, y);
    if module_norm(x) > crate::state::ZERO_NORM {
        check_face(&mut out, &mut rng, x, y);
        check_derivatives(&mut out, &mut rng, x, y);
        check_daugavet(&mut out, &mut rng, x);
    }
    check_relations(&mut out, &mut rng, x, y, cfg, stream);
    out
}

fn example_checks() -> Vec<ExampleCheck> {
    let (t, s, r) = diagonal_triple();
    let mut out = Vec::new();
    let mut real = |name, expected: f64, observed: f64| {
        out.push(ExampleCheck {
            name,
            expected: Value::Real(expected),
            observed: Value::Real(observed),
            passed: (observed - expected).abs() <= 1e-9,
        })
    };
    let ts = rho_pair(&t, &s).unwrap();
    let tr = rho_pair(&t, &r).unwrap();
    real("rho_plus(T,S)", 1.0, ts.rho_plus);
    real("rho_minus(T,S)", -1.0, ts.rho_minus);
    real("rho(T,S)", 0.0, ts.rho_mid);
    real("rho_plus(T,R)", 0.0, tr.rho_plus);
    real("rho_minus(T,R)", -1.0, tr.rho_minus);
    real("m(S)", 1.0, m_lower_bound(&s));
    real("m(R)", 0.0, m_lower_bound(&r));
    let ts_ip = inner_product(&t, &s).unwrap();
    real("|<T,S> - S|", 0.0, ts_ip.matrix().max_abs_diff(s.matrix()));
    let cc = AlgebraElement::new(ComplexMatrix::from_real_diagonal(&[1.0, -1.0])).unwrap();
    real("|T + SC|", 0.0, t.add(&module_action(&s, &cc).unwrap()).unwrap().norm());
    let worst = (-40..=40)
        .map(|i| {
            let a = i as f64 / 8.0;
            (t.axpy(c(a), &r).unwrap().norm() - (1.0 - a).abs().max(1.0)).abs()
        })
        .fold(0.0, f64::max);
    real("max |‖T+aR‖ - max(|1-a|,1)|", 0.0, worst);

    let mut boolean = |name, expected: bool, observed: bool| {
        out.push(ExampleCheck {
            name,
            expected: Value::Bool(expected),
            observed: Value::Bool(observed),
            passed: expected == observed,
        })
    };
    let d = |rel, a: &ModuleElement, b: &ModuleElement| decide(rel, a, b, DEFAULT_TOL).unwrap().holds;
    boolean("T rho-orthogonal to S", true, d(Relation::Rho, &t, &s));
    boolean("T orthogonal to S", false, d(Relation::Ip, &t, &s));
    boolean("T rho-orthogonal to R", false, d(Relation::Rho, &t, &r));
    boolean("T real-BJ orthogonal to R", true, d(Relation::BjReal, &t, &r));
    boolean("T strongly BJ orthogonal to S", false, d(Relation::BjStrong, &t, &s));
    boolean("T strongly BJ orthogonal to R", true, d(Relation::BjStrong, &t, &r));
    boolean(
        "rho without strong (T,S)",
        true,
        d(Relation::Rho, &t, &s) && !d(Relation::BjStrong, &t, &s),
    );
    boolean(
        "strong without rho (T,R)",
        true,
        d(Relation::BjStrong, &t, &r) && !d(Relation::Rho, &t, &r),
    );
    boolean(
        "sampling finds T + SC violation",
        false,
        strong_bj_sample_oracle(&t, &s, 100, 0, ORACLE_TOL).holds,
    );
    boolean(
        "sampling finds no T + RA violation",
        true,
        strong_bj_sample_oracle(&t, &r, 100, 0, ORACLE_TOL).holds,
    );
    out
}

/// Runs every invariant on `cfg.trials` seeded instances plus the three pairs
/// of the `M₂(ℂ)` example, and aggregates the outcomes.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let seeded = map_indexed(cfg.trials, cfg.exec, |i| {
        let inst = instance(cfg.seed, i as u64, cfg.min_dim);
        (inst.family, run_instance(&inst.x, &inst.y, cfg, i as u64))
    });
    let (t, s, r) = diagonal_triple();
    let fixed = [(&t, &s), (&t, &r), (&s, &r)];
    let fixed_out: Vec<Outcomes> = fixed
        .iter()
        .enumerate()
        .map(|(k, (x, y))| run_instance(x, y, cfg, u64::MAX - k as u64))
        .collect();

    let mut families: BTreeMap<String, usize> = BTreeMap::new();
    for (f, _) in &seeded {
        *families.entry(family_name(*f)).or_default() += 1;
    }

    let mut properties: Vec<PropertyResult> = Vec::new();
    let mut oracles: Vec<OracleAgreement> = Vec::new();
    for outcomes in seeded.iter().map(|(_, o)| o).chain(fixed_out.iter()) {
        for &(name, tally) in &outcomes.0 {
            match tally {
                Tally::Check { ok, margin } => {
                    let p = match properties.iter_mut().find(|p| p.name == name) {
                        Some(p) => p,
                        None => {
                            properties.push(PropertyResult {
                                name,
                                passed: 0,
                                total: 0,
                                worst_margin: f64::INFINITY,
                            });
                            properties.last_mut().unwrap()
                        }
                    };
                    p.total += 1;
                    p.passed += ok as usize;
                    p.worst_margin = p.worst_margin.min(if ok { margin.max(0.0) } else { margin.min(-f64::MIN_POSITIVE) });
                }
                Tally::Oracle { certificate, oracle } => {
                    let o = match oracles.iter_mut().find(|o| o.name == name) {
                        Some(o) => o,
                        None => {
                            oracles.push(OracleAgreement {
                                name,
                                ..Default::default()
                            });
                            oracles.last_mut().unwrap()
                        }
                    };
                    o.total += 1;
                    match (certificate, oracle) {
                        (true, false) => o.certificate_true_oracle_false += 1,
                        (false, true) => o.certificate_false_oracle_true += 1,
                        _ => o.agree += 1,
                    }
                }
            }
        }
    }
    properties.sort_by_key(|p| p.name);
    oracles.sort_by_key(|o| o.name);
    let examples = example_checks();
    let all_passed = properties.iter().all(|p| p.passed == p.total)
        && oracles.iter().all(|o| o.certificate_true_oracle_false == 0)
        && examples.iter().all(|r| r.passed);
    SuiteReport {
        seed: cfg.seed,
        trials: cfg.trials,
        properties,
        oracles,
        examples,
        families,
        all_passed,
    }
}

/// [`run_suite`] with the default configuration.
pub fn property_suite(seed: u64, trials: usize, exec: Execution) -> SuiteReport {
    let mut cfg = SuiteConfig::new(seed, trials.max(1));
    cfg.exec = exec;
    run_suite(&cfg)
}

/// The serialized name of a family.
pub fn family_name(f: Family) -> String {
    serde_json::to_value(f).unwrap().as_str().unwrap().to_owned()
}
