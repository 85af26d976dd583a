//! Acceptance criteria, one line per criterion.
//!
//! Run with `cargo test -p modortho --test acceptance`. Exits nonzero when any
//! criterion fails.

use std::time::Instant;

use modortho::daugavet::{module_daugavet_check, operator_daugavet_witness, rho_cube_identity};
use modortho::derivative::{rho_fd, rho_pair, Side, FD_TOL};
use modortho::matrix::ComplexMatrix;
use modortho::module::{inner_product, module_norm, ModuleElement};
use modortho::ortho::{
    bhatia_semrl_real_witness, bhatia_semrl_residuals, bhatia_semrl_witness, decide, is_bj, is_bj_real, Relation,
    Witness, DEFAULT_TOL,
};
use modortho::parallel::{map_indexed, Execution};
use modortho::state::{face_defect, top_face, DEFAULT_GAP_TOL};
use modortho::verify::gen::{degenerate_element, instance, random_element, rng_for};
use modortho::verify::oracles::{bj_grid_oracle, bj_real_grid_oracle, ORACLE_RADIUS, ORACLE_TOL};
use modortho::verify::suite::{diagonal_triple, run_suite, SuiteConfig};
use rand::Rng;

const SEED: u64 = 20240521;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn diagonal_values() -> Outcome {
    let (t, s, r) = diagonal_triple();
    let ts = rho_pair(&t, &s).unwrap();
    let tr = rho_pair(&t, &r).unwrap();
    let values = [
        (ts.rho_plus, 1.0),
        (ts.rho_minus, -1.0),
        (tr.rho_minus, -1.0),
        (tr.rho_plus, 0.0),
    ];
    let worst = values.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let d = |rel, a: &ModuleElement, b: &ModuleElement| decide(rel, a, b, DEFAULT_TOL).unwrap().holds;
    let table = [
        (d(Relation::Rho, &t, &s), true),
        (d(Relation::Ip, &t, &s), false),
        (d(Relation::Rho, &t, &r), false),
        (d(Relation::BjReal, &t, &r), true),
        (d(Relation::BjStrong, &t, &s), false),
        (d(Relation::BjStrong, &t, &r), true),
    ];
    let table_ok = table.iter().all(|(a, b)| a == b);
    outcome(
        worst <= 1e-9 && table_ok,
        format!("max value error {worst:.1e}, relation table {}", if table_ok { "matches" } else { "differs" }),
    )
}

fn cube_identity() -> Outcome {
    let xs = map_indexed(100, Execution::Auto, |i| {
        let mut rng = rng_for(SEED, 1000 + i as u64);
        if i % 4 == 0 {
            let rows = rng.random_range(2..=6);
            let cols = rng.random_range(2..=6);
            let k = if rows.min(cols) >= 3 && i % 8 == 0 { 3 } else { 2 };
            degenerate_element(&mut rng, rows, cols, k)
        } else {
            let rows = rng.random_range(1..=6);
            let cols = rng.random_range(1..=6);
            random_element(&mut rng, rows, cols)
        }
    });
    let mut degenerate = 0;
    let mut worst: f64 = 0.0;
    let mut failed = 0;
    for x in &xs {
        if top_face(x, DEFAULT_GAP_TOL).unwrap().dim() >= 2 {
            degenerate += 1;
        }
        let rep = rho_cube_identity(x, 1e-8);
        worst = worst.max(rep.residual / (1.0 + rep.norm4));
        failed += (rep.residual > 1e-8 * (1.0 + rep.norm4)) as usize;
    }
    outcome(
        failed == 0 && degenerate >= 10,
        format!("100 elements, {degenerate} with degenerate face, worst relative residual {worst:.1e}"),
    )
}

fn daugavet() -> Outcome {
    let mut worst_eq: f64 = 0.0;
    let mut worst_op: f64 = 0.0;
    let mut failed = 0;
    for i in 0..100u64 {
        let mut rng = rng_for(SEED, 2000 + i);
        let rows = rng.random_range(1..=6);
        let cols = rng.random_range(1..=6);
        let x = random_element(&mut rng, rows, cols);
        for (a, b) in [(1.0, 1.0), (0.5, 2.0), (3.0, 0.1)] {
            let r = module_daugavet_check(&x, a, b, 1e-9).unwrap();
            worst_eq = worst_eq.max(r.residual / (1.0 + r.rhs));
            failed += (r.residual > 1e-9 * (1.0 + r.rhs)) as usize;
        }
        let w = operator_daugavet_witness(x.matrix(), 1e-8).unwrap();
        let conds = [w.attain_residual, w.cube_attain_residual, w.alignment_residual];
        let c = conds.iter().copied().fold(0.0, f64::max);
        worst_op = worst_op.max(c);
        failed += (c > 1e-8) as usize;
    }
    let diag = operator_daugavet_witness(&ComplexMatrix::from_real_diagonal(&[2.0, 1.0]), 1e-8).unwrap();
    let diag_ok = (diag.norm_sum - 10.0).abs() < 1e-12 && (diag.vector[0].norm() - 1.0).abs() < 1e-12;
    outcome(
        failed == 0 && diag_ok,
        format!("worst equation residual {worst_eq:.1e} (rel), worst witness condition {worst_op:.1e}"),
    )
}

fn closed_form_vs_fd() -> Outcome {
    let errs = map_indexed(200, Execution::Auto, |i| {
        let inst = instance(SEED ^ 0x4, i as u64, 1);
        let (x, y) = (&inst.x, &inst.y);
        let s = 1.0 + module_norm(x) * module_norm(y);
        let p = rho_pair(x, y).unwrap();
        let plus = rho_fd(x, y, Side::Plus, FD_TOL);
        let minus = rho_fd(x, y, Side::Minus, FD_TOL);
        match (plus, minus) {
            (Ok(a), Ok(b)) => (a - p.rho_plus).abs().max((b - p.rho_minus).abs()) / s,
            _ => f64::INFINITY,
        }
    });
    let worst = errs.iter().copied().fold(0.0, f64::max);
    outcome(worst <= 1e-5, format!("200 pairs, worst relative gap {worst:.1e}"))
}

/// Certificate-false/oracle-true disagreements are allowed when the violation
/// is shallower than the oracle tolerance; each one is re-examined on a much
/// finer grid at zero tolerance and must show a genuine decrease.
fn bj_equivalence() -> Outcome {
    let rows = map_indexed(200, Execution::Auto, |i| {
        let inst = instance(SEED ^ 0x5, i as u64, 2);
        let (x, y) = (&inst.x, &inst.y);
        let cert = is_bj(x, y, DEFAULT_TOL).unwrap().holds;
        let oracle = bj_grid_oracle(x, y, ORACLE_RADIUS, 64, ORACLE_TOL).holds;
        let cert_r = is_bj_real(x, y, DEFAULT_TOL).unwrap().holds;
        let oracle_r = bj_real_grid_oracle(x, y, ORACLE_RADIUS, 64, ORACLE_TOL).holds;
        let confirmed = (cert || !oracle || !bj_grid_oracle(x, y, 40.0, 256, 0.0).holds)
            && (cert_r || !oracle_r || !bj_real_grid_oracle(x, y, 40.0, 4096, 0.0).holds);
        (cert, oracle, cert_r, oracle_r, confirmed)
    });
    type Row = (bool, bool, bool, bool, bool);
    let count = |f: &dyn Fn(&Row) -> bool| rows.iter().filter(|r| f(r)).count();
    let agree = count(&|r| r.0 == r.1);
    let conflicts = count(&|r| r.0 && !r.1);
    let agree_r = count(&|r| r.2 == r.3);
    let conflicts_r = count(&|r| r.2 && !r.3);
    let true_cases = count(&|r| r.0);
    let true_r = count(&|r| r.2);
    let unconfirmed = count(&|r| !r.4);
    outcome(
        conflicts == 0 && conflicts_r == 0 && unconfirmed == 0,
        format!(
            "complex {agree}/200 agree ({true_cases} true), real {agree_r}/200 agree ({true_r} true), \
             certificate-true/oracle-false conflicts {conflicts}+{conflicts_r}, \
             sub-tolerance disagreements confirmed on fine grid {}/{}",
            (400 - agree - agree_r) - unconfirmed,
            400 - agree - agree_r
        ),
    )
}

fn property_suite() -> Outcome {
    let report = run_suite(&SuiteConfig::new(SEED, 500));
    let needed = [
        "normderiv.p1",
        "normderiv.p2",
        "normderiv.p3",
        "normderiv.p4",
        "normderiv.p5",
        "stateface.cauchy-schwarz",
        "ortho.m-inequality",
        "ortho.chain-ip-strong-real",
        "ortho.chain-ip-rho-real",
    ];
    let missing: Vec<_> = needed.iter().filter(|n| report.property(n).is_none()).collect();
    let incomparable = report
        .examples
        .iter()
        .filter(|r| r.name.contains("without"))
        .all(|r| r.passed);
    let failures = report.failures();
    outcome(
        report.all_passed && missing.is_empty() && incomparable,
        format!(
            "{} properties over 500 instances, failures {:?}, missing {:?}",
            report.properties.len(),
            failures,
            missing
        ),
    )
}

fn witness_validity() -> Outcome {
    let worst = map_indexed(300, Execution::Auto, |i| {
        let inst = instance(SEED ^ 0x7, i as u64, 1);
        let (x, y) = (&inst.x, &inst.y);
        let xy = inner_product(x, y).unwrap();
        let mut worst: f64 = 0.0;
        for rel in [Relation::Bj, Relation::BjReal, Relation::BjStrong, Relation::Parallel] {
            let rep = decide(rel, x, y, DEFAULT_TOL).unwrap();
            if !rep.holds {
                continue;
            }
            match rep.witness {
                Some(Witness::State { state }) => {
                    let attain = face_defect(&state, x).unwrap();
                    let annih = match rel {
                        Relation::Bj => state.value(&xy).unwrap().norm(),
                        Relation::BjReal => state.value(&xy).unwrap().re.abs(),
                        _ => state.value(&xy.mul(&xy.adjoint()).unwrap()).unwrap().norm(),
                    };
                    worst = worst.max(attain).max(annih).max(state.validity_defect());
                }
                Some(Witness::Angle { xi, .. }) => {
                    let gap = module_norm(x) + module_norm(y) - x.axpy(xi, y).unwrap().norm();
                    worst = worst.max(gap);
                }
                _ => worst = f64::INFINITY,
            }
            if rel == Relation::Bj {
                let v = bhatia_semrl_witness(x, y, DEFAULT_TOL).unwrap();
                let (dn, ip) = bhatia_semrl_residuals(x, y, &v);
                worst = worst.max(dn.abs()).max(ip.norm());
            }
            if rel == Relation::BjReal {
                let v = bhatia_semrl_real_witness(x, y, DEFAULT_TOL).unwrap();
                let (dn, ip) = bhatia_semrl_residuals(x, y, &v);
                worst = worst.max(dn.abs()).max(ip.re.abs());
            }
        }
        worst
    })
    .into_iter()
    .fold(0.0, f64::max);
    outcome(worst <= 1e-8, format!("300 pairs, worst absolute residual {worst:.1e}"))
}

fn main() {
    // libtest passes flags such as --nocapture; nothing here takes arguments
    let criteria: [(&str, &str, fn() -> Outcome); 7] = [
        ("AC1", "diagonal triple values and relation table", diagonal_values),
        ("AC2", "cube identity for rho", cube_identity),
        ("AC3", "daugavet equation and operator witness", daugavet),
        ("AC4", "closed form vs finite differences", closed_form_vs_fd),
        ("AC5", "birkhoff-james vs grid oracles", bj_equivalence),
        ("AC6", "property suite", property_suite),
        ("AC7", "witness validity", witness_validity),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (id, name, run) in criteria {
        let t = Instant::now();
        let o = run();
        failed += !o.pass as usize;
        println!(
            "[{}] {id} {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 7 passed in {:.1}s", 7 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
