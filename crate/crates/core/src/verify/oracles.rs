//! Brute-force oracles that test the defining inequalities directly.
//!
//! Each oracle is one-sided: a `false` verdict comes with an explicit violating
//! coefficient and certifies non-orthogonality, while `true` only means no
//! violation was found at the sampled resolution.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::matrix::operator_norm_raw;
use crate::module::{inner_product, module_norm, ModuleElement};
use crate::search::golden_min;
use crate::verify::gen::{gaussian_matrix, rng_for};

pub const ORACLE_TOL: f64 = 1e-6;
pub const ORACLE_RADIUS: f64 = 4.0;
pub const ORACLE_GRID: usize = 64;
const MIN_RADIUS: f64 = 1e-4;
const MAX_COMPASS_ROUNDS: usize = 2000;

#[derive(Debug, Clone, Serialize)]
pub struct OracleVerdict {
    /// `false` certifies a violation; `true` is evidence only.
    pub holds: bool,
    /// `‖x‖ - min ‖x + λy‖` over the candidates tried.
    pub deficit: f64,
    /// The best coefficient found (`λ`, `α`, or `‖a‖` for the strong oracle).
    pub best: Complex64,
    pub evaluations: usize,
}

struct Objective<'a> {
    x: &'a DMatrix<Complex64>,
    y: &'a DMatrix<Complex64>,
    evaluations: usize,
}

impl Objective<'_> {
    fn at(&mut self, lambda: Complex64) -> f64 {
        self.evaluations += 1;
        operator_norm_raw(&(self.x + self.y * lambda))
    }
}

fn log_space(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(move |i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
}

fn verdict(norm_x: f64, best_norm: f64, best: Complex64, tol: f64, evaluations: usize) -> OracleVerdict {
    let deficit = norm_x - best_norm;
    OracleVerdict {
        holds: deficit <= tol,
        deficit,
        best,
        evaluations,
    }
}

/// Complex Birkhoff–James oracle: `‖x + λy‖` on a `grid × grid` polar grid
/// (radii log-spaced in `[1e-4, radius]`), then a compass search from the best
/// grid point. Reports a violation when some `‖x + λy‖ < ‖x‖ - tol`.
pub fn bj_grid_oracle(x: &ModuleElement, y: &ModuleElement, radius: f64, grid: usize, tol: f64) -> OracleVerdict {
    assert!(grid >= 2, "grid too small");
    let norm_x = module_norm(x);
    let mut obj = Objective {
        x: x.matrix().as_dmatrix(),
        y: y.matrix().as_dmatrix(),
        evaluations: 0,
    };
    let mut best = (Complex64::new(0.0, 0.0), norm_x);
    let angles: Vec<Complex64> = (0..grid)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / grid as f64))
        .collect();
    for r in log_space(MIN_RADIUS, radius, grid) {
        for &u in &angles {
            let lambda = u * r;
            let v = obj.at(lambda);
            if v < best.1 {
                best = (lambda, v);
            }
        }
    }
    // compass search; the objective is convex in λ
    let mut step = best.0.norm().max(MIN_RADIUS) * 0.5;
    let dirs = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    let mut rounds = 0;
    while step > 1e-12 * (1.0 + best.0.norm()) && rounds < MAX_COMPASS_ROUNDS {
        rounds += 1;
        let mut moved = false;
        for d in dirs {
            let lambda = best.0 + d * step;
            let v = obj.at(lambda);
            if v < best.1 {
                best = (lambda, v);
                moved = true;
            }
        }
        step *= if moved { 2.0 } else { 0.5 };
    }
    verdict(norm_x, best.1, best.0, tol, obj.evaluations)
}

/// Real Birkhoff–James oracle: `‖x + αy‖` for `±α` log-spaced in `[1e-4, radius]`,
/// then golden-section refinement between the neighbours of the best sample.
pub fn bj_real_grid_oracle(x: &ModuleElement, y: &ModuleElement, radius: f64, grid: usize, tol: f64) -> OracleVerdict {
    assert!(grid >= 2, "grid too small");
    let norm_x = module_norm(x);
    let mut obj = Objective {
        x: x.matrix().as_dmatrix(),
        y: y.matrix().as_dmatrix(),
        evaluations: 0,
    };
    let radii: Vec<f64> = log_space(MIN_RADIUS, radius, grid).collect();
    let mut samples: Vec<f64> = radii.iter().rev().map(|r| -r).collect();
    samples.push(0.0);
    samples.extend(radii.iter().copied());
    let values: Vec<f64> = samples.iter().map(|&a| obj.at(Complex64::new(a, 0.0))).collect();
    let j = (0..samples.len()).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    let lo = samples[j.saturating_sub(1)];
    let hi = samples[(j + 1).min(samples.len() - 1)];
    let (alpha, v) = golden_min(|a| obj.at(Complex64::new(a, 0.0)), lo, hi, 1e-13 * (1.0 + hi.abs()));
    let (alpha, v) = if v < values[j] { (alpha, v) } else { (samples[j], values[j]) };
    verdict(norm_x, v, Complex64::new(alpha, 0.0), tol, obj.evaluations)
}

/// Strong Birkhoff–James oracle: samples `‖x + ya‖` over Gaussian `a` at scales
/// `1e-2, 1e-1, 1, 10` (`trials` samples in total) and over the aimed family
/// `a = -c⟨y, x⟩` for `c = 10^{k/4}/‖y‖²`, `k = -24..=8`, refined in `log c`.
pub fn strong_bj_sample_oracle(x: &ModuleElement, y: &ModuleElement, trials: usize, seed: u64, tol: f64) -> OracleVerdict {
    let norm_x = module_norm(x);
    let (xm, ym) = (x.matrix().as_dmatrix(), y.matrix().as_dmatrix());
    let n = x.algebra_dim();
    let mut evaluations = 0;
    let mut eval = |a: &DMatrix<Complex64>| {
        evaluations += 1;
        operator_norm_raw(&(xm + ym * a))
    };
    let mut best = (0.0, norm_x);
    let mut rng = rng_for(seed, 0x5eed);
    const SCALES: [f64; 4] = [1e-2, 1e-1, 1.0, 10.0];
    for i in 0..trials {
        let scale = SCALES[i % SCALES.len()] * rng.random_range(0.5..2.0);
        let a = gaussian_matrix(&mut rng, n, n) * Complex64::new(scale, 0.0);
        let v = eval(&a);
        if v < best.1 {
            best = (a.norm(), v);
        }
    }
    let ny = module_norm(y);
    if ny > 0.0 {
        let yx = inner_product(y, x).expect("same shape").matrix().as_dmatrix().clone();
        let aimed = |log_c: f64| -> DMatrix<Complex64> { &yx * Complex64::new(-10f64.powf(log_c) / (ny * ny), 0.0) };
        let mut best_k = (0.0, f64::INFINITY);
        for k in -24..=8 {
            let log_c = k as f64 / 4.0;
            let v = eval(&aimed(log_c));
            if v < best_k.1 {
                best_k = (log_c, v);
            }
        }
        let (log_c, v) = golden_min(|t| eval(&aimed(t)), best_k.0 - 0.25, best_k.0 + 0.25, 1e-10);
        let (log_c, v) = if v < best_k.1 { (log_c, v) } else { best_k };
        if v < best.1 {
            best = (aimed(log_c).norm(), v);
        }
    }
    verdict(norm_x, best.1, Complex64::new(best.0, 0.0), tol, evaluations)
}
