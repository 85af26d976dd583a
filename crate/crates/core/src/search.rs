//! One-dimensional derivative-free searches shared by the angle scans.

use std::f64::consts::TAU;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Angles used by the coarse scans.
pub const ANGLE_GRID: usize = 720;

/// Golden-section minimization of `f` on `[a, b]` down to bracket width `width`.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, width: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > width {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Global minimum of a `2π`-periodic function: a uniform grid of `grid` angles,
/// then golden-section refinement around the `max_refine` lowest grid-local minima.
pub fn minimize_periodic<F: FnMut(f64) -> f64>(mut f: F, grid: usize, max_refine: usize) -> (f64, f64) {
    let h = TAU / grid as f64;
    let values: Vec<f64> = (0..grid).map(|j| f(j as f64 * h)).collect();
    let mut minima: Vec<usize> = (0..grid)
        .filter(|&j| {
            let prev = values[(j + grid - 1) % grid];
            let next = values[(j + 1) % grid];
            values[j] <= prev && values[j] <= next
        })
        .collect();
    minima.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    minima.truncate(max_refine.max(1));

    let mut best = (0.0, f64::INFINITY);
    for &j in &minima {
        if values[j] < best.1 {
            best = (j as f64 * h, values[j]);
        }
        let centre = j as f64 * h;
        let (t, v) = golden_min(&mut f, centre - h, centre + h, 1e-12);
        if v < best.1 {
            best = (t.rem_euclid(TAU), v);
        }
    }
    best
}

/// Maximum counterpart of [`minimize_periodic`].
pub fn maximize_periodic<F: FnMut(f64) -> f64>(mut f: F, grid: usize, max_refine: usize) -> (f64, f64) {
    let (t, v) = minimize_periodic(|t| -f(t), grid, max_refine);
    (t, -v)
}
