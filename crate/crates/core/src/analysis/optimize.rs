//! One- and two-dimensional numeric search.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("no sign change of the function on [{a}, {b}] (f(a) = {fa}, f(b) = {fb})")]
    NoBracket { a: f64, b: f64, fa: f64, fb: f64 },
    #[error("{0}")]
    Domain(String),
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Maximizer of a unimodal `f` on `[a, b]` by golden-section search, with
/// both endpoints also considered. Returns `(x, f(x))`.
pub fn golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    let mid = 0.5 * (lo + hi);
    [(a, f(a)), (b, f(b)), (mid, f(mid))]
        .into_iter()
        .fold((mid, f64::NEG_INFINITY), |best, cand| if cand.1 > best.1 { cand } else { best })
}

pub fn golden_min(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_max(|x| -f(x), a, b, tol);
    (x, -v)
}

/// Maximizer of `f` on `[a, b]` for functions that need not be unimodal:
/// an even grid of `cells` cells locates the best point, golden-section
/// search refines it within its neighbouring cells.
pub fn grid_golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64, cells: usize, tol: f64) -> (f64, f64) {
    if b <= a {
        return (a, f(a));
    }
    let cells = cells.max(1);
    let h = (b - a) / cells as f64;
    let (best_i, _) = (0..=cells)
        .map(|i| (i, f(a + h * i as f64)))
        .fold((0, f64::NEG_INFINITY), |best, cand| if cand.1 > best.1 { cand } else { best });
    let lo = (a + h * (best_i as f64 - 1.0)).max(a);
    let hi = (a + h * (best_i as f64 + 1.0)).min(b);
    let refined = golden_max(&f, lo, hi, tol);
    let grid_best = (a + h * best_i as f64, f(a + h * best_i as f64));
    if refined.1 >= grid_best.1 {
        refined
    } else {
        grid_best
    }
}

pub fn grid_golden_min(f: impl Fn(f64) -> f64, a: f64, b: f64, cells: usize, tol: f64) -> (f64, f64) {
    let (x, v) = grid_golden_max(|x| -f(x), a, b, cells, tol);
    (x, -v)
}

/// A root of `f` in `[a, b]` by bisection; `f(a)` and `f(b)` must differ in sign.
pub fn bisect(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64, NumericError> {
    let (mut lo, mut hi) = (a, b);
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(NumericError::NoBracket { a, b, fa: flo, fb: fhi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Maximum of `f` over a box: a `grid × grid` scan, then coordinate-wise
/// golden refinement around the best grid point. Returns `((x, y), f)`.
pub fn grid2_max(
    f: impl Fn(f64, f64) -> f64,
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    grid: usize,
    tol: f64,
) -> ((f64, f64), f64) {
    let grid = grid.max(1);
    let hx = (x1 - x0) / grid as f64;
    let hy = (y1 - y0) / grid as f64;
    let mut best = ((x0, y0), f64::NEG_INFINITY);
    for i in 0..=grid {
        for j in 0..=grid {
            let (x, y) = (x0 + hx * i as f64, y0 + hy * j as f64);
            let v = f(x, y);
            if v > best.1 {
                best = ((x, y), v);
            }
        }
    }
    let ((mut x, mut y), mut v) = best;
    for _ in 0..50 {
        let (nx, _) = golden_max(|t| f(t, y), (x - hx).max(x0), (x + hx).min(x1), tol);
        let (ny, nv) = golden_max(|t| f(nx, t), (y - hy).max(y0), (y + hy).min(y1), tol);
        let done = (nx - x).abs() < tol && (ny - y).abs() < tol;
        if nv >= v {
            x = nx;
            y = ny;
            v = nv;
        }
        if done {
            break;
        }
    }
    ((x, y), v)
}
