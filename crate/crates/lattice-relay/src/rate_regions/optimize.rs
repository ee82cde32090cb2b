//! Grid search with golden-section refinement.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Argument tolerance of the refinements.
pub const ARG_TOL: f64 = 1e-7;

/// Maximizes a unimodal `f` on `[lo, hi]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    while hi - lo > ARG_TOL {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Best of a `steps`-interval grid on `[lo, hi]` refined by golden section on the
/// neighbouring cells; grid endpoints are kept when they win.
pub fn grid_golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, steps: usize) -> (f64, f64) {
    if hi <= lo {
        return (lo, f(lo));
    }
    let h = (hi - lo) / steps as f64;
    let mut best = (lo, f(lo));
    for i in 1..=steps {
        let x = if i == steps { hi } else { lo + i as f64 * h };
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let a = (best.0 - h).max(lo);
    let b = (best.0 + h).min(hi);
    let refined = golden_max(&f, a, b);
    if refined.1 > best.1 {
        refined
    } else {
        best
    }
}

/// Maximizes `min(inc(x), dec(x))` on `[lo, hi]` for nondecreasing `inc` and
/// nonincreasing `dec` by bisecting on their crossing.
pub fn crossing_max(inc: impl Fn(f64) -> f64, dec: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let f = |x: f64| inc(x).min(dec(x));
    if inc(hi) <= dec(hi) {
        return (hi, f(hi));
    }
    if inc(lo) >= dec(lo) {
        return (lo, f(lo));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inc(mid) < dec(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if f(lo) >= f(hi) {
        (lo, f(lo))
    } else {
        (hi, f(hi))
    }
}
