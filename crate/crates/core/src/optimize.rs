//! One-dimensional search primitives shared by the conjugate, Luxemburg and
//! Amemiya computations.

/// (√5 − 1) / 2
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

/// Golden-section search for the minimum of a unimodal function on `[a, b]`.
///
/// Stops when the bracket is narrower than `x_tol`. Objective values of `+inf`
/// are allowed; they compare as larger than every finite value. The endpoints
/// are never evaluated.
pub fn golden_min<F>(mut f: F, a: f64, b: f64, x_tol: f64, max_iter: usize) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while hi - lo > x_tol && iterations < max_iter {
        iterations += 1;
        // ties move toward the left end; a flat-then-rising objective (e.g. an
        // indicator barrier on the right) keeps its finite plateau in the bracket
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        Minimum { x: x1, value: f1 }
    } else {
        Minimum { x: x2, value: f2 }
    }
}

/// Bisection for the threshold of a monotone predicate: `pred(lo)` is false,
/// `pred(hi)` is true, and the returned point satisfies the predicate.
pub fn bisect_threshold<P>(mut pred: P, mut lo: f64, mut hi: f64, rel_tol: f64, max_iter: usize) -> f64
where
    P: FnMut(f64) -> bool,
{
    for _ in 0..max_iter {
        if hi - lo <= rel_tol * hi.abs() {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Least-squares line fit `y ≈ slope * x + intercept`; returns
/// `(slope, intercept, rms_residual)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - slope * x - intercept;
            r * r
        })
        .sum();
    (slope, intercept, (rss / n).sqrt())
}
