//! Deterministic one-dimensional searches.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (√5 − 1)/2

/// Golden-section search for the maximizer of a unimodal `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol`; returns `(x, f(x))`,
/// with the endpoints also considered so monotone objectives land on a bound.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a) > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (a + b);
    let mut best = (mid, f(mid));
    for x in [lo, hi] {
        let fx = f(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

pub fn golden_section_min<F>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (x, fx) = golden_section_max(|x| -f(x), lo, hi, tol);
    (x, -fx)
}

/// Bisection for a root of `f` on `[lo, hi]`; `f(lo)` and `f(hi)` must differ in sign.
pub fn bisect<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoBracket { lo, hi });
    }
    let mut fa = fa;
    while (b - a) > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn finds_parabola_vertex() {
        let (x, fx) = golden_section_max(|x| -(x - 1.3) * (x - 1.3) + 2.0, 0.0, 8.0, 1e-10);
        // flat vertex: resolution is limited to ~sqrt(f64::EPSILON)
        assert_abs_diff_eq!(x, 1.3, epsilon = 1e-7);
        assert_abs_diff_eq!(fx, 2.0, epsilon = 1e-12);
        let (x, _) = golden_section_min(|x| (x - 5.0).abs(), 0.0, 8.0, 1e-10);
        assert_abs_diff_eq!(x, 5.0, epsilon = 1e-8);
    }

    #[test]
    fn monotone_objective_hits_bound() {
        let (x, _) = golden_section_max(|x| x, 0.0, 8.0, 1e-10);
        assert_eq!(x, 8.0);
    }

    #[test]
    fn bisection_root() {
        let x = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert_abs_diff_eq!(x, core::f64::consts::SQRT_2, epsilon = 1e-13);
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-9),
            Err(Error::NoBracket { .. })
        ));
    }
}
