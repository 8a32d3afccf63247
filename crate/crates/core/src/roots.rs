//! Small real-root utilities shared by the boundary modules.

use serde::Serialize;

/// Relative size below which a discriminant is treated as exactly zero.
pub(crate) const DISCRIMINANT_TIE: f64 = 1e-14;

/// Square root of a discriminant, snapping values within rounding noise of
/// zero (relative to `scale`) to exactly zero. `None` when it is genuinely negative.
pub(crate) fn sqrt_discriminant(disc: f64, scale: f64) -> Option<f64> {
    if disc.abs() <= DISCRIMINANT_TIE * scale.abs() {
        Some(0.0)
    } else if disc > 0.0 {
        Some(disc.sqrt())
    } else {
        None
    }
}

/// Real roots of `a x^2 + b x + c`, ascending. A double root is reported twice.
/// Degenerates to the linear case when `a == 0`; an identically zero
/// polynomial has no isolated roots.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    let scale = b * b + (4.0 * a * c).abs();
    let Some(sq) = sqrt_discriminant(disc, scale) else {
        return Vec::new();
    };
    // cancellation-free form
    let sign = if b >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (b + sign * sq);
    let (r1, r2) = if q == 0.0 {
        (0.0, 0.0)
    } else {
        (q / a, c / q)
    };
    let mut roots = vec![r1, r2];
    roots.sort_by(f64::total_cmp);
    roots
}

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs.
/// Stops once the bracket is narrower than `tol`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Closed interval; `hi` may be `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Where a parameter-dependent polynomial is nonnegative, restricted to a domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterSet {
    /// All real roots of the polynomial, ascending (not clipped to the domain).
    pub roots: Vec<f64>,
    /// Maximal closed intervals of the domain on which the polynomial is `>= 0`.
    pub intervals: Vec<Interval>,
}

impl ParameterSet {
    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    /// Nonnegativity set of `a x^2 + b x + c` on `x > lo` (`lo_inclusive = false`)
    /// or `x >= lo`.
    pub(crate) fn of_quadratic(a: f64, b: f64, c: f64, lo: f64, lo_inclusive: bool) -> Self {
        let roots = quadratic_roots(a, b, c);
        let poly = |x: f64| (a * x + b) * x + c;

        let mut cuts = vec![lo];
        cuts.extend(roots.iter().copied().filter(|&r| r > lo));
        cuts.dedup();
        cuts.push(f64::INFINITY);

        let mut intervals: Vec<Interval> = Vec::new();
        for w in cuts.windows(2) {
            let (s, e) = (w[0], w[1]);
            let probe = if e.is_infinite() {
                s.abs().max(1.0) * 2.0 + s.max(0.0)
            } else {
                0.5 * (s + e)
            };
            if poly(probe) < 0.0 {
                continue;
            }
            match intervals.last_mut() {
                Some(last) if last.hi == s => last.hi = e,
                _ => intervals.push(Interval { lo: s, hi: e }),
            }
        }
        // isolated touching roots inside the domain still satisfy `>= 0`
        for &r in &roots {
            if r > lo && !intervals.iter().any(|i| i.contains(r)) {
                intervals.push(Interval { lo: r, hi: r });
            }
        }
        if !lo_inclusive {
            intervals.retain(|i| i.hi > lo);
        } else if poly(lo) >= 0.0 && !intervals.iter().any(|i| i.contains(lo)) {
            intervals.push(Interval { lo, hi: lo });
        }
        intervals.sort_by(|x, y| x.lo.total_cmp(&y.lo));
        ParameterSet { roots, intervals }
    }
}
