//! Bracketed bisection for monotone scalar equations.

/// Outcome of a bisection run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    /// Best abscissa found (smallest |f| among the final bracket ends).
    pub root: f64,
    /// Function value at `root`.
    pub value: f64,
    pub iterations: usize,
    /// Width of the final bracket.
    pub width: f64,
}

/// Bisects `f` on `[lo, hi]`, where `f_lo` and `f_hi` have opposite signs
/// (or one of them is zero).
///
/// Stops when the bracket is narrower than `x_tol`, when the midpoint can no
/// longer be represented between the ends, or after `max_iter` halvings.
/// Returns `None` if the end values do not bracket a root.
pub fn bisect<F, E>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    mut f_hi: f64,
    x_tol: f64,
    max_iter: usize,
) -> Result<Option<Bisection>, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    if f_lo == 0.0 {
        return Ok(Some(Bisection { root: lo, value: 0.0, iterations: 0, width: hi - lo }));
    }
    if f_hi == 0.0 {
        return Ok(Some(Bisection { root: hi, value: 0.0, iterations: 0, width: hi - lo }));
    }
    if (f_lo < 0.0) == (f_hi < 0.0) {
        return Ok(None);
    }
    let mut iterations = 0;
    while iterations < max_iter && hi - lo > x_tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        iterations += 1;
        if f_mid == 0.0 {
            return Ok(Some(Bisection { root: mid, value: 0.0, iterations, width: 0.0 }));
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    let (root, value) = if f_lo.abs() <= f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    Ok(Some(Bisection { root, value, iterations, width: hi - lo }))
}
