use crate::error::{Error, Result};

/// Root of a continuous increasing function on `[lo, hi]`.
///
/// Alternates Illinois (modified regula falsi) steps with bisection and stops
/// once the bracket is narrower than `tol`.
pub fn find_root_increasing<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(lo <= hi) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "root bracket needs lo <= hi and tol > 0 (lo={lo}, hi={hi}, tol={tol})"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if !(fa <= 0.0 && fb >= 0.0) {
        return Err(Error::BracketInvalid { lo, hi, f_lo: fa, f_hi: fb });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut side = 0i8;
    for iter in 0..400 {
        let width = b - a;
        if width <= tol {
            break;
        }
        // alternate a secant (Illinois) step with plain bisection
        let mut x = if iter % 2 == 0 { (a * fb - b * fa) / (fb - fa) } else { 0.5 * (a + b) };
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
            if !(x > a && x < b) {
                break;
            }
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    Ok(0.5 * (a + b))
}
