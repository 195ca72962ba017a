//! Numerical Laplace inversion by the fixed Talbot contour (Abate–Valkó).
//!
//! Used only as an independent oracle for the closed-form scale functions.

use num_complex::Complex64;

use crate::error::{Error, Result};

const COARSE_NODES: usize = 24;
const FINE_NODES: usize = 32;

fn talbot<F>(transform: &F, x: f64, abscissa: f64, m: usize) -> f64
where
    F: Fn(Complex64) -> Complex64,
{
    let r = 2.0 * m as f64 / (5.0 * x);
    let shift = Complex64::new(abscissa, 0.0);
    let mut acc = 0.5 * (transform(shift + r) * (r * x).exp()).re;
    for k in 1..m {
        let theta = k as f64 * std::f64::consts::PI / m as f64;
        let cot = theta.cos() / theta.sin();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        let term = (s * x).exp() * transform(shift + s) * Complex64::new(1.0, sigma);
        acc += term.re;
    }
    (abscissa * x).exp() * r / m as f64 * acc
}

/// Invert `transform` at `x > 0`. `abscissa` must lie at or to the right of
/// every singularity of the transform (e.g. Φ(q) for `1/(ψ(s) − q)`).
///
/// The result is computed with two contour resolutions; disagreement beyond
/// the precision target is reported as [`Error::InversionUnstable`].
pub fn invert_laplace<F>(transform: F, x: f64, abscissa: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidParameter(format!("inversion point must be positive, got {x}")));
    }
    if !abscissa.is_finite() {
        return Err(Error::InvalidParameter("abscissa must be finite".into()));
    }
    let first = talbot(&transform, x, abscissa, COARSE_NODES);
    let second = talbot(&transform, x, abscissa, FINE_NODES);
    if !(first.is_finite() && second.is_finite())
        || (first - second).abs() > 1e-9 * second.abs().max(1.0) * (abscissa * x).exp().max(1.0)
    {
        return Err(Error::InversionUnstable { x, first, second });
    }
    Ok(second)
}
