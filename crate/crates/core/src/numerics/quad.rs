//! Adaptive Gauss–Kronrod (10/21 point) quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances shared by every quadrature in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Relative envelope mass below which infinite tails are dropped.
    pub tail_cut_mass: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-9, abs_tol: 1e-12, max_subdivisions: 200, tail_cut_mass: 1e-12 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(self.rel_tol) && ok(self.abs_tol) && ok(self.tail_cut_mass)) {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerances must be positive: {self:?}"
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidParameter("max_subdivisions must be >= 1".into()));
        }
        Ok(())
    }
}

/// Integral value together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        return Err(Error::DomainError(format!("non-finite integrand on [{a}, {b}]")));
    }
    Ok(Panel { a, b, value, error: err })
}

/// Integrate a fallible integrand over `[a, b]`, splitting first at `breaks`
/// (points outside `(a, b)` are ignored).
pub fn try_integrate_with_breaks<F>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    try_integrate_noisy(f, a, b, breaks, cfg, &|| 0.0)
}

/// As [`try_integrate_with_breaks`], for integrands that are themselves
/// numerical estimates. `noise()` bounds the absolute error the integrand
/// noise contributes to the integral; refinement stops once the estimated
/// error falls below it, since further bisection cannot resolve anything
/// finer. Callers must add that bound to the reported error.
pub(crate) fn try_integrate_noisy<F>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
    noise: &dyn Fn() -> f64,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "finite limits required, got [{a}, {b}]; use integrate_to_infinity"
        )));
    }
    if a == b {
        return Ok(Estimate::default());
    }
    if a > b {
        let est = try_integrate_noisy(f, b, a, breaks, cfg, noise)?;
        return Ok(Estimate { value: -est.value, error: est.error });
    }
    let mut nodes = vec![a];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&p| p > a && p < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    nodes.extend(inner);
    nodes.push(b);

    let mut panels = Vec::with_capacity(nodes.len() + 16);
    for w in nodes.windows(2) {
        panels.push(gk21(&mut f, w[0], w[1])?);
    }
    let mut subdivisions = 0usize;
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        let target = cfg.abs_tol.max(cfg.rel_tol * total.abs()).max(noise());
        if err <= target {
            return Ok(Estimate { value: total, error: err });
        }
        let (idx, worst) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, p)| (i, *p))
            .expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if subdivisions >= cfg.max_subdivisions || !(mid > worst.a && mid < worst.b) {
            return Err(Error::NoConvergence { a, b, error: err, subdivisions });
        }
        subdivisions += 1;
        let left = gk21(&mut f, worst.a, mid)?;
        let right = gk21(&mut f, mid, worst.b)?;
        panels[idx] = left;
        panels.push(right);
    }
}

pub fn try_integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    try_integrate_with_breaks(f, a, b, &[], cfg)
}

/// Integrate an infallible integrand over `[a, b]`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), a, b, cfg)
}

/// Integrate over `[a, ∞)`. `envelope_tail(t)` must bound `∫_t^∞ |f|` and
/// decrease to zero; the range is cut where it falls below
/// `tail_cut_mass · envelope_tail(a)`.
pub fn try_integrate_to_infinity<F, T>(
    f: F,
    a: f64,
    envelope_tail: T,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
    T: Fn(f64) -> f64,
{
    try_integrate_to_infinity_noisy(f, a, envelope_tail, breaks, cfg, &|| 0.0)
}

pub(crate) fn try_integrate_to_infinity_noisy<F, T>(
    f: F,
    a: f64,
    envelope_tail: T,
    breaks: &[f64],
    cfg: &QuadratureConfig,
    noise: &dyn Fn() -> f64,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
    T: Fn(f64) -> f64,
{
    let cut = truncation_point(a, &envelope_tail, cfg.tail_cut_mass)?;
    let mut est = try_integrate_noisy(f, a, cut, breaks, cfg, noise)?;
    est.error += envelope_tail(cut);
    Ok(est)
}

pub fn integrate_to_infinity<F, T>(
    mut f: F,
    a: f64,
    envelope_tail: T,
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
    T: Fn(f64) -> f64,
{
    try_integrate_to_infinity(|x| Ok(f(x)), a, envelope_tail, &[], cfg)
}

fn truncation_point<T: Fn(f64) -> f64>(a: f64, tail: &T, rel_mass: f64) -> Result<f64> {
    let total = tail(a);
    if !(total.is_finite()) {
        return Err(Error::InvalidParameter("envelope mass must be finite".into()));
    }
    if total <= 0.0 {
        return Ok(a);
    }
    let threshold = rel_mass * total;
    let mut step = 1.0f64.max(a.abs());
    let mut hi = a + step;
    let mut n = 0;
    while tail(hi) > threshold {
        step *= 2.0;
        hi = a + step;
        n += 1;
        if n > 200 {
            return Err(Error::InvalidParameter("envelope does not decay".into()));
        }
    }
    let mut lo = a;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > threshold {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}
