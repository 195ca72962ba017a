//! Penalty functions `f(X_{T−}, X_T)` evaluated at bankruptcy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::LevyModel;
use crate::numerics::{try_integrate_to_infinity, QuadratureConfig};

/// A bounded nonnegative penalty of (surplus just before, surplus at) bankruptcy.
pub trait Penalty: Send + Sync {
    fn eval(&self, pre: f64, post: f64) -> f64;

    /// Upper bound of `f` on the states reachable below the barrier `b`.
    fn sup(&self, b: f64) -> f64;

    /// `∫_{(−∞,−level)} f(pre, base + u) Π(du)`.
    fn jump_tail(
        &self,
        model: &LevyModel,
        pre: f64,
        base: f64,
        level: f64,
        cfg: &QuadratureConfig,
    ) -> Result<f64> {
        jump_tail_by_quadrature(|p, x| self.eval(p, x), model, pre, base, level, cfg)
    }
}

/// Generic quadrature for [`Penalty::jump_tail`]: integrates against the
/// claim density with the Lévy tail as truncation envelope.
pub fn jump_tail_by_quadrature<F>(
    f: F,
    model: &LevyModel,
    pre: f64,
    base: f64,
    level: f64,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    if !model.has_jumps() {
        return Ok(0.0);
    }
    let start = level.max(0.0);
    let est = try_integrate_to_infinity(
        |z| Ok(f(pre, base - z) * model.levy_density(-z)),
        start,
        |t| model.levy_tail(t),
        &[],
        cfg,
    )?;
    Ok(est.value)
}

/// The enumerated penalty family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PenaltySpec {
    /// `f ≡ 1`
    One,
    /// `f(x₁, x₂) = e^{θ x₂}`
    ExpDeficit { theta: f64 },
    /// `f(x₁, x₂) = e^{θ₁ x₁ + θ₂ x₂}`
    ExpBoth { theta1: f64, theta2: f64 },
    /// `f(x₁, x₂) = 1{x₂ < −d}`
    DeficitIndicator { d: f64 },
}

impl Default for PenaltySpec {
    fn default() -> Self {
        Self::One
    }
}

impl PenaltySpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::One => true,
            Self::ExpDeficit { theta } => theta.is_finite() && theta >= 0.0,
            Self::ExpBoth { theta1, theta2 } => {
                theta1.is_finite() && theta1 >= 0.0 && theta2.is_finite() && theta2 >= 0.0
            }
            Self::DeficitIndicator { d } => d.is_finite() && d > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid penalty {self:?}")))
        }
    }

    /// `Σ wᵢ μᵢ/(μᵢ+θ) e^{−(μᵢ+θ) level}` scaled by the jump rate.
    fn exp_tail(model: &LevyModel, theta: f64, level: f64) -> f64 {
        let level = level.max(0.0);
        model.jump_rate()
            * model
                .claims()
                .iter()
                .map(|c| c.weight * c.rate / (c.rate + theta) * (-(c.rate + theta) * level).exp())
                .sum::<f64>()
    }
}

impl Penalty for PenaltySpec {
    fn eval(&self, pre: f64, post: f64) -> f64 {
        match *self {
            Self::One => 1.0,
            Self::ExpDeficit { theta } => (theta * post).exp(),
            Self::ExpBoth { theta1, theta2 } => (theta1 * pre + theta2 * post).exp(),
            Self::DeficitIndicator { d } => f64::from(u8::from(post < -d)),
        }
    }

    fn sup(&self, b: f64) -> f64 {
        match *self {
            Self::ExpBoth { theta1, .. } => (theta1 * b.max(0.0)).exp(),
            _ => 1.0,
        }
    }

    fn jump_tail(
        &self,
        model: &LevyModel,
        pre: f64,
        base: f64,
        level: f64,
        _cfg: &QuadratureConfig,
    ) -> Result<f64> {
        if !model.has_jumps() {
            return Ok(0.0);
        }
        Ok(match *self {
            Self::One => model.levy_tail(level),
            Self::ExpDeficit { theta } => (theta * base).exp() * Self::exp_tail(model, theta, level),
            Self::ExpBoth { theta1, theta2 } => {
                (theta1 * pre + theta2 * base).exp() * Self::exp_tail(model, theta2, level)
            }
            Self::DeficitIndicator { d } => model.levy_tail(level.max(d + base)),
        })
    }
}

/// Wrap an arbitrary closure as a penalty; `jump_tail` falls back to quadrature.
pub struct FnPenalty<F> {
    f: F,
    sup: f64,
}

impl<F> FnPenalty<F>
where
    F: Fn(f64, f64) -> f64 + Send + Sync,
{
    /// `sup` must bound `|f|` on the reachable domain.
    pub fn new(f: F, sup: f64) -> Self {
        Self { f, sup }
    }
}

impl<F> Penalty for FnPenalty<F>
where
    F: Fn(f64, f64) -> f64 + Send + Sync,
{
    fn eval(&self, pre: f64, post: f64) -> f64 {
        (self.f)(pre, post)
    }

    fn sup(&self, _b: f64) -> f64 {
        self.sup
    }
}
