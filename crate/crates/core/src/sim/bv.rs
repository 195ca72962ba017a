//! Exact event-driven simulation for bounded-variation models.
//!
//! Between claims the surplus moves linearly with slope `c > 0`, so every
//! zero crossing and barrier crossing is solved exactly; no discretisation
//! is involved.

use super::{check_horizon, run_paths, sample_claim, validate_query, Event, Noise, Outcome, SimConfig, SimEstimate, Trace};
use crate::error::{Error, Result};
use crate::levy::{LevyModel, VariationClass};
use crate::penalty::Penalty;
use crate::severity::SeverityDistribution;

struct BvPath<'a> {
    model: &'a LevyModel,
    q: f64,
    b: f64,
    horizon: f64,
}

impl BvPath<'_> {
    fn stop(&self, t: f64, value: f64, event: Event) -> Outcome {
        if t > self.horizon {
            Outcome::Censored
        } else {
            Outcome::Stopped { value: (-self.q * t).exp() * value, event }
        }
    }

    fn next_jump<N: Noise>(&self, noise: &mut N) -> f64 {
        if self.model.has_jumps() {
            noise.exp(self.model.jump_rate())
        } else {
            f64::INFINITY
        }
    }

    /// Walk the alternating sequence of positive periods and negative
    /// excursions until bankruptcy, the barrier or the horizon.
    fn bankruptcy<N: Noise>(
        &self,
        x0: f64,
        f: &dyn Penalty,
        law: &SeverityDistribution,
        noise: &mut N,
        trace: &mut Trace,
    ) -> Outcome {
        let c = self.model.drift();
        let mut t = 0.0;
        let mut x = x0;
        loop {
            // positive period: linear climb until the barrier or a claim
            let e = self.next_jump(noise);
            let to_b = (self.b - x) / c;
            if e >= to_b {
                return self.stop(t + to_b, 0.0, Event::Upcrossed);
            }
            t += e;
            if t > self.horizon {
                return Outcome::Censored;
            }
            let pre = x + c * e;
            let post = pre - sample_claim(self.model, noise);
            if post >= 0.0 {
                x = post;
                continue;
            }
            // a negative excursion opens with a fresh severity mark
            trace.first_ruin.get_or_insert(t);
            let y = law.sample_from_uniform(noise.uniform());
            trace.level = -y;
            let (mut pre, mut x_neg) = (pre, post);
            loop {
                if x_neg < -y {
                    trace.bankrupt_at = Some(t);
                    trace.depth = x_neg;
                    return self.stop(t, f.eval(pre, x_neg), Event::Bankrupt);
                }
                let e = self.next_jump(noise);
                let to_zero = -x_neg / c;
                if e >= to_zero {
                    t += to_zero;
                    x = 0.0;
                    break;
                }
                t += e;
                if t > self.horizon {
                    return Outcome::Censored;
                }
                pre = x_neg + c * e;
                x_neg = pre - sample_claim(self.model, noise);
            }
        }
    }

    /// `e^{−qτ_b⁺}` on `{τ_b⁺ < τ₀⁻}`, 0 otherwise.
    fn exit<N: Noise>(&self, x0: f64, noise: &mut N) -> Outcome {
        let c = self.model.drift();
        let mut t = 0.0;
        let mut x = x0;
        loop {
            let e = self.next_jump(noise);
            let to_b = (self.b - x) / c;
            if e >= to_b {
                return self.stop(t + to_b, 1.0, Event::Upcrossed);
            }
            t += e;
            if t > self.horizon {
                return Outcome::Censored;
            }
            x += c * e - sample_claim(self.model, noise);
            if x < 0.0 {
                return Outcome::Stopped { value: 0.0, event: Event::Bankrupt };
            }
        }
    }
}

pub(crate) fn exit_path<N: Noise>(model: &LevyModel, x: f64, a: f64, q: f64, horizon: f64, noise: &mut N) -> Outcome {
    BvPath { model, q, b: a, horizon }.exit(x, noise)
}

/// Monte Carlo estimate of `φ_f(x,q,b)` for a bounded-variation model.
///
/// Each path is simulated exactly; the estimate is unbiased up to horizon
/// censoring, which is bounded and checked against the standard error.
pub fn simulate_bv(
    model: &LevyModel,
    x: f64,
    q: f64,
    b: f64,
    f: &dyn Penalty,
    law: &SeverityDistribution,
    cfg: &SimConfig,
) -> Result<SimEstimate> {
    if model.variation_class() != VariationClass::Bounded {
        return Err(Error::InvalidParameter("simulate_bv needs a model without Gaussian part".into()));
    }
    cfg.validate()?;
    law.validate()?;
    validate_query(model, x, q, b)?;
    let path = BvPath { model, q, b, horizon: cfg.horizon };
    let (est, censored) = run_paths(cfg, 0, |d| path.bankruptcy(x, f, law, d, &mut Trace::default()))?;
    check_horizon(&est, censored, q, cfg.horizon, f.sup(b))?;
    Ok(est)
}
