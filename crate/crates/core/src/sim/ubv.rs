//! Euler simulation for models with a Gaussian component.
//!
//! Compound-Poisson claims are injected at their exact times; between claims
//! the path is advanced in steps of at most `dt`, and level crossings inside
//! a step are detected with the Brownian-bridge crossing probability
//! `exp(−2(x₀−ℓ)(x₁−ℓ)/(σ²h))`.
//!
//! Excursion bookkeeping: a negative excursion opens when the path goes below
//! 0 and closes when it comes back; each one draws a fresh `Y`. Time spent
//! above 0 runs the creeping clock; if it rings during a positive excursion
//! that later ends by touching 0 continuously, the path is bankrupt there.
//! A positive excursion that ends by a claim clears the clock.

use super::{
    check_horizon, run_paths, sample_claim, validate_query, DiscretizationReport, Event, Noise, Outcome,
    SimConfig, SimEstimate, Trace,
};
use crate::error::{Error, Result};
use crate::levy::{LevyModel, VariationClass};
use crate::penalty::Penalty;
use crate::severity::{CreepClock, SeverityDistribution};

/// Crossing probabilities below `e^{−36}` are treated as zero.
const BRIDGE_CUTOFF: f64 = 36.0;

pub(crate) struct Stepper<'a> {
    model: &'a LevyModel,
    dt: f64,
    horizon: f64,
    q: f64,
    bridge: bool,
}

/// Bankruptcy-specific inputs.
struct Marks<'a> {
    b: f64,
    f: &'a dyn Penalty,
    law: &'a SeverityDistribution,
    lambda: f64,
    floor: f64,
}

impl<'a> Stepper<'a> {
    pub(crate) fn new(model: &'a LevyModel, dt: f64, horizon: f64, q: f64) -> Self {
        Self { model, dt, horizon, q, bridge: true }
    }

    /// Whether the bridge between `x0` and `x1` over `h` crosses level `l`
    /// (both endpoints on the same side).
    fn bridge_crosses<N: Noise>(&self, x0: f64, x1: f64, l: f64, h: f64, noise: &mut N) -> bool {
        if !self.bridge {
            return false;
        }
        let s2 = self.model.sigma() * self.model.sigma();
        let a = 2.0 * (x0 - l) * (x1 - l) / (s2 * h);
        a < BRIDGE_CUTOFF && noise.uniform() < (-a).exp()
    }

    /// Linear interpolation of the crossing time of `l` within a step.
    fn cross_time(x0: f64, x1: f64, l: f64, h: f64) -> f64 {
        let d = x0 - x1;
        if d == 0.0 {
            0.0
        } else {
            (h * (x0 - l) / d).clamp(0.0, h)
        }
    }

    fn stop(&self, t: f64, value: f64, event: Event) -> Outcome {
        if t > self.horizon {
            Outcome::Censored
        } else {
            Outcome::Stopped { value: (-self.q * t).exp() * value, event }
        }
    }

    fn diffuse<N: Noise>(&self, x: f64, h: f64, noise: &mut N) -> f64 {
        x + self.model.drift() * h + self.model.sigma() * h.sqrt() * noise.normal()
    }

    fn first_jump<N: Noise>(&self, noise: &mut N) -> f64 {
        if self.model.has_jumps() {
            noise.exp(self.model.jump_rate())
        } else {
            f64::INFINITY
        }
    }

    fn bankruptcy<N: Noise>(&self, x0: f64, m: &Marks<'_>, noise: &mut N, trace: &mut Trace) -> Outcome {
        let mut t = 0.0;
        let mut x = x0;
        let mut next_jump = self.first_jump(noise);
        let mut clock = noise.exp(m.lambda);
        let mut flagged = false;
        // depth level of the open negative excursion
        let mut level: Option<f64> = None;

        // spend `dur` units of positive time on the clock
        let mut tick = |dur: f64, flagged: &mut bool, noise: &mut N| {
            clock -= dur;
            if clock <= 0.0 {
                *flagged = true;
                clock = noise.exp(m.lambda);
            }
        };
        let open = |noise: &mut N, trace: &mut Trace| -> f64 {
            let y = m.law.sample_from_uniform(noise.uniform());
            let l = y.max(m.floor);
            trace.level = -l;
            l
        };

        loop {
            if t >= self.horizon {
                return Outcome::Censored;
            }
            let jump_now = next_jump - t <= self.dt;
            let h = if jump_now { next_jump - t } else { self.dt };
            let x1 = self.diffuse(x, h, noise);

            match level {
                None => {
                    if x1 >= m.b || self.bridge_crosses(x, x1, m.b, h, noise) {
                        let tau = if x1 >= m.b { Self::cross_time(x, x1, m.b, h) } else { 0.5 * h };
                        return self.stop(t + tau, 0.0, Event::Upcrossed);
                    }
                    let touched = x1 <= 0.0 || self.bridge_crosses(x, x1, 0.0, h, noise);
                    if !touched {
                        tick(h, &mut flagged, noise);
                    } else {
                        let tau = if x1 <= 0.0 { Self::cross_time(x, x1, 0.0, h) } else { 0.5 * h };
                        tick(tau, &mut flagged, noise);
                        if flagged {
                            trace.bankrupt_at = Some(t + tau);
                            trace.creeping = true;
                            trace.first_ruin.get_or_insert(t + tau);
                            return self.stop(t + tau, m.f.eval(0.0, 0.0), Event::Bankrupt);
                        }
                        if x1 > 0.0 {
                            tick(h - tau, &mut flagged, noise);
                        } else {
                            trace.first_ruin.get_or_insert(t + tau);
                            let l = open(noise, trace);
                            if x1 < -l || self.bridge_crosses(x, x1, -l, h, noise) {
                                let tb = t + if x1 < -l { Self::cross_time(x, x1, -l, h) } else { 0.5 * h };
                                trace.bankrupt_at = Some(tb);
                                trace.depth = -l;
                                return self.stop(tb, m.f.eval(-l, -l), Event::Bankrupt);
                            }
                            level = Some(l);
                        }
                    }
                }
                Some(l) => {
                    if x1 <= -l || self.bridge_crosses(x, x1, -l, h, noise) {
                        let tb = t + if x1 <= -l { Self::cross_time(x, x1, -l, h) } else { 0.5 * h };
                        trace.bankrupt_at = Some(tb);
                        trace.depth = -l;
                        return self.stop(tb, m.f.eval(-l, -l), Event::Bankrupt);
                    }
                    if x1 >= 0.0 {
                        let tau = Self::cross_time(x, x1, 0.0, h);
                        level = None;
                        flagged = false;
                        tick(h - tau, &mut flagged, noise);
                    } else if self.bridge_crosses(x, x1, 0.0, h, noise) {
                        // back at 0 and down again: a new negative excursion
                        let l = open(noise, trace);
                        if x1 <= -l {
                            trace.bankrupt_at = Some(t + h);
                            trace.depth = -l;
                            return self.stop(t + h, m.f.eval(-l, -l), Event::Bankrupt);
                        }
                        level = Some(l);
                    }
                }
            }
            x = x1;
            t += h;

            if jump_now {
                t = next_jump;
                next_jump += noise.exp(self.model.jump_rate());
                let pre = x;
                x -= sample_claim(self.model, noise);
                if level.is_none() && x < 0.0 {
                    // the positive excursion ends by a claim: no creeping
                    trace.first_ruin.get_or_insert(t);
                    flagged = false;
                    level = Some(open(noise, trace));
                }
                if let Some(l) = level {
                    if x < -l {
                        if t > self.horizon {
                            return Outcome::Censored;
                        }
                        trace.bankrupt_at = Some(t);
                        trace.depth = x;
                        return self.stop(t, m.f.eval(pre, x), Event::Bankrupt);
                    }
                }
            }
        }
    }

    /// `e^{−qτ_a⁺}` on `{τ_a⁺ < τ₀⁻}`, 0 otherwise.
    pub(crate) fn exit_path<N: Noise>(&self, x0: f64, a: f64, noise: &mut N) -> Outcome {
        let mut t = 0.0;
        let mut x = x0;
        let mut next_jump = self.first_jump(noise);
        let ruined = Outcome::Stopped { value: 0.0, event: Event::Bankrupt };
        loop {
            if t >= self.horizon {
                return Outcome::Censored;
            }
            let jump_now = next_jump - t <= self.dt;
            let h = if jump_now { next_jump - t } else { self.dt };
            let x1 = self.diffuse(x, h, noise);
            if x1 >= a || self.bridge_crosses(x, x1, a, h, noise) {
                let tau = if x1 >= a { Self::cross_time(x, x1, a, h) } else { 0.5 * h };
                return self.stop(t + tau, 1.0, Event::Upcrossed);
            }
            if x1 <= 0.0 || self.bridge_crosses(x, x1, 0.0, h, noise) {
                return ruined;
            }
            x = x1;
            t += h;
            if jump_now {
                t = next_jump;
                next_jump += noise.exp(self.model.jump_rate());
                x -= sample_claim(self.model, noise);
                if x < 0.0 {
                    return ruined;
                }
            }
        }
    }
}

/// Monte Carlo estimate of `φ_f(x,q,b)` for a model with a Gaussian part.
///
/// The Euler scheme is run at `euler_dt` and at `euler_dt/2` on independent
/// streams; the finer estimate is returned and both are reported. Fails with
/// [`Error::DiscretizationUnstable`] when the two differ by more than five
/// combined standard errors.
#[allow(clippy::too_many_arguments)]
pub fn simulate_ubv(
    model: &LevyModel,
    x: f64,
    q: f64,
    b: f64,
    f: &dyn Penalty,
    law: &SeverityDistribution,
    clock: CreepClock,
    cfg: &SimConfig,
) -> Result<SimEstimate> {
    if model.variation_class() != VariationClass::Unbounded {
        return Err(Error::InvalidParameter("simulate_ubv needs a model with sigma > 0".into()));
    }
    cfg.validate()?;
    law.validate()?;
    CreepClock::new(clock.lambda)?;
    validate_query(model, x, q, b)?;
    let marks = Marks { b, f, law, lambda: clock.lambda, floor: cfg.excursion_floor * model.scale_hint() };
    let run = |dt: f64, tag: u64| -> Result<SimEstimate> {
        let stepper = Stepper::new(model, dt, cfg.horizon, q);
        let (est, censored) = run_paths(cfg, tag, |d| stepper.bankruptcy(x, &marks, d, &mut Trace::default()))?;
        check_horizon(&est, censored, q, cfg.horizon, f.sup(b))?;
        Ok(est)
    };
    let coarse = run(cfg.euler_dt, 2)?;
    let mut fine = run(0.5 * cfg.euler_dt, 3)?;
    let spread = coarse.std_error.hypot(fine.std_error);
    let z = if spread > 0.0 { (coarse.mean - fine.mean) / spread } else { 0.0 };
    if z.abs() > 5.0 || (spread == 0.0 && coarse.mean != fine.mean) {
        return Err(Error::DiscretizationUnstable { coarse: coarse.mean, fine: fine.mean, z });
    }
    fine.discretization = Some(DiscretizationReport {
        dt: cfg.euler_dt,
        coarse_mean: coarse.mean,
        coarse_std_error: coarse.std_error,
        fine_mean: fine.mean,
        fine_std_error: fine.std_error,
    });
    Ok(fine)
}
