//! Monte Carlo oracle for the bankruptcy functionals.
//!
//! Every path owns an independent ChaCha8 stream selected by its index, and
//! paths are tallied in fixed-size chunks that are merged in chunk order, so
//! estimates are bit-identical for any number of worker threads.

mod bv;
mod ubv;

pub use bv::simulate_bv;
pub use ubv::simulate_ubv;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::{LevyModel, VariationClass};

const CHUNK: u64 = 1024;

/// Simulation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub n_paths: u64,
    pub seed: u64,
    /// Paths still alive at this time are censored (contribute 0).
    pub horizon: f64,
    /// Euler step for models with a Gaussian part.
    pub euler_dt: f64,
    /// Negative excursions shallower than this, in units of
    /// [`LevyModel::scale_hint`], cannot cause bankruptcy.
    pub excursion_floor: f64,
    pub antithetic: bool,
    /// Worker threads; 0 uses the global pool.
    pub threads: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_paths: 100_000,
            seed: 20_240_601,
            horizon: 500.0,
            euler_dt: 1e-3,
            excursion_floor: 1e-4,
            antithetic: false,
            threads: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths < 2 {
            return Err(Error::InvalidParameter("n_paths must be at least 2".into()));
        }
        if self.antithetic && self.n_paths % 2 != 0 {
            return Err(Error::InvalidParameter("antithetic sampling needs an even n_paths".into()));
        }
        if !(self.horizon > 0.0) {
            return Err(Error::InvalidParameter(format!("horizon must be positive, got {}", self.horizon)));
        }
        if !(self.euler_dt > 0.0 && self.euler_dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("euler_dt must be positive, got {}", self.euler_dt)));
        }
        if !(self.excursion_floor > 0.0 && self.excursion_floor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "excursion_floor must be positive, got {}",
                self.excursion_floor
            )));
        }
        Ok(())
    }
}

/// Estimates at the two Euler steps used for the stability check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationReport {
    pub dt: f64,
    pub coarse_mean: f64,
    pub coarse_std_error: f64,
    pub fine_mean: f64,
    pub fine_std_error: f64,
}

/// Monte Carlo estimate with path counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_paths: u64,
    pub n_bankrupt: u64,
    pub n_upcrossed: u64,
    pub n_censored: u64,
    pub discretization: Option<DiscretizationReport>,
}

/// Terminal state of one path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Outcome {
    /// Stopped with the discounted payoff already applied.
    Stopped { value: f64, event: Event },
    Censored,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Event {
    Bankrupt,
    Upcrossed,
}

/// Diagnostics of a single path, used by the pathwise sanity checks.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Trace {
    /// First time the surplus went below 0.
    pub first_ruin: Option<f64>,
    pub bankrupt_at: Option<f64>,
    /// Surplus at bankruptcy (the depth reached by the final excursion).
    pub depth: f64,
    /// Depth level `−Y` of the final excursion.
    pub level: f64,
    /// Bankruptcy came from the creeping clock.
    pub creeping: bool,
}

/// Random source handed to path simulators.
pub(crate) trait Noise {
    /// Uniform on the open interval (0, 1).
    fn uniform(&mut self) -> f64;
    fn normal(&mut self) -> f64;
    fn exp(&mut self, rate: f64) -> f64 {
        -self.uniform().ln() / rate
    }
}

/// Draw one claim size from the exponential mixture.
pub(crate) fn sample_claim<N: Noise>(model: &LevyModel, noise: &mut N) -> f64 {
    let claims = model.claims();
    let rate = if claims.len() == 1 {
        claims[0].rate
    } else {
        let u = noise.uniform();
        let mut acc = 0.0;
        let mut rate = claims[claims.len() - 1].rate;
        for c in claims {
            acc += c.weight;
            if u < acc {
                rate = c.rate;
                break;
            }
        }
        rate
    };
    noise.exp(rate)
}

/// Per-path stream, optionally mirrored for antithetic pairs.
pub(crate) struct Draws {
    rng: ChaCha8Rng,
    mirror: bool,
}

impl Noise for Draws {
    fn uniform(&mut self) -> f64 {
        let bits: u64 = self.rng.random::<u64>() >> 11;
        let u = (bits as f64 + 0.5) * (1.0 / (1u64 << 53) as f64);
        if self.mirror {
            1.0 - u
        } else {
            u
        }
    }

    fn normal(&mut self) -> f64 {
        let z: f64 = self.rng.sample(StandardNormal);
        if self.mirror {
            -z
        } else {
            z
        }
    }
}

/// Running moments merged with Chan's pairwise update.
#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    units: u64,
    mean: f64,
    m2: f64,
    paths: u64,
    bankrupt: u64,
    upcrossed: u64,
    censored: u64,
}

impl Tally {
    fn push(&mut self, x: f64) {
        self.units += 1;
        let d = x - self.mean;
        self.mean += d / self.units as f64;
        self.m2 += d * (x - self.mean);
    }

    fn record(&mut self, outcome: &Outcome) -> f64 {
        self.paths += 1;
        match *outcome {
            Outcome::Stopped { value, event } => {
                match event {
                    Event::Bankrupt => self.bankrupt += 1,
                    Event::Upcrossed => self.upcrossed += 1,
                }
                value
            }
            Outcome::Censored => {
                self.censored += 1;
                0.0
            }
        }
    }

    fn merge(&mut self, o: &Tally) {
        let n = self.units + o.units;
        if n > 0 {
            let d = o.mean - self.mean;
            let (na, nb) = (self.units as f64, o.units as f64);
            self.mean += d * nb / n as f64;
            self.m2 += o.m2 + d * d * na * nb / n as f64;
        }
        self.units = n;
        self.paths += o.paths;
        self.bankrupt += o.bankrupt;
        self.upcrossed += o.upcrossed;
        self.censored += o.censored;
    }

    fn std_error(&self) -> f64 {
        if self.units < 2 {
            return 0.0;
        }
        (self.m2.max(0.0) / (self.units - 1) as f64 / self.units as f64).sqrt()
    }
}

/// Simulate `cfg.n_paths` paths with `path`, keyed on `(seed, tag, index)`.
pub(crate) fn run_paths<F>(cfg: &SimConfig, tag: u64, path: F) -> Result<(SimEstimate, f64)>
where
    F: Fn(&mut Draws) -> Outcome + Sync,
{
    let units = if cfg.antithetic { cfg.n_paths / 2 } else { cfg.n_paths };
    let n_chunks = units.div_ceil(CHUNK);
    let base = ChaCha8Rng::seed_from_u64(cfg.seed);
    let chunk = |c: u64| -> Tally {
        let mut tally = Tally::default();
        let hi = ((c + 1) * CHUNK).min(units);
        for unit in c * CHUNK..hi {
            let mut rng = base.clone();
            rng.set_stream((tag << 48) ^ unit);
            if cfg.antithetic {
                let mut a = Draws { rng: rng.clone(), mirror: false };
                let mut b = Draws { rng, mirror: true };
                let va = tally.record(&path(&mut a));
                let vb = tally.record(&path(&mut b));
                tally.push(0.5 * (va + vb));
            } else {
                let mut d = Draws { rng, mirror: false };
                let v = tally.record(&path(&mut d));
                tally.push(v);
            }
        }
        tally
    };
    let run = || (0..n_chunks).into_par_iter().map(chunk).collect::<Vec<_>>();
    let parts = if cfg.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot build thread pool: {e}")))?;
        pool.install(run)
    } else {
        run()
    };
    let mut total = Tally::default();
    for p in &parts {
        total.merge(p);
    }
    let est = SimEstimate {
        mean: total.mean,
        std_error: total.std_error(),
        n_paths: total.paths,
        n_bankrupt: total.bankrupt,
        n_upcrossed: total.upcrossed,
        n_censored: total.censored,
        discretization: None,
    };
    let censored_frac = total.censored as f64 / total.paths.max(1) as f64;
    Ok((est, censored_frac))
}

/// Reject estimates whose censored paths could move the mean by more than a
/// tenth of a standard error.
pub(crate) fn check_horizon(est: &SimEstimate, censored_frac: f64, q: f64, horizon: f64, sup_f: f64) -> Result<()> {
    let bound = censored_frac * (-q * horizon).exp() * sup_f;
    if bound > (0.1 * est.std_error).max(1e-12) {
        return Err(Error::HorizonTooShort { bound, std_error: est.std_error });
    }
    Ok(())
}

pub(crate) fn validate_query(model: &LevyModel, x: f64, q: f64, b: f64) -> Result<()> {
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::InvalidParameter(format!("barrier must be positive, got {b}")));
    }
    if !(x >= 0.0 && x <= b) {
        return Err(Error::InvalidParameter(format!("initial surplus must lie in [0, b], got {x}")));
    }
    if !(q.is_finite() && q >= 0.0) {
        return Err(Error::InvalidParameter(format!("q must be finite and >= 0, got {q}")));
    }
    let _ = model;
    Ok(())
}

/// Monte Carlo estimate of `E_x[e^{−qτ_a⁺}; τ_a⁺ ≤ τ₀⁻]`.
pub fn estimate_two_sided_exit(model: &LevyModel, x: f64, a: f64, q: f64, cfg: &SimConfig) -> Result<SimEstimate> {
    cfg.validate()?;
    validate_query(model, x, q, a)?;
    let (est, censored) = match model.variation_class() {
        VariationClass::Bounded => run_paths(cfg, 1, |d| bv::exit_path(model, x, a, q, cfg.horizon, d))?,
        VariationClass::Unbounded => {
            let stepper = ubv::Stepper::new(model, cfg.euler_dt, cfg.horizon, q);
            run_paths(cfg, 1, |d| stepper.exit_path(x, a, d))?
        }
    };
    check_horizon(&est, censored, q, cfg.horizon, 1.0)?;
    Ok(est)
}
