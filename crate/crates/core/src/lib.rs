//! Gerber–Shiu functionals at the excursion-marked bankruptcy time of a
//! spectrally negative Lévy risk process.
//!
//! The surplus is `X_t = x + γt + σB_t − S_t` with `S` a compound Poisson
//! process of mixed-exponential claims. A negative excursion below 0 is fatal
//! only once it reaches depth `Y` (an independent mark per excursion); with a
//! Gaussian part, an excursion above 0 that creeps back to 0 after an
//! exponential clock has rung is fatal too.
//!
//! * [`levy`] — the model and its Laplace exponent,
//! * [`scale`] — scale functions `W^{(q)}`, `Z^{(q)}` and the derived kernels,
//! * [`gerber_shiu`] — the closed-form functionals,
//! * [`sim`] — the Monte Carlo oracle.

pub mod error;
pub mod gerber_shiu;
pub mod levy;
pub mod numerics;
pub mod penalty;
pub mod scale;
pub mod severity;
pub mod sim;

pub use error::{Error, Result};
pub use gerber_shiu::{
    classical_gs, phi0_bounded_variation, phi0_unbounded_variation, phi_x, GerberShiu, GerberShiuResult, GsConfig,
    JKernel,
};
pub use levy::{ClaimComponent, LevyModel, ModelKind, VariationClass};
pub use numerics::{Estimate, QuadratureConfig};
pub use penalty::{FnPenalty, Penalty, PenaltySpec};
pub use scale::ScaleFunction;
pub use severity::{CreepClock, SeverityDistribution};
pub use sim::{estimate_two_sided_exit, simulate_bv, simulate_ubv, SimConfig, SimEstimate};
