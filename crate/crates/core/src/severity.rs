//! The debt-severity mark `Y` attached to each negative excursion, and the
//! exponential creeping clock.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{expect_over_y, Estimate, QuadratureConfig};

/// One atom of a discrete severity law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub weight: f64,
    pub y: f64,
}

/// Law of the severity mark `Y ≥ 0`.
///
/// `PointMass { y0: ∞ }` is accepted as a "never bankrupt by depth" sentinel
/// by the simulator; the closed-form evaluators reject it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SeverityDistribution {
    PointMass { y0: f64 },
    Exponential { rate: f64 },
    MixtureOfPointMasses { atoms: Vec<Atom> },
}

impl SeverityDistribution {
    pub fn point_mass(y0: f64) -> Result<Self> {
        let law = Self::PointMass { y0 };
        law.validate()?;
        Ok(law)
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        let law = Self::Exponential { rate };
        law.validate()?;
        Ok(law)
    }

    /// Mixture from `(weight, y)` pairs.
    pub fn mixture(atoms: Vec<(f64, f64)>) -> Result<Self> {
        let law = Self::MixtureOfPointMasses {
            atoms: atoms.into_iter().map(|(weight, y)| Atom { weight, y }).collect(),
        };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::PointMass { y0 } => {
                if !(*y0 >= 0.0) {
                    return Err(Error::InvalidParameter(format!("point mass must be >= 0, got {y0}")));
                }
            }
            Self::Exponential { rate } => {
                if !(rate.is_finite() && *rate > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "exponential severity rate must be positive, got {rate}"
                    )));
                }
            }
            Self::MixtureOfPointMasses { atoms } => {
                if atoms.is_empty() {
                    return Err(Error::InvalidParameter("severity mixture has no atoms".into()));
                }
                for a in atoms {
                    if !(a.weight.is_finite() && a.weight > 0.0 && a.y.is_finite() && a.y >= 0.0) {
                        return Err(Error::InvalidParameter(format!("invalid severity atom {a:?}")));
                    }
                }
                let total: f64 = atoms.iter().map(|a| a.weight).sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidParameter(format!(
                        "severity weights must sum to 1, got {total}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Like [`validate`](Self::validate) but also rejecting the infinite sentinel.
    pub fn validate_finite(&self) -> Result<()> {
        self.validate()?;
        if let Self::PointMass { y0 } = self {
            if !y0.is_finite() {
                return Err(Error::InvalidParameter(
                    "an infinite severity is only meaningful for simulation".into(),
                ));
            }
        }
        Ok(())
    }

    /// Infimum of the support.
    pub fn min_support(&self) -> f64 {
        match self {
            Self::PointMass { y0 } => *y0,
            Self::Exponential { .. } => 0.0,
            Self::MixtureOfPointMasses { atoms } => atoms.iter().map(|a| a.y).fold(f64::INFINITY, f64::min),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::PointMass { y0 } => *y0,
            Self::Exponential { rate } => 1.0 / rate,
            Self::MixtureOfPointMasses { atoms } => atoms.iter().map(|a| a.weight * a.y).sum(),
        }
    }

    pub fn cdf(&self, y: f64) -> f64 {
        match self {
            Self::PointMass { y0 } => f64::from(u8::from(y >= *y0)),
            Self::Exponential { rate } => {
                if y <= 0.0 {
                    0.0
                } else {
                    -(-rate * y).exp_m1()
                }
            }
            Self::MixtureOfPointMasses { atoms } => {
                atoms.iter().filter(|a| a.y <= y).map(|a| a.weight).sum()
            }
        }
    }

    /// The law of `s·Y`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidParameter(format!("scale factor must be positive, got {s}")));
        }
        let law = match self {
            Self::PointMass { y0 } => Self::PointMass { y0: y0 * s },
            Self::Exponential { rate } => Self::Exponential { rate: rate / s },
            Self::MixtureOfPointMasses { atoms } => Self::MixtureOfPointMasses {
                atoms: atoms.iter().map(|a| Atom { weight: a.weight, y: a.y * s }).collect(),
            },
        };
        law.validate()?;
        Ok(law)
    }

    /// Draw `Y` from a uniform variate `u ∈ [0,1)` (inverse CDF), so that
    /// antithetic streams can reuse the same machinery.
    pub fn sample_from_uniform(&self, u: f64) -> f64 {
        match self {
            Self::PointMass { y0 } => *y0,
            Self::Exponential { rate } => -(-u).ln_1p() / rate,
            Self::MixtureOfPointMasses { atoms } => {
                let mut acc = 0.0;
                for a in atoms {
                    acc += a.weight;
                    if u < acc {
                        return a.y;
                    }
                }
                atoms.last().map(|a| a.y).unwrap_or(0.0)
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::PointMass { y0 } => *y0,
            _ => self.sample_from_uniform(rng.random::<f64>()),
        }
    }

    /// `E[g(Y)]`; see [`expect_over_y`].
    pub fn expect<G>(&self, g: G, cfg: &QuadratureConfig) -> Result<Estimate>
    where
        G: FnMut(f64) -> Result<f64>,
    {
        expect_over_y(g, self, cfg)
    }
}

/// Rate of the exponential clock `e_λ` that turns a long creeping excursion
/// into a bankruptcy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreepClock {
    pub lambda: f64,
}

impl CreepClock {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("clock rate must be positive, got {lambda}")));
        }
        Ok(Self { lambda })
    }
}
