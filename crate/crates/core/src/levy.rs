//! Parametric spectrally negative Lévy risk processes.
//!
//! A model is `X_t = x + γ t + σ B_t − S_t` where `S` is a compound Poisson
//! process whose claim sizes follow a finite mixture of exponentials. Claims
//! enter as downward jumps, so the Lévy measure lives on `(−∞, 0)` with density
//! `λ_J Σ wᵢ μᵢ e^{μᵢ u}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which parametric family a model belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Premium drift minus compound Poisson claims; no Gaussian part.
    CramerLundberg,
    /// Brownian motion with drift; no jumps.
    BrownianDrift,
    /// Brownian motion with drift plus compound Poisson claims.
    JumpDiffusion,
}

/// One exponential component of the claim-size mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClaimComponent {
    pub weight: f64,
    pub rate: f64,
}

impl ClaimComponent {
    pub fn new(weight: f64, rate: f64) -> Self {
        Self { weight, rate }
    }

    pub fn exponential(rate: f64) -> Self {
        Self { weight: 1.0, rate }
    }
}

/// Path-variation class of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariationClass {
    Bounded,
    Unbounded,
}

/// A validated spectrally negative Lévy process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyModel {
    kind: ModelKind,
    drift: f64,
    sigma: f64,
    jump_rate: f64,
    claims: Vec<ClaimComponent>,
}

impl LevyModel {
    /// Build a model and require the net profit condition `ψ′(0+) > 0`.
    pub fn new(
        kind: ModelKind,
        drift: f64,
        sigma: f64,
        jump_rate: f64,
        claims: Vec<ClaimComponent>,
    ) -> Result<Self> {
        let model = Self::without_net_profit_check(kind, drift, sigma, jump_rate, claims)?;
        model.require_net_profit()?;
        Ok(model)
    }

    /// Build a model validating only its structure. Useful for unit tests of
    /// scale functions on models that sit on the net-profit boundary.
    pub fn without_net_profit_check(
        kind: ModelKind,
        drift: f64,
        sigma: f64,
        jump_rate: f64,
        claims: Vec<ClaimComponent>,
    ) -> Result<Self> {
        if !drift.is_finite() {
            return Err(Error::InvalidModel(format!("drift must be finite, got {drift}")));
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::InvalidModel(format!("sigma must be finite and >= 0, got {sigma}")));
        }
        if !(jump_rate.is_finite() && jump_rate >= 0.0) {
            return Err(Error::InvalidModel(format!(
                "jump_rate must be finite and >= 0, got {jump_rate}"
            )));
        }
        match kind {
            ModelKind::CramerLundberg => {
                if sigma != 0.0 {
                    return Err(Error::InvalidModel("Cramér–Lundberg model has sigma = 0".into()));
                }
                if jump_rate == 0.0 {
                    return Err(Error::InvalidModel(
                        "Cramér–Lundberg model needs a positive claim arrival rate".into(),
                    ));
                }
            }
            ModelKind::BrownianDrift => {
                if sigma == 0.0 {
                    return Err(Error::InvalidModel("Brownian model needs sigma > 0".into()));
                }
                if jump_rate != 0.0 {
                    return Err(Error::InvalidModel("Brownian model has no jumps".into()));
                }
            }
            ModelKind::JumpDiffusion => {
                if sigma == 0.0 {
                    return Err(Error::InvalidModel("jump-diffusion model needs sigma > 0".into()));
                }
                if jump_rate == 0.0 {
                    return Err(Error::InvalidModel(
                        "jump-diffusion model needs a positive claim arrival rate".into(),
                    ));
                }
            }
        }
        if sigma == 0.0 && drift <= 0.0 {
            return Err(Error::InvalidModel(format!(
                "drift must be positive when sigma = 0 (monotone paths), got {drift}"
            )));
        }
        let claims = if jump_rate > 0.0 { normalize_claims(claims)? } else { Vec::new() };
        Ok(Self { kind, drift, sigma, jump_rate, claims })
    }

    pub fn cramer_lundberg(premium: f64, jump_rate: f64, claims: Vec<ClaimComponent>) -> Result<Self> {
        Self::new(ModelKind::CramerLundberg, premium, 0.0, jump_rate, claims)
    }

    pub fn brownian_drift(drift: f64, sigma: f64) -> Result<Self> {
        Self::new(ModelKind::BrownianDrift, drift, sigma, 0.0, Vec::new())
    }

    pub fn jump_diffusion(
        drift: f64,
        sigma: f64,
        jump_rate: f64,
        claims: Vec<ClaimComponent>,
    ) -> Result<Self> {
        Self::new(ModelKind::JumpDiffusion, drift, sigma, jump_rate, claims)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Half the Gaussian variance, `σ²/2`.
    pub fn half_variance(&self) -> f64 {
        0.5 * self.sigma * self.sigma
    }

    pub fn jump_rate(&self) -> f64 {
        self.jump_rate
    }

    pub fn claims(&self) -> &[ClaimComponent] {
        &self.claims
    }

    pub fn has_jumps(&self) -> bool {
        self.jump_rate > 0.0
    }

    /// Smallest claim rate, which governs the heaviest exponential tail.
    pub fn min_claim_rate(&self) -> Option<f64> {
        self.claims.iter().map(|c| c.rate).reduce(f64::min)
    }

    pub fn variation_class(&self) -> VariationClass {
        if self.sigma > 0.0 {
            VariationClass::Unbounded
        } else {
            VariationClass::Bounded
        }
    }

    /// `ψ(λ) = γλ + σ²λ²/2 + λ_J Σ wᵢ (μᵢ/(μᵢ+λ) − 1)`.
    pub fn laplace_exponent(&self, lambda: f64) -> f64 {
        let jumps: f64 = self
            .claims
            .iter()
            .map(|c| c.weight * (c.rate / (c.rate + lambda) - 1.0))
            .sum();
        self.drift * lambda + self.half_variance() * lambda * lambda + self.jump_rate * jumps
    }

    /// `ψ` continued analytically to complex arguments (away from the poles `−μᵢ`).
    pub fn laplace_exponent_complex(&self, s: Complex64) -> Complex64 {
        let mut jumps = Complex64::new(0.0, 0.0);
        for c in &self.claims {
            jumps += c.weight * (c.rate / (s + c.rate) - 1.0);
        }
        self.drift * s + self.half_variance() * s * s + self.jump_rate * jumps
    }

    /// `ψ′(λ)`.
    pub fn laplace_exponent_derivative(&self, lambda: f64) -> f64 {
        let jumps: f64 = self
            .claims
            .iter()
            .map(|c| c.weight * c.rate / ((c.rate + lambda) * (c.rate + lambda)))
            .sum();
        self.drift + 2.0 * self.half_variance() * lambda - self.jump_rate * jumps
    }

    /// `ψ′(0+) = γ − λ_J Σ wᵢ/μᵢ`, the mean drift of the surplus.
    pub fn psi_prime_at_zero(&self) -> f64 {
        self.laplace_exponent_derivative(0.0)
    }

    pub fn satisfies_net_profit(&self) -> bool {
        self.psi_prime_at_zero() > 0.0
    }

    pub fn require_net_profit(&self) -> Result<()> {
        let slope = self.psi_prime_at_zero();
        if slope > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidModel(format!(
                "net profit condition fails: psi'(0+) = {slope} <= 0"
            )))
        }
    }

    /// Lévy tail `Π((−∞, −z)) = λ_J Σ wᵢ e^{−μᵢ z}` for `z ≥ 0`.
    pub fn levy_tail(&self, z: f64) -> f64 {
        let z = z.max(0.0);
        self.jump_rate * self.claims.iter().map(|c| c.weight * (-c.rate * z).exp()).sum::<f64>()
    }

    /// Density of `Π` at `u < 0`; zero for `u ≥ 0`.
    pub fn levy_density(&self, u: f64) -> f64 {
        if u >= 0.0 {
            return 0.0;
        }
        self.jump_rate
            * self.claims.iter().map(|c| c.weight * c.rate * (c.rate * u).exp()).sum::<f64>()
    }

    /// Truncation depth `z ≥ level` past which `Π((−∞,−z))` is at most
    /// `rel_mass · Π((−∞,−level))`.
    pub fn tail_cutoff(&self, level: f64, rel_mass: f64) -> f64 {
        match self.min_claim_rate() {
            Some(mu) => level.max(0.0) + (1.0 / rel_mass).ln() / mu,
            None => level.max(0.0),
        }
    }

    /// Characteristic scale of the model, used for default tolerances.
    pub fn scale_hint(&self) -> f64 {
        let mut s = self.sigma * self.sigma / self.drift.abs().max(1e-12);
        if let Some(mu) = self.min_claim_rate() {
            s = s.max(1.0 / mu);
        }
        if s == 0.0 {
            1.0
        } else {
            s
        }
    }
}

fn normalize_claims(claims: Vec<ClaimComponent>) -> Result<Vec<ClaimComponent>> {
    if claims.is_empty() {
        return Err(Error::InvalidModel("claim law needs at least one component".into()));
    }
    let mut total = 0.0;
    for c in &claims {
        if !(c.weight.is_finite() && c.weight > 0.0) {
            return Err(Error::InvalidModel(format!("claim weight must be > 0, got {}", c.weight)));
        }
        if !(c.rate.is_finite() && c.rate > 0.0) {
            return Err(Error::InvalidModel(format!("claim rate must be > 0, got {}", c.rate)));
        }
        total += c.weight;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidModel(format!("claim weights must sum to 1, got {total}")));
    }
    // Components sharing a rate are merged so that ψ has simple poles.
    let mut merged: Vec<ClaimComponent> = Vec::with_capacity(claims.len());
    for c in claims {
        match merged.iter_mut().find(|m| (m.rate - c.rate).abs() <= 1e-12 * c.rate) {
            Some(m) => m.weight += c.weight / total,
            None => merged.push(ClaimComponent::new(c.weight / total, c.rate)),
        }
    }
    merged.sort_by(|a, b| a.rate.total_cmp(&b.rate));
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cl() -> LevyModel {
        LevyModel::cramer_lundberg(1.5, 1.0, vec![ClaimComponent::exponential(1.0)]).unwrap()
    }

    #[test]
    fn laplace_exponent_examples() {
        let m = cl();
        assert!(m.laplace_exponent(0.0).abs() < 1e-12);
        assert_relative_eq!(m.laplace_exponent(1.0), 1.0, epsilon = 1e-14);
        let bm = LevyModel::brownian_drift(1.0, 1.0).unwrap();
        assert_relative_eq!(bm.laplace_exponent(2.0), 4.0, epsilon = 1e-14);
    }

    #[test]
    fn psi_prime_and_net_profit() {
        assert_relative_eq!(cl().psi_prime_at_zero(), 0.5, epsilon = 1e-14);
        let bm = LevyModel::brownian_drift(0.7, 2.0).unwrap();
        assert_relative_eq!(bm.psi_prime_at_zero(), 0.7, epsilon = 1e-14);
        let boundary =
            LevyModel::cramer_lundberg(1.0, 1.0, vec![ClaimComponent::exponential(1.0)]);
        assert!(matches!(boundary, Err(Error::InvalidModel(_))));
        let lenient = LevyModel::without_net_profit_check(
            ModelKind::CramerLundberg,
            1.0,
            0.0,
            1.0,
            vec![ClaimComponent::exponential(1.0)],
        )
        .unwrap();
        assert_eq!(lenient.psi_prime_at_zero(), 0.0);
    }

    #[test]
    fn levy_tail_examples() {
        let m = cl();
        assert_relative_eq!(m.levy_tail(0.0), 1.0);
        assert_relative_eq!(m.levy_tail(2f64.ln()), 0.5, epsilon = 1e-14);
        let bm = LevyModel::brownian_drift(1.0, 1.0).unwrap();
        assert_eq!(bm.levy_tail(0.3), 0.0);
    }

    #[test]
    fn variation_classes() {
        assert_eq!(cl().variation_class(), VariationClass::Bounded);
        assert_eq!(
            LevyModel::brownian_drift(1.0, 1.0).unwrap().variation_class(),
            VariationClass::Unbounded
        );
        let jd = LevyModel::jump_diffusion(1.0, 1.0, 0.5, vec![ClaimComponent::exponential(1.0)])
            .unwrap();
        assert_eq!(jd.variation_class(), VariationClass::Unbounded);
    }

    #[test]
    fn rejects_structural_errors() {
        assert!(LevyModel::cramer_lundberg(-1.0, 1.0, vec![ClaimComponent::exponential(1.0)]).is_err());
        assert!(LevyModel::cramer_lundberg(2.0, 1.0, vec![ClaimComponent::new(0.5, 1.0)]).is_err());
        assert!(LevyModel::cramer_lundberg(2.0, 1.0, vec![]).is_err());
        assert!(LevyModel::brownian_drift(1.0, 0.0).is_err());
    }

    #[test]
    fn duplicate_rates_are_merged() {
        let m = LevyModel::cramer_lundberg(
            3.0,
            1.0,
            vec![ClaimComponent::new(0.25, 2.0), ClaimComponent::new(0.5, 1.0), ClaimComponent::new(0.25, 2.0)],
        )
        .unwrap();
        assert_eq!(m.claims().len(), 2);
        assert_relative_eq!(m.claims()[1].weight, 0.5);
    }

    #[test]
    fn density_integrates_to_tail() {
        let m = LevyModel::cramer_lundberg(
            3.0,
            2.0,
            vec![ClaimComponent::new(0.3, 0.5), ClaimComponent::new(0.7, 3.0)],
        )
        .unwrap();
        // trapezoid on a fine grid
        let (a, n) = (0.4, 200_000);
        let h = 60.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let u0 = -a - i as f64 * h;
            acc += 0.5 * h * (m.levy_density(u0) + m.levy_density(u0 - h));
        }
        assert_relative_eq!(acc, m.levy_tail(a), max_relative = 1e-7);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn model() -> impl Strategy<Value = LevyModel> {
            (0.1f64..3.0, 0.0f64..2.0, 0.05f64..2.0, 0.2f64..4.0, 0.0f64..1.0, 0.2f64..4.0)
                .prop_filter_map("net profit", |(extra, sigma, lam, mu1, w, mu2)| {
                    let claims = vec![ClaimComponent::new(w.max(0.05), mu1), ClaimComponent::new(1.0 - w.max(0.05) + 1e-3, mu2)];
                    let total: f64 = claims.iter().map(|c| c.weight).sum();
                    let claims: Vec<_> = claims.into_iter().map(|c| ClaimComponent::new(c.weight / total, c.rate)).collect();
                    let mean: f64 = claims.iter().map(|c| c.weight / c.rate).sum();
                    let drift = lam * mean + extra;
                    if sigma > 0.05 {
                        LevyModel::jump_diffusion(drift, sigma, lam, claims).ok()
                    } else {
                        LevyModel::cramer_lundberg(drift, lam, claims).ok()
                    }
                })
        }

        proptest! {
            #[test]
            fn psi_is_strictly_convex(m in model(), a in 0.0f64..20.0, d in 0.01f64..20.0) {
                let b = a + d;
                let mid = m.laplace_exponent(0.5 * (a + b));
                let chord = 0.5 * (m.laplace_exponent(a) + m.laplace_exponent(b));
                prop_assert!(mid < chord + 1e-10);
                prop_assert!(m.laplace_exponent(0.0).abs() < 1e-12);
            }

            #[test]
            fn psi_is_superlinear(m in model()) {
                let mut lam = 1.0;
                let mut prev = m.laplace_exponent(lam) / lam;
                for _ in 0..40 {
                    lam *= 2.0;
                    let cur = m.laplace_exponent(lam) / lam;
                    prop_assert!(cur >= prev - 1e-9);
                    prev = cur;
                }
                // bounded variation grows like c·λ, so the ratio tends to c rather than ∞
                if m.sigma() > 0.0 {
                    prop_assert!(prev > 1e6);
                } else {
                    prop_assert!((prev - m.drift()).abs() < 1e-6 * m.drift().max(1.0));
                }
            }

            #[test]
            fn tail_is_nonincreasing(m in model(), z in 0.0f64..10.0, dz in 0.0f64..10.0) {
                prop_assert!(m.levy_tail(z + dz) <= m.levy_tail(z) + 1e-15);
                prop_assert!(m.levy_tail(1e3) < 1e-30);
            }
        }
    }
}
