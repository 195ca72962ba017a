//! Closed-form Gerber–Shiu functionals at the excursion-marked bankruptcy time.
//!
//! All terms are nested integrals over the positions of the process, the
//! overshoot of the claim that opens a negative excursion and the severity
//! mark `Y`. The innermost jump integral is closed form for [`PenaltySpec`];
//! everything else goes through adaptive quadrature, split at the kink lines
//! of the kernels.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::{LevyModel, VariationClass};
use crate::numerics::{expect_over_y_noisy, try_integrate_noisy, try_integrate_with_breaks, Estimate, QuadratureConfig};
use crate::penalty::{Penalty, PenaltySpec};
use crate::scale::ScaleFunction;
use crate::severity::{CreepClock, SeverityDistribution};

/// Discount level of the `𝒪(b,y)` factor inside `𝒥`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JKernel {
    /// `𝒪^{(0)}`, the undiscounted kernel (default).
    #[default]
    Zero,
    /// `𝒪^{(q)}`, for sensitivity analysis.
    Q,
}

/// Numerical settings for formula evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GsConfig {
    pub quad: QuadratureConfig,
    pub j_kernel: JKernel,
}

/// Formula value with its pieces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GerberShiuResult {
    pub value: f64,
    pub numerator: f64,
    pub denominator: f64,
    /// Named terms, e.g. `A`, `B`, `D`, `E`, `F`, `J`, `C`, `U`, `sigma_block`.
    pub terms: BTreeMap<String, f64>,
    /// Estimated absolute quadrature error of `value`.
    pub quad_error: f64,
}

impl GerberShiuResult {
    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.get(name).copied()
    }
}

/// Integrate `f` over `[a, b]` where each evaluation is itself an estimate;
/// inner errors are folded into the outer error bound, and refinement stops
/// at that noise floor.
fn nested<F>(mut f: F, a: f64, b: f64, breaks: &[f64], cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<Estimate>,
{
    if a == b {
        return Ok(Estimate::default());
    }
    let inner = Cell::new(0.0f64);
    let width = (b - a).abs();
    let est = try_integrate_noisy(
        |t| {
            let e = f(t)?;
            inner.set(inner.get().max(e.error));
            Ok(e.value)
        },
        a,
        b,
        breaks,
        cfg,
        &|| width * inner.get(),
    )?;
    Ok(Estimate { value: est.value, error: est.error + width * inner.get() })
}

fn expect_nested<G>(mut g: G, law: &SeverityDistribution, cfg: &QuadratureConfig) -> Result<Estimate>
where
    G: FnMut(f64) -> Result<Estimate>,
{
    let inner = Cell::new(0.0f64);
    let est = expect_over_y_noisy(
        |y| {
            let e = g(y)?;
            inner.set(inner.get().max(e.error));
            Ok(e.value)
        },
        law,
        cfg,
        &|| inner.get(),
    )?;
    Ok(Estimate { value: est.value, error: est.error + inner.get() })
}

fn exact(value: f64) -> Estimate {
    Estimate { value, error: 0.0 }
}

/// Outer weight in the position variable `y ∈ (0, b)`.
#[derive(Debug, Clone, Copy)]
enum Weight {
    /// `H^{(q)}(b, y)` — paths started at 0.
    H,
    /// `𝒲^{(q)}(b, x, y)` — paths started at `x > 0`.
    Wcal(f64),
}

/// Evaluation context: one model, discount rate and barrier, with the scale
/// functions every term needs.
#[derive(Debug, Clone)]
pub struct GerberShiu {
    model: LevyModel,
    q: f64,
    b: f64,
    lambda: Option<f64>,
    scale: ScaleFunction,
    scale_shifted: Option<ScaleFunction>,
    scale_j: Option<ScaleFunction>,
    cfg: GsConfig,
}

impl GerberShiu {
    /// Build the scale functions at `q`, and — for unbounded variation —
    /// at `q + λ` and at the level used by `𝒥`.
    pub fn new(model: &LevyModel, q: f64, b: f64, clock: Option<CreepClock>, cfg: GsConfig) -> Result<Self> {
        model.require_net_profit()?;
        cfg.quad.validate()?;
        if !(q.is_finite() && q >= 0.0) {
            return Err(Error::InvalidParameter(format!("q must be finite and >= 0, got {q}")));
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParameter(format!("barrier b must be positive, got {b}")));
        }
        let scale = ScaleFunction::build(model, q)?;
        let (lambda, scale_shifted, scale_j) = match model.variation_class() {
            VariationClass::Bounded => (clock.map(|c| c.lambda), None, None),
            VariationClass::Unbounded => match clock {
                // creeping terms are unavailable without a clock; the
                // classical two-sided quantities still are
                None => (None, None, None),
                Some(clock) => {
                    CreepClock::new(clock.lambda)?;
                    let shifted = ScaleFunction::build(model, q + clock.lambda)?;
                    let j = match cfg.j_kernel {
                        JKernel::Zero => ScaleFunction::build(model, 0.0)?,
                        JKernel::Q => scale.clone(),
                    };
                    (Some(clock.lambda), Some(shifted), Some(j))
                }
            },
        };
        Ok(Self { model: model.clone(), q, b, lambda, scale, scale_shifted, scale_j, cfg })
    }

    pub fn model(&self) -> &LevyModel {
        &self.model
    }

    pub fn scale(&self) -> &ScaleFunction {
        &self.scale
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    fn quad(&self) -> &QuadratureConfig {
        &self.cfg.quad
    }

    fn half_var(&self) -> f64 {
        self.model.half_variance()
    }

    fn is_unbounded(&self) -> bool {
        self.model.variation_class() == VariationClass::Unbounded
    }

    fn shifted(&self) -> Result<&ScaleFunction> {
        self.scale_shifted.as_ref().ok_or_else(|| {
            Error::InvalidParameter("creeping terms need unbounded variation and a clock rate".into())
        })
    }

    fn check_law(&self, law: &SeverityDistribution) -> Result<()> {
        law.validate_finite()?;
        if self.is_unbounded() && !(law.min_support() > 0.0) {
            return Err(Error::InvalidParameter(
                "with a Gaussian component the severity law must be bounded away from 0 \
                 (the creeping terms involve E[1/Y]-type singularities)"
                    .into(),
            ));
        }
        Ok(())
    }

    fn check_x(&self, x: f64) -> Result<()> {
        if !(x >= 0.0 && x <= self.b) {
            return Err(Error::InvalidParameter(format!(
                "initial surplus must lie in [0, b] = [0, {}], got {x}",
                self.b
            )));
        }
        Ok(())
    }

    fn weight(&self, w: Weight, y: f64) -> f64 {
        match w {
            Weight::H => self.scale.kernel_h(self.b, y),
            Weight::Wcal(x) => self.scale.kernel_wcal(self.b, x, y),
        }
    }

    fn weight_breaks(w: Weight) -> Vec<f64> {
        match w {
            Weight::H => Vec::new(),
            Weight::Wcal(x) => vec![x],
        }
    }

    /// `∫₀^b w(y) ∫_{(−∞,−y−Y)} f(y, y+u) Π(du) dy`.
    fn jump_block(&self, w: Weight, f: &dyn Penalty, y_mark: f64) -> Result<Estimate> {
        if !self.model.has_jumps() {
            return Ok(Estimate::default());
        }
        let cfg = *self.quad();
        try_integrate_with_breaks(
            |y| {
                let wy = self.weight(w, y);
                if wy == 0.0 {
                    return Ok(0.0);
                }
                Ok(wy * f.jump_tail(&self.model, y, y, y + y_mark, &cfg)?)
            },
            0.0,
            self.b,
            &Self::weight_breaks(w),
            &cfg,
        )
    }

    /// `∫₀^b w(y) ∫_{(−y−Y,−y)} h(y+u+Y) Π(du) dy`, written with `s = y+u+Y ∈ (0,Y)`.
    fn inner_block<H>(&self, w: Weight, y_mark: f64, mut h: H) -> Result<Estimate>
    where
        H: FnMut(f64) -> Result<Estimate>,
    {
        if !self.model.has_jumps() || y_mark == 0.0 {
            return Ok(Estimate::default());
        }
        let cfg = *self.quad();
        // h depends on s only, so cache it across the outer y nodes
        let cache: RefCell<HashMap<u64, Estimate>> = RefCell::new(HashMap::new());
        let mut h_cached = |s: f64| -> Result<Estimate> {
            if let Some(e) = cache.borrow().get(&s.to_bits()) {
                return Ok(*e);
            }
            let e = h(s)?;
            cache.borrow_mut().insert(s.to_bits(), e);
            Ok(e)
        };
        nested(
            |y| {
                let wy = self.weight(w, y);
                if wy == 0.0 {
                    return Ok(Estimate::default());
                }
                let inner = nested(
                    |s| {
                        let hs = h_cached(s)?;
                        let dens = self.model.levy_density(s - y - y_mark);
                        Ok(Estimate { value: dens * hs.value, error: dens * hs.error })
                    },
                    0.0,
                    y_mark,
                    &[],
                    &cfg,
                )?;
                Ok(Estimate { value: wy * inner.value, error: wy.abs() * inner.error })
            },
            0.0,
            self.b,
            &Self::weight_breaks(w),
            &cfg,
        )
    }

    /// `G_Y(s) = ∫₀^Y 𝒲^{(q)}(Y,s,z) ∫_{(−∞,−z)} f(z−Y, u+z−Y) Π(du) dz`.
    fn recapture_penalty(&self, f: &dyn Penalty, y_mark: f64, s: f64) -> Result<Estimate> {
        let cfg = *self.quad();
        try_integrate_with_breaks(
            |z| {
                let k = self.scale.kernel_wcal(y_mark, s, z);
                if k == 0.0 {
                    return Ok(0.0);
                }
                Ok(k * f.jump_tail(&self.model, z - y_mark, z - y_mark, z, &cfg)?)
            },
            0.0,
            y_mark,
            &[s],
            &cfg,
        )
    }

    // ---- per-mark pieces -------------------------------------------------

    fn a_given(&self, w: Weight, f: &dyn Penalty, y_mark: f64) -> Result<Estimate> {
        self.jump_block(w, f, y_mark)
    }

    fn b_given(&self, w: Weight, f: &dyn Penalty, y_mark: f64) -> Result<Estimate> {
        self.inner_block(w, y_mark, |s| self.recapture_penalty(f, y_mark, s))
    }

    fn recovery_given(&self, w: Weight, y_mark: f64) -> Result<Estimate> {
        let wy = self.scale.w(y_mark);
        self.inner_block(w, y_mark, |s| Ok(exact(self.scale.w(s) / wy)))
    }

    fn creep_below_given(&self, w: Weight, f: &dyn Penalty, y_mark: f64) -> Result<Estimate> {
        let fy = f.eval(-y_mark, -y_mark);
        if fy == 0.0 {
            return Ok(Estimate::default());
        }
        let e = self.inner_block(w, y_mark, |s| Ok(exact(self.scale.kernel_o(y_mark, s))))?;
        Ok(Estimate { value: fy * e.value, error: fy * e.error })
    }

    fn c_given(&self, f: &dyn Penalty, y_mark: f64) -> Result<Estimate> {
        let diag = self.scale.kernel_o_dx_at_diag(y_mark)?;
        let creep = -self.half_var() * f.eval(-y_mark, -y_mark) * diag;
        if !self.model.has_jumps() {
            return Ok(exact(creep));
        }
        let cfg = *self.quad();
        let jumps = try_integrate_with_breaks(
            |y| {
                let o = self.scale.kernel_o(y_mark, y_mark - y);
                Ok(o * f.jump_tail(&self.model, y - y_mark, y - y_mark, y, &cfg)?)
            },
            0.0,
            y_mark,
            &[],
            &cfg,
        )?;
        Ok(Estimate { value: creep + jumps.value, error: jumps.error })
    }

    fn phi_penalty(&self) -> PenaltySpec {
        PenaltySpec::ExpDeficit { theta: self.scale.phi() }
    }

    // ---- terms -------------------------------------------------------------

    /// `𝒜_f(q,b)`.
    pub fn term_a(&self, f: &dyn Penalty, law: &SeverityDistribution) -> Result<Estimate> {
        self.check_law(law)?;
        expect_nested(|y| self.a_given(Weight::H, f, y), law, self.quad())
    }

    /// `ℬ_f(q,b)`.
    pub fn term_b(&self, f: &dyn Penalty, law: &SeverityDistribution) -> Result<Estimate> {
        self.check_law(law)?;
        expect_nested(|y| self.b_given(Weight::H, f, y), law, self.quad())
    }

    /// `E[∫₀^b H(b,y) ∫_{(−y−Y,−y)} W(y+u+Y)/W(Y) Π(du) dy]`, the recurrence
    /// mass subtracted in the bounded-variation denominator.
    pub fn recovery_integral(&self, law: &SeverityDistribution) -> Result<Estimate> {
        self.check_law(law)?;
        expect_nested(|y| self.recovery_given(Weight::H, y), law, self.quad())
    }

    /// Bounded-variation denominator `1/W(0+) − recovery_integral`.
    pub fn denominator_bv(&self, law: &SeverityDistribution) -> Result<Estimate> {
        if self.is_unbounded() {
            return Err(Error::InvalidParameter("denominator_bv needs bounded variation".into()));
        }
        let rec = self.recovery_integral(law)?;
        let value = 1.0 / self.scale.w_zero() - rec.value;
        if !(value > 0.0) {
            return Err(Error::DenominatorNonPositive(value));
        }
        Ok(Estimate { value, error: rec.error })
    }

    /// `𝒟(q,b)`.
    pub fn term_d(&self, law: &SeverityDistribution) -> Result<Estimate> {
        let f = self.phi_penalty();
        self.term_a(&f, law)
    }

    /// `ℰ(q,b)`.
    pub fn term_e(&self, law: &SeverityDistribution) -> Result<Estimate> {
        self.check_law(law)?;
        let phi = self.scale.phi();
        expect_nested(
            |y_mark| {
                let wy = self.scale.w(y_mark);
                self.inner_block(Weight::H, y_mark, |s| {
                    Ok(exact((phi * (s - y_mark)).exp() - self.scale.w(s) / wy))
                })
            },
            law,
            self.quad(),
        )
    }

    /// `ℱ(q)`.
    pub fn term_f(&self, law: &SeverityDistribution) -> Result<Estimate> {
        let f = self.phi_penalty();
        self.term_c(&f, law)
    }

    /// `𝒞_f(q)`.
    pub fn term_c(&self, f: &dyn Penalty, law: &SeverityDistribution) -> Result<Estimate> {
        self.check_law(law)?;
        expect_nested(|y| self.c_given(f, y), law, self.quad())
    }

    /// `𝒰_f(q,b)`.
    pub fn term_u(&self, f: &dyn Penalty, law: &SeverityDistribution) -> Result<Estimate> {
        self.check_law(law)?;
        expect_nested(|y| self.creep_below_given(Weight::H, f, y), law, self.quad())
    }

    /// `𝒥(λ,q,b)`. The factor `𝒪(b,y)` vanishes for `y < 0`, so the integral
    /// over `(−∞, b)` reduces to `(0, b)`.
    pub fn term_j(&self) -> Result<Estimate> {
        let lambda = self.lambda.ok_or_else(|| Error::InvalidParameter("term J needs a clock".into()))?;
        let shifted = self.shifted()?;
        let oj = self.scale_j.as_ref().unwrap_or(&self.scale);
        let b = self.b;
        try_integrate_with_breaks(
            |y| {
                let diff = (lambda + self.q) * shifted.kernel_h(b, y) - self.q * self.scale.kernel_h(b, y);
                Ok(diff * oj.kernel_o(b, y))
            },
            0.0,
            b,
            &[],
            self.quad(),
        )
    }

    /// `ℐ_f(x,q,b)`: bankruptcy inside the first negative excursion that was
    /// entered by a claim landing in `(−Y, 0)`.
    pub fn term_i(&self, x: f64, f: &dyn Penalty, law: &SeverityDistribution) -> Result<Estimate> {
        self.check_law(law)?;
        self.check_x(x)?;
        expect_nested(|y| self.b_given(Weight::Wcal(x), f, y), law, self.quad())
    }

    /// First-passage jump term for `x > 0`: the claim at `τ₀⁻` overshoots `−Y`.
    pub fn term_first(&self, x: f64, f: &dyn Penalty, law: &SeverityDistribution) -> Result<Estimate> {
        self.check_law(law)?;
        self.check_x(x)?;
        expect_nested(|y| self.a_given(Weight::Wcal(x), f, y), law, self.quad())
    }

    /// Return-to-zero factor for `x > 0` after a claim lands in `(−Y, 0)`.
    pub fn term_recovery_x(&self, x: f64, law: &SeverityDistribution) -> Result<Estimate> {
        self.check_law(law)?;
        self.check_x(x)?;
        expect_nested(|y| self.recovery_given(Weight::Wcal(x), y), law, self.quad())
    }

    /// Creeping below `−Y` after a claim lands in `(−Y, 0)`, for `x > 0`.
    pub fn term_u_x(&self, x: f64, f: &dyn Penalty, law: &SeverityDistribution) -> Result<Estimate> {
        self.check_law(law)?;
        self.check_x(x)?;
        expect_nested(|y| self.creep_below_given(Weight::Wcal(x), f, y), law, self.quad())
    }

    /// Two-sided-exit Gerber–Shiu value `E_x[e^{−qτ₀⁻} f(X_{τ₀⁻−}, X_{τ₀⁻}); τ₀⁻ < τ_b⁺]`
    /// (the `x = 0` case is the `x → 0+` limit).
    pub fn classical(&self, x: f64, f: &dyn Penalty) -> Result<Estimate> {
        self.check_x(x)?;
        let b = self.b;
        let creep = self.half_var() * f.eval(0.0, 0.0) * self.scale.kernel_o(b, x);
        if !self.model.has_jumps() {
            return Ok(exact(creep));
        }
        let cfg = *self.quad();
        let jumps = try_integrate_with_breaks(
            |y| {
                let k = self.scale.kernel_wcal(b, x, y);
                if k == 0.0 {
                    return Ok(0.0);
                }
                Ok(k * f.jump_tail(&self.model, y, y, y, &cfg)?)
            },
            0.0,
            b,
            &[x],
            &cfg,
        )?;
        Ok(Estimate { value: creep + jumps.value, error: jumps.error })
    }

    // ---- assembled values --------------------------------------------------

    /// `φ_f(0,q,b)` for bounded variation.
    pub fn phi0_bounded_variation(&self, f: &dyn Penalty, law: &SeverityDistribution) -> Result<GerberShiuResult> {
        if self.is_unbounded() {
            return Err(Error::InvalidParameter(
                "bounded-variation formula requested for an unbounded-variation model".into(),
            ));
        }
        self.check_law(law)?;
        let a = self.term_a(f, law)?;
        let b = self.term_b(f, law)?;
        let den = self.denominator_bv(law)?;
        let numerator = a.value + b.value;
        let value = numerator / den.value;
        let mut terms = BTreeMap::new();
        terms.insert("A".to_string(), a.value);
        terms.insert("B".to_string(), b.value);
        terms.insert("recovery".to_string(), 1.0 / self.scale.w_zero() - den.value);
        let quad_error = (a.error + b.error + value.abs() * den.error) / den.value;
        Ok(GerberShiuResult { value, numerator, denominator: den.value, terms, quad_error })
    }

    /// `φ_f(0,q,b)` for unbounded variation (Gaussian component present).
    pub fn phi0_unbounded_variation(&self, f: &dyn Penalty, law: &SeverityDistribution) -> Result<GerberShiuResult> {
        if !self.is_unbounded() {
            return Err(Error::InvalidParameter(
                "unbounded-variation formula requested for a bounded-variation model".into(),
            ));
        }
        self.check_law(law)?;
        let hv = self.half_var();
        let a = self.term_a(f, law)?;
        let b = self.term_b(f, law)?;
        let c = self.term_c(f, law)?;
        let u = self.term_u(f, law)?;
        let j = self.term_j()?;
        let d = self.term_d(law)?;
        let e = self.term_e(law)?;
        let ff = self.term_f(law)?;
        let f00 = f.eval(0.0, 0.0);

        let sigma_block = hv * (u.value + c.value + f00 * j.value);
        let sigma_block_den = hv * (ff.value + j.value);
        let numerator = a.value + b.value + sigma_block;
        let lead = (self.scale.phi() * self.b).exp() / self.scale.w(self.b);
        let denominator = lead + d.value + e.value + sigma_block_den;
        if !(denominator > 0.0) {
            return Err(Error::DenominatorNonPositive(denominator));
        }
        let value = numerator / denominator;
        let num_err = a.error + b.error + hv * (u.error + c.error + f00 * j.error);
        let den_err = d.error + e.error + hv * (ff.error + j.error);
        let quad_error = (num_err + value.abs() * den_err) / denominator;
        let terms = [
            ("A", a.value),
            ("B", b.value),
            ("C", c.value),
            ("D", d.value),
            ("E", e.value),
            ("F", ff.value),
            ("J", j.value),
            ("U", u.value),
            ("sigma_block", sigma_block),
            ("sigma_block_den", sigma_block_den),
            ("lead", lead),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        Ok(GerberShiuResult { value, numerator, denominator, terms, quad_error })
    }

    /// `φ_f(0,q,b)`, dispatching on the variation class.
    pub fn phi0(&self, f: &dyn Penalty, law: &SeverityDistribution) -> Result<GerberShiuResult> {
        if self.is_unbounded() {
            self.phi0_unbounded_variation(f, law)
        } else {
            self.phi0_bounded_variation(f, law)
        }
    }

    /// `φ_f(x,q,b)` for `0 ≤ x ≤ b`, by a first-excursion decomposition that
    /// renews at 0 with `φ_f(0,q,b)`.
    ///
    /// The reported numerator/denominator satisfy `value = numerator/denominator`
    /// with the denominator of the `x = 0` formula.
    pub fn phi_x(&self, x: f64, f: &dyn Penalty, law: &SeverityDistribution) -> Result<GerberShiuResult> {
        self.check_x(x)?;
        let zero = self.phi0(f, law)?;
        if x == 0.0 {
            return Ok(zero);
        }
        let phi0 = zero.value;
        let hv = self.half_var();
        let first = self.term_first(x, f, law)?;
        let inner = self.term_i(x, f, law)?;
        let rec = self.term_recovery_x(x, law)?;
        let (creep, u_x, renew_creep) = if self.is_unbounded() {
            let shifted = self.shifted()?;
            let o_q = self.scale.kernel_o(self.b, x);
            let o_ql = shifted.kernel_o(self.b, x);
            let u_x = self.term_u_x(x, f, law)?;
            (f.eval(0.0, 0.0) * hv * (o_q - o_ql), u_x, hv * o_ql)
        } else {
            (0.0, Estimate::default(), 0.0)
        };
        let direct = first.value + creep + inner.value + hv * u_x.value;
        let renewal = renew_creep + rec.value;
        let value = direct + phi0 * renewal;
        let quad_error =
            first.error + inner.error + hv * u_x.error + phi0 * rec.error + renewal.abs() * zero.quad_error;
        let mut terms = zero.terms.clone();
        terms.insert("phi0".to_string(), phi0);
        terms.insert("first".to_string(), first.value);
        terms.insert("creep".to_string(), creep);
        terms.insert("I".to_string(), inner.value);
        terms.insert("U_x".to_string(), u_x.value);
        terms.insert("renewal".to_string(), renewal);
        Ok(GerberShiuResult {
            value,
            numerator: direct * zero.denominator + zero.numerator * renewal,
            denominator: zero.denominator,
            terms,
            quad_error,
        })
    }
}

/// `φ_f(0,q,b)` for a bounded-variation model.
pub fn phi0_bounded_variation(
    model: &LevyModel,
    q: f64,
    b: f64,
    f: &dyn Penalty,
    law: &SeverityDistribution,
    cfg: GsConfig,
) -> Result<GerberShiuResult> {
    GerberShiu::new(model, q, b, None, cfg)?.phi0_bounded_variation(f, law)
}

/// `φ_f(0,q,b)` for an unbounded-variation model with creeping clock rate `λ`.
pub fn phi0_unbounded_variation(
    model: &LevyModel,
    q: f64,
    b: f64,
    f: &dyn Penalty,
    law: &SeverityDistribution,
    clock: CreepClock,
    cfg: GsConfig,
) -> Result<GerberShiuResult> {
    GerberShiu::new(model, q, b, Some(clock), cfg)?.phi0_unbounded_variation(f, law)
}

/// `φ_f(x,q,b)` for any supported model.
#[allow(clippy::too_many_arguments)]
pub fn phi_x(
    model: &LevyModel,
    x: f64,
    q: f64,
    b: f64,
    f: &dyn Penalty,
    law: &SeverityDistribution,
    clock: Option<CreepClock>,
    cfg: GsConfig,
) -> Result<GerberShiuResult> {
    GerberShiu::new(model, q, b, clock, cfg)?.phi_x(x, f, law)
}

/// Classical two-sided-exit Gerber–Shiu value with product penalty
/// `f(X_{τ₀⁻}) g(X_{τ₀⁻−})`.
pub fn classical_gs<F, G>(model: &LevyModel, x: f64, q: f64, b: f64, f: F, g: G, cfg: GsConfig) -> Result<f64>
where
    F: Fn(f64) -> f64 + Send + Sync,
    G: Fn(f64) -> f64 + Send + Sync,
{
    let ctx = GerberShiu::new(model, q, b, None, cfg)?;
    let sup = 1.0;
    let penalty = crate::penalty::FnPenalty::new(move |pre, post| f(post) * g(pre), sup);
    Ok(ctx.classical(x, &penalty)?.value)
}
