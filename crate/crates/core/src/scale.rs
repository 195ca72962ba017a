//! q-scale functions of rational-exponent models and the composite kernels
//! built from them.
//!
//! With mixed-exponential claims, `ψ(λ) − q = P(λ)/Q(λ)` where
//! `Q(λ) = Π(μᵢ + λ)`. The Laplace transform `Q/P` of `W^(q)` is split into
//! partial fractions, so `W^(q)` is an exact exponential-polynomial sum.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::levy::{LevyModel, VariationClass};
use crate::numerics::{cluster_roots, find_root_increasing, Poly, RootCluster};

const CLUSTER_TOL: f64 = 1e-6;

/// `p(x)·e^{r x}` with complex data; `weight = 2` stands for a term plus its
/// complex conjugate.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPolyTerm {
    pub rate: Complex64,
    /// Ascending coefficients of `p` in `x`.
    pub poly: Vec<Complex64>,
    pub weight: f64,
}

impl ExpPolyTerm {
    fn eval(&self, x: f64) -> f64 {
        let p = self.poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c);
        self.weight * (p * (self.rate * x).exp()).re
    }

    fn derivative(&self) -> Self {
        let d = self.poly.len();
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for k in 0..d {
            out[k] = self.rate * self.poly[k];
            if k + 1 < d {
                out[k] += (k + 1) as f64 * self.poly[k + 1];
            }
        }
        Self { rate: self.rate, poly: out, weight: self.weight }
    }

    fn antiderivative(&self) -> Self {
        let d = self.poly.len();
        if self.rate.norm() == 0.0 {
            let mut out = vec![Complex64::new(0.0, 0.0); d + 1];
            for k in 0..d {
                out[k + 1] = self.poly[k] / (k + 1) as f64;
            }
            return Self { rate: self.rate, poly: out, weight: self.weight };
        }
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for k in (0..d).rev() {
            let carry = if k + 1 < d { (k + 1) as f64 * out[k + 1] } else { Complex64::new(0.0, 0.0) };
            out[k] = (self.poly[k] - carry) / self.rate;
        }
        Self { rate: self.rate, poly: out, weight: self.weight }
    }

    fn laplace(&self, lambda: f64) -> f64 {
        let inv = (Complex64::new(lambda, 0.0) - self.rate).inv();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pow = inv;
        let mut fact = 1.0;
        for (k, c) in self.poly.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
                pow *= inv;
            }
            acc += c * fact * pow;
        }
        self.weight * acc.re
    }
}

/// Real exponential-polynomial sum `Σ aᵢ e^{rᵢ x} + Re Σ terms`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpSum {
    pub simple: Vec<(f64, f64)>,
    pub general: Vec<ExpPolyTerm>,
}

impl ExpSum {
    pub fn eval(&self, x: f64) -> f64 {
        let mut v = 0.0;
        for &(r, a) in &self.simple {
            v += a * (r * x).exp();
        }
        for t in &self.general {
            v += t.eval(x);
        }
        v
    }

    fn derivative(&self) -> Self {
        Self {
            simple: self.simple.iter().map(|&(r, a)| (r, r * a)).collect(),
            general: self.general.iter().map(ExpPolyTerm::derivative).collect(),
        }
    }

    fn antiderivative(&self) -> Self {
        let mut out = Self::default();
        for &(r, a) in &self.simple {
            if r == 0.0 {
                out.general.push(ExpPolyTerm {
                    rate: Complex64::new(0.0, 0.0),
                    poly: vec![Complex64::new(0.0, 0.0), Complex64::new(a, 0.0)],
                    weight: 1.0,
                });
            } else {
                out.simple.push((r, a / r));
            }
        }
        out.general.extend(self.general.iter().map(ExpPolyTerm::antiderivative));
        out
    }

    /// `∫₀^∞ e^{−λx}(·) dx`, valid for `λ` right of every rate.
    pub fn laplace(&self, lambda: f64) -> f64 {
        let mut v = 0.0;
        for &(r, a) in &self.simple {
            v += a / (lambda - r);
        }
        for t in &self.general {
            v += t.laplace(lambda);
        }
        v
    }
}

/// The scale functions `W^(q)`, `Z^(q)` of a model at one discount rate.
#[derive(Debug, Clone)]
pub struct ScaleFunction {
    model: LevyModel,
    q: f64,
    phi: f64,
    phi_prime: f64,
    roots: Vec<RootCluster>,
    w: ExpSum,
    w1: ExpSum,
    w2: ExpSum,
    w_int: ExpSum,
    w_int_at_zero: f64,
    w_zero: f64,
    /// `W = lead·e^{Φx} + rest(x)` on `[0, ∞)`; every rate in `rest` has real
    /// part below `Φ`. The kernels are evaluated in this split form so the
    /// dominant `e^{Φx}` parts cancel algebraically instead of in floating
    /// point, which matters once `Φ·b` is large.
    lead: f64,
    rest: [ExpSum; 3],
}

/// `ψ(λ) − q = P(λ)/Q(λ)`; returns `(P, Q)`.
fn rational_form(model: &LevyModel, q: f64) -> (Poly, Poly) {
    let claims = model.claims();
    let mut den = Poly::constant(1.0);
    for c in claims {
        den = den.mul(&Poly::linear(c.rate, 1.0));
    }
    let lj = model.jump_rate();
    let head = Poly::new(vec![-lj - q, model.drift(), model.half_variance()]);
    let mut num = head.mul(&den);
    for (i, ci) in claims.iter().enumerate() {
        let mut part = Poly::constant(lj * ci.weight * ci.rate);
        for (j, cj) in claims.iter().enumerate() {
            if j != i {
                part = part.mul(&Poly::linear(cj.rate, 1.0));
            }
        }
        num = num.add(&part);
    }
    (num, den)
}

fn psi_complex_derivative(model: &LevyModel, s: Complex64) -> Complex64 {
    let mut v = model.drift() + s * (2.0 * model.half_variance());
    for c in model.claims() {
        let d = s + c.rate;
        v -= model.jump_rate() * c.weight * c.rate / (d * d);
    }
    v
}

/// Taylor coefficients (in `h`) of `Π_j (h + dⱼ)^{mⱼ}` up to order `n`.
fn product_taylor(factors: &[(Complex64, usize)], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    out[0] = Complex64::new(1.0, 0.0);
    for &(d, m) in factors {
        for _ in 0..m {
            for k in (0..=n).rev() {
                let lower = if k > 0 { out[k - 1] } else { Complex64::new(0.0, 0.0) };
                out[k] = out[k] * d + lower;
            }
        }
    }
    out
}

/// Taylor coefficients of a real polynomial around `z` up to order `n`.
fn poly_taylor(p: &Poly, z: Complex64, n: usize) -> Vec<Complex64> {
    let mut work: Vec<Complex64> = p.coeffs().iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let mut out = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        if work.is_empty() {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        // synthetic division by (λ − z): remainder is the next coefficient
        let mut acc = Complex64::new(0.0, 0.0);
        let mut quotient = vec![Complex64::new(0.0, 0.0); work.len().saturating_sub(1)];
        for k in (0..work.len()).rev() {
            let next = acc * z + work[k];
            if k > 0 {
                quotient[k - 1] = next;
            }
            acc = next;
        }
        out.push(acc);
        work = quotient;
    }
    out
}

impl ScaleFunction {
    /// Factor `ψ(λ) − q` and assemble `W^(q)` from its partial fractions.
    pub fn build(model: &LevyModel, q: f64) -> Result<Self> {
        if !(q.is_finite() && q >= 0.0) {
            return Err(Error::InvalidParameter(format!("discount rate must be >= 0, got {q}")));
        }
        let (num, den) = rational_form(model, q);
        let raw = num.roots()?;
        let mut clusters = cluster_roots(&raw, CLUSTER_TOL);

        if q == 0.0 {
            // ψ(0) = 0 exactly: pin the root nearest the origin there.
            if let Some(c) = clusters
                .iter_mut()
                .filter(|c| c.root.norm() <= CLUSTER_TOL)
                .min_by(|a, b| a.root.norm().total_cmp(&b.root.norm()))
            {
                c.root = Complex64::new(0.0, 0.0);
            }
        }
        let residual_scale = 1.0 + q + model.jump_rate() + model.drift().abs();
        for c in clusters.iter_mut() {
            if c.multiplicity != 1 || (q == 0.0 && c.root.norm() == 0.0) {
                continue;
            }
            let mut z = c.root;
            for _ in 0..8 {
                let f = model.laplace_exponent_complex(z) - q;
                let step = f / psi_complex_derivative(model, z);
                if !step.is_finite() {
                    break;
                }
                let cand = z - step;
                if (model.laplace_exponent_complex(cand) - q).norm() < f.norm() {
                    z = cand;
                } else {
                    break;
                }
            }
            if z.im.abs() <= 1e-10 * z.norm().max(1.0) {
                z.im = 0.0;
            }
            let res = (model.laplace_exponent_complex(z) - q).norm();
            if !(res <= 1e-9 * residual_scale * z.norm().max(1.0).powi(2)) {
                return Err(Error::RootIsolationFailure(format!(
                    "root {z} of psi - q has residual {res:e}"
                )));
            }
            c.root = z;
        }
        let total: usize = clusters.iter().map(|c| c.multiplicity).sum();
        if total != num.degree() {
            return Err(Error::RootIsolationFailure("root multiplicities do not add up".into()));
        }

        let phi_roots = clusters.iter().filter(|c| c.root.im == 0.0).map(|c| c.root.re);
        let phi_alg = phi_roots.fold(f64::NEG_INFINITY, f64::max);
        if !phi_alg.is_finite() {
            return Err(Error::RootIsolationFailure("no real root of psi - q".into()));
        }
        let phi = Self::verify_phi(model, q, phi_alg)?;

        let lead = num.leading();
        let mut w = ExpSum::default();
        for (i, ci) in clusters.iter().enumerate() {
            if ci.root.im < 0.0 {
                continue; // represented by its conjugate partner
            }
            let r = ci.root;
            let m = ci.multiplicity;
            let others: Vec<(Complex64, usize)> = clusters
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, cj)| (r - cj.root, cj.multiplicity))
                .collect();
            let d = product_taylor(&others, m - 1);
            let nq = poly_taylor(&den, r, m - 1);
            // series division g = nq / (lead·d)
            let mut g = vec![Complex64::new(0.0, 0.0); m];
            for k in 0..m {
                let mut acc = nq[k];
                for j in 0..k {
                    acc -= g[j] * d[k - j];
                }
                g[k] = acc / d[0];
            }
            for gk in g.iter_mut() {
                *gk /= lead;
            }
            let weight = if r.im > 0.0 { 2.0 } else { 1.0 };
            if m == 1 && r.im == 0.0 {
                w.simple.push((r.re, g[0].re));
                continue;
            }
            // coefficient of 1/(λ−r)^{m−k} is g_k  ↦  g_k x^{m−1−k}/(m−1−k)!
            let mut poly = vec![Complex64::new(0.0, 0.0); m];
            let mut fact = 1.0;
            for p in 0..m {
                if p > 0 {
                    fact *= p as f64;
                }
                poly[p] = g[m - 1 - p] / fact;
            }
            w.general.push(ExpPolyTerm { rate: r, poly, weight });
        }
        let complex_up = clusters.iter().filter(|c| c.root.im > 0.0).count();
        let complex_down = clusters.iter().filter(|c| c.root.im < 0.0).count();
        if complex_up != complex_down {
            return Err(Error::RootIsolationFailure("unpaired complex roots".into()));
        }

        let w_zero = match model.variation_class() {
            VariationClass::Bounded => w.eval(0.0),
            VariationClass::Unbounded => 0.0,
        };
        let w1 = w.derivative();
        let w2 = w1.derivative();
        let w_int = w.antiderivative();
        let w_int_at_zero = w_int.eval(0.0);
        let dpsi = model.laplace_exponent_derivative(phi);
        let phi_prime = if dpsi > 0.0 { 1.0 / dpsi } else { f64::INFINITY };
        let mut rest = w.clone();
        let lead = match rest.simple.iter().position(|&(r, _)| r == phi) {
            Some(i) => rest.simple.remove(i).1,
            None => 0.0,
        };
        let rest1 = rest.derivative();
        let rest2 = rest1.derivative();

        Ok(Self {
            model: model.clone(),
            q,
            phi,
            phi_prime,
            roots: clusters,
            w,
            w1,
            w2,
            w_int,
            w_int_at_zero,
            w_zero,
            lead,
            rest: [rest, rest1, rest2],
        })
    }

    fn verify_phi(model: &LevyModel, q: f64, phi_alg: f64) -> Result<f64> {
        let f = |l: f64| model.laplace_exponent(l) - q;
        let mut lo = 0.0;
        if q == 0.0 {
            if model.psi_prime_at_zero() >= 0.0 {
                return Ok(0.0);
            }
            lo = 0.5 * phi_alg;
            if !(f(lo) < 0.0) {
                return Err(Error::RootIsolationFailure(format!(
                    "cannot bracket Phi(0) near {phi_alg}"
                )));
            }
        }
        let mut hi = phi_alg.abs().max(1.0) * 2.0;
        while f(hi) < 0.0 {
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::RootIsolationFailure("Phi(q) bracket diverged".into()));
            }
        }
        let check = find_root_increasing(f, lo, hi, 1e-13 * hi)?;
        if (check - phi_alg).abs() > 1e-9 * phi_alg.abs().max(1.0) {
            return Err(Error::RootIsolationFailure(format!(
                "largest polynomial root {phi_alg} disagrees with bracketed Phi(q) = {check}"
            )));
        }
        Ok(phi_alg)
    }

    pub fn model(&self) -> &LevyModel {
        &self.model
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `Φ(q)`, the largest root of `ψ(λ) = q`.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `Φ′(q) = 1/ψ′(Φ(q))`.
    pub fn phi_prime(&self) -> f64 {
        self.phi_prime
    }

    /// Distinct roots of `ψ(λ) − q` with multiplicities.
    pub fn roots(&self) -> &[RootCluster] {
        &self.roots
    }

    /// Exponential-sum representation of `W^(q)` on `[0, ∞)`.
    pub fn representation(&self) -> &ExpSum {
        &self.w
    }

    /// `W^(q)(0+)`: `1/c` for bounded variation, `0` otherwise.
    pub fn w_zero(&self) -> f64 {
        self.w_zero
    }

    /// `W^(q)(x)`; zero on `x < 0` and `W(0+)` at `x = 0`.
    pub fn w(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else if x == 0.0 {
            self.w_zero
        } else {
            self.w.eval(x)
        }
    }

    /// `W^(q)′(x)` (right derivative at 0; zero on `x < 0`).
    pub fn w_prime(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.w1.eval(x)
        }
    }

    /// `W^(q)″(x)`; undefined at 0 for bounded variation.
    pub fn w_second(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Ok(0.0);
        }
        if x == 0.0 && self.model.variation_class() == VariationClass::Bounded {
            return Err(Error::DomainError(
                "second derivative of W at 0 is unavailable for bounded variation".into(),
            ));
        }
        Ok(self.w2.eval(x))
    }

    /// `Z^(q)(x) = 1 + q ∫₀ˣ W^(q)`.
    pub fn z(&self, x: f64) -> f64 {
        if x <= 0.0 || self.q == 0.0 {
            return 1.0;
        }
        1.0 + self.q * (self.w_int.eval(x) - self.w_int_at_zero)
    }

    /// Analytic `∫₀^∞ e^{−λx} W^(q)(x) dx` for `λ > Φ(q)`.
    pub fn laplace_transform(&self, lambda: f64) -> Result<f64> {
        if !(lambda > self.phi) {
            return Err(Error::DomainError(format!(
                "Laplace transform needs lambda > Phi(q) = {}, got {lambda}",
                self.phi
            )));
        }
        Ok(self.w.laplace(lambda))
    }

    /// Density of the q-resolvent, `Φ′(q)e^{−Φ(q)y} − W^(q)(−y)`.
    pub fn resolvent_density(&self, y: f64) -> Result<f64> {
        if self.q <= 0.0 {
            return Err(Error::DomainError("resolvent density needs q > 0".into()));
        }
        Ok(self.phi_prime * (-self.phi * y).exp() - self.w(-y))
    }

    /// `R⁽ᵏ⁾(x)` for the split `W = A e^{Φx} + R(x)`.
    fn r(&self, k: usize, x: f64) -> f64 {
        self.rest[k].eval(x)
    }

    /// `W(a)e^{−Φa} = A + R(a)e^{−Φa}` for `a > 0`.
    fn w_tilted(&self, a: f64) -> f64 {
        self.lead + self.r(0, a) * (-self.phi * a).exp()
    }

    /// `H(b,x) = (W(b−x) − e^{Φb}W(−x))/W(b)` for `x < b`.
    pub fn kernel_h(&self, b: f64, x: f64) -> f64 {
        if x >= 0.0 {
            return self.w(b - x) / self.w(b);
        }
        // the A·e^{Φ(b−x)} parts of both terms cancel
        (self.r(0, b - x) * (-self.phi * b).exp() - self.r(0, -x)) / self.w_tilted(b)
    }

    /// `𝒲(a,x,y) = W(x)W(a−y)/W(a) − W(x−y)`.
    pub fn kernel_wcal(&self, a: f64, x: f64, y: f64) -> f64 {
        if y == 0.0 && x >= 0.0 {
            return 0.0;
        }
        if !(x > y && y > 0.0 && a > x) {
            return self.w(x) * self.w(a - y) / self.w(a) - self.w(x - y);
        }
        let (lead, e) = (self.lead, |t: f64| (self.phi * t).exp());
        let (rx, ray, rxy, ra) = (self.r(0, x), self.r(0, a - y), self.r(0, x - y), self.r(0, a));
        let num = lead * e(x - a) * ray + lead * e(-y) * rx + rx * ray * e(-a)
            - lead * e(x - y - a) * ra
            - lead * rxy
            - rxy * ra * e(-a);
        num / self.w_tilted(a)
    }

    /// `𝒪(a,x) = W′(x) − W(x)W′(a)/W(a)`.
    pub fn kernel_o(&self, a: f64, x: f64) -> f64 {
        if x == a {
            return 0.0;
        }
        if !(x > 0.0 && a > x) {
            return self.w_prime(x) - self.w(x) * self.w_prime(a) / self.w(a);
        }
        let (lead, phi, e) = (self.lead, self.phi, |t: f64| (self.phi * t).exp());
        let (rx, r1x, ra, r1a) = (self.r(0, x), self.r(1, x), self.r(0, a), self.r(1, a));
        let num = lead * phi * e(x - a) * ra + lead * r1x + r1x * ra * e(-a)
            - lead * e(x - a) * r1a
            - lead * phi * rx
            - rx * r1a * e(-a);
        num / self.w_tilted(a)
    }

    /// `∂ₓ𝒪(a,x)` at `x = a`: `W″(a) − W′(a)²/W(a)`.
    pub fn kernel_o_dx_at_diag(&self, a: f64) -> Result<f64> {
        if self.model.variation_class() == VariationClass::Bounded {
            return Err(Error::DomainError(
                "diagonal derivative of O needs a twice-differentiable scale function (sigma > 0)"
                    .into(),
            ));
        }
        if !(a > 0.0) {
            let w1 = self.w_prime(a);
            return Ok(self.w_second(a)? - w1 * w1 / self.w(a));
        }
        let (lead, phi) = (self.lead, self.phi);
        let (r, r1, r2) = (self.r(0, a), self.r(1, a), self.r(2, a));
        let num = lead * phi * phi * r + lead * r2 - 2.0 * lead * phi * r1 + (r2 * r - r1 * r1) * (-phi * a).exp();
        Ok(num / self.w_tilted(a))
    }
}

/// Scale functions shared by the kernels at a fixed barrier.
#[derive(Debug, Clone)]
pub struct KernelContext<'a> {
    pub scale: &'a ScaleFunction,
    pub scale_shifted: Option<&'a ScaleFunction>,
    pub b: f64,
}

impl<'a> KernelContext<'a> {
    pub fn new(scale: &'a ScaleFunction, scale_shifted: Option<&'a ScaleFunction>, b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter(format!("barrier must be positive, got {b}")));
        }
        if let Some(s) = scale_shifted {
            if s.model() != scale.model() {
                return Err(Error::InvalidParameter("kernel scales belong to different models".into()));
            }
        }
        Ok(Self { scale, scale_shifted, b })
    }

    pub fn h(&self, x: f64) -> f64 {
        self.scale.kernel_h(self.b, x)
    }

    pub fn h_shifted(&self, x: f64) -> Option<f64> {
        self.scale_shifted.map(|s| s.kernel_h(self.b, x))
    }
}
