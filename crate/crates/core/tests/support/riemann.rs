//! Fixed-grid brute-force evaluation of the Gerber–Shiu terms.
//!
//! Deliberately shares nothing with the library beyond the model parameters:
//! scale functions come from residues at the (real, simple) roots of
//! `ψ(λ) = q`, found by a sign-change scan, and every integral is a
//! midpoint Riemann sum on a fixed grid, split at kernel kinks. Infinite
//! ranges use the substitution `s = −ln(1−v)/μ`.
//!
//! Penalties are `f(pre, post) = e^{θ·post}` (θ = 0 is `f ≡ 1`).

#![allow(dead_code)]

use gsruin::{LevyModel, SeverityDistribution};

pub struct Oracle {
    sigma2: f64,
    drift: f64,
    jump_rate: f64,
    /// (weight, rate)
    claims: Vec<(f64, f64)>,
}

/// `W^{(q)}(x) = Σ_r e^{rx}/ψ′(r)` over the roots of `ψ(λ) = q`.
pub struct Residues {
    pub q: f64,
    pub roots: Vec<f64>,
    coef: Vec<f64>,
}

impl Residues {
    pub fn phi(&self) -> f64 {
        self.roots.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn sum(&self, x: f64, k: i32) -> f64 {
        self.roots.iter().zip(&self.coef).map(|(r, c)| c * r.powi(k) * (r * x).exp()).sum()
    }

    pub fn w(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.sum(x, 0)
        }
    }

    pub fn w1(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.sum(x, 1)
        }
    }

    pub fn w2(&self, x: f64) -> f64 {
        self.sum(x, 2)
    }

    pub fn h(&self, b: f64, x: f64) -> f64 {
        (self.w(b - x) - (self.phi() * b).exp() * self.w(-x)) / self.w(b)
    }

    /// `𝒲(a,x,y) = W(x)W(a−y)/W(a) − W(x−y)`
    pub fn wcal(&self, a: f64, x: f64, y: f64) -> f64 {
        self.w(x) * self.w(a - y) / self.w(a) - self.w(x - y)
    }

    /// `𝒪(a,x) = W′(x) − W(x)W′(a)/W(a)`
    pub fn o(&self, a: f64, x: f64) -> f64 {
        self.w1(x) - self.w(x) * self.w1(a) / self.w(a)
    }

    /// `∂ₓ𝒪(a,x)` at `x = a`.
    pub fn o_dx_diag(&self, a: f64) -> f64 {
        self.w2(a) - self.w1(a) * self.w1(a) / self.w(a)
    }
}

/// Midpoint nodes of `(a, b)`.
pub fn mid(a: f64, b: f64, n: usize) -> impl Iterator<Item = (f64, f64)> {
    let h = (b - a) / n as f64;
    (0..n).map(move |i| (a + (i as f64 + 0.5) * h, h))
}

/// Nodes for `∫_0^∞ g(s) ds` under `s = −ln(1−v)/μ`.
pub fn half_line(mu: f64, n: usize) -> impl Iterator<Item = (f64, f64)> {
    mid(0.0, 1.0, n).map(move |(v, h)| (-(-v).ln_1p() / mu, h / (mu * (1.0 - v))))
}

/// Nodes and weights for `E[g(Y)]`.
pub fn y_nodes(law: &SeverityDistribution, n: usize) -> Vec<(f64, f64)> {
    match law {
        SeverityDistribution::PointMass { y0 } => vec![(*y0, 1.0)],
        SeverityDistribution::MixtureOfPointMasses { atoms } => atoms.iter().map(|a| (a.y, a.weight)).collect(),
        SeverityDistribution::Exponential { rate } => {
            mid(0.0, 1.0, n).map(|(v, h)| (-(-v).ln_1p() / rate, h)).collect()
        }
    }
}

impl Oracle {
    pub fn new(model: &LevyModel) -> Self {
        Self {
            sigma2: model.sigma() * model.sigma(),
            drift: model.drift(),
            jump_rate: model.jump_rate(),
            claims: model.claims().iter().map(|c| (c.weight, c.rate)).collect(),
        }
    }

    pub fn half_var(&self) -> f64 {
        0.5 * self.sigma2
    }

    pub fn psi(&self, l: f64) -> f64 {
        let j: f64 = self.claims.iter().map(|(w, m)| w * (m / (m + l) - 1.0)).sum();
        self.drift * l + 0.5 * self.sigma2 * l * l + self.jump_rate * j
    }

    fn psi_prime(&self, l: f64) -> f64 {
        let j: f64 = self.claims.iter().map(|(w, m)| -w * m / ((m + l) * (m + l))).sum();
        self.drift + self.sigma2 * l + self.jump_rate * j
    }

    /// `(ψ(λ) − q)·Π(μᵢ+λ)`, a polynomial without poles.
    fn cleared(&self, l: f64, q: f64) -> f64 {
        let prod: f64 = self.claims.iter().map(|(_, m)| m + l).product();
        let mut v = (self.drift * l + 0.5 * self.sigma2 * l * l - self.jump_rate - q) * prod;
        for (i, (w, m)) in self.claims.iter().enumerate() {
            let others: f64 =
                self.claims.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, (_, mj))| mj + l).product();
            v += self.jump_rate * w * m * others;
        }
        v
    }

    pub fn scale(&self, q: f64) -> Residues {
        let degree = self.claims.len() * usize::from(self.jump_rate > 0.0) + if self.sigma2 > 0.0 { 2 } else { 1 };
        let (lo, hi, n) = (-60.0, 60.0, 600_000);
        let step = (hi - lo) / n as f64;
        let mut roots = Vec::new();
        let mut a = lo;
        let mut fa = self.cleared(a, q);
        for i in 1..=n {
            let b = lo + i as f64 * step;
            let fb = self.cleared(b, q);
            if fb == 0.0 {
                roots.push(b);
            } else if fa != 0.0 && fa.signum() != fb.signum() {
                let (mut x0, mut x1) = (a, b);
                for _ in 0..200 {
                    let m = 0.5 * (x0 + x1);
                    if self.cleared(m, q).signum() == fa.signum() {
                        x0 = m;
                    } else {
                        x1 = m;
                    }
                }
                roots.push(0.5 * (x0 + x1));
            }
            a = b;
            fa = fb;
        }
        // q = 0 puts a root at exactly 0
        if q == 0.0 {
            if let Some(r) = roots.iter_mut().min_by(|x, y| x.abs().total_cmp(&y.abs())) {
                *r = 0.0;
            }
        }
        assert_eq!(roots.len(), degree, "oracle root scan found {roots:?}");
        let coef = roots.iter().map(|&r| 1.0 / self.psi_prime(r)).collect();
        Residues { q, roots, coef }
    }

    /// Lévy density on `u < 0`.
    pub fn pi(&self, u: f64) -> f64 {
        if u >= 0.0 {
            return 0.0;
        }
        self.jump_rate * self.claims.iter().map(|(w, m)| w * m * (m * u).exp()).sum::<f64>()
    }

    fn mu(&self) -> f64 {
        self.claims.iter().map(|c| c.1).fold(f64::INFINITY, f64::min)
    }

    /// `∫_{−∞}^{−z} e^{θu} Π(du)`, integrated by hand.
    pub fn exp_tail(&self, theta: f64, z: f64) -> f64 {
        self.jump_rate * self.claims.iter().map(|(w, m)| w * m / (m + theta) * (-(m + theta) * z).exp()).sum::<f64>()
    }

    /// `∫_{−∞}^{−level} f(·, base+u) Π(du)` by brute force.
    fn tail_brute(&self, theta: f64, base: f64, level: f64, n: usize) -> f64 {
        half_line(self.mu(), n).map(|(s, w)| w * (theta * (base - level - s)).exp() * self.pi(-level - s)).sum()
    }

    // ---- bounded-variation terms ------------------------------------------

    /// `E ∫₀^b H(b,y) ∫_{(−∞,−y−Y)} f(y, x+y) Π(dx) dy`
    pub fn term_a(&self, s: &Residues, b: f64, theta: f64, law: &SeverityDistribution, n: usize) -> f64 {
        let mut total = 0.0;
        for (y_mark, py) in y_nodes(law, n) {
            let mut inner = 0.0;
            for (y, hy) in mid(0.0, b, n) {
                inner += hy * s.h(b, y) * self.tail_brute(theta, y, y + y_mark, n);
            }
            total += py * inner;
        }
        total
    }

    /// Innermost block of `ℬ` and `ℐ`:
    /// `∫₀^Y ∫_{(−∞,−z)} f(z−Y, u+z−Y) Π(du) 𝒲(Y, s, z) dz`.
    fn b_inner(&self, sc: &Residues, y_mark: f64, s: f64, theta: f64, n: usize) -> f64 {
        let g = |z: f64| (theta * (z - y_mark)).exp() * self.exp_tail(theta, z) * sc.wcal(y_mark, s, z);
        let lo: f64 = mid(0.0, s, n).map(|(z, h)| h * g(z)).sum();
        let hi: f64 = mid(s, y_mark, n).map(|(z, h)| h * g(z)).sum();
        lo + hi
    }

    /// `E ∫₀^b H(b,y) ∫_{(−y−Y,−y)} ∫₀^Y ∫_{(−∞,−z)} f(z−Y, u+z−Y) 𝒲(Y, y+x+Y, z) Π(du) dz Π(dx) dy`
    pub fn term_b(&self, sc: &Residues, b: f64, theta: f64, law: &SeverityDistribution, n: usize) -> f64 {
        let mut total = 0.0;
        for (y_mark, py) in y_nodes(law, n) {
            if y_mark == 0.0 {
                continue;
            }
            // x = s − y − Y with s ∈ (0, Y)
            let inner_s: Vec<(f64, f64)> =
                mid(0.0, y_mark, n).map(|(s, hs)| (s, hs * self.b_inner(sc, y_mark, s, theta, n / 2))).collect();
            let mut outer = 0.0;
            for (y, hy) in mid(0.0, b, n) {
                let jump: f64 = inner_s.iter().map(|(s, g)| g * self.pi(s - y - y_mark)).sum();
                outer += hy * sc.h(b, y) * jump;
            }
            total += py * outer;
        }
        total
    }

    /// `1/W(0+) − E ∫₀^b H(b,y) ∫_{(−y−Y,−y)} W(y+x+Y)/W(Y) Π(dx) dy`
    pub fn denominator_bv(&self, sc: &Residues, b: f64, law: &SeverityDistribution, n: usize) -> f64 {
        let mut rec = 0.0;
        for (y_mark, py) in y_nodes(law, n) {
            let mut outer = 0.0;
            for (y, hy) in mid(0.0, b, n) {
                let jump: f64 =
                    mid(0.0, y_mark, n).map(|(s, hs)| hs * sc.w(s) / sc.w(y_mark) * self.pi(s - y - y_mark)).sum();
                outer += hy * sc.h(b, y) * jump;
            }
            rec += py * outer;
        }
        1.0 / sc.w(0.0) - rec
    }

    /// `E ∫₀^b ∫_{−(y+Y)}^{−y} ∫₀^Y ∫_{−∞}^{−v} f(v−Y, v+w−Y) 𝒲(Y,y+u+Y,v) 𝒲(b,x,y) Π(dw) dv Π(du) dy`
    pub fn term_i(&self, sc: &Residues, x: f64, b: f64, theta: f64, law: &SeverityDistribution, n: usize) -> f64 {
        let mut total = 0.0;
        for (y_mark, py) in y_nodes(law, n) {
            if y_mark == 0.0 {
                continue;
            }
            let inner_s: Vec<(f64, f64)> =
                mid(0.0, y_mark, n).map(|(s, hs)| (s, hs * self.b_inner(sc, y_mark, s, theta, n / 2))).collect();
            let mut outer = 0.0;
            for (lo, hi) in [(0.0, x), (x, b)] {
                for (y, hy) in mid(lo, hi, n / 2) {
                    let jump: f64 = inner_s.iter().map(|(s, g)| g * self.pi(s - y - y_mark)).sum();
                    outer += hy * sc.wcal(b, x, y) * jump;
                }
            }
            total += py * outer;
        }
        total
    }

    // ---- unbounded-variation terms ----------------------------------------

    /// `E ∫₀^b H(b,x) ∫_{(−∞,−x−Y)} e^{Φ(x+y)} Π(dy) dx`
    pub fn term_d(&self, sc: &Residues, b: f64, law: &SeverityDistribution, n: usize) -> f64 {
        self.term_a(sc, b, sc.phi(), law, n)
    }

    /// `E ∫₀^b H(b,x) ∫_{(−x−Y,−x)} (e^{Φ(x+y)} − W(x+y+Y)/W(Y)) Π(dy) dx`
    pub fn term_e(&self, sc: &Residues, b: f64, law: &SeverityDistribution, n: usize) -> f64 {
        let phi = sc.phi();
        let mut total = 0.0;
        for (y_mark, py) in y_nodes(law, n) {
            let mut outer = 0.0;
            for (x, hx) in mid(0.0, b, n) {
                let jump: f64 = mid(-x - y_mark, -x, n)
                    .map(|(y, h)| h * ((phi * (x + y)).exp() - sc.w(x + y + y_mark) / sc.w(y_mark)) * self.pi(y))
                    .sum();
                outer += hx * sc.h(b, x) * jump;
            }
            total += py * outer;
        }
        total
    }

    /// `−(σ²/2) E[f(−Y,−Y) ∂ₓ𝒪(Y,Y)] + E ∫₀^Y ∫_{(−∞,−y)} f(y−Y, y+z−Y) 𝒪(Y, Y−y) Π(dz) dy`
    pub fn term_c(&self, sc: &Residues, theta: f64, law: &SeverityDistribution, n: usize) -> f64 {
        let mut total = 0.0;
        for (y_mark, py) in y_nodes(law, n) {
            let creep = -self.half_var() * (-theta * y_mark).exp() * sc.o_dx_diag(y_mark);
            let jump: f64 = mid(0.0, y_mark, n)
                .map(|(y, h)| h * self.tail_brute(theta, y - y_mark, y, n) * sc.o(y_mark, y_mark - y))
                .sum();
            total += py * (creep + jump);
        }
        total
    }

    /// `ℱ` is `𝒞` with `f(x₁,x₂) = e^{Φ x₂}`.
    pub fn term_f(&self, sc: &Residues, law: &SeverityDistribution, n: usize) -> f64 {
        self.term_c(sc, sc.phi(), law, n)
    }

    /// `E ∫₀^b H(b,x) ∫_{(−x−Y,−x)} 𝒪(Y, Y+x+y) f(−Y,−Y) Π(dy) dx`
    pub fn term_u(&self, sc: &Residues, b: f64, theta: f64, law: &SeverityDistribution, n: usize) -> f64 {
        let mut total = 0.0;
        for (y_mark, py) in y_nodes(law, n) {
            let mut outer = 0.0;
            for (x, hx) in mid(0.0, b, n) {
                let jump: f64 =
                    mid(-x - y_mark, -x, n).map(|(y, h)| h * sc.o(y_mark, y_mark + x + y) * self.pi(y)).sum();
                outer += hx * sc.h(b, x) * jump;
            }
            total += py * (-theta * y_mark).exp() * outer;
        }
        total
    }

    /// `∫_{−∞}^b ((λ+q)H^{(λ+q)}(b,y) − qH^{(q)}(b,y)) 𝒪^{(0)}(b,y) dy`, with the
    /// lower limit cut at `−cut`.
    pub fn term_j(&self, q: f64, lambda: f64, b: f64, cut: f64, n: usize) -> f64 {
        let sq = self.scale(q);
        let sl = self.scale(q + lambda);
        let s0 = self.scale(0.0);
        let g = |y: f64| ((lambda + q) * sl.h(b, y) - q * sq.h(b, y)) * s0.o(b, y);
        mid(-cut, 0.0, n).map(|(y, h)| h * g(y)).sum::<f64>() + mid(0.0, b, n).map(|(y, h)| h * g(y)).sum::<f64>()
    }
}
