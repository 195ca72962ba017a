//! Real-coefficient polynomials and simultaneous (Aberth–Ehrlich) root finding.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Polynomial with real coefficients stored in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `a + b·λ`
    pub fn linear(a: f64, b: f64) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative at `z` in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| self.coeffs.get(i).copied().unwrap_or(0.0) + other.coeffs.get(i).copied().unwrap_or(0.0))
            .collect();
        Poly::new(c)
    }

    pub fn scale(&self, k: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut c = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    /// Largest root modulus bound (Cauchy).
    fn cauchy_bound(&self) -> f64 {
        let lead = self.leading().abs();
        1.0 + self.coeffs[..self.degree()].iter().map(|c| c.abs() / lead).fold(0.0, f64::max)
    }

    /// All complex roots, each repeated according to its numerical multiplicity.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let n = self.degree();
        if n == 0 {
            return Ok(Vec::new());
        }
        if !self.coeffs.iter().all(|c| c.is_finite()) {
            return Err(Error::RootIsolationFailure("non-finite polynomial coefficient".into()));
        }
        let radius = self.cauchy_bound();
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let angle = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
                Complex64::from_polar(0.5 * radius, angle)
            })
            .collect();
        let mut converged = false;
        for _ in 0..2000 {
            let mut max_step = 0.0f64;
            for k in 0..n {
                let (p, dp) = self.eval_with_derivative(z[k]);
                if p == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let ratio = p / dp;
                let repulsion: Complex64 = (0..n)
                    .filter(|&j| j != k)
                    .map(|j| {
                        let d = z[k] - z[j];
                        if d.norm() == 0.0 {
                            Complex64::new(0.0, 0.0)
                        } else {
                            d.inv()
                        }
                    })
                    .sum();
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
                if step.is_finite() {
                    z[k] -= step;
                    max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
                }
            }
            if max_step <= 4.0 * f64::EPSILON {
                converged = true;
                break;
            }
        }
        if !converged {
            // Aberth converges only linearly onto multiple roots; accept the
            // iterate if every residual is at round-off level.
            let scale: f64 = self.coeffs.iter().map(|c| c.abs()).sum();
            let ok = z.iter().all(|&zk| {
                let m = zk.norm().max(1.0).powi(n as i32);
                self.eval_complex(zk).norm() <= 1e-10 * scale * m
            });
            if !ok {
                return Err(Error::RootIsolationFailure(format!(
                    "Aberth iteration did not converge for polynomial {:?}",
                    self.coeffs
                )));
            }
        }
        Ok(z)
    }
}

/// A root together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub root: Complex64,
    pub multiplicity: usize,
}

/// Group numerically coincident roots and snap near-real ones onto the real axis.
pub fn cluster_roots(roots: &[Complex64], rel_tol: f64) -> Vec<RootCluster> {
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut members = vec![roots[i]];
        for j in (i + 1)..roots.len() {
            if !used[j] && (roots[j] - roots[i]).norm() <= rel_tol * roots[i].norm().max(1.0) {
                used[j] = true;
                members.push(roots[j]);
            }
        }
        let mean = members.iter().sum::<Complex64>() / members.len() as f64;
        out.push(RootCluster { root: mean, multiplicity: members.len() });
    }
    for c in &mut out {
        if c.root.im.abs() <= 1e-10 * c.root.norm().max(1.0) {
            c.root.im = 0.0;
        }
    }
    out
}
