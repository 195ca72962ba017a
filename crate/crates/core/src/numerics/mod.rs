//! Shared numerical kernels: root finding, adaptive quadrature, expectations
//! over the severity mark, and numerical Laplace inversion.

mod laplace;
mod poly;
mod quad;
mod roots;

pub use laplace::invert_laplace;
pub use poly::{cluster_roots, Poly, RootCluster};
pub use quad::{
    integrate, integrate_to_infinity, try_integrate, try_integrate_to_infinity,
    try_integrate_with_breaks, Estimate, QuadratureConfig,
};
pub(crate) use quad::try_integrate_noisy;
pub use roots::find_root_increasing;

use crate::error::Result;
use crate::severity::SeverityDistribution;

/// `E[g(Y)]` for the severity law: a weighted sum for atoms, quadrature
/// against the density (tail cut at `tail_cut_mass`) otherwise.
pub fn expect_over_y<G>(g: G, law: &SeverityDistribution, cfg: &QuadratureConfig) -> Result<Estimate>
where
    G: FnMut(f64) -> Result<f64>,
{
    expect_over_y_noisy(g, law, cfg, &|| 0.0)
}

/// [`expect_over_y`] for an integrand with numerical noise bounded by
/// `noise()` (see [`try_integrate_noisy`]).
pub(crate) fn expect_over_y_noisy<G>(
    mut g: G,
    law: &SeverityDistribution,
    cfg: &QuadratureConfig,
    noise: &dyn Fn() -> f64,
) -> Result<Estimate>
where
    G: FnMut(f64) -> Result<f64>,
{
    match law {
        SeverityDistribution::PointMass { y0 } => Ok(Estimate { value: g(*y0)?, error: 0.0 }),
        SeverityDistribution::MixtureOfPointMasses { atoms } => {
            let mut value = 0.0;
            for atom in atoms {
                value += atom.weight * g(atom.y)?;
            }
            Ok(Estimate { value, error: 0.0 })
        }
        SeverityDistribution::Exponential { rate } => {
            let rate = *rate;
            quad::try_integrate_to_infinity_noisy(
                |y| Ok(rate * (-rate * y).exp() * g(y)?),
                0.0,
                |t| (-rate * t).exp(),
                &[],
                cfg,
                noise,
            )
        }
    }
}
