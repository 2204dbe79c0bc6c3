//! Brute-force checks for the closed forms: uniform sampling on `S^D`,
//! tensor quadrature in angular coordinates, and exact polynomial
//! integration built on the signed Dirichlet integral.

mod monte_carlo;
mod poly;
mod quadrature;
mod sampler;

pub use monte_carlo::{mc_integrate, mc_integrate_many};
pub use poly::{poly_integrate, Monomial, Polynomial};
pub use quadrature::{
    quad_integrate, quad_integrate_many, quad_integrate_sphere, quad_integrate_sphere_many,
    OrthantRule, MAX_QUAD_D, MAX_QUAD_N,
};
pub use sampler::{sample_uniform, MCConfig, SpherePoint, UniformSampler, CHUNK_SAMPLES};

/// How far an [`OracleEstimate`] may be from the true value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Uncertainty {
    /// Standard error of a Monte Carlo mean, scaled by the sphere volume.
    StdError(f64),
    /// Quadrature refinement bound: `|Q_N - Q_2N|` floored by a rounding
    /// allowance.
    ErrorBound(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleEstimate {
    pub value: f64,
    pub uncertainty: Uncertainty,
    /// Sample count for Monte Carlo, integrand evaluations for quadrature.
    pub samples_or_nodes: u64,
}

impl OracleEstimate {
    pub fn error(&self) -> f64 {
        match self.uncertainty {
            Uncertainty::StdError(e) | Uncertainty::ErrorBound(e) => e,
        }
    }

    pub fn is_monte_carlo(&self) -> bool {
        matches!(self.uncertainty, Uncertainty::StdError(_))
    }

    /// Distance from `reference` in units of the reported error.
    ///
    /// The error is floored at a few ulps of the compared values so that an
    /// exact oracle (zero spread) still tolerates the rounding of `reference`.
    pub fn sigma_from(&self, reference: f64) -> f64 {
        let scale = reference.abs().max(self.value.abs());
        let floor = 16.0 * f64::EPSILON * scale;
        let diff = (reference - self.value).abs();
        if diff == 0.0 {
            return 0.0;
        }
        diff / self.error().max(floor).max(f64::MIN_POSITIVE)
    }

    /// Whether `reference` is consistent with this estimate: within `sigmas`
    /// standard errors for Monte Carlo, within the bound for quadrature.
    pub fn agrees_with(&self, reference: f64, sigmas: f64) -> bool {
        let limit = if self.is_monte_carlo() { sigmas } else { 1.0 };
        self.sigma_from(reference) <= limit
    }
}
